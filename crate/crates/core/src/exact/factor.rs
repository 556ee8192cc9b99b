//! Factorization over ℚ.
//!
//! Squarefree split (Yun), then for each squarefree part: reduction modulo a
//! good prime, distinct- and equal-degree factorization over 𝔽ₚ
//! (Cantor–Zassenhaus), linear Hensel lifting to pᵏ above the Mignotte bound,
//! and Zassenhaus subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Rational, UnivariatePoly};
use crate::error::{Error, Result};

/// `unit · Π pᵢ^mᵢ` with each `pᵢ` monic and irreducible over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(UnivariatePoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UnivariatePoly {
        self.factors.iter().fold(UnivariatePoly::constant(self.unit.clone()), |acc, (p, m)| &acc * &p.pow(*m))
    }

    pub fn multiplicity_of(&self, p: &UnivariatePoly) -> usize {
        let p = p.monic();
        self.factors.iter().find(|(q, _)| *q == p).map_or(0, |(_, m)| *m)
    }
}

/// Complete factorization of `p` into ℚ-irreducibles.
pub fn factor_poly(p: &UnivariatePoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let unit = p.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        for irr in factor_squarefree(&part) {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| poly_order(a, b));
    Ok(Factorization { unit, factors })
}

/// Degree first; linear factors by root, others by coefficients from the
/// constant term up.
pub(crate) fn poly_order(a: &UnivariatePoly, b: &UnivariatePoly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        if a.degree() == Some(1) {
            (-a.coeff(0) / a.coeff(1)).cmp(&(-b.coeff(0) / b.coeff(1)))
        } else {
            a.coeffs().cmp(b.coeffs())
        }
    })
}

/// Yun's algorithm on a monic polynomial.
fn squarefree_decomposition(f: &UnivariatePoly) -> Vec<(UnivariatePoly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

fn factor_squarefree(q: &UnivariatePoly) -> Vec<UnivariatePoly> {
    if q.degree().unwrap_or(0) <= 1 {
        return vec![q.monic()];
    }
    let (z, _) = q.to_primitive_integer();
    factor_integer_squarefree(z).into_iter().map(|g| UnivariatePoly::from_integers(&g).monic()).collect()
}

type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

fn z_trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    z_trim((0..n).map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).collect())
}

fn z_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    z_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn z_primitive(a: &[BigInt]) -> ZPoly {
    let g = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let g = if a.last().is_some_and(|c| c.is_negative()) { -g } else { g };
    a.iter().map(|c| c / &g).collect()
}

/// Exact division over ℤ, `None` if `b` does not divide `a`.
fn z_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn factor_integer_squarefree(f: ZPoly) -> Vec<ZPoly> {
    let f = z_trim(f);
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f];
    }
    if f[0].is_zero() {
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_integer_squarefree(f[1..].to_vec()));
        return out;
    }
    let Some((p, modp)) = choose_prime(&f) else {
        unreachable!("a squarefree polynomial has good primes below the search limit")
    };
    if modp.len() == 1 {
        return vec![f];
    }
    let lc = f.last().unwrap().abs();
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound = (BigInt::one() << deg) * (norm2.sqrt() + 1u32) * &lc * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = multi_lift(&f, &modp, p, k, &modulus);
    recombine(f, lifted, &modulus)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Among the first few primes where `f` stays squarefree with the same degree,
/// picks the one with the fewest modular factors.
fn choose_prime(f: &[BigInt]) -> Option<(u64, Vec<FpPoly>)> {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in small_primes().take_while(|&p| p < 50_000) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&fp_from_z(f, p), p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let factors = factor_mod_p(&fp, p);
        let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
        if better {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best
}

fn multi_lift(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32, modulus: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let lc = f.last().unwrap().mod_floor(modulus);
        let inv = mod_inverse(&lc, modulus);
        let monic: ZPoly = f.iter().map(|c| (c * &inv).mod_floor(modulus)).collect();
        return vec![z_trim(monic)];
    }
    let g = &factors[0];
    let lc_p = fp_from_z(&[f.last().unwrap().clone()], p);
    let h = factors[1..].iter().fold(lc_p, |acc, q| fp_mul(&acc, q, p));
    let (big_g, big_h) = hensel_pair(f, g, &h, p, k, modulus);
    let mut out = vec![big_g];
    out.extend(multi_lift(&big_h, &factors[1..], p, k, modulus));
    out
}

/// Lifts `f ≡ g·h (mod p)` with `g` monic to `f ≡ G·H (mod pᵏ)`.
fn hensel_pair(f: &[BigInt], g: &FpPoly, h: &FpPoly, p: u64, k: u32, modulus: &BigInt) -> (ZPoly, ZPoly) {
    let (gcd, s, t) = fp_ext_gcd(g, h, p);
    debug_assert_eq!(gcd, vec![1]);
    let to_z = |v: &FpPoly| -> ZPoly { v.iter().map(|&c| BigInt::from(c)).collect() };
    let mut big_g = to_z(g);
    let mut big_h = to_z(h);
    let mut pj = BigInt::from(p);
    for _ in 1..k {
        let e = z_sub(f, &z_mul(&big_g, &big_h));
        let e_scaled: ZPoly = e
            .iter()
            .map(|c| {
                debug_assert!((c % &pj).is_zero());
                c / &pj
            })
            .collect();
        let ep = fp_from_z(&e_scaled, p);
        let te = fp_mul(&t, &ep, p);
        let (q, dg) = fp_divrem(&te, g, p);
        let dh = fp_add(&fp_mul(&s, &ep, p), &fp_mul(&q, h, p), p);
        big_g = add_scaled(&big_g, &dg, &pj);
        big_h = add_scaled(&big_h, &dh, &pj);
        pj *= p;
    }
    (z_mod(&big_g, modulus), z_mod(&big_h, modulus))
}

fn add_scaled(a: &[BigInt], d: &FpPoly, scale: &BigInt) -> ZPoly {
    let n = a.len().max(d.len());
    z_trim(
        (0..n)
            .map(|i| {
                let base = a.get(i).cloned().unwrap_or_default();
                base + BigInt::from(*d.get(i).unwrap_or(&0)) * scale
            })
            .collect(),
    )
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn symmetric(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1;
    v.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for combo in Combinations::new(lifted.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut g: ZPoly = vec![lc];
            for &i in &combo {
                g = z_mod(&z_mul(&g, &lifted[i]), modulus);
            }
            let candidate = z_primitive(&z_trim(symmetric(&g, modulus)));
            if candidate.len() < 2 {
                continue;
            }
            if let Some(q) = z_exact_div(&f, &candidate) {
                hit = Some((combo, candidate, q));
                break;
            }
        }
        match hit {
            Some((combo, g, q)) => {
                found.push(g);
                f = q;
                for &i in combo.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        found.push(z_primitive(&f));
    }
    found
}

/// k-subsets of 0..n in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

// ---- arithmetic over 𝔽ₚ, p < 2³¹ ------------------------------------------

fn fp_trim(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_from_z(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    fp_trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect())
}

fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn fp_monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = fp_inv(*b.last().unwrap(), p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bc % p) % p;
        }
        q[k] = c;
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    fp_divrem(a, b, p).1
}

fn fp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// Returns monic `g` with `s·a + t·b = g`.
fn fp_ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &FpPoly| fp_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &FpPoly, p: u64) -> FpPoly {
    fp_trim(a.iter().enumerate().skip(1).map(|(k, &c)| (k as u64 % p) * c % p).collect())
}

fn fp_powmod(base: &FpPoly, exp: &BigUint, modulus: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = vec![1];
    let b = fp_rem(base, modulus, p);
    for i in (0..exp.bits()).rev() {
        result = fp_rem(&fp_mul(&result, &result, p), modulus, p);
        if exp.bit(i) {
            result = fp_rem(&fp_mul(&result, &b, p), modulus, p);
        }
    }
    result
}

/// Monic irreducible factors of a monic squarefree `f` over 𝔽ₚ.
fn factor_mod_p(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, &mut rng, &mut out);
    }
    out.sort();
    out
}

fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let x: FpPoly = vec![0, 1];
    let pb = BigUint::from(p);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 2 * d {
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_rem(&h, &rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

fn equal_degree(g: &FpPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.clone());
        return;
    }
    let exp: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
    loop {
        let a: FpPoly = fp_trim((0..n).map(|_| rng.random_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &exp, g, p), &vec![1], p);
        let h = fp_gcd(&b, g, p);
        if h.len() > 1 && h.len() < g.len() {
            let other = fp_divrem(g, &h, p).0;
            equal_degree(&h, d, p, rng, out);
            equal_degree(&fp_monic(&other, p), d, p, rng, out);
            return;
        }
    }
}
