//! Unital index-1 algebras as `ℌ ⊕ 𝕂·1 ⊕ ℌ'` with `ℌ = V_N(0)` and
//! `ℌ' = V_N(∞)`, where `y·x = −A(y,x)·1 + B(y,x) + C(y,x)`.

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Associativity};
use crate::error::{Error, Result};
use crate::exact::{dot, format_rational, Matrix, Rational};
use crate::jordan::decompose;
use crate::pencil::{lie_index, SpectralValue};

/// Structure constants `t[i][j][k]` of an `h`-dimensional multiplication.
pub type Table = Vec<Vec<Vec<Rational>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    pub h: usize,
    pub x_names: Vec<String>,
    pub y_names: Vec<String>,
    /// Products in `ℌ`.
    pub h_table: Table,
    /// Products in `ℌ'`.
    pub hprime_table: Table,
    /// `pairing[i][j] = ⟨x_i, y_j⟩`.
    pub pairing: Matrix,
    /// `a_scalar[j][i] = A(y_j, x_i)`.
    pub a_scalar: Matrix,
    /// `b_tensor[j][i] = B(y_j, x_i) ∈ ℌ`.
    pub b_tensor: Table,
    /// `c_tensor[j][i] = C(y_j, x_i) ∈ ℌ'`.
    pub c_tensor: Table,
    /// Rows `1, x_1, …, x_h, y_1, …, y_h` in the input basis, when split from
    /// an algebra.
    pub basis: Option<Matrix>,
    /// `F` scaled to `F(1) = 1`, when split from an algebra.
    pub functional: Option<Vec<Rational>>,
}

fn default_names(prefix: &str, h: usize) -> Vec<String> {
    if h == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=h).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn zero_table(h: usize) -> Table {
    vec![vec![vec![Rational::zero(); h]; h]; h]
}

fn mul_in(t: &Table, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); u.len()];
    for (i, a) in u.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = a * b;
            for (o, c) in out.iter_mut().zip(&t[i][j]) {
                *o += &ab * c;
            }
        }
    }
    out
}

fn unit(h: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); h];
    v[k] = Rational::one();
    v
}

fn sub(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

fn add(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn scaled(u: &[Rational], c: &Rational) -> Vec<Rational> {
    u.iter().map(|a| a * c).collect()
}

pub fn table_is_associative(t: &Table) -> bool {
    let h = t.len();
    (0..h).all(|i| (0..h).all(|j| (0..h).all(|k| mul_in(t, &unit(h, i), &t[j][k]) == mul_in(t, &t[i][j], &unit(h, k)))))
}

impl SplitData {
    /// Dual pair with `A = ⟨·,·⟩` and `B`, `C` induced by the pairing:
    /// `⟨B(y₂,x),y₁⟩ = ⟨x,y₁y₂⟩` and `⟨x₂,C(y,x₁)⟩ = ⟨x₁x₂,y⟩`.
    pub fn from_dual_pair(h_table: Table, hprime_table: Table, pairing: Matrix) -> Result<SplitData> {
        let h = pairing.rows();
        for t in [&h_table, &hprime_table] {
            if pairing.cols() != h || t.len() != h || t.iter().any(|r| r.len() != h || r.iter().any(|v| v.len() != h)) {
                return Err(Error::DimensionMismatch { expected: h, got: t.len() });
            }
        }
        let mut data = SplitData {
            h,
            x_names: default_names("x", h),
            y_names: default_names("y", h),
            h_table,
            hprime_table,
            a_scalar: pairing.transpose(),
            pairing,
            b_tensor: zero_table(h),
            c_tensor: zero_table(h),
            basis: None,
            functional: None,
        };
        for j in 0..h {
            for i in 0..h {
                data.b_tensor[j][i] = data.b_right_dual(&unit(h, j), &unit(h, i))?;
                data.c_tensor[j][i] = data.c_left_dual(&unit(h, j), &unit(h, i))?;
            }
        }
        Ok(data)
    }

    fn pairing_inverse(&self) -> Result<Matrix> {
        self.pairing.inverse().map_err(|_| Error::SingularPairing("⟨x,y⟩ on ℌ × ℌ'".into()))
    }

    /// `x ∈ ℌ` with `⟨x, y_c⟩ = r_c`.
    fn x_with_pairings(&self, r: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.pairing_inverse()?.vec_mul(r))
    }

    /// `y ∈ ℌ'` with `⟨x_c, y⟩ = r_c`.
    fn y_with_pairings(&self, r: &[Rational]) -> Result<Vec<Rational>> {
        Ok(self.pairing_inverse()?.transpose().vec_mul(r))
    }

    /// `⟨u, v⟩` for `u ∈ ℌ`, `v ∈ ℌ'`.
    pub fn pair(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(&self.pairing.vec_mul(u), v)
    }

    pub fn mul_x(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        mul_in(&self.h_table, u, v)
    }

    pub fn mul_y(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        mul_in(&self.hprime_table, u, v)
    }

    fn bilinear(&self, t: &Table, y: &[Rational], x: &[Rational]) -> Vec<Rational> {
        mul_in(t, y, x)
    }

    pub fn a(&self, y: &[Rational], x: &[Rational]) -> Rational {
        dot(&self.a_scalar.vec_mul(y), x)
    }

    pub fn b(&self, y: &[Rational], x: &[Rational]) -> Vec<Rational> {
        self.bilinear(&self.b_tensor, y, x)
    }

    pub fn c(&self, y: &[Rational], x: &[Rational]) -> Vec<Rational> {
        self.bilinear(&self.c_tensor, y, x)
    }

    /// `B_R(y₂,x)` with `⟨B_R(y₂,x),y₁⟩ = ⟨x,y₁y₂⟩`.
    pub fn b_right_dual(&self, y2: &[Rational], x: &[Rational]) -> Result<Vec<Rational>> {
        let r: Vec<Rational> = (0..self.h).map(|c| self.pair(x, &self.mul_y(&unit(self.h, c), y2))).collect();
        self.x_with_pairings(&r)
    }

    /// `B_L(y₁,x)` with `⟨B_L(y₁,x),y₂⟩ = ⟨x,y₁y₂⟩`.
    pub fn b_left_dual(&self, y1: &[Rational], x: &[Rational]) -> Result<Vec<Rational>> {
        let r: Vec<Rational> = (0..self.h).map(|c| self.pair(x, &self.mul_y(y1, &unit(self.h, c)))).collect();
        self.x_with_pairings(&r)
    }

    /// `C_L(y,x₁)` with `⟨x₂,C_L(y,x₁)⟩ = ⟨x₁x₂,y⟩`.
    pub fn c_left_dual(&self, y: &[Rational], x1: &[Rational]) -> Result<Vec<Rational>> {
        let r: Vec<Rational> = (0..self.h).map(|c| self.pair(&self.mul_x(x1, &unit(self.h, c)), y)).collect();
        self.y_with_pairings(&r)
    }

    /// `C_R(y,x₂)` with `⟨x₁,C_R(y,x₂)⟩ = ⟨x₁x₂,y⟩`.
    pub fn c_right_dual(&self, y: &[Rational], x2: &[Rational]) -> Result<Vec<Rational>> {
        let r: Vec<Rational> = (0..self.h).map(|c| self.pair(&self.mul_x(&unit(self.h, c), x2), y)).collect();
        self.y_with_pairings(&r)
    }

    /// Roles of `ℌ` and `ℌ'` exchanged, with `B` and `C` induced by duality.
    pub fn swapped(&self) -> Result<SplitData> {
        let mut s =
            SplitData::from_dual_pair(self.hprime_table.clone(), self.h_table.clone(), self.pairing.transpose())?;
        s.x_names = self.y_names.clone();
        s.y_names = self.x_names.clone();
        Ok(s)
    }

    /// Same pair with the `ℌ'` multiplication replaced by `table`; `B` and `C`
    /// are re-induced from the pairing.
    pub fn with_hprime(&self, table: Table) -> Result<SplitData> {
        SplitData::from_dual_pair(self.h_table.clone(), table, self.pairing.clone())
    }

    fn format_x(&self, v: &[Rational]) -> String {
        format_in(v, &self.x_names)
    }

    fn format_y(&self, v: &[Rational]) -> String {
        format_in(v, &self.y_names)
    }
}

fn format_in(v: &[Rational], names: &[String]) -> String {
    let mut out = String::new();
    for (c, n) in v.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push('−');
        } else if !out.is_empty() {
            out.push('+');
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('·');
        }
        out.push_str(n);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn fmt_scalar(r: &Rational) -> String {
    let s = format_rational(r);
    s.strip_prefix('-').map_or(s.clone(), |m| format!("−{m}"))
}

pub const IDENTITY_NAMES: [&str; 11] =
    ["a_b", "a_c", "a_x", "b_x", "c_x", "a_y", "b_y", "c_y", "rank1_eqn", "homo_eqn", "homo_eqn2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Basis names of the failing tuple, in the order the identity lists its
    /// variables.
    pub tuple: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResult {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub results: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> Vec<&IdentityResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }

    /// `"rank1_eqn violated at (x,y,x,y): LHS 1, RHS 0"` for each failure.
    pub fn failure_summary(&self) -> String {
        let parts: Vec<String> = self
            .failures()
            .iter()
            .map(|r| match &r.witness {
                Some(w) => format!("{} violated at ({}): LHS {}, RHS {}", r.name, w.tuple.join(","), w.lhs, w.rhs),
                None => format!("{} violated", r.name),
            })
            .collect();
        parts.join("; ")
    }
}

fn indices(arity: usize, h: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..h.pow(arity as u32)).map(move |mut n| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = n % h;
            n /= h;
        }
        t
    })
}

/// Runs `eval` over every basis tuple and keeps the first failure.
fn scan<F>(name: &'static str, arity: usize, h: usize, mut eval: F) -> Result<IdentityResult>
where
    F: FnMut(&[usize]) -> Result<Option<Witness>>,
{
    for t in indices(arity, h) {
        if let Some(w) = eval(&t)? {
            return Ok(IdentityResult { name, passed: false, witness: Some(w) });
        }
    }
    Ok(IdentityResult { name, passed: true, witness: None })
}

fn witness(tuple: Vec<String>, lhs: String, rhs: String) -> Option<Witness> {
    Some(Witness { tuple, lhs, rhs, note: None })
}

fn homo2_failure(s: &SplitData, use_data: bool) -> Result<Option<Witness>> {
    let h = s.h;
    for t in indices(4, h) {
        let (x1, y1, x2, y2) = (unit(h, t[0]), unit(h, t[1]), unit(h, t[2]), unit(h, t[3]));
        let lhs = s.pair(&s.mul_x(&x1, &x2), &s.mul_y(&y1, &y2)) + s.pair(&x1, &y2) * s.pair(&x2, &y1);
        let (b_r, c_l) = if use_data {
            (s.b(&y2, &x1), s.c(&y2, &x1))
        } else {
            (s.b_right_dual(&y2, &x1)?, s.c_left_dual(&y2, &x1)?)
        };
        let rhs = s.pair(&s.b_left_dual(&y1, &x2)?, &c_l) + s.pair(&b_r, &s.c_right_dual(&y1, &x2)?);
        if lhs != rhs {
            let tuple = vec![
                s.x_names[t[0]].clone(),
                s.y_names[t[1]].clone(),
                s.x_names[t[2]].clone(),
                s.y_names[t[3]].clone(),
            ];
            return Ok(witness(tuple, fmt_scalar(&lhs), fmt_scalar(&rhs)));
        }
    }
    Ok(None)
}

/// Evaluates every identity over all basis tuples.
pub fn check_identities(s: &SplitData) -> Result<IdentityReport> {
    let h = s.h;
    let e = |k: usize| unit(h, k);
    let xn = |k: usize| s.x_names[k].clone();
    let yn = |k: usize| s.y_names[k].clone();
    let zero = vec![Rational::zero(); h];
    let mut results = Vec::new();

    // −x₁A(y,x₂) + x₁B(y,x₂) = 0
    results.push(scan("a_b", 3, h, |t| {
        let (x1, y, x2) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = sub(&s.mul_x(&x1, &s.b(&y, &x2)), &scaled(&x1, &s.a(&y, &x2)));
        Ok((lhs != zero).then(|| witness(vec![xn(t[0]), yn(t[1]), xn(t[2])], s.format_x(&lhs), "0".into())).flatten())
    })?);
    // −y₂A(y₁,x) + C(y₁,x)y₂ = 0
    results.push(scan("a_c", 3, h, |t| {
        let (y1, x, y2) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = sub(&s.mul_y(&s.c(&y1, &x), &y2), &scaled(&y2, &s.a(&y1, &x)));
        Ok((lhs != zero).then(|| witness(vec![yn(t[0]), xn(t[1]), yn(t[2])], s.format_y(&lhs), "0".into())).flatten())
    })?);
    // A(y,x₁x₂) = A(C(y,x₁),x₂)
    results.push(scan("a_x", 3, h, |t| {
        let (y, x1, x2) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.a(&y, &s.mul_x(&x1, &x2));
        let rhs = s.a(&s.c(&y, &x1), &x2);
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), xn(t[1]), xn(t[2])], fmt_scalar(&lhs), fmt_scalar(&rhs)))
            .flatten())
    })?);
    // B(y,x₁x₂) = B(C(y,x₁),x₂) + [B(y,x₁),x₂]
    results.push(scan("b_x", 3, h, |t| {
        let (y, x1, x2) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.b(&y, &s.mul_x(&x1, &x2));
        let b1 = s.b(&y, &x1);
        let rhs = add(&s.b(&s.c(&y, &x1), &x2), &sub(&s.mul_x(&b1, &x2), &s.mul_x(&x2, &b1)));
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), xn(t[1]), xn(t[2])], s.format_x(&lhs), s.format_x(&rhs)))
            .flatten())
    })?);
    // C(y,x₁x₂) = C(C(y,x₁),x₂)
    results.push(scan("c_x", 3, h, |t| {
        let (y, x1, x2) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.c(&y, &s.mul_x(&x1, &x2));
        let rhs = s.c(&s.c(&y, &x1), &x2);
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), xn(t[1]), xn(t[2])], s.format_y(&lhs), s.format_y(&rhs)))
            .flatten())
    })?);
    // A(y₁y₂,x) = A(y₁,B(y₂,x))
    results.push(scan("a_y", 3, h, |t| {
        let (y1, y2, x) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.a(&s.mul_y(&y1, &y2), &x);
        let rhs = s.a(&y1, &s.b(&y2, &x));
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), yn(t[1]), xn(t[2])], fmt_scalar(&lhs), fmt_scalar(&rhs)))
            .flatten())
    })?);
    // B(y₁y₂,x) = B(y₁,B(y₂,x))
    results.push(scan("b_y", 3, h, |t| {
        let (y1, y2, x) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.b(&s.mul_y(&y1, &y2), &x);
        let rhs = s.b(&y1, &s.b(&y2, &x));
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), yn(t[1]), xn(t[2])], s.format_x(&lhs), s.format_x(&rhs)))
            .flatten())
    })?);
    // C(y₁y₂,x) = C(y₁,B(y₂,x)) + [y₁,C(y₂,x)]
    results.push(scan("c_y", 3, h, |t| {
        let (y1, y2, x) = (e(t[0]), e(t[1]), e(t[2]));
        let lhs = s.c(&s.mul_y(&y1, &y2), &x);
        let c2 = s.c(&y2, &x);
        let rhs = add(&s.c(&y1, &s.b(&y2, &x)), &sub(&s.mul_y(&y1, &c2), &s.mul_y(&c2, &y1)));
        Ok((lhs != rhs)
            .then(|| witness(vec![yn(t[0]), yn(t[1]), xn(t[2])], s.format_y(&lhs), s.format_y(&rhs)))
            .flatten())
    })?);
    // ⟨x₁,y₁⟩⟨x₂,y₂⟩ = ⟨B(y₁,x₁),C(y₂,x₂)⟩
    results.push(scan("rank1_eqn", 4, h, |t| {
        let (x1, y1, x2, y2) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
        let lhs = s.pair(&x1, &y1) * s.pair(&x2, &y2);
        let rhs = s.pair(&s.b(&y1, &x1), &s.c(&y2, &x2));
        Ok((lhs != rhs)
            .then(|| witness(vec![xn(t[0]), yn(t[1]), xn(t[2]), yn(t[3])], fmt_scalar(&lhs), fmt_scalar(&rhs)))
            .flatten())
    })?);
    // ⟨x₁x₂,y₁y₂⟩ = ⟨x₂,y₁C(y₂,x₁)⟩ + ⟨B(y₂,x₁)x₂,y₁⟩ − ⟨B(y₁,x₂),C(y₂,x₁)⟩
    results.push(scan("homo_eqn", 4, h, |t| {
        let (x1, x2, y1, y2) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
        let lhs = s.pair(&s.mul_x(&x1, &x2), &s.mul_y(&y1, &y2));
        let rhs = s.pair(&x2, &s.mul_y(&y1, &s.c(&y2, &x1))) + s.pair(&s.mul_x(&s.b(&y2, &x1), &x2), &y1)
            - s.pair(&s.b(&y1, &x2), &s.c(&y2, &x1));
        Ok((lhs != rhs)
            .then(|| witness(vec![xn(t[0]), xn(t[1]), yn(t[2]), yn(t[3])], fmt_scalar(&lhs), fmt_scalar(&rhs)))
            .flatten())
    })?);
    // ⟨x₁x₂,y₁y₂⟩ + ⟨x₁,y₂⟩⟨x₂,y₁⟩ = ⟨B_L(y₁,x₂),C_L(y₂,x₁)⟩ + ⟨B_R(y₂,x₁),C_R(y₁,x₂)⟩
    let homo2 = match homo2_failure(s, true)? {
        Some(w) => IdentityResult { name: "homo_eqn2", passed: false, witness: Some(w) },
        None => match homo2_failure(&s.swapped()?, false)? {
            Some(mut w) => {
                w.note = Some("x↔y exchanged".into());
                IdentityResult { name: "homo_eqn2", passed: false, witness: Some(w) }
            }
            None => IdentityResult { name: "homo_eqn2", passed: true, witness: None },
        },
    };
    results.push(homo2);
    Ok(IdentityReport { results })
}

/// `Δ(x)` as the matrix `D` with `Δ(x) = Σ D[k][l] x_k ⊗ x_l`, determined by
/// `⟨Δ(x), y₁⊗y₂⟩ = ⟨x, y₁y₂⟩`.
pub fn delta(s: &SplitData, x: &[Rational]) -> Result<Matrix> {
    let h = s.h;
    let inv = s.pairing_inverse()?;
    let rows = (0..h).map(|c| (0..h).map(|d| s.pair(x, &s.mul_y(&unit(h, c), &unit(h, d)))).collect()).collect();
    let r = Matrix::from_rows(rows, h);
    Ok(inv.transpose().mul(&r).mul(&inv))
}

/// Splits a unital index-1 algebra at `F`.
pub fn split(a: &Algebra, f: &[Rational]) -> Result<SplitData> {
    let unity = a.find_unity().ok_or(Error::NoUnity)?;
    let d = decompose(a, f)?;
    let zero_v = SpectralValue::Finite(Rational::zero());
    let one_v = SpectralValue::int(1);
    if let Some(b) =
        d.blocks.iter().find(|b| b.alpha != zero_v && b.alpha != one_v && b.alpha != SpectralValue::Infinity)
    {
        return Err(Error::NotIndexOne(format!("block at α = {}", b.alpha)));
    }
    let v1 = d.space(&one_v);
    if v1.dim() != 1 || !v1.contains(&unity) {
        return Err(Error::NotIndexOne(format!("dim V_N(1) = {}", v1.dim())));
    }
    let f1 = dot(f, &unity);
    if f1.is_zero() {
        return Err(Error::Precondition("F(1) = 0".into()));
    }
    let f: Vec<Rational> = scaled(f, &f1.recip());
    let xs = d.space(&zero_v).basis().to_vec();
    let y0 = d.space(&SpectralValue::Infinity).basis().to_vec();
    let h = xs.len();
    if y0.len() != h {
        return Err(Error::NotIndexOne(format!("dim V_N(0) = {h} but dim V_N(∞) = {}", y0.len())));
    }
    // y_j chosen with ⟨x_i, y_j⟩ = δ_ij where ⟨x,y⟩ = −F(yx)
    let g0 = Matrix::from_rows(xs.iter().map(|x| y0.iter().map(|y| -dot(&a.mul(y, x), &f)).collect()).collect(), h);
    let t = g0.transpose().inverse().map_err(|_| Error::SingularPairing("−F(yx) on V_N(0) × V_N(∞)".into()))?;
    let ys: Vec<Vec<Rational>> = (0..h).map(|j| crate::algebra::subspace::combine(t.row(j), &y0, a.dim())).collect();
    let mut rows = vec![unity];
    rows.extend(xs.iter().cloned());
    rows.extend(ys.iter().cloned());
    let p = Matrix::from_rows(rows, a.dim());
    let b = a.change_basis(&p)?;

    let xr = 1..=h;
    let yr = h + 1..=2 * h;
    let part = |v: &[Rational], r: std::ops::RangeInclusive<usize>| -> Vec<Rational> { v[r].to_vec() };
    let outside = |v: &[Rational], keep: &std::ops::RangeInclusive<usize>| {
        v.iter().enumerate().any(|(k, c)| !keep.contains(&k) && !c.is_zero())
    };
    let mut h_table = zero_table(h);
    let mut hprime_table = zero_table(h);
    let mut a_scalar = Matrix::zeros(h, h);
    let mut b_tensor = zero_table(h);
    let mut c_tensor = zero_table(h);
    for i in 0..h {
        for j in 0..h {
            let xx = b.product(1 + i, 1 + j);
            let yy = b.product(1 + h + i, 1 + h + j);
            let xy = b.product(1 + i, 1 + h + j);
            if outside(xx, &xr) || outside(yy, &yr) || xy.iter().any(|c| !c.is_zero()) {
                return Err(Error::Precondition("V_N(0), V_N(∞) do not multiply as a split".into()));
            }
            h_table[i][j] = part(xx, xr.clone());
            hprime_table[i][j] = part(yy, yr.clone());
            let yx = b.product(1 + h + j, 1 + i);
            a_scalar[(j, i)] = -yx[0].clone();
            b_tensor[j][i] = part(yx, xr.clone());
            c_tensor[j][i] = part(yx, yr.clone());
        }
    }
    let pairing =
        Matrix::from_rows(xs.iter().map(|x| ys.iter().map(|y| -dot(&a.mul(y, x), &f)).collect()).collect(), h);
    Ok(SplitData {
        h,
        x_names: default_names("x", h),
        y_names: default_names("y", h),
        h_table,
        hprime_table,
        pairing,
        a_scalar,
        b_tensor,
        c_tensor,
        basis: Some(p),
        functional: Some(f),
    })
}

/// Assembles `ℌ ⊕ 𝕂·1 ⊕ ℌ'` on the basis `1, x…, y…` from the data's own
/// `A`, `B`, `C`.
pub fn assemble(s: &SplitData) -> Result<Algebra> {
    let h = s.h;
    let n = 2 * h + 1;
    let mut names = vec!["1".to_string()];
    names.extend(s.x_names.iter().cloned());
    names.extend(s.y_names.iter().cloned());
    let mut table = vec![vec![vec![Rational::zero(); n]; n]; n];
    for k in 0..n {
        table[0][k][k] = Rational::one();
        table[k][0][k] = Rational::one();
    }
    for i in 0..h {
        for j in 0..h {
            table[1 + i][1 + j][1..=h].clone_from_slice(&s.h_table[i][j]);
            table[1 + h + i][1 + h + j][h + 1..].clone_from_slice(&s.hprime_table[i][j]);
            let yx = &mut table[1 + h + j][1 + i];
            yx[0] = -s.a_scalar[(j, i)].clone();
            yx[1..=h].clone_from_slice(&s.b_tensor[j][i]);
            yx[h + 1..].clone_from_slice(&s.c_tensor[j][i]);
        }
    }
    Algebra::new(names, table, Some(0))
}

/// Builds the unital algebra of a dual pair, rejecting it unless the result
/// is associative.
pub fn build_index1(h_table: Table, hprime_table: Table, pairing: Matrix) -> Result<Algebra> {
    if !table_is_associative(&h_table) {
        return Err(Error::NotAssociative("ℌ is not associative".into()));
    }
    if !table_is_associative(&hprime_table) {
        return Err(Error::NotAssociative("ℌ' is not associative".into()));
    }
    let data = SplitData::from_dual_pair(h_table, hprime_table, pairing)?;
    let alg = assemble(&data)?;
    match alg.check_associativity() {
        Associativity::Ok => Ok(alg),
        Associativity::Violation { i, j, k, difference } => {
            let report = check_identities(&data)?;
            let detail = if report.all_passed() {
                format!(
                    "({},{},{}): difference {}",
                    alg.name(i),
                    alg.name(j),
                    alg.name(k),
                    alg.format_element(&difference)
                )
            } else {
                report.failure_summary()
            };
            Err(Error::NotAssociative(detail))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index1Spectrum {
    pub passed: bool,
    pub values: Vec<SpectralValue>,
    /// Values outside `{0, 1, ∞}`.
    pub offending: Vec<SpectralValue>,
}

/// Whether the decomposition at `F` only has blocks at `0`, `1`, `∞`.
pub fn index1_spectrum_check(a: &Algebra, f: &[Rational]) -> Result<Index1Spectrum> {
    if a.find_unity().is_none() {
        return Err(Error::NoUnity);
    }
    let index = lie_index(a, 0, 8);
    if index != 1 {
        return Err(Error::Precondition(format!("lie index is {index}, not 1")));
    }
    let d = decompose(a, f)?;
    let values: Vec<SpectralValue> = d.blocks.iter().map(|b| b.alpha.clone()).collect();
    let offending: Vec<SpectralValue> = values
        .iter()
        .filter(|v| !(v.is_finite_value(0) || v.is_finite_value(1) || **v == SpectralValue::Infinity))
        .cloned()
        .collect();
    Ok(Index1Spectrum { passed: offending.is_empty(), values, offending })
}

/// One-dimensional table `x·x = c·x`.
pub fn table1(c: i64) -> Table {
    vec![vec![vec![Rational::from_integer(c.into())]]]
}
