//! Jordan spaces of the pencil operator `s = Mᵀ(M − μMᵀ)⁻¹`.
//!
//! `V_k(α)` is the left kernel of `Tᵏ⁺¹` with `T = I − (α−μ)s` for finite `α`
//! and `T = s` for `α = ∞`, so `V_0(α) = Stab_F(α)`. The eigenvalue `σ` of `s`
//! belongs to `α = μ + 1/σ`, with `σ = 0` belonging to `α = ∞`.

use num_traits::{One, Zero};

use crate::algebra::{is_solvable, subspace_product, Algebra, Subspace};
use crate::error::{Error, Result};
use crate::exact::{dot, factor_poly, format_rational, int, BinaryForm, Matrix, Rational, UnivariatePoly};
use crate::pencil::{characteristic_of, evaluate, Characteristic, EvaluatedPencil, SpectralValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilOperator {
    pub mu: Rational,
    pub s: Matrix,
    pub pencil: EvaluatedPencil,
}

fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn shifted(p: &EvaluatedPencil, mu: &Rational) -> Matrix {
    p.m.add_scaled(&-mu.clone(), &p.mt)
}

/// The first `count` admissible shifts from `2, 3, 5, 7, …`, skipping `exclude`.
pub fn admissible_shifts(p: &EvaluatedPencil, count: usize, exclude: &[Rational]) -> Result<Vec<Rational>> {
    let n = p.m.rows();
    let mut out = Vec::new();
    let mut misses = 0;
    for q in primes() {
        let mu = int(q);
        if exclude.contains(&mu) {
            continue;
        }
        if shifted(p, &mu).det_ff()?.is_zero() {
            misses += 1;
            if misses > n {
                return Err(Error::DegeneratePencil("det(M − μMᵀ) vanishes at more than dim shifts".into()));
            }
            continue;
        }
        out.push(mu);
        if out.len() == count {
            break;
        }
    }
    Ok(out)
}

fn require_nonzero_chi(p: &EvaluatedPencil) -> Result<Characteristic> {
    let chi = characteristic_of(p)?;
    if chi.is_zero() {
        return Err(Error::DegeneratePencil("χ(λ,μ,F) ≡ 0 at this functional".into()));
    }
    Ok(chi)
}

pub fn pencil_operator(a: &Algebra, f: &[Rational], mu: Option<&Rational>) -> Result<PencilOperator> {
    let p = evaluate(a, f)?;
    require_nonzero_chi(&p)?;
    operator_for(p, mu)
}

fn operator_for(p: EvaluatedPencil, mu: Option<&Rational>) -> Result<PencilOperator> {
    let mu = match mu {
        Some(m) => m.clone(),
        None => admissible_shifts(&p, 1, &[])?.remove(0),
    };
    let inv = shifted(&p, &mu).inverse().map_err(|_| Error::BadShift(format_rational(&mu)))?;
    let s = p.mt.mul(&inv);
    Ok(PencilOperator { mu, s, pencil: p })
}

impl PencilOperator {
    /// Polynomial in `σ` whose roots belong to the spectral value `alpha`.
    pub fn sigma_poly(&self, alpha: &SpectralValue) -> UnivariatePoly {
        match alpha {
            SpectralValue::Infinity => UnivariatePoly::x(),
            SpectralValue::Finite(r) if *r == self.mu => UnivariatePoly::one(),
            SpectralValue::Finite(r) => UnivariatePoly::linear_root(&(r - &self.mu).recip()),
            SpectralValue::Orbit(q) => q.shift(&self.mu).reversed().monic(),
        }
    }

    /// Spectral value of the irreducible factor `p` of the characteristic
    /// polynomial of `s`.
    pub fn alpha_of(&self, p: &UnivariatePoly) -> SpectralValue {
        if p.degree() == Some(1) {
            let sigma = -p.coeff(0) / p.coeff(1);
            if sigma.is_zero() {
                SpectralValue::Infinity
            } else {
                SpectralValue::Finite(&self.mu + sigma.recip())
            }
        } else {
            SpectralValue::Orbit(p.reversed().shift(&-self.mu.clone()).monic())
        }
    }

    /// `V_0 ⊆ V_1 ⊆ …` up to stabilization at dimension `target`.
    fn chain(&self, sigma_poly: &UnivariatePoly, target: usize) -> Vec<Subspace> {
        let n = self.s.rows();
        let base = sigma_poly.eval_matrix(&self.s);
        let mut power = base.clone();
        let mut out: Vec<Subspace> = Vec::new();
        for _ in 0..=n {
            let k = Subspace::span(n, &power.left_kernel());
            if out.last().is_some_and(|prev| prev.dim() == k.dim()) {
                break;
            }
            let done = k.dim() >= target;
            out.push(k);
            if done {
                break;
            }
            power = power.mul(&base);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralBlock {
    pub alpha: SpectralValue,
    /// `dim V_0(α), dim V_1(α), …` until the chain stabilizes.
    pub chain_dims: Vec<usize>,
    /// `V_N(α)`.
    pub space: Subspace,
    pub chain: Vec<Subspace>,
}

impl SpectralBlock {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `V_k(α)`, with `V_{−1} = 0`.
    pub fn level(&self, k: i64) -> Subspace {
        if k < 0 {
            return Subspace::zero(self.space.ambient());
        }
        let k = (k as usize).min(self.chain.len() - 1);
        self.chain[k].clone()
    }

    /// Number of spectral values in the block (orbit degree, otherwise 1).
    pub fn orbit_degree(&self) -> usize {
        match &self.alpha {
            SpectralValue::Orbit(q) => q.degree().unwrap_or(1),
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub blocks: Vec<SpectralBlock>,
    pub functional: Vec<Rational>,
    pub mu_used: Rational,
    pub chi: Characteristic,
    pub operator: PencilOperator,
}

impl Decomposition {
    pub fn block(&self, alpha: &SpectralValue) -> Option<&SpectralBlock> {
        self.blocks.iter().find(|b| b.alpha == *alpha)
    }

    /// `V_N(α)`, zero when `α` carries no block.
    pub fn space(&self, alpha: &SpectralValue) -> Subspace {
        self.block(alpha).map(|b| b.space.clone()).unwrap_or_else(|| Subspace::zero(self.functional.len()))
    }

    pub fn level(&self, alpha: &SpectralValue, k: i64) -> Subspace {
        self.block(alpha).map(|b| b.level(k)).unwrap_or_else(|| Subspace::zero(self.functional.len()))
    }

    pub fn dim(&self, alpha: &SpectralValue) -> usize {
        self.block(alpha).map_or(0, SpectralBlock::dim)
    }
}

pub fn decompose(a: &Algebra, f: &[Rational]) -> Result<Decomposition> {
    decompose_with(a, f, None)
}

pub fn decompose_with(a: &Algebra, f: &[Rational], mu: Option<&Rational>) -> Result<Decomposition> {
    let p = evaluate(a, f)?;
    let chi = require_nonzero_chi(&p)?;
    let op = operator_for(p, mu)?;
    let charpoly = op.s.charpoly()?;
    let mut blocks: Vec<SpectralBlock> = factor_poly(&charpoly)?
        .factors
        .iter()
        .map(|(p, m)| {
            let target = m * p.degree().unwrap();
            let chain = op.chain(p, target);
            SpectralBlock {
                alpha: op.alpha_of(p),
                chain_dims: chain.iter().map(Subspace::dim).collect(),
                space: chain.last().cloned().expect("nonempty chain"),
                chain,
            }
        })
        .collect();
    blocks.sort_by(|x, y| x.alpha.cmp(&y.alpha));
    Ok(Decomposition { blocks, functional: f.to_vec(), mu_used: op.mu.clone(), chi, operator: op })
}

/// `V_k(α)`.
pub fn jordan_space(a: &Algebra, f: &[Rational], alpha: &SpectralValue, k: i64) -> Result<Subspace> {
    let d = decompose(a, f)?;
    Ok(d.level(alpha, k))
}

/// Bilinear form `(u, v) ↦ F(uv)` on the given bases.
fn pairing(m: &Matrix, left: &[Vec<Rational>], right: &[Vec<Rational>]) -> Matrix {
    let rows = left
        .iter()
        .map(|u| {
            let um = m.vec_mul(u);
            right.iter().map(|v| dot(&um, v)).collect()
        })
        .collect();
    Matrix::from_rows(rows, right.len())
}

/// Monic polynomial whose roots are the spectral values of a finite block.
fn alpha_poly(alpha: &SpectralValue) -> Option<UnivariatePoly> {
    match alpha {
        SpectralValue::Finite(r) => Some(UnivariatePoly::linear_root(r)),
        SpectralValue::Orbit(q) => Some(q.clone()),
        SpectralValue::Infinity => None,
    }
}

fn companion(p: &UnivariatePoly) -> Matrix {
    let d = p.degree().unwrap();
    let mut c = Matrix::zeros(d, d);
    for i in 1..d {
        c[(i, i - 1)] = Rational::one();
    }
    for i in 0..d {
        c[(i, d - 1)] = -p.coeff(i);
    }
    c
}

/// Sum of the finite blocks whose values are products `αβ` with `α` a root of
/// `p` and `β` a root of `q`.
fn product_target(d: &Decomposition, p: &UnivariatePoly, q: &UnivariatePoly) -> Subspace {
    let prod = companion(p).kron(&companion(q)).charpoly().expect("square");
    d.blocks
        .iter()
        .filter(|b| alpha_poly(&b.alpha).is_some_and(|r| r.divides(&prod)))
        .fold(Subspace::zero(d.functional.len()), |acc, b| acc.sum(&b.space))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VnCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub name: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VnReport {
    pub checks: Vec<VnCheck>,
    pub observations: Vec<Observation>,
    pub mu_values: Vec<Rational>,
}

impl VnReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&VnCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(name: &'static str, failure: Option<String>, ok: &str) -> VnCheck {
    match failure {
        None => VnCheck { name, passed: true, detail: ok.to_string() },
        Some(w) => VnCheck { name, passed: false, detail: w },
    }
}

fn fmt_dims(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Runs the eight structural checks on the decomposition at `F`.
pub fn verify_vn(a: &Algebra, f: &[Rational]) -> Result<VnReport> {
    let d = decompose(a, f)?;
    let n = a.dim();
    let zero = SpectralValue::Finite(Rational::zero());
    let one = SpectralValue::int(1);
    let inf = SpectralValue::Infinity;
    let mut checks = Vec::new();
    let mut observations = Vec::new();

    // 1. direct sum
    let total: usize = d.blocks.iter().map(SpectralBlock::dim).sum();
    let sum = d.blocks.iter().fold(Subspace::zero(n), |acc, b| acc.sum(&b.space));
    let fail = (total != n || sum.dim() != n)
        .then(|| format!("Σ dim V_N = {total}, dim of the sum = {}, dim 𝔄 = {n}", sum.dim()));
    checks.push(outcome("direct_sum", fail, &format!("{} blocks spanning dimension {n}", d.blocks.len())));

    // 2. dim V_N(α) = dim V_N(1/α)
    let fail = d.blocks.iter().find_map(|b| {
        let r = b.alpha.reciprocal();
        (d.dim(&r) != b.dim()).then(|| format!("dim V_N({}) = {} but dim V_N({r}) = {}", b.alpha, b.dim(), d.dim(&r)))
    });
    checks.push(outcome("reciprocal_dimensions", fail, "all blocks paired"));

    // 3. F vanishes on V(α), α ≠ 1, and on V(α)V(β) with αβ ≠ 1, when unital
    let fail = if a.find_unity().is_none() { None } else { unital_kernel_failure(a, &d)? };
    let ok = if a.find_unity().is_some() {
        "F(V_N(α)) = 0 for α ≠ 1 and F(V(α)V(β)) = 0 for αβ ≠ 1"
    } else {
        "not unital; nothing to check"
    };
    checks.push(outcome("unital_kernel", fail, ok));

    // 4. block products
    let (fail, star) = block_product_failure(a, &d)?;
    checks.push(outcome("block_products", fail, "all block, chain and stabilizer inclusions hold"));
    observations.push(Observation { name: "infinity_times_zero", detail: star });

    // 5. closure of V(0), V(1), V(∞)
    let mut fail = None;
    for v in [&zero, &one, &inf] {
        let s = d.space(v);
        if !s.contains_subspace(&subspace_product(a, &s, &s)?) {
            fail = Some(format!("V_N({v}) is not closed under multiplication"));
            break;
        }
    }
    checks.push(outcome("closure", fail, "V_N(0), V_N(1), V_N(∞) are subalgebras"));

    // 6. solvability: V(1) required, V(0) reported
    let v1 = d.space(&one);
    let fail = match is_solvable(a, &v1) {
        Ok(s) if s.solvable => None,
        Ok(s) => Some(format!("V_N(1) derived series {} does not reach 0", fmt_dims(&s.dims()))),
        Err(e) => Some(format!("V_N(1): {e}")),
    };
    checks.push(outcome("solvability", fail, "V_N(1) is solvable"));
    let v0 = d.space(&zero);
    let detail = match is_solvable(a, &v0) {
        Ok(s) => format!("V_N(0) derived series {}; solvable: {}", fmt_dims(&s.dims()), s.solvable),
        Err(e) => format!("V_N(0): {e}"),
    };
    observations.push(Observation { name: "v0_solvable", detail });

    // 7. factor multiplicities
    checks.push(outcome("factor_multiplicity", multiplicity_failure(&d), "exponents of χ match block dimensions"));

    // 8. μ-independence
    let extra = admissible_shifts(&d.operator.pencil, 2, std::slice::from_ref(&d.mu_used))?;
    let mut fail = None;
    for mu in &extra {
        let other = decompose_with(a, f, Some(mu))?;
        let same = other.blocks.len() == d.blocks.len()
            && other.blocks.iter().zip(&d.blocks).all(|(x, y)| x.alpha == y.alpha && x.chain == y.chain);
        if !same {
            fail = Some(format!(
                "decomposition at μ = {} differs from μ = {}",
                format_rational(mu),
                format_rational(&d.mu_used)
            ));
            break;
        }
    }
    let mut mu_values = vec![d.mu_used.clone()];
    mu_values.extend(extra);
    let shown: Vec<String> = mu_values.iter().map(format_rational).collect();
    checks.push(outcome("mu_independence", fail, &format!("identical at μ ∈ {{{}}}", shown.join(", "))));

    Ok(VnReport { checks, observations, mu_values })
}

fn unital_kernel_failure(a: &Algebra, d: &Decomposition) -> Result<Option<String>> {
    let f = &d.functional;
    for b in &d.blocks {
        if b.alpha.is_finite_value(1) {
            continue;
        }
        if let Some(v) = b.space.basis().iter().find(|v| !dot(v, f).is_zero()) {
            return Ok(Some(format!("F({}) ≠ 0 on V_N({})", a.format_element(v), b.alpha)));
        }
    }
    for x in &d.blocks {
        for y in &d.blocks {
            let skip = match (&x.alpha, &y.alpha) {
                (SpectralValue::Infinity, SpectralValue::Finite(r)) if r.is_zero() => true,
                (SpectralValue::Finite(p), SpectralValue::Finite(q)) => (p * q).is_one(),
                (SpectralValue::Orbit(_), SpectralValue::Orbit(_)) => y.alpha == x.alpha.reciprocal(),
                _ => false,
            };
            if skip {
                continue;
            }
            for u in x.space.basis() {
                for v in y.space.basis() {
                    let value = dot(&a.mul(u, v), f);
                    if !value.is_zero() {
                        return Ok(Some(format!(
                            "F(uv) = {} for u ∈ V_N({}), v ∈ V_N({})",
                            format_rational(&value),
                            x.alpha,
                            y.alpha
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Returns the first failing inclusion and a description of `V(∞)·V(0)`.
fn block_product_failure(a: &Algebra, d: &Decomposition) -> Result<(Option<String>, String)> {
    let n = a.dim();
    let zero = SpectralValue::Finite(Rational::zero());
    let inf = SpectralValue::Infinity;
    let prod = |u: &Subspace, w: &Subspace| subspace_product(a, u, w);

    // block level
    for x in &d.blocks {
        for y in &d.blocks {
            let p = prod(&x.space, &y.space)?;
            let (target, label) = match (&x.alpha, &y.alpha) {
                (SpectralValue::Infinity, SpectralValue::Finite(r)) if r.is_zero() => continue,
                (SpectralValue::Finite(r), SpectralValue::Infinity) if r.is_zero() => {
                    (Subspace::zero(n), "0".to_string())
                }
                (SpectralValue::Infinity, _) | (_, SpectralValue::Infinity) => (d.space(&inf), "V_N(∞)".to_string()),
                (ax, ay) => {
                    let (px, py) = (alpha_poly(ax).unwrap(), alpha_poly(ay).unwrap());
                    (product_target(d, &px, &py), format!("⊕ V_N(αβ) for α = {ax}, β = {ay}"))
                }
            };
            if !target.contains_subspace(&p) {
                return Ok((Some(format!("V_N({})·V_N({}) ⊄ {label}", x.alpha, y.alpha)), String::new()));
            }
        }
    }

    // chain level for rational and infinite values
    let rational: Vec<&SpectralBlock> =
        d.blocks.iter().filter(|b| !matches!(b.alpha, SpectralValue::Orbit(_))).collect();
    for x in &rational {
        for y in &rational {
            for k in 0..x.chain.len() as i64 {
                for m in 0..y.chain.len() as i64 {
                    let p = prod(&x.level(k), &y.level(m))?;
                    let target = match (&x.alpha, &y.alpha) {
                        (SpectralValue::Infinity, SpectralValue::Finite(r)) if r.is_zero() => continue,
                        (SpectralValue::Finite(r), SpectralValue::Infinity) if r.is_zero() => {
                            x.level(k).intersect(&y.level(m))
                        }
                        (SpectralValue::Infinity, _) | (_, SpectralValue::Infinity) => d.level(&inf, k + m),
                        (SpectralValue::Finite(p), SpectralValue::Finite(q)) => {
                            d.level(&SpectralValue::Finite(p * q), k + m)
                        }
                        _ => unreachable!("orbits filtered"),
                    };
                    if !target.contains_subspace(&p) {
                        return Ok((
                            Some(format!("V_{k}({})·V_{m}({}) not in the predicted space", x.alpha, y.alpha)),
                            String::new(),
                        ));
                    }
                }
            }
        }
    }

    // stabilizer level
    let stab = |b: &SpectralBlock| b.level(0);
    for x in &rational {
        for y in &rational {
            let p = prod(&stab(x), &stab(y))?;
            let target = match (&x.alpha, &y.alpha) {
                (SpectralValue::Infinity, SpectralValue::Finite(r)) if r.is_zero() => continue,
                (SpectralValue::Finite(r), SpectralValue::Infinity) if r.is_zero() => Subspace::zero(n),
                (SpectralValue::Infinity, _) | (_, SpectralValue::Infinity) => d.level(&inf, 0),
                (SpectralValue::Finite(p), SpectralValue::Finite(q)) => d.level(&SpectralValue::Finite(p * q), 0),
                _ => unreachable!("orbits filtered"),
            };
            if !target.contains_subspace(&p) {
                return Ok((
                    Some(format!("Stab({})·Stab({}) not in the predicted stabilizer", x.alpha, y.alpha)),
                    String::new(),
                ));
            }
        }
    }

    let star = prod(&d.space(&inf), &d.space(&zero))?;
    let mut where_ = Vec::new();
    if star.is_zero() {
        where_.push("zero".to_string());
    } else {
        for b in &d.blocks {
            if b.space.contains_subspace(&star) {
                where_.push(format!("inside V_N({})", b.alpha));
            }
        }
    }
    let detail = format!(
        "dim V_N(∞)·V_N(0) = {} ({})",
        star.dim(),
        if where_.is_empty() { "spread over several blocks".to_string() } else { where_.join(", ") }
    );
    Ok((None, detail))
}

fn multiplicity_failure(d: &Decomposition) -> Option<String> {
    let fac = d.chi.factored.as_ref()?;
    for b in &d.blocks {
        let mult = d.chi.multiplicity(&b.alpha).unwrap_or(0);
        if mult * b.orbit_degree() != b.dim() {
            return Some(format!("χ has exponent {mult} at {} but dim V_N = {}", b.alpha, b.dim()));
        }
    }
    let mut expected: Vec<(SpectralValue, usize)> = Vec::new();
    if fac.mult_lambda > 0 {
        expected.push((SpectralValue::Infinity, fac.mult_lambda));
    }
    if fac.mult_mu > 0 {
        expected.push((SpectralValue::Finite(Rational::zero()), fac.mult_mu));
    }
    for f in &fac.factors {
        let alpha = match f.rational_root() {
            Some(r) => SpectralValue::Finite(r),
            None => SpectralValue::Orbit(f.poly.clone()),
        };
        expected.push((alpha, f.multiplicity));
    }
    expected.into_iter().find_map(|(alpha, m)| {
        (d.block(&alpha).is_none()).then(|| format!("χ has a factor of exponent {m} at {alpha} with no block"))
    })
}

/// `U` with `F(ab) = F(b·U(a))` on `V_N(α) × V_N(1/α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UOperator {
    pub alpha: Rational,
    /// Chain-adapted basis of `V_N(α)`: `V_0` first, then `V_1`, …
    pub basis: Vec<Vec<Rational>>,
    /// Row `i` holds the coordinates of `U(basisᵢ)`.
    pub matrix: Matrix,
    /// Chain level of each basis vector.
    pub levels: Vec<usize>,
    pub unipotent: bool,
    pub flag_preserved: bool,
}

fn chain_adapted_basis(block: &SpectralBlock) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let n = block.space.ambient();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut levels = Vec::new();
    for (k, level) in block.chain.iter().enumerate() {
        for v in level.basis() {
            if !Subspace::span(n, &basis).contains(v) {
                basis.push(v.clone());
                levels.push(k);
            }
        }
    }
    (basis, levels)
}

pub fn u_operator(a: &Algebra, f: &[Rational], alpha: &SpectralValue) -> Result<UOperator> {
    let r = match alpha {
        SpectralValue::Finite(r) if !r.is_zero() && !r.is_one() => r.clone(),
        _ => return Err(Error::InvalidAlpha(alpha.to_string())),
    };
    let d = decompose(a, f)?;
    let block = d.block(alpha).ok_or_else(|| Error::MissingBlock(alpha.clone()))?;
    let dual = d.block(&alpha.reciprocal()).ok_or_else(|| Error::MissingBlock(alpha.reciprocal()))?;
    u_from_blocks(a, &d, block, dual, r)
}

fn u_from_blocks(
    a: &Algebra,
    d: &Decomposition,
    block: &SpectralBlock,
    dual: &SpectralBlock,
    r: Rational,
) -> Result<UOperator> {
    let m = &d.operator.pencil.m;
    if block.dim() != dual.dim() {
        return Err(Error::SingularPairing(format!(
            "dim V_N({}) = {} but dim V_N({}) = {}",
            block.alpha,
            block.dim(),
            dual.alpha,
            dual.dim()
        )));
    }
    let (basis, levels) = chain_adapted_basis(block);
    let dual_basis = dual.space.basis();
    let p = pairing(m, &basis, dual_basis);
    let rt = pairing(&m.transpose(), &basis, dual_basis);
    let inv = rt
        .inverse()
        .map_err(|_| Error::SingularPairing(format!("F(ba) on V_N({}) × V_N({})", dual.alpha, block.alpha)))?;
    let u = p.mul(&inv);
    let k = basis.len();
    let shifted = u.sub(&Matrix::identity(k).scale(&r));
    let unipotent = shifted.pow(k).is_zero();
    let span = |lvl: i64| -> Subspace {
        let vecs: Vec<Vec<Rational>> =
            basis.iter().zip(&levels).filter(|(_, &l)| (l as i64) <= lvl).map(|(v, _)| v.clone()).collect();
        Subspace::span(a.dim(), &vecs)
    };
    let flag_preserved = (0..k).all(|i| {
        let image: Vec<Rational> = crate::algebra::subspace::combine(shifted.row(i), &basis, a.dim());
        span(levels[i] as i64 - 1).contains(&image)
    });
    Ok(UOperator { alpha: r, basis, matrix: u, levels, unipotent, flag_preserved })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingStatus {
    pub label: String,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCharpolyReport {
    pub rhs: BinaryForm,
    /// `χ = ratio · rhs` when proportional.
    pub ratio: Option<Rational>,
    pub pairings: Vec<PairingStatus>,
    pub passed: bool,
}

fn matrix_form(x: &Matrix, y: &Matrix) -> Result<BinaryForm> {
    if x.rows() == 0 {
        return Ok(BinaryForm::new(0, vec![Rational::one()]));
    }
    BinaryForm::pencil_det(x, y)
}

/// Rebuilds `χ` from the pairings `A_∞`, `Q_F` on `V_N(1)`, the `U(α)`
/// operators and, for irrational orbits, the pencil restricted to the orbit
/// pair.
pub fn block_charpoly_check(a: &Algebra, f: &[Rational]) -> Result<BlockCharpolyReport> {
    let d = decompose(a, f)?;
    let m = &d.operator.pencil.m;
    let zero = SpectralValue::Finite(Rational::zero());
    let mut pairings = Vec::new();
    let mut rhs = BinaryForm::new(0, vec![Rational::one()]);

    let vinf = d.space(&SpectralValue::Infinity);
    let v0 = d.space(&zero);
    if vinf.dim() != v0.dim() {
        pairings.push(PairingStatus { label: "A_∞ on V_N(∞) × V_N(0)".into(), invertible: false });
        return Ok(BlockCharpolyReport { rhs, ratio: None, pairings, passed: false });
    }
    let a_inf = pairing(m, vinf.basis(), v0.basis());
    let h = a_inf.rows();
    let det_inf = if h == 0 { Rational::one() } else { a_inf.det_ff()? };
    pairings.push(PairingStatus { label: "A_∞ on V_N(∞) × V_N(0)".into(), invertible: !det_inf.is_zero() });
    let lam = BinaryForm::linear(Rational::one(), Rational::zero());
    let mu = BinaryForm::linear(Rational::zero(), Rational::one());
    rhs = rhs.mul(&lam.pow(h).scale(&det_inf)).mul(&mu.pow(h).scale(&det_inf));

    let v1 = d.space(&SpectralValue::int(1));
    let q = pairing(m, v1.basis(), v1.basis());
    let q_det = if q.rows() == 0 { Rational::one() } else { q.det_ff()? };
    pairings.push(PairingStatus { label: "Q_F on V_N(1)".into(), invertible: !q_det.is_zero() });
    rhs = rhs.mul(&matrix_form(&q, &q.transpose())?);

    let mut seen_orbits: Vec<SpectralValue> = Vec::new();
    for b in &d.blocks {
        match &b.alpha {
            SpectralValue::Finite(r) if !r.is_zero() && !r.is_one() => {
                let dual = d.block(&b.alpha.reciprocal());
                let Some(dual) = dual else {
                    pairings.push(PairingStatus { label: format!("A_{} (no dual block)", b.alpha), invertible: false });
                    continue;
                };
                match u_from_blocks(a, &d, b, dual, r.clone()) {
                    Ok(u) => {
                        let at = pairing(&m.transpose(), &u.basis, dual.space.basis());
                        pairings.push(PairingStatus {
                            label: format!("A_{} on V_N({}) × V_N({})", b.alpha, b.alpha, dual.alpha),
                            invertible: true,
                        });
                        // det((λU + μ)Aᵀ_α) = det(λ·U·Aᵀ + μ·Aᵀ)
                        rhs = rhs.mul(&matrix_form(&u.matrix.mul(&at), &at)?);
                    }
                    Err(_) => pairings.push(PairingStatus { label: format!("A_{}", b.alpha), invertible: false }),
                }
            }
            SpectralValue::Orbit(_) => {
                if seen_orbits.contains(&b.alpha) {
                    continue;
                }
                let r = b.alpha.reciprocal();
                seen_orbits.push(b.alpha.clone());
                seen_orbits.push(r.clone());
                let space = if r == b.alpha { b.space.clone() } else { b.space.sum(&d.space(&r)) };
                let g = pairing(m, space.basis(), space.basis());
                let block_form = matrix_form(&g, &g.transpose())?;
                pairings.push(PairingStatus {
                    label: format!("pencil on V_N({}) ⊕ V_N({r})", b.alpha),
                    invertible: !block_form.is_zero(),
                });
                rhs = rhs.mul(&block_form);
            }
            _ => {}
        }
    }
    let ratio = if rhs.degree() == d.chi.form.degree() { d.chi.form.proportionality(&rhs) } else { None };
    let passed = ratio.is_some() && pairings.iter().all(|p| p.invertible);
    Ok(BlockCharpolyReport { rhs, ratio, pairings, passed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiIdeal {
    pub image: Subspace,
    pub v1: Subspace,
    pub passed: bool,
}

/// `Im φ = V_N(α)·V_N(1/α)` and whether it is a two-sided ideal of `V_N(1)`.
pub fn phi_ideal_check(a: &Algebra, f: &[Rational], alpha: &SpectralValue) -> Result<PhiIdeal> {
    if matches!(alpha, SpectralValue::Infinity) || alpha.is_finite_value(0) {
        return Err(Error::InvalidAlpha(alpha.to_string()));
    }
    let d = decompose(a, f)?;
    let x = d.block(alpha).ok_or_else(|| Error::MissingBlock(alpha.clone()))?;
    let y = d.block(&alpha.reciprocal()).ok_or_else(|| Error::MissingBlock(alpha.reciprocal()))?;
    let image = subspace_product(a, &x.space, &y.space)?;
    let v1 = d.space(&SpectralValue::int(1));
    let passed = image.contains_subspace(&subspace_product(a, &v1, &image)?)
        && image.contains_subspace(&subspace_product(a, &image, &v1)?)
        && v1.contains_subspace(&image);
    Ok(PhiIdeal { image, v1, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual_numbers, full_matrix, l1, t2, zero_algebra};
    use crate::exact::{ints, rat};

    fn half() -> SpectralValue {
        SpectralValue::Finite(rat(1, 2))
    }

    #[test]
    fn operator_examples() {
        let op = pencil_operator(&l1(), &ints(&[1, 1]), Some(&int(2))).unwrap();
        let expected = Matrix::from_i64(&[&[-1, 1], &[0, 0]]).scale(&rat(1, 2));
        assert_eq!(op.s, expected);
        assert_eq!(op.s.charpoly().unwrap(), UnivariatePoly::new(vec![int(0), rat(1, 2), int(1)]));
        assert!(matches!(pencil_operator(&zero_algebra(2), &ints(&[1, 1]), None), Err(Error::DegeneratePencil(_))));
        let op = pencil_operator(&t2(), &ints(&[1, 2, 4]), Some(&int(2))).unwrap();
        let roots = op.s.charpoly().unwrap().rational_roots();
        assert_eq!(roots, vec![int(-1), rat(-1, 2), int(0)]);
        assert_eq!(pencil_operator(&t2(), &ints(&[1, 2, 4]), Some(&int(1))), Err(Error::BadShift("1".into())));
    }

    #[test]
    fn jordan_space_examples() {
        let m2 = full_matrix(2);
        let f = ints(&[1, 0, 0, 2]);
        let v = jordan_space(&m2, &f, &SpectralValue::int(2), 0).unwrap();
        assert_eq!(v, Subspace::span(4, &[ints(&[0, 0, 1, 0])]));
        for k in 0..3 {
            let v = jordan_space(&t2(), &ints(&[1, 0, 0]), &SpectralValue::int(1), k).unwrap();
            assert_eq!(v, Subspace::span(3, &[ints(&[1, 0, 0])]));
        }
        assert!(jordan_space(&l1(), &ints(&[1, 1]), &SpectralValue::int(5), 3).unwrap().is_zero());
        assert!(jordan_space(&t2(), &ints(&[1, 2, 4]), &SpectralValue::int(1), -1).unwrap().is_zero());
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose(&t2(), &ints(&[1, 2, 4])).unwrap();
        let alphas: Vec<SpectralValue> = d.blocks.iter().map(|b| b.alpha.clone()).collect();
        assert_eq!(alphas, vec![SpectralValue::int(0), SpectralValue::int(1), SpectralValue::Infinity]);
        assert!(d.blocks.iter().all(|b| b.chain_dims == vec![1]));

        let d = decompose(&full_matrix(2), &ints(&[1, 0, 0, 2])).unwrap();
        assert_eq!(d.dim(&SpectralValue::int(1)), 2);
        assert_eq!(d.dim(&SpectralValue::int(2)), 1);
        assert_eq!(d.dim(&half()), 1);
        assert_eq!(d.space(&SpectralValue::int(2)), Subspace::span(4, &[ints(&[0, 0, 1, 0])]));

        let d = decompose(&dual_numbers(), &ints(&[0, 1])).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.dim(&SpectralValue::int(1)), 2);
    }

    #[test]
    fn nontrivial_chain() {
        // ℚ[t]/t³ at F = (0,0,1) has s with a single α = 1 block and λ+μ
        // exponent 3; the stabilizer is already everything.
        let p3 = crate::algebra::truncated_polynomial(3);
        let d = decompose(&p3, &ints(&[0, 0, 1])).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].chain_dims, vec![3]);
        // L1 ⊕ ... ; T3 has genuine chains at generic F
        let t3 = crate::algebra::upper_triangular(3);
        let d = decompose(&t3, &ints(&[3, 1, 4, 1, 5, 9])).unwrap();
        let total: usize = d.blocks.iter().map(SpectralBlock::dim).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn vn_examples() {
        for (a, f) in [(t2(), ints(&[1, 2, 4])), (full_matrix(2), ints(&[1, 0, 0, 2])), (dual_numbers(), ints(&[0, 1]))]
        {
            let r = verify_vn(&a, &f).unwrap();
            assert!(r.all_passed(), "{:?}", r.checks);
            assert_eq!(r.checks.len(), 8);
        }
        assert!(matches!(verify_vn(&zero_algebra(2), &ints(&[1, 1])), Err(Error::DegeneratePencil(_))));
    }

    #[test]
    fn u_operator_examples() {
        let m2 = full_matrix(2);
        let f = ints(&[1, 0, 0, 2]);
        let u = u_operator(&m2, &f, &SpectralValue::int(2)).unwrap();
        assert_eq!(u.matrix, Matrix::from_i64(&[&[2]]));
        assert!(u.unipotent && u.flag_preserved);
        let u = u_operator(&m2, &f, &half()).unwrap();
        assert_eq!(u.matrix, Matrix::diagonal(&[rat(1, 2)]));
        assert!(matches!(u_operator(&m2, &f, &SpectralValue::int(1)), Err(Error::InvalidAlpha(_))));
        assert!(matches!(u_operator(&m2, &f, &SpectralValue::int(3)), Err(Error::MissingBlock(_))));
    }

    #[test]
    fn block_formula_examples() {
        let r = block_charpoly_check(&t2(), &ints(&[1, 2, 4])).unwrap();
        assert!(r.passed, "{r:?}");
        let r = block_charpoly_check(&full_matrix(2), &ints(&[1, 0, 0, 2])).unwrap();
        assert!(r.passed, "{r:?}");
        let r = block_charpoly_check(&dual_numbers(), &ints(&[0, 1])).unwrap();
        assert!(r.passed);
        assert_eq!(r.rhs, BinaryForm::new(2, ints(&[-1, -2, -1])));
    }

    #[test]
    fn phi_examples() {
        let m2 = full_matrix(2);
        let f = ints(&[1, 0, 0, 2]);
        let p = phi_ideal_check(&m2, &f, &SpectralValue::int(2)).unwrap();
        assert_eq!(p.image, Subspace::span(4, &[ints(&[0, 0, 0, 1])]));
        assert!(p.passed);
        let p = phi_ideal_check(&t2(), &ints(&[1, 2, 4]), &SpectralValue::int(1)).unwrap();
        assert!(p.passed);
        assert!(matches!(phi_ideal_check(&l1(), &ints(&[1, 1]), &SpectralValue::int(2)), Err(Error::MissingBlock(_))));
    }
}
