//! The pencil `λA + μAᵀ` of an algebra evaluated at a functional.
//!
//! Orientation: `M[i][j] = F(e_i e_j)` and vectors are rows, so
//! `a ∈ Stab_F(α)` iff `a·(M − αMᵀ) = 0`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{subspace_product, Algebra, Subspace};
use crate::error::{Error, Result};
use crate::exact::{factor_form, format_rational, int, BinaryForm, FactoredForm, Matrix, Rational, UnivariatePoly};

/// `F(e_i) = values[i]`.
pub type Functional = Vec<Rational>;

/// Number of draws made by [`sample_generic`].
pub const GENERIC_ATTEMPTS: usize = 16;

/// Coordinates of sampled functionals lie in `[−SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpectralValue {
    Finite(Rational),
    /// All roots of an irreducible polynomial of degree ≥ 2.
    Orbit(UnivariatePoly),
    Infinity,
}

impl SpectralValue {
    pub fn int(n: i64) -> SpectralValue {
        SpectralValue::Finite(int(n))
    }

    pub fn is_finite_value(&self, v: i64) -> bool {
        matches!(self, SpectralValue::Finite(r) if *r == int(v))
    }

    /// `1/α` with `1/0 = ∞`; orbits map to the orbit of reciprocal roots.
    pub fn reciprocal(&self) -> SpectralValue {
        match self {
            SpectralValue::Finite(r) if r.is_zero() => SpectralValue::Infinity,
            SpectralValue::Finite(r) => SpectralValue::Finite(r.recip()),
            SpectralValue::Infinity => SpectralValue::Finite(Rational::zero()),
            SpectralValue::Orbit(p) => SpectralValue::Orbit(p.reversed().monic()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            SpectralValue::Finite(_) => 0,
            SpectralValue::Orbit(_) => 1,
            SpectralValue::Infinity => 2,
        }
    }
}

impl Ord for SpectralValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SpectralValue::Finite(a), SpectralValue::Finite(b)) => a.cmp(b),
            (SpectralValue::Orbit(a), SpectralValue::Orbit(b)) => {
                a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
            }
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for SpectralValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpectralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralValue::Finite(r) => f.write_str(&format_rational(r)),
            SpectralValue::Orbit(p) => write!(f, "root of {}", p.display_with("t")),
            SpectralValue::Infinity => f.write_str("∞"),
        }
    }
}

/// `m[i][j] = F(e_i e_j)` and its transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluatedPencil {
    pub m: Matrix,
    pub mt: Matrix,
}

pub fn evaluate(a: &Algebra, f: &[Rational]) -> Result<EvaluatedPencil> {
    let n = a.dim();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(crate::exact::dot(a.product(i, j), f));
        }
    }
    let m = Matrix::from_vec(n, n, data);
    let mt = m.transpose();
    Ok(EvaluatedPencil { m, mt })
}

/// `χ(λ, μ, F) = det(λM + μMᵀ)` with its factorization when nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristic {
    pub form: BinaryForm,
    pub factored: Option<FactoredForm>,
}

impl Characteristic {
    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    /// Multiplicity of the factor belonging to `alpha`, `None` for `χ ≡ 0`.
    pub fn multiplicity(&self, alpha: &SpectralValue) -> Option<usize> {
        let f = self.factored.as_ref()?;
        Some(match alpha {
            SpectralValue::Infinity => f.mult_lambda,
            SpectralValue::Finite(r) => f.multiplicity_of(r),
            SpectralValue::Orbit(p) => f.orbit_multiplicity(p),
        })
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.factored {
            Some(fac) => write!(f, "{fac}"),
            None => f.write_str("0"),
        }
    }
}

pub fn charpoly(a: &Algebra, f: &[Rational]) -> Result<Characteristic> {
    let p = evaluate(a, f)?;
    characteristic_of(&p)
}

pub(crate) fn characteristic_of(p: &EvaluatedPencil) -> Result<Characteristic> {
    let form = BinaryForm::pencil_det(&p.m, &p.mt)?;
    let factored = if form.is_zero() { None } else { Some(factor_form(&form)?) };
    Ok(Characteristic { form, factored })
}

/// `{a : F(ab) = αF(ba) ∀b}`; for `α = ∞`, `{a : F(ba) = 0 ∀b}`.
pub fn stabilizer(a: &Algebra, f: &[Rational], alpha: &SpectralValue) -> Result<Subspace> {
    let p = evaluate(a, f)?;
    stabilizer_of(&p, alpha)
}

pub(crate) fn stabilizer_of(p: &EvaluatedPencil, alpha: &SpectralValue) -> Result<Subspace> {
    let n = p.m.rows();
    let kernel = match alpha {
        SpectralValue::Infinity => p.mt.left_kernel(),
        SpectralValue::Finite(r) => p.m.add_scaled(&-r.clone(), &p.mt).left_kernel(),
        SpectralValue::Orbit(q) => return Err(Error::AlgebraicOrbit(q.display_with("t"))),
    };
    Ok(Subspace::span(n, &kernel))
}

/// `Stab_F(0) ∩ Stab_F(∞)`.
pub fn nil(a: &Algebra, f: &[Rational]) -> Result<Subspace> {
    let p = evaluate(a, f)?;
    Ok(nil_of(&p))
}

fn nil_of(p: &EvaluatedPencil) -> Subspace {
    let zero = stabilizer_of(p, &SpectralValue::Finite(Rational::zero())).expect("finite");
    let inf = stabilizer_of(p, &SpectralValue::Infinity).expect("finite");
    zero.intersect(&inf)
}

/// `Q_F(a, b) = F(ab)` on `Stab_F(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QForm {
    pub domain: Subspace,
    pub gram: Matrix,
    pub nondegenerate: bool,
    /// Exponent of `(λ+μ)` in `χ`; `None` when `χ ≡ 0`.
    pub lambda_plus_mu: Option<usize>,
}

pub fn q_form(a: &Algebra, f: &[Rational]) -> Result<QForm> {
    let p = evaluate(a, f)?;
    let domain = stabilizer_of(&p, &SpectralValue::int(1))?;
    let k = domain.dim();
    let gram = Matrix::from_rows(
        domain
            .basis()
            .iter()
            .map(|u| {
                let row = p.m.vec_mul(u);
                domain.basis().iter().map(|v| crate::exact::dot(&row, v)).collect()
            })
            .collect(),
        k,
    );
    let nondegenerate = k == 0 || !gram.det_ff()?.is_zero();
    let chi = characteristic_of(&p)?;
    let lambda_plus_mu = chi.multiplicity(&SpectralValue::int(1));
    Ok(QForm { domain, gram, nondegenerate, lambda_plus_mu })
}

/// Deterministic functional for `(seed, trial)`; each trial reads its own
/// stream of the seeded generator.
pub fn sample_functional(dim: usize, seed: u64, trial: u64) -> Functional {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (0..dim).map(|_| int(rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND))).collect()
}

/// Per-trial kernel dimensions behind [`lie_index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieIndexReport {
    pub index: usize,
    pub samples: Vec<(Functional, usize)>,
}

/// `min_F dim ker(M − Mᵀ)` over `trials` sampled functionals.
pub fn lie_index_report(a: &Algebra, seed: u64, trials: usize) -> LieIndexReport {
    assert!(trials >= 1, "at least one trial");
    let samples: Vec<(Functional, usize)> = (0..trials as u64)
        .map(|t| {
            let f = sample_functional(a.dim(), seed, t);
            let k = skew_kernel_dim(a, &f);
            (f, k)
        })
        .collect();
    let index = samples.iter().map(|(_, k)| *k).min().unwrap();
    LieIndexReport { index, samples }
}

pub fn lie_index(a: &Algebra, seed: u64, trials: usize) -> usize {
    lie_index_report(a, seed, trials).index
}

pub(crate) fn skew_kernel_dim(a: &Algebra, f: &[Rational]) -> usize {
    let p = evaluate(a, f).expect("sampled to the right length");
    a.dim() - p.m.sub(&p.mt).rank()
}

/// One dimension-valued quantity compared against its minimum over all draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateEntry {
    pub quantity: &'static str,
    pub value: usize,
    pub observed_min: usize,
}

impl CertificateEntry {
    pub fn minimal(&self) -> bool {
        self.value == self.observed_min
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericSample {
    pub functional: Functional,
    /// 1-based index of the accepted draw.
    pub attempts: usize,
    pub chi: Characteristic,
    pub certificate: Vec<CertificateEntry>,
}

impl GenericSample {
    pub fn all_minimal(&self) -> bool {
        self.certificate.iter().all(CertificateEntry::minimal)
    }
}

const CERTIFIED: [&str; 5] = ["dim Stab(0)", "dim Stab(1)", "dim Stab(∞)", "dim Nil", "corank M"];

fn certified_dims(p: &EvaluatedPencil) -> [usize; 5] {
    let n = p.m.rows();
    let s0 = stabilizer_of(p, &SpectralValue::Finite(Rational::zero())).expect("finite");
    let s1 = stabilizer_of(p, &SpectralValue::int(1)).expect("finite");
    let si = stabilizer_of(p, &SpectralValue::Infinity).expect("finite");
    let nil = s0.intersect(&si);
    [s0.dim(), s1.dim(), si.dim(), nil.dim(), n - p.m.rank()]
}

/// First of up to [`GENERIC_ATTEMPTS`] seeded draws with `χ ≠ 0`.
pub fn sample_generic(a: &Algebra, seed: u64) -> Result<GenericSample> {
    let n = a.dim();
    let draws: Vec<Functional> = (0..GENERIC_ATTEMPTS as u64).map(|t| sample_functional(n, seed, t)).collect();
    let mut accepted = None;
    for (t, f) in draws.iter().enumerate() {
        let chi = charpoly(a, f)?;
        if !chi.is_zero() {
            accepted = Some((t, chi));
            break;
        }
    }
    let Some((t, chi)) = accepted else {
        return Err(Error::DegeneratePencil(format!(
            "χ vanished at all {GENERIC_ATTEMPTS} sampled functionals (seed {seed})"
        )));
    };
    let dims: Vec<[usize; 5]> = draws.iter().map(|f| certified_dims(&evaluate(a, f).expect("length"))).collect();
    let certificate = (0..CERTIFIED.len())
        .map(|q| CertificateEntry {
            quantity: CERTIFIED[q],
            value: dims[t][q],
            observed_min: dims.iter().map(|d| d[q]).min().unwrap(),
        })
        .collect();
    Ok(GenericSample { functional: draws[t].clone(), attempts: t + 1, chi, certificate })
}

/// Outcome of one stabilizer statement at a fixed functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatementCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

impl StatementCheck {
    fn new(name: &'static str, failure: Option<String>) -> StatementCheck {
        StatementCheck { name, passed: failure.is_none(), witness: failure }
    }
}

/// Spectral values worth probing at `F`: `0`, `1`, `−1`, `2`, `1/2`, `∞` and
/// every rational root of `χ` with its reciprocal.
pub fn probe_values(chi: &Characteristic) -> Vec<SpectralValue> {
    let mut out: Vec<SpectralValue> = [0, 1, -1, 2]
        .iter()
        .map(|&v| SpectralValue::int(v))
        .chain([SpectralValue::Finite(Rational::new(1.into(), 2.into())), SpectralValue::Infinity])
        .collect();
    if let Some(f) = &chi.factored {
        for r in f.factors.iter().filter_map(|x| x.rational_root()) {
            let v = SpectralValue::Finite(r);
            out.push(v.reciprocal());
            out.push(v);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn product_value(a: &SpectralValue, b: &SpectralValue) -> Option<SpectralValue> {
    match (a, b) {
        (SpectralValue::Finite(x), SpectralValue::Finite(y)) => Some(SpectralValue::Finite(x * y)),
        _ => None,
    }
}

/// Every dimension and inclusion statement about stabilizers, evaluated
/// exactly at `F` over [`probe_values`].
pub fn stabilizer_statements(a: &Algebra, f: &[Rational]) -> Result<Vec<StatementCheck>> {
    let p = evaluate(a, f)?;
    let chi = characteristic_of(&p)?;
    let values = probe_values(&chi);
    let stabs: Vec<(SpectralValue, Subspace)> =
        values.iter().map(|v| Ok((v.clone(), stabilizer_of(&p, v)?))).collect::<Result<_>>()?;
    let nil = nil_of(&p);
    let find = |v: &SpectralValue| -> Subspace {
        stabs
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| stabilizer_of(&p, v).expect("finite or ∞"))
    };
    let zero = SpectralValue::Finite(Rational::zero());
    let mut out = Vec::new();

    let mut fail = None;
    'pairs: for (i, (va, sa)) in stabs.iter().enumerate() {
        for (vb, sb) in &stabs[i + 1..] {
            if sa.intersect(sb) != nil {
                fail = Some(format!("Stab({va}) ∩ Stab({vb}) ≠ Nil"));
                break 'pairs;
            }
        }
    }
    out.push(StatementCheck::new("intersection_is_nil", fail));

    let mut fail = None;
    for (v, s) in &stabs {
        let r = find(&v.reciprocal());
        if s.dim() != r.dim() {
            fail = Some(format!("dim Stab({v}) = {} but dim Stab({}) = {}", s.dim(), v.reciprocal(), r.dim()));
            break;
        }
    }
    out.push(StatementCheck::new("reciprocal_dimensions", fail));

    let mut fail = None;
    'mul: for (va, sa) in &stabs {
        for (vb, sb) in &stabs {
            let Some(vab) = product_value(va, vb) else { continue };
            let prod = subspace_product(a, sa, sb)?;
            if !find(&vab).contains_subspace(&prod) {
                fail = Some(format!("Stab({va})·Stab({vb}) ⊄ Stab({vab})"));
                break 'mul;
            }
        }
    }
    out.push(StatementCheck::new("product_inclusion", fail));

    let s0 = find(&zero);
    let sinf = find(&SpectralValue::Infinity);
    let mut fail = None;
    if !nil.contains_subspace(&subspace_product(a, &s0, &sinf)?) {
        fail = Some("Stab(0)·Stab(∞) ⊄ Nil".to_string());
    }
    for (v, s) in &stabs {
        if fail.is_some() || matches!(v, SpectralValue::Infinity) || *v == zero {
            continue;
        }
        if !sinf.contains_subspace(&subspace_product(a, s, &sinf)?) {
            fail = Some(format!("Stab({v})·Stab(∞) ⊄ Stab(∞)"));
        }
    }
    out.push(StatementCheck::new("infinity_inclusions", fail));

    let mut fail = None;
    'ker: for (va, sa) in &stabs {
        for (vb, sb) in &stabs {
            let reciprocal_pair = product_value(va, vb).is_some_and(|v| v.is_finite_value(1));
            let excluded = matches!(va, SpectralValue::Infinity) && *vb == zero;
            if reciprocal_pair || excluded {
                continue;
            }
            for x in sa.basis() {
                for y in sb.basis() {
                    let value = crate::exact::dot(&a.mul(x, y), f);
                    if !value.is_zero() {
                        fail = Some(format!("F(ab) = {} for a ∈ Stab({va}), b ∈ Stab({vb})", format_rational(&value)));
                        break 'ker;
                    }
                }
            }
        }
    }
    out.push(StatementCheck::new("kernel_of_f", fail));

    let mut fail = None;
    for (v, s) in &stabs {
        let divides = match chi.multiplicity(v) {
            None => true,
            Some(m) => m > 0,
        };
        if divides != !s.is_zero() {
            fail = Some(format!("factor of {v} divides χ: {divides}, dim Stab({v}) = {}", s.dim()));
            break;
        }
    }
    out.push(StatementCheck::new("factor_iff_stabilizer", fail));

    let fail = (nil.is_zero() == chi.is_zero())
        .then(|| format!("dim Nil = {} while χ {} 0", nil.dim(), if chi.is_zero() { "=" } else { "≠" }));
    out.push(StatementCheck::new("nil_iff_nonzero_chi", fail));

    Ok(out)
}

/// Whether `Stab_F(1)` is commutative; expected only for generic `F`.
pub fn stab_one_commutative(a: &Algebra, f: &[Rational]) -> Result<StatementCheck> {
    let s1 = stabilizer(a, f, &SpectralValue::int(1))?;
    let mut fail = None;
    'outer: for (i, x) in s1.basis().iter().enumerate() {
        for y in &s1.basis()[i + 1..] {
            if a.bracket(x, y).iter().any(|c| !c.is_zero()) {
                fail = Some(format!("[{}, {}] ≠ 0", a.format_element(x), a.format_element(y)));
                break 'outer;
            }
        }
    }
    Ok(StatementCheck::new("stab1_commutative", fail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual_numbers, full_matrix, l1, t2, zero_algebra};
    use crate::exact::ints;

    #[test]
    fn evaluation_examples() {
        let p = evaluate(&t2(), &ints(&[1, 2, 4])).unwrap();
        assert_eq!(p.m, Matrix::from_i64(&[&[1, 2, 4], &[2, 2, 0], &[4, 5, 4]]));
        let p = evaluate(&l1(), &ints(&[1, 1])).unwrap();
        assert_eq!(p.m, Matrix::from_i64(&[&[1, 0], &[1, 0]]));
        assert!(evaluate(&zero_algebra(2), &ints(&[3, -7])).unwrap().m.is_zero());
        assert!(matches!(evaluate(&l1(), &ints(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn characteristic_examples() {
        let chi = charpoly(&t2(), &ints(&[1, 2, 4])).unwrap();
        assert_eq!(chi.to_string(), "−25·λμ(λ+μ)");
        assert_eq!(chi.form.eval(&int(1), &int(1)), int(-50));
        assert_eq!(chi.form.eval(&int(2), &int(1)), int(-150));
        assert_eq!(charpoly(&dual_numbers(), &ints(&[0, 1])).unwrap().to_string(), "−(λ+μ)²");
        assert!(charpoly(&zero_algebra(2), &ints(&[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn stabilizer_examples() {
        let f = ints(&[1, 2, 4]);
        let one = stabilizer(&t2(), &f, &SpectralValue::int(1)).unwrap();
        assert_eq!(one, Subspace::span(3, &[ints(&[1, 0, 0])]));
        let zero = stabilizer(&t2(), &f, &SpectralValue::int(0)).unwrap();
        assert_eq!(zero, Subspace::span(3, &[ints(&[-2, -3, 2])]));
        let inf = stabilizer(&l1(), &ints(&[1, 1]), &SpectralValue::Infinity).unwrap();
        assert_eq!(inf, Subspace::span(2, &[ints(&[0, 1])]));
        let orbit = SpectralValue::Orbit(UnivariatePoly::from_i64(&[-2, 0, 1]));
        assert!(matches!(stabilizer(&t2(), &f, &orbit), Err(Error::AlgebraicOrbit(_))));
    }

    #[test]
    fn nil_examples() {
        assert!(nil(&l1(), &ints(&[1, 1])).unwrap().is_zero());
        assert_eq!(nil(&zero_algebra(2), &ints(&[5, 1])).unwrap(), Subspace::full(2));
        assert!(nil(&t2(), &ints(&[1, 2, 4])).unwrap().is_zero());
    }

    #[test]
    fn q_form_examples() {
        let q = q_form(&t2(), &ints(&[1, 2, 4])).unwrap();
        assert_eq!(q.gram, Matrix::from_i64(&[&[1]]));
        assert!(q.nondegenerate);
        assert_eq!(q.lambda_plus_mu, Some(1));
        let q = q_form(&dual_numbers(), &ints(&[0, 1])).unwrap();
        assert_eq!(q.gram, Matrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert!(q.nondegenerate);
        assert_eq!(q.lambda_plus_mu, Some(2));
        let q = q_form(&zero_algebra(2), &ints(&[1, 2])).unwrap();
        assert!(q.gram.is_zero());
        assert!(!q.nondegenerate);
        assert_eq!(q.lambda_plus_mu, None);
    }

    #[test]
    fn index_examples() {
        assert_eq!(lie_index(&l1(), 0, 8), 0);
        assert_eq!(lie_index(&t2(), 0, 8), 1);
        assert_eq!(lie_index(&dual_numbers(), 0, 8), 2);
        assert_eq!(lie_index(&full_matrix(2), 0, 8), 2);
    }

    #[test]
    fn generic_sampling() {
        assert!(matches!(sample_generic(&zero_algebra(2), 0), Err(Error::DegeneratePencil(_))));
        let s = sample_generic(&t2(), 0).unwrap();
        assert!(s.attempts <= GENERIC_ATTEMPTS);
        assert!(!s.chi.is_zero());
        let d = sample_generic(&dual_numbers(), 0).unwrap();
        assert!(!d.functional[1].is_zero());
        assert_eq!(d.attempts, 1);
        assert!(d.all_minimal());
        assert_eq!(sample_generic(&t2(), 7).unwrap(), sample_generic(&t2(), 7).unwrap());
    }

    #[test]
    fn spectral_ordering_and_reciprocals() {
        let orbit = SpectralValue::Orbit(UnivariatePoly::from_i64(&[2, 0, 1]));
        let mut v = vec![SpectralValue::Infinity, orbit.clone(), SpectralValue::int(2), SpectralValue::int(-1)];
        v.sort();
        assert_eq!(v, vec![SpectralValue::int(-1), SpectralValue::int(2), orbit.clone(), SpectralValue::Infinity]);
        assert_eq!(SpectralValue::int(0).reciprocal(), SpectralValue::Infinity);
        assert_eq!(SpectralValue::int(2).reciprocal(), SpectralValue::Finite(Rational::new(1.into(), 2.into())));
        // t² + 2 ↦ t² + 1/2
        assert_eq!(
            orbit.reciprocal(),
            SpectralValue::Orbit(UnivariatePoly::new(vec![Rational::new(1.into(), 2.into()), int(0), int(1)]))
        );
    }

    #[test]
    fn statements_hold_on_examples() {
        for (a, f) in [
            (t2(), ints(&[1, 2, 4])),
            (full_matrix(2), ints(&[1, 0, 0, 2])),
            (l1(), ints(&[1, 1])),
            (zero_algebra(2), ints(&[1, 1])),
        ] {
            for c in stabilizer_statements(&a, &f).unwrap() {
                assert!(c.passed, "{}: {:?}", c.name, c.witness);
            }
        }
    }
}
