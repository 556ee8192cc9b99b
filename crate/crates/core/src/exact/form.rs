use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{factor_poly, numeric_roots, Matrix, Rational, UnivariatePoly};
use crate::error::{Error, Result};

/// Homogeneous form `Σ c_k λᵏ μ^(d−k)` in two variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    /// `coeffs[k]` multiplies `λᵏ μ^(degree−k)`; missing entries are zero.
    pub fn new(degree: usize, mut coeffs: Vec<Rational>) -> Self {
        assert!(coeffs.len() <= degree + 1, "too many coefficients for degree {degree}");
        coeffs.resize(degree + 1, Rational::zero());
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `det(λX + μY)`, by evaluation at `(t,1)` for `t = 0..n−1` plus `(1,0)`
    /// followed by exact interpolation.
    pub fn pencil_det(x: &Matrix, y: &Matrix) -> Result<BinaryForm> {
        if !x.is_square() {
            return Err(Error::NonSquare { rows: x.rows(), cols: x.cols() });
        }
        if y.rows() != x.rows() || y.cols() != x.cols() {
            return Err(Error::DimensionMismatch { expected: x.rows(), got: y.rows() });
        }
        let n = x.rows();
        let top = x.det_ff()?;
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for t in 0..n {
            let t = Rational::from_integer(t.into());
            let value = x.scale(&t).add(y).det_ff()?;
            let correction = &top * pow(&t, n);
            ys.push(value - correction);
            xs.push(t);
        }
        let mut coeffs = interpolate(&xs, &ys);
        coeffs.resize(n, Rational::zero());
        coeffs.push(top);
        Ok(BinaryForm::new(n, coeffs))
    }

    pub fn eval(&self, lambda: &Rational, mu: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * pow(lambda, k) * pow(mu, self.degree - k);
            }
        }
        acc
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![Rational::zero(); self.degree + other.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm::new(self.degree + other.degree, out)
    }

    pub fn scale(&self, c: &Rational) -> BinaryForm {
        BinaryForm::new(self.degree, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        (0..e).fold(BinaryForm::new(0, vec![Rational::one()]), |acc, _| acc.mul(self))
    }

    /// `f(μ, λ)`.
    pub fn swapped(&self) -> BinaryForm {
        let mut c = self.coeffs.clone();
        c.reverse();
        BinaryForm::new(self.degree, c)
    }

    /// `Some(c)` with `self = c · other`, `c ≠ 0`.
    pub fn proportionality(&self, other: &BinaryForm) -> Option<Rational> {
        if self.degree != other.degree || self.is_zero() || other.is_zero() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        let ratio = &self.coeffs[k] / &other.coeffs[k];
        let matches = self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| *a == b * &ratio);
        (matches && !ratio.is_zero()).then_some(ratio)
    }

    /// `f(t, 1)` as a univariate polynomial.
    pub fn at_mu_one(&self) -> UnivariatePoly {
        UnivariatePoly::new(self.coeffs.clone())
    }

    pub fn linear(lambda: Rational, mu: Rational) -> BinaryForm {
        BinaryForm::new(1, vec![mu, lambda])
    }
}

fn pow(x: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Newton divided differences, returns coefficients lowest first.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = UnivariatePoly::zero();
    for i in (0..n).rev() {
        let lin = UnivariatePoly::linear_root(&xs[i]);
        poly = &(&poly * &lin) + &UnivariatePoly::constant(dd[i].clone());
    }
    poly.coeffs().to_vec()
}

/// One ℚ-irreducible block of spectral values: the roots `α` of `poly`
/// contribute `Π(αλ + μ)`, rendered as the primitive integer form `binary`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormFactor {
    pub poly: UnivariatePoly,
    pub multiplicity: usize,
    pub binary: BinaryForm,
    pub roots: Vec<Complex64>,
}

impl FormFactor {
    pub fn rational_root(&self) -> Option<Rational> {
        (self.poly.degree() == Some(1)).then(|| -self.poly.coeff(0))
    }
}

/// `constant · λ^mult_lambda · μ^mult_mu · Π binaryᵢ^multiplicityᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredForm {
    pub degree: usize,
    pub constant: Rational,
    pub mult_lambda: usize,
    pub mult_mu: usize,
    pub factors: Vec<FormFactor>,
}

impl FactoredForm {
    pub fn expand(&self) -> BinaryForm {
        let lam = BinaryForm::linear(Rational::one(), Rational::zero());
        let mu = BinaryForm::linear(Rational::zero(), Rational::one());
        let mut acc = BinaryForm::new(0, vec![self.constant.clone()]);
        acc = acc.mul(&lam.pow(self.mult_lambda)).mul(&mu.pow(self.mult_mu));
        for f in &self.factors {
            acc = acc.mul(&f.binary.pow(f.multiplicity));
        }
        acc
    }

    /// Multiplicity of the factor `(αλ + μ)` for rational `α ≠ 0`.
    pub fn multiplicity_of(&self, alpha: &Rational) -> usize {
        if alpha.is_zero() {
            return self.mult_mu;
        }
        self.factors.iter().find(|f| f.rational_root().as_ref() == Some(alpha)).map_or(0, |f| f.multiplicity)
    }

    /// Multiplicity of the irreducible orbit polynomial `p` (any normalization).
    pub fn orbit_multiplicity(&self, p: &UnivariatePoly) -> usize {
        let p = p.monic();
        self.factors.iter().find(|f| f.poly == p).map_or(0, |f| f.multiplicity)
    }
}

/// Writes `f` as a constant times powers of `λ`, `μ` and the primitive forms
/// `Π(αλ + μ)` over the ℚ-irreducible orbits of `α`.
pub fn factor_form(f: &BinaryForm) -> Result<FactoredForm> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let c = f.coeffs();
    let lo = c.iter().position(|x| !x.is_zero()).unwrap();
    let hi = c.iter().rposition(|x| !x.is_zero()).unwrap();
    let mult_lambda = lo;
    let mult_mu = f.degree() - hi;
    // R(1, −t) = Σ_j c_{lo+j} (−t)^(m−j), whose roots are the α.
    let m = hi - lo;
    let mut g = vec![Rational::zero(); m + 1];
    for j in 0..=m {
        let e = m - j;
        let v = c[lo + j].clone();
        g[e] = if e % 2 == 1 { -v } else { v };
    }
    let g = UnivariatePoly::new(g);
    let mut factors = Vec::new();
    if m > 0 {
        let fac = factor_poly(&g)?;
        for (p, mult) in fac.factors {
            let binary = orbit_binary(&p);
            let roots = numeric_roots(&p).unwrap_or_default();
            factors.push(FormFactor { poly: p, multiplicity: mult, binary, roots });
        }
    }
    factors.sort_by(display_order);
    let mut out = FactoredForm { degree: f.degree(), constant: Rational::one(), mult_lambda, mult_mu, factors };
    let unit = out.expand();
    let k = unit.coeffs().iter().position(|x| !x.is_zero()).unwrap();
    out.constant = &c[k] / unit.coeff(k);
    debug_assert_eq!(&out.expand(), f);
    Ok(out)
}

fn display_order(a: &FormFactor, b: &FormFactor) -> std::cmp::Ordering {
    match (a.rational_root(), b.rational_root()) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => super::factor::poly_order(&a.poly, &b.poly),
    }
}

/// Primitive integer form proportional to `Π(αᵢλ + μ)` over the roots of the
/// monic `p`, with positive `λᵈ` coefficient.
fn orbit_binary(p: &UnivariatePoly) -> BinaryForm {
    let d = p.degree().unwrap();
    // coefficient of λ^(d−k) μ^k is (−1)^(d+k) p_k
    let mut coeffs = vec![Rational::zero(); d + 1];
    for k in 0..=d {
        let v = p.coeff(k);
        coeffs[d - k] = if (d + k) % 2 == 1 { -v } else { v };
    }
    let (ints, _) = UnivariatePoly::new(coeffs).to_primitive_integer();
    BinaryForm::new(d, ints.into_iter().map(Rational::from_integer).collect())
}

const MINUS: char = '−';

fn superscript(e: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if e == 1 {
        return String::new();
    }
    e.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn power(var: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        _ => format!("{var}{}", superscript(e)),
    }
}

fn scalar(r: &Rational) -> String {
    let s = super::format_rational(&r.abs());
    if r.is_negative() {
        format!("{MINUS}{s}")
    } else {
        s
    }
}

/// Terms from the highest power of `λ` down, e.g. `λ²+3λμ−μ²`.
fn render_terms(f: &BinaryForm) -> String {
    let mut out = String::new();
    for k in (0..=f.degree()).rev() {
        let c = f.coeff(k);
        if c.is_zero() {
            continue;
        }
        let mono = format!("{}{}", power("λ", k), power("μ", f.degree() - k));
        let mag = c.abs();
        let sign = if c.is_negative() {
            MINUS.to_string()
        } else if out.is_empty() {
            String::new()
        } else {
            "+".to_string()
        };
        let body = if mono.is_empty() {
            super::format_rational(&mag)
        } else if mag.is_one() {
            mono
        } else {
            format!("{}{mono}", super::format_rational(&mag))
        };
        out.push_str(&sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self))
    }
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = format!("{}{}", power("λ", self.mult_lambda), power("μ", self.mult_mu));
        for fac in &self.factors {
            body.push_str(&format!("({}){}", render_terms(&fac.binary), superscript(fac.multiplicity)));
        }
        let c = &self.constant;
        let text = if body.is_empty() {
            scalar(c)
        } else if c.is_one() {
            body
        } else if *c == -Rational::one() {
            format!("{MINUS}{body}")
        } else {
            format!("{}·{body}", scalar(c))
        };
        f.write_str(&text)
    }
}
