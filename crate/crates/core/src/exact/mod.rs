//! Exact rational arithmetic: scalars, dense matrices, univariate polynomials,
//! homogeneous binary forms and factorization over ℚ.
//!
//! Nothing in this module uses floating point for a decision. The only floats
//! are the display-only root approximations produced by [`numeric_roots`].

mod factor;
mod form;
mod matrix;
mod poly;
mod roots;

pub use factor::{factor_poly, Factorization};
pub use form::{factor_form, BinaryForm, FactoredForm, FormFactor};
pub use matrix::{Matrix, RowReduction};
pub use poly::UnivariatePoly;
pub use roots::numeric_roots;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `[-]digits[/digits]`. Accepts ASCII '-' and the Unicode minus '−'.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (neg, body) = if let Some(rest) = t.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = t.strip_prefix('−') {
        (true, rest)
    } else {
        (false, t)
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

/// `p/q` or `p`, ASCII minus. Round-trips through [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerators or denominators: fall back to a scaled division
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grammar() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("−7/2"), Some(rat(-7, 2)));
        assert_eq!(parse_rational("0/5"), Some(zero()));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1.5"), None);
        assert_eq!(parse_rational("+2"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(parse_rational("3/"), None);
    }

    #[test]
    fn rational_invariants() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&zero()), "0");
        assert_eq!(zero().denom(), &BigInt::one());
    }
}
