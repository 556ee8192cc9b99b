use num_complex::Complex64;

use super::{factor_poly, to_f64, UnivariatePoly};
use crate::error::{Error, Result};

/// Approximate complex roots, listed with multiplicity and sorted by real then
/// imaginary part. Display only.
///
/// Rational roots come out exact. Higher-degree irreducible factors go through
/// Aberth iteration followed by Newton polishing.
pub fn numeric_roots(p: &UnivariatePoly) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (q, mult) in factor_poly(p)?.factors {
        let roots = match q.degree() {
            Some(1) => vec![Complex64::new(to_f64(&-q.coeff(0)), 0.0)],
            _ => irreducible_roots(&q),
        };
        for _ in 0..mult {
            out.extend(roots.iter().copied());
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

fn irreducible_roots(q: &UnivariatePoly) -> Vec<Complex64> {
    let m = q.monic();
    let c: Vec<Complex64> = m.coeffs().iter().map(|r| Complex64::new(to_f64(r), 0.0)).collect();
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| seed.powu(k as u32 + 1) * (radius / seed.norm().powi(k as i32 + 1)).min(radius)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner(&c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 =
                (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = horner(&c, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= v / d;
        }
        if r.im.abs() < 1e-14 * r.re.abs().max(1.0) {
            r.im = 0.0;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12 * b.norm().max(1.0)
    }

    #[test]
    fn known_roots() {
        let r = numeric_roots(&UnivariatePoly::from_i64(&[-2, 0, 1])).unwrap();
        assert!(close(r[0], Complex64::new(-std::f64::consts::SQRT_2, 0.0)));
        assert!(close(r[1], Complex64::new(std::f64::consts::SQRT_2, 0.0)));
        let r = numeric_roots(&UnivariatePoly::from_i64(&[-3, 1])).unwrap();
        assert_eq!(r, vec![Complex64::new(3.0, 0.0)]);
        let r = numeric_roots(&UnivariatePoly::from_i64(&[1, 0, 1])).unwrap();
        assert!(close(r[0], Complex64::new(0.0, -1.0)));
        assert!(close(r[1], Complex64::new(0.0, 1.0)));
        assert_eq!(numeric_roots(&UnivariatePoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn residuals_are_small_for_degree_eight() {
        let p = UnivariatePoly::from_i64(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        let roots = numeric_roots(&p).unwrap();
        assert_eq!(roots.len(), 8);
        // ±√2 ± √3 ± √5
        let (a, b, c) = (2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt());
        let mut expected: Vec<f64> = [1.0, -1.0]
            .iter()
            .flat_map(|s1| {
                [1.0, -1.0].iter().flat_map(move |s2| [1.0, -1.0].iter().map(move |s3| s1 * a + s2 * b + s3 * c))
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        for (r, e) in roots.iter().zip(expected) {
            assert!(close(*r, Complex64::new(e, 0.0)), "{r} vs {e}");
        }
    }
}
