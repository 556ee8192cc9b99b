use algpencil::exact::{factor_poly, int, ints, BinaryForm, Matrix, Rational, UnivariatePoly};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-6i64..=6, n), n)
}

fn to_matrix(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| ints(r)).collect(), rows.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_matches_cofactor_expansion(n in 1usize..=4, seed in square(4)) {
        let rows: Vec<Vec<i64>> = seed.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let m = to_matrix(&rows);
        let oracle = cofactor_det(&m.row_vecs());
        prop_assert_eq!(m.det_ff().unwrap(), oracle);
    }

    #[test]
    fn inverse_and_rank(rows in square(3)) {
        let m = to_matrix(&rows);
        let rank = m.rank();
        prop_assert_eq!(rank + m.left_kernel().len(), 3);
        prop_assert_eq!(rank + m.right_kernel().len(), 3);
        for v in m.left_kernel() {
            prop_assert!(m.vec_mul(&v).iter().all(Zero::is_zero));
        }
        match m.inverse() {
            Ok(inv) => prop_assert_eq!(m.mul(&inv), Matrix::identity(3)),
            Err(_) => prop_assert!(m.det_ff().unwrap().is_zero()),
        }
    }

    #[test]
    fn factorization_expands_back(roots in proptest::collection::vec(-4i64..=4, 1..5), quad in 1i64..4, lead in 1i64..5) {
        let mut p = UnivariatePoly::constant(int(lead));
        for r in &roots {
            p = &p * &UnivariatePoly::linear_root(&int(*r));
        }
        // t² + quad has no rational root
        p = &p * &UnivariatePoly::from_i64(&[quad, 0, 1]);
        let f = factor_poly(&p).unwrap();
        prop_assert_eq!(f.expand(), p.clone());
        for r in &roots {
            let lin = UnivariatePoly::linear_root(&int(*r));
            let m = roots.iter().filter(|x| *x == r).count();
            prop_assert_eq!(f.multiplicity_of(&lin), m);
        }
        prop_assert_eq!(f.multiplicity_of(&UnivariatePoly::from_i64(&[quad, 0, 1])), 1);
    }

    #[test]
    fn pencil_determinant_is_symmetric_under_transpose(rows in square(3)) {
        let m = to_matrix(&rows);
        let form = BinaryForm::pencil_det(&m, &m.transpose()).unwrap();
        prop_assert_eq!(form.swapped(), form.clone());
        let at = |l: i64, u: i64| {
            let e: Vec<Vec<Rational>> = (0..3)
                .map(|i| (0..3).map(|j| int(l) * &m[(i, j)] + int(u) * &m[(j, i)]).collect())
                .collect();
            cofactor_det(&e)
        };
        for (l, u) in [(1, 0), (0, 1), (2, 3), (-1, 4)] {
            prop_assert_eq!(form.eval(&int(l), &int(u)), at(l, u));
        }
    }
}
