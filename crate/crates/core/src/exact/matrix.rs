use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{denominator_lcm, int, Rational, UnivariatePoly};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
///
/// Vectors are rows throughout the crate: a matrix acts on the right, `v·M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Basis of `{v : v·M = 0}` (rows of length `M.rows()`).
    pub left_kernel: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows*cols");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. `cols` is only consulted when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(), cols)
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self + c·other`
    pub fn add_scaled(&self, c: &Rational, other: &Matrix) -> Matrix {
        self.add(&other.scale(c))
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    *o += vi * m;
                }
            }
        }
        out
    }

    /// Reduced row-echelon form together with rank and a left-kernel basis.
    ///
    /// The left kernel is read off the transformation matrix accumulated on an
    /// identity block: rows of the reduced matrix that vanish record the
    /// combinations of original rows that sum to zero.
    pub fn rref(&self) -> RowReduction {
        let (r, c) = (self.rows, self.cols);
        let width = c + r;
        let mut a: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..c {
            if prow == r {
                break;
            }
            let Some(p) = (prow..r).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(p, prow);
            let inv = a[prow][col].recip();
            for v in a[prow].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            for i in 0..r {
                if i == prow || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                let (src, dst) = if i < prow {
                    let (lo, hi) = a.split_at_mut(prow);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[prow], &mut hi[0])
                };
                for j in col..width {
                    if !src[j].is_zero() {
                        dst[j] -= &f * &src[j];
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let rank = pivots.len();
        let reduced = Matrix::from_rows(a.iter().map(|row| row[..c].to_vec()).collect(), c);
        let left_kernel = a[rank..].iter().map(|row| row[c..].to_vec()).collect();
        RowReduction { reduced, rank, pivots, left_kernel }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : v·M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        self.rref().left_kernel
    }

    /// Basis of `{v : M·vᵀ = 0}`.
    pub fn right_kernel(&self) -> Vec<Vec<Rational>> {
        self.transpose().left_kernel()
    }

    /// Some `x` with `x·M = b`, free coordinates set to zero.
    pub fn solve_left(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.cols, "right-hand side length");
        let n = self.rows;
        let mut rows = self.transpose().row_vecs();
        for (row, v) in rows.iter_mut().zip(b) {
            row.push(v.clone());
        }
        let red = Matrix::from_rows(rows, n + 1).rref();
        if red.pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &p) in red.pivots.iter().enumerate() {
            x[p] = red.reduced[(r, n)].clone();
        }
        Some(x)
    }

    /// Fraction-free (Bareiss) determinant. Rows are first cleared of
    /// denominators so elimination runs over ℤ with exact divisions.
    pub fn det_ff(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = denominator_lcm(row);
                scale *= &l;
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                a.swap(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        let det = Rational::new(if sign { -d } else { d }, scale);
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red.reduced[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Monic characteristic polynomial `det(tI − M)` via Hessenberg reduction.
    pub fn charpoly(&self) -> Result<UnivariatePoly> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else {
                continue;
            };
            if p != j + 1 {
                h.swap_rows(p, j + 1);
                h.swap_cols(p, j + 1);
            }
            let piv = h[(j + 1, j)].clone();
            for r in j + 2..n {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let f = &h[(r, j)] / &piv;
                for c in 0..n {
                    let v = &f * &h[(j + 1, c)];
                    if !v.is_zero() {
                        h[(r, c)] -= v;
                    }
                }
                for rr in 0..n {
                    let v = &f * &h[(rr, r)];
                    if !v.is_zero() {
                        h[(rr, j + 1)] += v;
                    }
                }
            }
        }
        let t = UnivariatePoly::x();
        let mut p: Vec<UnivariatePoly> = vec![UnivariatePoly::one()];
        for m in 1..=n {
            let mut next = &(&t - &UnivariatePoly::constant(h[(m - 1, m - 1)].clone())) * &p[m - 1];
            let mut prod = Rational::one();
            for i in (1..m).rev() {
                prod *= &h[(i, i - 1)];
                if prod.is_zero() {
                    break;
                }
                let c = &h[(i - 1, m - 1)] * &prod;
                if !c.is_zero() {
                    next = &next - &p[i - 1].scale(&c);
                }
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Sub-matrix made of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ints, rat};

    /// Cofactor expansion, kept independent of the Bareiss path.
    fn cofactor_det(m: &Matrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.select(&rows, &cols));
            let term = &m[(0, j)] * minor;
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn rref_equal_rows() {
        let m = Matrix::from_i64(&[&[1, 0], &[1, 0]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.left_kernel.len(), 1);
        let v = &r.left_kernel[0];
        assert_eq!(v[0], -v[1].clone());
        assert!(m.vec_mul(v).iter().all(Zero::is_zero));
    }

    #[test]
    fn rref_identity() {
        let r = Matrix::identity(3).rref();
        assert_eq!(r.rank, 3);
        assert!(r.left_kernel.is_empty());
        assert_eq!(r.reduced, Matrix::identity(3));
    }

    #[test]
    fn rref_t2_evaluated_table() {
        let m = Matrix::from_i64(&[&[1, 2, 4], &[2, 2, 0], &[4, 5, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.left_kernel.len(), 1);
        let v = &r.left_kernel[0];
        // proportional to (−2, −3, 2)
        let s = &v[2] / int(2);
        assert_eq!(v, &vec![&s * int(-2), &s * int(-3), &s * int(2)]);
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[3, 4]]).det_ff().unwrap(), int(-2));
        assert_eq!(Matrix::from_i64(&[&[2, 0], &[0, 3]]).det_ff().unwrap(), int(6));
        let t2 = Matrix::from_i64(&[&[1, 2, 4], &[2, 2, 0], &[4, 5, 4]]);
        assert_eq!(t2.det_ff().unwrap(), Rational::zero());
        assert_eq!(cofactor_det(&t2), Rational::zero());
        assert!(matches!(Matrix::zeros(2, 3).det_ff(), Err(Error::NonSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn det_with_fractions_and_pivoting() {
        let m = Matrix::from_rows(
            vec![
                vec![rat(0, 1), rat(1, 2), rat(2, 3)],
                vec![rat(3, 4), rat(0, 1), rat(-1, 5)],
                vec![rat(1, 7), rat(2, 1), rat(0, 1)],
            ],
            3,
        );
        assert_eq!(m.det_ff().unwrap(), cofactor_det(&m));
    }

    #[test]
    fn charpoly_examples() {
        let nil = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(nil.charpoly().unwrap(), UnivariatePoly::from_i64(&[0, 0, 1]));
        let d = Matrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(d.charpoly().unwrap(), UnivariatePoly::from_i64(&[6, -5, 1]));
        let s = Matrix::from_i64(&[&[-1, 1], &[0, 0]]).scale(&rat(1, 2));
        assert_eq!(s.charpoly().unwrap(), UnivariatePoly::new(vec![int(0), rat(1, 2), int(1)]));
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let s = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn kron_and_pow() {
        let a = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.pow(5), Matrix::from_i64(&[&[1, 5], &[0, 1]]));
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 2)], int(1));
        assert_eq!(k.vec_mul(&ints(&[1, 0, 0, 0])), ints(&[1, 0, 1, 0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_matrix(n: usize) -> impl Strategy<Value = Matrix> {
            proptest::collection::vec(-6i64..=6, n * n).prop_map(move |v| Matrix::from_vec(n, n, ints(&v)))
        }

        fn sized_matrix() -> impl Strategy<Value = Matrix> {
            (1usize..=4).prop_flat_map(int_matrix)
        }

        proptest! {
            #[test]
            fn bareiss_matches_cofactor(m in sized_matrix()) {
                prop_assert_eq!(m.det_ff().unwrap(), cofactor_det(&m));
            }

            #[test]
            fn left_kernel_annihilates(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..5)) {
                let m = Matrix::from_rows(rows.iter().map(|r| ints(r)).collect(), 3);
                let red = m.rref();
                prop_assert_eq!(red.rank + red.left_kernel.len(), m.rows());
                for v in &red.left_kernel {
                    prop_assert!(m.vec_mul(v).iter().all(Zero::is_zero));
                }
                // rank is invariant under row permutation
                let mut rev = m.row_vecs();
                rev.reverse();
                prop_assert_eq!(Matrix::from_rows(rev, 3).rank(), red.rank);
            }

            #[test]
            fn charpoly_matches_determinant(m in sized_matrix(), t in -5i64..=5) {
                let n = m.rows();
                let cp = m.charpoly().unwrap();
                let direct = Matrix::identity(n).scale(&int(t)).sub(&m).det_ff().unwrap();
                prop_assert_eq!(cp.eval(&int(t)), direct);
            }
        }
    }
}
