use std::fmt;

use num_traits::Zero;

use crate::exact::{format_rational, Matrix, Rational};

/// Linear subspace of `ℚⁿ`, stored as the nonzero rows of its reduced
/// row-echelon basis. Equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of `vectors`, each of length `ambient`.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Subspace {
        let rows: Vec<Vec<Rational>> = vectors
            .iter()
            .filter(|v| {
                assert_eq!(v.len(), ambient, "vector length");
                v.iter().any(|c| !c.is_zero())
            })
            .cloned()
            .collect();
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        let red = Matrix::from_rows(rows, ambient).rref();
        let basis = (0..red.rank).map(|i| red.reduced.row(i).to_vec()).collect();
        Subspace { ambient, basis, pivots: red.pivots }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_rows(self.basis.clone(), self.ambient)
    }

    /// Coordinates of `v` in [`Self::basis`], or `None` if `v ∉ self`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in rest.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r -= c * x;
                }
            }
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().cloned());
        let kernel = Matrix::from_rows(stacked, self.ambient).left_kernel();
        let k = self.dim();
        let vectors: Vec<Vec<Rational>> =
            kernel.iter().map(|coef| combine(&coef[..k], &self.basis, self.ambient)).collect();
        Subspace::span(self.ambient, &vectors)
    }

    /// Linear combination `Σ coefᵢ · basisᵢ`.
    pub fn element(&self, coef: &[Rational]) -> Vec<Rational> {
        combine(coef, &self.basis, self.ambient)
    }
}

pub(crate) fn combine(coef: &[Rational], vectors: &[Vec<Rational>], ambient: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); ambient];
    for (c, v) in coef.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(format_rational).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "}} ⊆ ℚ^{}", self.ambient)
    }
}
