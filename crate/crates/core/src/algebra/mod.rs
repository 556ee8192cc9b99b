//! Finite-dimensional algebras given by structure constants.

mod registry;
pub(crate) mod subspace;

pub use registry::{
    direct_sum, dual_numbers, full_matrix, l1, l2, registry, split_complex, t2, truncated_polynomial, upper_triangular,
    zero_algebra,
};
pub use subspace::Subspace;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Matrix, Rational};

/// Coordinates in the algebra's basis.
pub type Element = Vec<Rational>;

/// `e_i · e_j = Σ_k table[i][j][k] · e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    names: Vec<String>,
    table: Vec<Vec<Vec<Rational>>>,
    unity: Option<usize>,
}

/// Result of [`Algebra::check_associativity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Associativity {
    Ok,
    /// `difference = e_i(e_j e_k) − (e_i e_j)e_k ≠ 0`.
    Violation {
        i: usize,
        j: usize,
        k: usize,
        difference: Element,
    },
}

impl Associativity {
    pub fn is_ok(&self) -> bool {
        matches!(self, Associativity::Ok)
    }
}

impl Algebra {
    /// Validates shapes and, when given, that `unity` is a two-sided unity.
    pub fn new(names: Vec<String>, table: Vec<Vec<Vec<Rational>>>, unity: Option<usize>) -> Result<Algebra> {
        let n = names.len();
        if table.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: table.len() });
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            if let Some(v) = row.iter().find(|v| v.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let alg = Algebra { names, table, unity: None };
        match unity {
            None => Ok(alg),
            Some(u) if u < n && alg.is_unity(&alg.basis_vector(u)) => Ok(Algebra { unity: Some(u), ..alg }),
            Some(u) => Err(Error::Precondition(format!(
                "basis element {} is not a two-sided unity",
                alg.names.get(u).map_or("?", String::as_str)
            ))),
        }
    }

    /// Builds from a product rule on basis indices. Panics on malformed output.
    pub fn from_fn(names: &[&str], product: impl Fn(usize, usize) -> Element) -> Algebra {
        let n = names.len();
        let table = (0..n).map(|i| (0..n).map(|j| product(i, j)).collect()).collect();
        Algebra::new(names.iter().map(|s| s.to_string()).collect(), table, None).expect("well-formed table")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn table(&self) -> &[Vec<Vec<Rational>>] {
        &self.table
    }

    /// Coordinates of `e_i · e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Rational] {
        &self.table[i][j]
    }

    pub fn unity(&self) -> Option<usize> {
        self.unity
    }

    pub fn basis_vector(&self, i: usize) -> Element {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub fn with_names(mut self, names: Vec<String>) -> Algebra {
        assert_eq!(names.len(), self.dim(), "name count");
        self.names = names;
        self
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Element {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(&self.table[i][j]) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// `xy − yx`.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Element {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        xy.into_iter().zip(yx).map(|(a, b)| a - b).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Scans triples with `k` outermost, then `j`, then `i`, and reports the
    /// first one where `e_i(e_j e_k) ≠ (e_i e_j)e_k`.
    pub fn check_associativity(&self) -> Associativity {
        let n = self.dim();
        for k in 0..n {
            for j in 0..n {
                let jk = &self.table[j][k];
                for i in 0..n {
                    let left = self.mul(&self.basis_vector(i), jk);
                    let right = self.mul(&self.table[i][j], &self.basis_vector(k));
                    if left != right {
                        let difference = left.into_iter().zip(right).map(|(a, b)| a - b).collect();
                        return Associativity::Violation { i, j, k, difference };
                    }
                }
            }
        }
        Associativity::Ok
    }

    pub fn is_associative(&self) -> bool {
        self.check_associativity().is_ok()
    }

    fn is_unity(&self, u: &[Rational]) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.basis_vector(i);
            self.mul(u, &e) == e && self.mul(&e, u) == e
        })
    }

    /// Solves `u·e_i = e_i·u = e_i` for all `i`.
    pub fn find_unity(&self) -> Option<Element> {
        let n = self.dim();
        if n == 0 {
            return None;
        }
        // unknown u; column (side, i, k) of the system
        let mut rows = vec![Vec::with_capacity(2 * n * n); n];
        let mut rhs = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for k in 0..n {
                for (a, row) in rows.iter_mut().enumerate() {
                    row.push(self.table[a][i][k].clone());
                }
                rhs.push(if i == k { Rational::one() } else { Rational::zero() });
            }
            for k in 0..n {
                for (a, row) in rows.iter_mut().enumerate() {
                    row.push(self.table[i][a][k].clone());
                }
                rhs.push(if i == k { Rational::one() } else { Rational::zero() });
            }
        }
        Matrix::from_rows(rows, 2 * n * n).solve_left(&rhs)
    }

    /// Marks the unity when it is one of the basis vectors.
    pub fn with_detected_unity(mut self) -> Algebra {
        if self.unity.is_none() {
            if let Some(u) = self.find_unity() {
                self.unity = (0..self.dim()).find(|&i| u == self.basis_vector(i));
            }
        }
        self
    }

    /// Structure constants in the basis whose vectors are the rows of `p`.
    /// Basis names are kept by position.
    pub fn change_basis(&self, p: &Matrix) -> Result<Algebra> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.rows() });
        }
        let inv = p.inverse()?;
        let new_basis = p.row_vecs();
        let table =
            (0..n).map(|i| (0..n).map(|j| inv.vec_mul(&self.mul(&new_basis[i], &new_basis[j]))).collect()).collect();
        let unity = self.unity.and_then(|u| {
            let coords = inv.row(u).to_vec();
            let mut unit = (0..n).filter(|&k| !coords[k].is_zero());
            match (unit.next(), unit.next()) {
                (Some(k), None) if coords[k].is_one() => Some(k),
                _ => None,
            }
        });
        Ok(Algebra { names: self.names.clone(), table, unity })
    }

    pub fn format_element(&self, v: &[Rational]) -> String {
        let mut out = String::new();
        for (c, name) in v.iter().zip(&self.names) {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
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
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Algebra(dim {}, unity {:?})", self.dim(), self.unity.map(|u| &self.names[u]))?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = &self.table[i][j];
                if v.iter().any(|c| !c.is_zero()) {
                    writeln!(f, "  {}·{} = {}", self.names[i], self.names[j], self.format_element(v))?;
                }
            }
        }
        Ok(())
    }
}

/// `span{x·y : x ∈ u, y ∈ w}`.
pub fn subspace_product(a: &Algebra, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    for s in [u, w] {
        if s.ambient() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: s.ambient() });
        }
    }
    let products: Vec<Element> = u.basis().iter().flat_map(|x| w.basis().iter().map(move |y| a.mul(x, y))).collect();
    Ok(Subspace::span(a.dim(), &products))
}

/// Derived series `s ⊇ [s,s] ⊇ …` of a bracket-closed subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedSeries {
    pub terms: Vec<Subspace>,
    pub solvable: bool,
}

impl DerivedSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }
}

pub fn bracket_span(a: &Algebra, u: &Subspace, w: &Subspace) -> Subspace {
    let brackets: Vec<Element> =
        u.basis().iter().flat_map(|x| w.basis().iter().map(move |y| a.bracket(x, y))).collect();
    Subspace::span(a.dim(), &brackets)
}

pub fn is_solvable(a: &Algebra, s: &Subspace) -> Result<DerivedSeries> {
    if s.ambient() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: s.ambient() });
    }
    let mut current = s.clone();
    if !current.contains_subspace(&bracket_span(a, &current, &current)) {
        return Err(Error::NotBracketClosed);
    }
    let mut terms = vec![current.clone()];
    loop {
        let next = bracket_span(a, &current, &current);
        if next.is_zero() {
            terms.push(next);
            return Ok(DerivedSeries { terms, solvable: true });
        }
        if next.dim() == current.dim() {
            return Ok(DerivedSeries { terms, solvable: false });
        }
        terms.push(next.clone());
        current = next;
    }
}
