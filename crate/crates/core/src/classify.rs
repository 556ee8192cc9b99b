//! Canonical forms of non-commutative associative algebras in dimension 2 and
//! of unital ones in dimension 3.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{l1, l2, t2, Algebra, Associativity, Subspace};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational};
use crate::pencil::{evaluate, sample_generic, Functional};

/// Number of seeds tried before giving up on a generic functional.
pub const CANON_SEEDS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Comm,
    L1,
    L2,
    T2UpperTriangular,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Comm => "COMM",
            Label::L1 => "L1",
            Label::L2 => "L2",
            Label::T2UpperTriangular => "T2_UPPER_TRIANGULAR",
        })
    }
}

impl Label {
    /// Registry table the label stands for.
    pub fn table(&self) -> Option<Algebra> {
        match self {
            Label::Comm => None,
            Label::L1 => Some(l1()),
            Label::L2 => Some(l2()),
            Label::T2UpperTriangular => Some(t2()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub label: Label,
    /// Rows are the canonical basis vectors in input coordinates.
    pub transform: Matrix,
    pub functional_used: Functional,
}

fn require_associative(a: &Algebra) -> Result<()> {
    match a.check_associativity() {
        Associativity::Ok => Ok(()),
        Associativity::Violation { i, j, k, difference } => Err(Error::NotAssociative(format!(
            "({},{},{}): difference {}",
            a.name(i),
            a.name(j),
            a.name(k),
            a.format_element(&difference)
        ))),
    }
}

fn require_dim(a: &Algebra, n: usize) -> Result<()> {
    if a.dim() != n {
        return Err(Error::WrongDimension { expected: n.to_string(), got: a.dim() });
    }
    Ok(())
}

/// Spanning vector of a line, scaled so its first nonzero coordinate is 1.
fn line(s: &Subspace) -> Option<Vec<Rational>> {
    (s.dim() == 1).then(|| s.basis()[0].clone())
}

fn stabilizer_lines(a: &Algebra, f: &[Rational]) -> Result<Option<(Vec<Rational>, Vec<Rational>)>> {
    let p = evaluate(a, f)?;
    let x = Subspace::span(a.dim(), &p.m.left_kernel());
    let y = Subspace::span(a.dim(), &p.mt.left_kernel());
    Ok(line(&x).zip(line(&y)))
}

fn scaled(v: &[Rational], c: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * c).collect()
}

fn relation(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("adapted-basis relation {what} failed")))
    }
}

fn identity_form(a: &Algebra) -> CanonicalForm {
    CanonicalForm {
        label: Label::Comm,
        transform: Matrix::identity(a.dim()),
        functional_used: vec![Rational::zero(); a.dim()],
    }
}

pub fn canon_dim2(a: &Algebra) -> Result<CanonicalForm> {
    require_dim(a, 2)?;
    require_associative(a)?;
    if a.is_commutative() {
        return Ok(identity_form(a));
    }
    for seed in 0..CANON_SEEDS {
        let sample = sample_generic(a, seed)?;
        let f = sample.functional;
        let Some((x, y)) = stabilizer_lines(a, &f)? else { continue };
        let b = a.change_basis(&Matrix::from_rows(vec![x.clone(), y.clone()], 2))?;
        // x·x = μx, x·y = 0, y·x = βx + γy, y·y = νy
        let (xx, xy, yx, yy) = (b.product(0, 0), b.product(0, 1), b.product(1, 0), b.product(1, 1));
        relation(xx[1].is_zero() && yy[0].is_zero() && xy.iter().all(Zero::is_zero), "on the shape of the table")?;
        let (mu, beta, gamma, nu) = (&xx[0], &yx[0], &yx[1], &yy[1]);
        relation(mu == gamma, "μ = γ")?;
        relation(beta == nu, "β = ν")?;
        relation((mu * nu).is_zero(), "μν = 0")?;
        let (label, rows) = if !mu.is_zero() {
            (Label::L1, vec![scaled(&x, &mu.recip()), y])
        } else {
            (Label::L2, vec![x, scaled(&y, &nu.recip())])
        };
        return Ok(CanonicalForm { label, transform: Matrix::from_rows(rows, 2), functional_used: f });
    }
    Err(Error::DegeneratePencil(format!(
        "no functional with one-dimensional Stab(0) and Stab(∞) in {CANON_SEEDS} seeds"
    )))
}

pub fn canon_dim3_unital(a: &Algebra) -> Result<CanonicalForm> {
    require_dim(a, 3)?;
    let unity = a.find_unity().ok_or(Error::NoUnity)?;
    require_associative(a)?;
    if a.is_commutative() {
        return Ok(identity_form(a));
    }
    for seed in 0..CANON_SEEDS {
        let sample = sample_generic(a, seed)?;
        let f1: Rational = crate::exact::dot(&sample.functional, &unity);
        if f1.is_zero() {
            continue;
        }
        let f = scaled(&sample.functional, &f1.recip());
        let Some((x, y)) = stabilizer_lines(a, &f)? else { continue };
        let b = a.change_basis(&Matrix::from_rows(vec![unity.clone(), x.clone(), y.clone()], 3))?;
        // x·x = αx, x·y = 0, y·y = βy, y·x = γ + μx + νy
        let (xx, xy, yx, yy) = (b.product(1, 1), b.product(1, 2), b.product(2, 1), b.product(2, 2));
        relation(
            xx[0].is_zero() && xx[2].is_zero() && yy[0].is_zero() && yy[1].is_zero(),
            "on the shape of the table",
        )?;
        relation(xy.iter().all(Zero::is_zero), "xy = 0")?;
        let (alpha, beta) = (&xx[1], &yy[2]);
        let (gamma, mu, nu) = (&yx[0], &yx[1], &yx[2]);
        relation(*gamma == -(alpha * beta), "γ = −αβ")?;
        relation(mu == beta, "μ = β")?;
        relation(nu == alpha, "ν = α")?;
        if alpha.is_zero() || beta.is_zero() {
            continue;
        }
        let rows = vec![unity.clone(), scaled(&x, &alpha.recip()), scaled(&y, &beta.recip())];
        return Ok(CanonicalForm {
            label: Label::T2UpperTriangular,
            transform: Matrix::from_rows(rows, 3),
            functional_used: f,
        });
    }
    Err(Error::DegeneratePencil(format!("no admissible functional in {CANON_SEEDS} seeds")))
}

/// `canon_dim2` or `canon_dim3_unital` by dimension.
pub fn canon(a: &Algebra) -> Result<CanonicalForm> {
    match a.dim() {
        2 => canon_dim2(a),
        3 if a.find_unity().is_some() => canon_dim3_unital(a),
        3 => Err(Error::Unsupported("dimension 3 without unity".into())),
        n => Err(Error::Unsupported(format!("dimension {n}"))),
    }
}

/// Coarse isomorphism invariants of a commutative algebra: unity, dimensions
/// of `𝔄²` and `𝔄³`, and the radical of the trace form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommInvariants {
    pub unital: bool,
    pub square_dim: usize,
    pub cube_dim: usize,
    pub trace_radical_dim: usize,
}

pub fn comm_invariants(a: &Algebra) -> CommInvariants {
    let n = a.dim();
    let full = Subspace::full(n);
    let sq = crate::algebra::subspace_product(a, &full, &full).expect("same ambient");
    let cube = crate::algebra::subspace_product(a, &sq, &full).expect("same ambient");
    // tr(L_{e_i e_j}) with L_v the left multiplication
    let trace_of = |v: &[Rational]| -> Rational {
        (0..n).map(|k| a.mul(v, &a.basis_vector(k))[k].clone()).fold(Rational::zero(), |s, t| s + t)
    };
    let rows = (0..n).map(|i| (0..n).map(|j| trace_of(a.product(i, j))).collect()).collect();
    let form = Matrix::from_rows(rows, n);
    CommInvariants {
        unital: a.find_unity().is_some(),
        square_dim: sq.dim(),
        cube_dim: cube.dim(),
        trace_radical_dim: n - form.rank(),
    }
}

/// Equal canonical labels; commutative inputs compare by [`CommInvariants`].
pub fn iso_check(a: &Algebra, b: &Algebra) -> Result<bool> {
    for x in [a, b] {
        match x.dim() {
            2 => {}
            3 if x.find_unity().is_some() => {}
            3 => return Err(Error::Unsupported("dimension 3 without unity".into())),
            n => return Err(Error::Unsupported(format!("dimension {n}"))),
        }
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let (ca, cb) = (canon(a)?, canon(b)?);
    if ca.label != cb.label {
        return Ok(false);
    }
    if ca.label == Label::Comm {
        return Ok(comm_invariants(a) == comm_invariants(b));
    }
    Ok(true)
}

/// Whether `change_basis(a, form.transform)` reproduces the labeled table.
pub fn reproduces_label(a: &Algebra, form: &CanonicalForm) -> Result<bool> {
    let Some(target) = form.label.table() else { return Ok(true) };
    let b = a.change_basis(&form.transform)?;
    Ok(b.table() == target.table())
}

impl CanonicalForm {
    pub fn is_identity_transform(&self) -> bool {
        self.transform == Matrix::identity(self.transform.rows())
    }
}

impl Label {
    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "COMM" => Some(Label::Comm),
            "L1" => Some(Label::L1),
            "L2" => Some(Label::L2),
            "T2_UPPER_TRIANGULAR" => Some(Label::T2UpperTriangular),
            _ => None,
        }
    }
}
