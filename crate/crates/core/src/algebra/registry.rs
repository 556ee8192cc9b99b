use num_traits::Zero;

use super::{Algebra, Element};
use crate::error::{Error, Result};
use crate::exact::{int, Rational};

fn unit(n: usize, k: usize) -> Element {
    let mut v = vec![Rational::zero(); n];
    v[k] = int(1);
    v
}

fn zeros(n: usize) -> Element {
    vec![Rational::zero(); n]
}

/// `x·x = x`, `y·x = y`.
pub fn l1() -> Algebra {
    Algebra::from_fn(&["x", "y"], |i, j| match (i, j) {
        (0, 0) => unit(2, 0),
        (1, 0) => unit(2, 1),
        _ => zeros(2),
    })
}

/// `y·x = x`, `y·y = y`.
pub fn l2() -> Algebra {
    Algebra::from_fn(&["x", "y"], |i, j| match (i, j) {
        (1, 0) => unit(2, 0),
        (1, 1) => unit(2, 1),
        _ => zeros(2),
    })
}

/// Unital, basis `1, x, y`: `x² = x`, `xy = 0`, `yx = −1 + x + y`, `y² = y`.
/// Isomorphic to the upper-triangular 2×2 matrices.
pub fn t2() -> Algebra {
    let a = Algebra::from_fn(&["1", "x", "y"], |i, j| match (i, j) {
        (0, k) | (k, 0) => unit(3, k),
        (1, 1) => unit(3, 1),
        (1, 2) => zeros(3),
        (2, 1) => vec![int(-1), int(1), int(1)],
        _ => unit(3, 2),
    });
    Algebra { unity: Some(0), ..a }
}

/// `ℚ[t]/tⁿ` on the basis `1, t, …, tⁿ⁻¹`.
pub fn truncated_polynomial(n: usize) -> Algebra {
    assert!(n >= 1, "truncation degree");
    let names: Vec<String> = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t{k}"),
        })
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let a = Algebra::from_fn(&refs, |i, j| if i + j < n { unit(n, i + j) } else { zeros(n) });
    Algebra { unity: Some(0), ..a }
}

/// `ℚ[t]/t²`.
pub fn dual_numbers() -> Algebra {
    truncated_polynomial(2)
}

/// `ℚ[t]/(t² − 1)`.
pub fn split_complex() -> Algebra {
    let a = Algebra::from_fn(&["1", "t"], |i, j| unit(2, (i + j) % 2));
    Algebra { unity: Some(0), ..a }
}

pub fn zero_algebra(n: usize) -> Algebra {
    let names: Vec<String> = (1..=n).map(|k| format!("e{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Algebra::from_fn(&refs, |_, _| zeros(n))
}

/// Matrix units `E_ij`, ordered row-major.
pub fn full_matrix(n: usize) -> Algebra {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    matrix_units(&cells)
}

/// Matrix units `E_ij` with `i ≤ j`, ordered row-major.
pub fn upper_triangular(n: usize) -> Algebra {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    matrix_units(&cells)
}

fn matrix_units(cells: &[(usize, usize)]) -> Algebra {
    let d = cells.len();
    let names: Vec<String> = cells.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Algebra::from_fn(&refs, |a, b| {
        let ((i, j), (k, l)) = (cells[a], cells[b]);
        if j != k {
            return zeros(d);
        }
        let target = cells.iter().position(|&c| c == (i, l)).expect("closed under products");
        unit(d, target)
    })
    .with_detected_unity()
}

/// `a ⊕ b`, names suffixed `_L` and `_R`.
pub fn direct_sum(a: &Algebra, b: &Algebra) -> Algebra {
    let (m, n) = (a.dim(), b.dim());
    let d = m + n;
    let names: Vec<String> =
        a.names().iter().map(|s| format!("{s}_L")).chain(b.names().iter().map(|s| format!("{s}_R"))).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Algebra::from_fn(&refs, |i, j| {
        let mut v = zeros(d);
        if i < m && j < m {
            v[..m].clone_from_slice(a.product(i, j));
        } else if i >= m && j >= m {
            v[m..].clone_from_slice(b.product(i - m, j - m));
        }
        v
    })
    .with_detected_unity()
}

/// Looks up `L1`, `L2`, `T2`, `D`, `C2`, `Z<n>`, `M<n>`, `T<n>` (n ≥ 3),
/// `P<n>` (`ℚ[t]/tⁿ`) and `dsum(a,b)`.
pub fn registry(name: &str) -> Result<Algebra> {
    let name = name.trim();
    let unknown = || Error::UnknownName(name.to_string());
    if let Some(inner) = name.strip_prefix("dsum(").and_then(|r| r.strip_suffix(')')) {
        let mut depth = 0usize;
        let split = inner.char_indices().find(|&(_, c)| {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => return true,
                _ => {}
            }
            false
        });
        let (pos, _) = split.ok_or_else(unknown)?;
        let left = registry(&inner[..pos])?;
        let right = registry(&inner[pos + 1..])?;
        return Ok(direct_sum(&left, &right));
    }
    match name {
        "L1" => return Ok(l1()),
        "L2" => return Ok(l2()),
        "T2" => return Ok(t2()),
        "D" => return Ok(dual_numbers()),
        "C2" => return Ok(split_complex()),
        _ => {}
    }
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(unknown)?;
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(unknown());
    }
    let n: usize = rest.parse().map_err(|_| unknown())?;
    match (head, n) {
        ('Z', 1..) => Ok(zero_algebra(n)),
        ('M', 1..) => Ok(full_matrix(n)),
        ('T', 3..) => Ok(upper_triangular(n)),
        ('P', 1..) => Ok(truncated_polynomial(n)),
        _ => Err(unknown()),
    }
}
