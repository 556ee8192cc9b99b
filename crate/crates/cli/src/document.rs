//! JSON documents: algebras, dual-pair pieces, and the rational encoding
//! shared by every report.

use std::fmt::{self, Write as _};

use algpencil::algebra::Algebra;
use algpencil::exact::{format_rational, parse_rational, Matrix, Rational};
use num_traits::ToPrimitive;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(field: &str, what: impl fmt::Display) -> ParseError {
    ParseError { message: format!("field `{field}`: {what}") }
}

/// Integers as JSON numbers when they fit in `i64`, everything else as text.
pub fn rational_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(format_rational(r))
}

pub fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_value(m.row(i))).collect())
}

pub fn parse_rational_value(v: &Value, field: &str) -> Result<Rational, ParseError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => n
                .as_u64()
                .map(|u| Rational::from_integer(u.into()))
                .ok_or_else(|| err(field, format!("`{n}` is not an integer; write fractions as \"p/q\""))),
        },
        Value::String(s) => parse_rational(s).ok_or_else(|| err(field, format!("`{s}` is not a rational"))),
        other => Err(err(field, format!("expected a rational, found {other}"))),
    }
}

fn parse_vector(v: &Value, len: usize, field: &str) -> Result<Vec<Rational>, ParseError> {
    let items = v.as_array().ok_or_else(|| err(field, "expected an array"))?;
    if items.len() != len {
        return Err(err(field, format!("expected {len} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(k, x)| parse_rational_value(x, &format!("{field}[{k}]"))).collect()
}

pub fn parse_matrix(v: &Value, rows: usize, cols: usize, field: &str) -> Result<Matrix, ParseError> {
    let items = v.as_array().ok_or_else(|| err(field, "expected an array of rows"))?;
    if items.len() != rows {
        return Err(err(field, format!("expected {rows} rows, found {}", items.len())));
    }
    let data = items
        .iter()
        .enumerate()
        .map(|(i, r)| parse_vector(r, cols, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(data, cols))
}

pub fn parse_json(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text)
        .map_err(|e| ParseError { message: format!("line {}, column {}: {e}", e.line(), e.column()) })
}

/// Parses `{"dim", "basis", "unity"?, "table"}` into an algebra.
pub fn parse_algebra(text: &str) -> Result<Algebra, ParseError> {
    algebra_from_value(&parse_json(text)?)
}

pub fn algebra_from_value(doc: &Value) -> Result<Algebra, ParseError> {
    let obj = doc.as_object().ok_or_else(|| err("<root>", "expected an object"))?;
    let dim = obj
        .get("dim")
        .ok_or_else(|| err("dim", "missing"))?
        .as_u64()
        .ok_or_else(|| err("dim", "expected a non-negative integer"))? as usize;
    let basis: Vec<String> = obj
        .get("basis")
        .ok_or_else(|| err("basis", "missing"))?
        .as_array()
        .ok_or_else(|| err("basis", "expected an array of names"))?
        .iter()
        .enumerate()
        .map(|(k, n)| n.as_str().map(str::to_string).ok_or_else(|| err(&format!("basis[{k}]"), "expected a string")))
        .collect::<Result<_, _>>()?;
    if basis.len() != dim {
        return Err(err("basis", format!("expected {dim} names, found {}", basis.len())));
    }
    for (k, name) in basis.iter().enumerate() {
        if basis[..k].contains(name) {
            return Err(err(&format!("basis[{k}]"), format!("duplicate name `{name}`")));
        }
    }
    let unity = match obj.get("unity") {
        None | Some(Value::Null) => None,
        Some(Value::String(u)) => {
            Some(basis.iter().position(|b| b == u).ok_or_else(|| err("unity", format!("`{u}` is not a basis name")))?)
        }
        Some(other) => return Err(err("unity", format!("expected a basis name, found {other}"))),
    };
    let rows = obj
        .get("table")
        .ok_or_else(|| err("table", "missing"))?
        .as_array()
        .ok_or_else(|| err("table", "expected a dim×dim array"))?;
    if rows.len() != dim {
        return Err(err("table", format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut table = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let field = format!("table[{i}]");
        let cells = row.as_array().ok_or_else(|| err(&field, "expected an array"))?;
        if cells.len() != dim {
            return Err(err(&field, format!("expected {dim} entries, found {}", cells.len())));
        }
        let parsed = cells
            .iter()
            .enumerate()
            .map(|(j, c)| parse_vector(c, dim, &format!("table[{i}][{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        table.push(parsed);
    }
    Algebra::new(basis, table, unity).map_err(|e| err("unity", e))
}

fn write_rational(out: &mut String, r: &Rational) {
    write!(out, "{}", rational_value(r)).expect("write to string");
}

fn write_vector(out: &mut String, v: &[Rational]) {
    out.push('[');
    for (k, r) in v.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_rational(out, r);
    }
    out.push(']');
}

/// Canonical text of an algebra document: one table row per line.
pub fn serialize_algebra(a: &Algebra) -> String {
    let mut out = String::from("{\n");
    writeln!(out, "  \"dim\": {},", a.dim()).unwrap();
    let names: Vec<String> = a.names().iter().map(|n| Value::String(n.clone()).to_string()).collect();
    writeln!(out, "  \"basis\": [{}],", names.join(", ")).unwrap();
    if let Some(u) = a.unity() {
        writeln!(out, "  \"unity\": {},", Value::String(a.name(u).to_string())).unwrap();
    }
    out.push_str("  \"table\": [\n");
    for i in 0..a.dim() {
        out.push_str("    [");
        for j in 0..a.dim() {
            if j > 0 {
                out.push_str(", ");
            }
            write_vector(&mut out, a.product(i, j));
        }
        out.push(']');
        if i + 1 < a.dim() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

/// `{"pairing": [[…]]}` or a bare array of rows.
pub fn parse_pairing(text: &str) -> Result<Matrix, ParseError> {
    let doc = parse_json(text)?;
    let rows = match &doc {
        Value::Object(o) => o.get("pairing").ok_or_else(|| err("pairing", "missing"))?,
        other => other,
    };
    let h = rows.as_array().ok_or_else(|| err("pairing", "expected an array of rows"))?.len();
    parse_matrix(rows, h, h, "pairing")
}

/// Comma-separated rationals, as given to `--functional`.
pub fn parse_functional(text: &str) -> Result<Vec<Rational>, ParseError> {
    text.split(',')
        .enumerate()
        .map(|(k, t)| {
            parse_rational(t).ok_or_else(|| ParseError {
                message: format!("--functional entry {k}: `{}` is not a rational", t.trim()),
            })
        })
        .collect()
}
