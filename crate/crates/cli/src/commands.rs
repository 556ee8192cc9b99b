//! One function per subcommand, each turning input text into a [`Report`].

use std::fmt::Write as _;

use algpencil::algebra::{registry as lookup, Algebra, Associativity};
use algpencil::bialg::{build_index1, check_identities, split as split_algebra, IdentityReport, SplitData, Table};
use algpencil::classify::canon as canonical;
use algpencil::exact::{format_rational, parse_rational, Rational};
use algpencil::jordan::{block_charpoly_check, decompose_with, verify_vn, Decomposition};
use algpencil::pencil::{
    charpoly, lie_index_report, nil, q_form, sample_generic, stabilizer, Characteristic, SpectralValue,
};
use algpencil::Error;
use serde_json::{json, Map, Value};

use crate::document::{
    algebra_from_value, matrix_value, parse_algebra, parse_functional, parse_json, parse_pairing, rational_value,
    serialize_algebra, vector_value, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Number of functionals sampled for the Lie index.
const INDEX_TRIALS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub code: i32,
    /// Printed verbatim in both output modes when set.
    pub document: Option<String>,
}

impl Report {
    fn new(json: Value, text: String, code: i32) -> Report {
        Report { json, text, code, document: None }
    }

    pub fn render(&self, as_json: bool) -> String {
        if let Some(d) = &self.document {
            return d.clone();
        }
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegeneratePencil(_) | Error::BadShift(_) => EXIT_DEGENERATE,
        Error::Unsupported(_) | Error::WrongDimension { .. } | Error::NoUnity | Error::NotIndexOne(_) => {
            EXIT_UNSUPPORTED
        }
        Error::UnknownName(_) => EXIT_PARSE,
        _ => EXIT_VIOLATION,
    }
}

pub fn error_report(command: &str, e: &Error) -> Report {
    let code = exit_code(e);
    let mut text = format!("error: {e}\n");
    if let Error::DegeneratePencil(_) = e {
        text.push_str(
            "hint: χ vanishes at this functional; pass another --functional or --seed. \
             If χ vanishes for every functional (e.g. zero multiplication) there is no decomposition.\n",
        );
    }
    let kind = format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
    Report::new(json!({"command": command, "error": {"kind": kind, "message": e.to_string()}}), text, code)
}

pub fn parse_error_report(command: &str, e: &ParseError) -> Report {
    Report::new(
        json!({"command": command, "error": {"kind": "ParseError", "message": e.message}}),
        format!("parse error: {e}\n"),
        EXIT_PARSE,
    )
}

fn alpha_value(a: &SpectralValue) -> Value {
    match a {
        SpectralValue::Finite(r) => rational_value(r),
        SpectralValue::Infinity => Value::String("∞".into()),
        SpectralValue::Orbit(q) => json!({"orbit": q.display_with("t")}),
    }
}

fn names_of(a: &Algebra, v: &[Rational]) -> String {
    a.format_element(v)
}

pub fn check(text: &str) -> Report {
    let a = match parse_algebra(text) {
        Ok(a) => a,
        Err(e) => return parse_error_report("check", &e),
    };
    let unity = a.find_unity();
    let unity_text = unity.as_ref().map(|u| names_of(&a, u));
    let mut out = String::new();
    let (assoc, code) = match a.check_associativity() {
        Associativity::Ok => {
            out.push_str("associative: yes\n");
            (json!({"associative": true}), EXIT_OK)
        }
        Associativity::Violation { i, j, k, difference } => {
            let triple = [a.name(i), a.name(j), a.name(k)];
            let shown = names_of(&a, &difference);
            writeln!(out, "associative: no").unwrap();
            writeln!(
                out,
                "violation at ({},{},{}): {0}({1}{2}) − ({0}{1}){2} = {3}",
                triple[0], triple[1], triple[2], shown
            )
            .unwrap();
            (
                json!({"associative": false, "violation": {"triple": triple, "difference": vector_value(&difference), "display": shown}}),
                EXIT_VIOLATION,
            )
        }
    };
    writeln!(out, "unity: {}", unity_text.as_deref().unwrap_or("none")).unwrap();
    let mut obj = assoc.as_object().cloned().unwrap_or_default();
    obj.insert("command".into(), json!("check"));
    obj.insert("dim".into(), json!(a.dim()));
    obj.insert("unity".into(), unity_text.map_or(Value::Null, Value::String));
    Report::new(Value::Object(obj), out, code)
}

fn chi_value(chi: &Characteristic) -> Value {
    let mut obj = Map::new();
    obj.insert("display".into(), json!(chi.to_string()));
    obj.insert("degree".into(), json!(chi.form.degree()));
    obj.insert("coefficients".into(), vector_value(chi.form.coeffs()));
    if let Some(f) = &chi.factored {
        let factors: Vec<Value> = f
            .factors
            .iter()
            .map(|x| {
                let mut m = Map::new();
                m.insert("polynomial".into(), json!(x.poly.display_with("t")));
                m.insert("multiplicity".into(), json!(x.multiplicity));
                m.insert("binary_coefficients".into(), vector_value(x.binary.coeffs()));
                match x.rational_root() {
                    Some(r) => {
                        m.insert("alpha".into(), rational_value(&r));
                    }
                    None => {
                        let approx: Vec<String> = x.roots.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
                        m.insert("roots_display_only".into(), json!(approx));
                    }
                }
                Value::Object(m)
            })
            .collect();
        obj.insert(
            "factorization".into(),
            json!({"constant": rational_value(&f.constant), "lambda": f.mult_lambda, "mu": f.mult_mu, "factors": factors}),
        );
    }
    Value::Object(obj)
}

fn decomposition_value(d: &Decomposition) -> Value {
    let blocks: Vec<Value> = d
        .blocks
        .iter()
        .map(|b| {
            json!({
                "alpha": alpha_value(&b.alpha),
                "chain_dims": b.chain_dims,
                "dim": b.dim(),
                "basis": b.space.basis().iter().map(|v| vector_value(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"mu": rational_value(&d.mu_used), "blocks": blocks})
}

/// Everything the pencil and Jordan layers say about `a` at one functional.
pub fn analyze(text: &str, functional: Option<&str>, seed: u64, mu: Option<&str>) -> Report {
    const CMD: &str = "analyze";
    let a = match parse_algebra(text) {
        Ok(a) => a,
        Err(e) => return parse_error_report(CMD, &e),
    };
    let mu = match mu.map(|m| parse_rational(m).ok_or(m)) {
        None => None,
        Some(Ok(m)) => Some(m),
        Some(Err(m)) => {
            return parse_error_report(CMD, &ParseError { message: format!("--mu: `{m}` is not a rational") })
        }
    };
    let mut obj = Map::new();
    obj.insert("command".into(), json!(CMD));
    let (f, source) = match functional {
        Some(t) => match parse_functional(t) {
            Ok(f) if f.len() == a.dim() => (f, json!("given")),
            Ok(f) => {
                let msg = format!("--functional has {} entries, algebra has dimension {}", f.len(), a.dim());
                return parse_error_report(CMD, &ParseError { message: msg });
            }
            Err(e) => return parse_error_report(CMD, &e),
        },
        None => match sample_generic(&a, seed) {
            Ok(g) => {
                let cert: Vec<Value> = g
                    .certificate
                    .iter()
                    .map(|c| json!({"quantity": c.quantity, "value": c.value, "observed_min": c.observed_min}))
                    .collect();
                (g.functional.clone(), json!({"seed": seed, "attempt": g.attempts, "certificate": cert}))
            }
            Err(e) => return error_report(CMD, &e),
        },
    };
    obj.insert("functional".into(), vector_value(&f));
    obj.insert("functional_source".into(), source);
    let mut out = String::new();
    let shown: Vec<String> = f.iter().map(format_rational).collect();
    writeln!(out, "functional: ({})", shown.join(", ")).unwrap();

    let chi = match charpoly(&a, &f) {
        Ok(c) => c,
        Err(e) => return error_report(CMD, &e),
    };
    obj.insert("chi".into(), chi_value(&chi));
    writeln!(out, "χ(λ,μ,F) = {chi}").unwrap();
    if chi.is_zero() {
        let mut r = error_report(CMD, &Error::DegeneratePencil(format!("F = ({})", shown.join(", "))));
        out.push_str(&r.text);
        r.text = out;
        if let Value::Object(e) = r.json {
            obj.extend(e);
        }
        r.json = Value::Object(obj);
        return r;
    }

    let mut stabs = Map::new();
    for (key, alpha) in [
        ("0", SpectralValue::Finite(Rational::from_integer(0.into()))),
        ("1", SpectralValue::int(1)),
        ("∞", SpectralValue::Infinity),
    ] {
        let d = stabilizer(&a, &f, &alpha).map(|s| s.dim()).unwrap_or(0);
        stabs.insert(key.into(), json!(d));
    }
    let nil_dim = nil(&a, &f).map(|s| s.dim()).unwrap_or(0);
    stabs.insert("nil".into(), json!(nil_dim));
    writeln!(
        out,
        "dim Stab(0) = {}, dim Stab(1) = {}, dim Stab(∞) = {}, dim Nil = {nil_dim}",
        stabs["0"], stabs["1"], stabs["∞"]
    )
    .unwrap();
    obj.insert("stabilizers".into(), Value::Object(stabs));
    if let Ok(q) = q_form(&a, &f) {
        writeln!(out, "Q_F on Stab(1): dim {}, nondegenerate: {}", q.domain.dim(), q.nondegenerate).unwrap();
        obj.insert(
            "q_form".into(),
            json!({"dim": q.domain.dim(), "nondegenerate": q.nondegenerate, "gram": matrix_value(&q.gram)}),
        );
    }
    let idx = lie_index_report(&a, seed, INDEX_TRIALS);
    writeln!(out, "lie index: {} (min over {INDEX_TRIALS} sampled functionals, seed {seed})", idx.index).unwrap();
    obj.insert("lie_index".into(), json!(idx.index));

    let mut code = EXIT_OK;
    match decompose_with(&a, &f, mu.as_ref()) {
        Ok(d) => {
            writeln!(out, "decomposition (μ = {}):", format_rational(&d.mu_used)).unwrap();
            for b in &d.blocks {
                let dims: Vec<String> = b.chain_dims.iter().map(ToString::to_string).collect();
                writeln!(out, "  α = {}: dim {}, chain [{}]", b.alpha, b.dim(), dims.join(", ")).unwrap();
            }
            obj.insert("decomposition".into(), decomposition_value(&d));
        }
        Err(e) => return error_report(CMD, &e),
    }
    match verify_vn(&a, &f) {
        Ok(r) => {
            out.push_str("structure checks:\n");
            for c in &r.checks {
                writeln!(out, "  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail).unwrap();
            }
            for o in &r.observations {
                writeln!(out, "  [note] {}: {}", o.name, o.detail).unwrap();
            }
            if !r.all_passed() {
                code = EXIT_VIOLATION;
            }
            let checks: Vec<Value> =
                r.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
            let notes: Vec<Value> =
                r.observations.iter().map(|o| json!({"name": o.name, "detail": o.detail})).collect();
            obj.insert("checks".into(), json!(checks));
            obj.insert("observations".into(), json!(notes));
        }
        Err(e) => return error_report(CMD, &e),
    }
    match block_charpoly_check(&a, &f) {
        Ok(b) => {
            let ratio = b.ratio.as_ref().map_or(Value::Null, rational_value);
            writeln!(out, "block formula: {}", if b.passed { "pass" } else { "FAIL" }).unwrap();
            if !b.passed {
                code = EXIT_VIOLATION;
            }
            let pairings: Vec<Value> =
                b.pairings.iter().map(|p| json!({"pairing": p.label, "invertible": p.invertible})).collect();
            obj.insert("block_formula".into(), json!({"passed": b.passed, "ratio": ratio, "pairings": pairings}));
        }
        Err(e) => return error_report(CMD, &e),
    }
    Report::new(Value::Object(obj), out, code)
}

pub fn canon(text: &str) -> Report {
    let a = match parse_algebra(text) {
        Ok(a) => a,
        Err(e) => return parse_error_report("canon", &e),
    };
    match canonical(&a) {
        Ok(c) => {
            let mut out = format!("label: {}\ntransform (rows are canonical basis vectors):\n", c.label);
            for i in 0..c.transform.rows() {
                writeln!(out, "  {}", names_of(&a, c.transform.row(i))).unwrap();
            }
            Report::new(
                json!({
                    "command": "canon",
                    "label": c.label.to_string(),
                    "transform": matrix_value(&c.transform),
                    "functional_used": vector_value(&c.functional_used),
                }),
                out,
                EXIT_OK,
            )
        }
        Err(e) => error_report("canon", &e),
    }
}

fn table_value(t: &Table) -> Value {
    Value::Array(t.iter().map(|row| Value::Array(row.iter().map(|v| vector_value(v)).collect())).collect())
}

fn identities_value(r: &IdentityReport) -> Value {
    Value::Array(
        r.results
            .iter()
            .map(|x| {
                let witness = x
                    .witness
                    .as_ref()
                    .map_or(Value::Null, |w| json!({"tuple": w.tuple, "lhs": w.lhs, "rhs": w.rhs, "note": w.note}));
                json!({"name": x.name, "passed": x.passed, "witness": witness})
            })
            .collect(),
    )
}

fn identities_text(r: &IdentityReport, out: &mut String) {
    for x in &r.results {
        match &x.witness {
            None => writeln!(out, "  [pass] {}", x.name).unwrap(),
            Some(w) => writeln!(
                out,
                "  [FAIL] {} at ({}): LHS {}, RHS {}{}",
                x.name,
                w.tuple.join(","),
                w.lhs,
                w.rhs,
                w.note.as_ref().map_or(String::new(), |n| format!(" ({n})"))
            )
            .unwrap(),
        }
    }
}

fn split_value(s: &SplitData) -> Value {
    json!({
        "h": s.h,
        "x_names": s.x_names,
        "y_names": s.y_names,
        "h_table": table_value(&s.h_table),
        "hprime_table": table_value(&s.hprime_table),
        "pairing": matrix_value(&s.pairing),
        "a": matrix_value(&s.a_scalar),
        "b": table_value(&s.b_tensor),
        "c": table_value(&s.c_tensor),
        "basis": s.basis.as_ref().map_or(Value::Null, matrix_value),
        "functional": s.functional.as_ref().map_or(Value::Null, |f| vector_value(f)),
    })
}

pub fn split(text: &str, functional: Option<&str>, seed: u64) -> Report {
    const CMD: &str = "split";
    let a = match parse_algebra(text) {
        Ok(a) => a,
        Err(e) => return parse_error_report(CMD, &e),
    };
    let f = match functional {
        Some(t) => match parse_functional(t) {
            Ok(f) if f.len() == a.dim() => f,
            Ok(f) => {
                let msg = format!("--functional has {} entries, algebra has dimension {}", f.len(), a.dim());
                return parse_error_report(CMD, &ParseError { message: msg });
            }
            Err(e) => return parse_error_report(CMD, &e),
        },
        None => match sample_generic(&a, seed) {
            Ok(g) => g.functional,
            Err(e) => return error_report(CMD, &e),
        },
    };
    let s = match split_algebra(&a, &f) {
        Ok(s) => s,
        Err(e) => return error_report(CMD, &e),
    };
    let report = match check_identities(&s) {
        Ok(r) => r,
        Err(e) => return error_report(CMD, &e),
    };
    let mut out = format!("h = {}\n", s.h);
    let h_alg = |t: &Table, names: &[String]| {
        Algebra::new(names.to_vec(), t.clone(), None).map(|x| format!("{x:?}")).unwrap_or_default()
    };
    writeln!(out, "ℌ = V_N(0): {}", h_alg(&s.h_table, &s.x_names).trim_end()).unwrap();
    writeln!(out, "ℌ' = V_N(∞): {}", h_alg(&s.hprime_table, &s.y_names).trim_end()).unwrap();
    out.push_str("identities:\n");
    identities_text(&report, &mut out);
    let code = if report.all_passed() { EXIT_OK } else { EXIT_VIOLATION };
    Report::new(json!({"command": CMD, "split": split_value(&s), "identities": identities_value(&report)}), out, code)
}

fn table_from_doc(text: &str, what: &str) -> Result<Table, ParseError> {
    let a = algebra_from_value(&parse_json(text)?).map_err(|e| ParseError { message: format!("{what}: {e}") })?;
    Ok(a.table().to_vec())
}

/// Assembles the unital algebra of a dual pair.
pub fn build(h_text: &str, hprime_text: &str, pairing_text: &str) -> Report {
    const CMD: &str = "build";
    let parsed = table_from_doc(h_text, "ℌ document").and_then(|h| {
        let hp = table_from_doc(hprime_text, "ℌ' document")?;
        let p = parse_pairing(pairing_text)?;
        Ok((h, hp, p))
    });
    let (h, hp, p) = match parsed {
        Ok(x) => x,
        Err(e) => return parse_error_report(CMD, &e),
    };
    if h.len() != hp.len() || p.rows() != h.len() {
        let msg = format!("ℌ has dim {}, ℌ' has dim {}, pairing is {}×{}", h.len(), hp.len(), p.rows(), p.cols());
        return parse_error_report(CMD, &ParseError { message: msg });
    }
    match build_index1(h, hp, p) {
        Ok(a) => {
            let doc = serialize_algebra(&a);
            let json: Value = serde_json::from_str(&doc).expect("serializer emits JSON");
            Report { json, text: doc.clone(), code: EXIT_OK, document: Some(doc) }
        }
        Err(e) => error_report(CMD, &e),
    }
}

/// Document of a named registry algebra.
pub fn registry(name: &str) -> Report {
    match lookup(name) {
        Ok(a) => {
            let doc = serialize_algebra(&a);
            let json: Value = serde_json::from_str(&doc).expect("serializer emits JSON");
            Report { json, text: doc.clone(), code: EXIT_OK, document: Some(doc) }
        }
        Err(e) => error_report("registry", &e),
    }
}
