use std::process::ExitCode;
use std::time::{Duration, Instant};

use algpencil::algebra::{registry, Algebra, Associativity};
use algpencil::bialg::{build_index1, check_identities, split, table1};
use algpencil::classify::{canon_dim2, canon_dim3_unital, Label};
use algpencil::exact::{int, ints, rat, Matrix, Rational};
use algpencil::jordan::{
    block_charpoly_check, decompose, decompose_with, jordan_space, pencil_operator, phi_ideal_check, u_operator,
    verify_vn,
};
use algpencil::pencil::{charpoly, lie_index, sample_functional, sample_generic, stabilizer_statements, SpectralValue};
use algpencil::Error;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Table = Vec<Vec<Vec<Rational>>>;

const CORPUS: [&str; 14] = [
    "L1",
    "L2",
    "T2",
    "D",
    "C2",
    "Z2",
    "M1",
    "M2",
    "T3",
    "P3",
    "dsum(L1,L1)",
    "dsum(T2,D)",
    "dsum(L1,L2)",
    "dsum(C2,D)",
];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into() }
}

fn reg(name: &str) -> Algebra {
    registry(name).unwrap()
}

fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn skew_rank(m: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = m.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for k in 0..cols {
                    let d = &f * &rows[rank][k];
                    rows[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn product(t: &Table, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let n = t.len();
    let mut out = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let c = &u[i] * &v[j];
            if c.is_zero() {
                continue;
            }
            for k in 0..n {
                out[k] += &c * &t[i][j][k];
            }
        }
    }
    out
}

/// Coordinates of `v` in the basis `rows`, by Cramer's rule.
fn coords(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let d = cofactor_det(rows);
    (0..rows.len())
        .map(|k| {
            let mut r = rows.to_vec();
            r[k] = v.to_vec();
            cofactor_det(&r) / &d
        })
        .collect()
}

fn table_in_basis(t: &Table, rows: &[Vec<Rational>]) -> Table {
    rows.iter().map(|u| rows.iter().map(|v| coords(rows, &product(t, u, v))).collect()).collect()
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    loop {
        let rows: Vec<Vec<Rational>> =
            (0..n).map(|_| (0..n).map(|_| int(rng.random_range(-9..=9))).collect()).collect();
        if !cofactor_det(&rows).is_zero() {
            return rows;
        }
    }
}

fn random_presentation(a: &Algebra, rng: &mut ChaCha8Rng) -> Algebra {
    let p = random_invertible(rng, a.dim());
    Algebra::new(a.names().to_vec(), table_in_basis(&a.table().to_vec(), &p), None).unwrap()
}

fn pencil_entries(a: &Algebra, f: &[Rational], lambda: &Rational, mu: &Rational) -> Vec<Vec<Rational>> {
    let n = a.dim();
    let m = |i: usize, j: usize| a.product(i, j).iter().zip(f).map(|(x, y)| x * y).sum::<Rational>();
    (0..n).map(|i| (0..n).map(|j| lambda * m(i, j) + mu * m(j, i)).collect()).collect()
}

fn canonical_recovery(name: &str, count: u64, limit: Duration, dim3: bool) -> Outcome {
    let target = reg(name);
    let label = if dim3 { Label::T2UpperTriangular } else { Label::parse(name).unwrap() };
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ count ^ target.dim() as u64);
    let mut slowest = Duration::ZERO;
    for trial in 0..count {
        let a = random_presentation(&target, &mut rng);
        let start = Instant::now();
        let form = if dim3 { canon_dim3_unital(&a) } else { canon_dim2(&a) };
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let form = match form {
            Ok(f) => f,
            Err(e) => return fail(format!("{name} trial {trial}: {e}")),
        };
        if form.label != label {
            return fail(format!("{name} trial {trial}: label {}", form.label));
        }
        let recovered = table_in_basis(&a.table().to_vec(), &form.transform.row_vecs());
        if recovered != target.table() {
            return fail(format!("{name} trial {trial}: transform does not reproduce the table"));
        }
        if elapsed > limit {
            return fail(format!("{name} trial {trial}: {elapsed:?} exceeds {limit:?}"));
        }
    }
    pass(format!("{name}: {count} presentations, slowest {slowest:?}"))
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for name in ["L1", "L2"] {
        let o = canonical_recovery(name, 100, Duration::from_secs(1), false);
        if !o.passed {
            return o;
        }
        notes.push(o.detail);
    }
    pass(notes.join("; "))
}

fn criterion_2() -> Outcome {
    canonical_recovery("T2", 100, Duration::from_secs(2), true)
}

fn criterion_3() -> Outcome {
    type Closed = fn(&Rational, &Rational) -> Rational;
    let cases: [(&str, Vec<Rational>, Closed); 4] = [
        ("T2", ints(&[1, 2, 4]), |x, y| int(-25) * x * y * (x + y)),
        ("L1", ints(&[1, 1]), |x, y| -(x * y)),
        ("D", ints(&[0, 1]), |x, y| -((x + y) * (x + y))),
        ("M2", ints(&[1, 0, 0, 2]), |x, y| int(-2) * (x + y) * (x + y) * (x + int(2) * y) * (int(2) * x + y)),
    ];
    let points: Vec<(Rational, Rational)> = (-3..=4)
        .map(|t| (int(t), Rational::one()))
        .chain([(Rational::one(), Rational::zero()), (rat(2, 3), rat(-5, 7))])
        .collect();
    for (name, f, closed) in cases {
        let a = reg(name);
        let chi = charpoly(&a, &f).unwrap();
        for (x, y) in &points {
            let oracle = cofactor_det(&pencil_entries(&a, &f, x, y));
            let expected = closed(x, y);
            let got = chi.form.eval(x, y);
            if oracle != expected || got != expected {
                return fail(format!(
                    "{name} at (λ,μ)=({x},{y}): library {got}, cofactor {oracle}, closed form {expected}"
                ));
            }
        }
    }
    pass("T2, L1, D, M2 agree with cofactor expansion and closed forms")
}

fn oracle_index(a: &Algebra, seed: u64) -> usize {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..8)
        .map(|_| {
            let f: Vec<Rational> = (0..n).map(|_| int(rng.random_range(-50..=50))).collect();
            let s: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let c: Vec<Rational> =
                                a.product(i, j).iter().zip(a.product(j, i)).map(|(x, y)| x - y).collect();
                            c.iter().zip(&f).map(|(x, y)| x * y).sum()
                        })
                        .collect()
                })
                .collect();
            n - skew_rank(&s)
        })
        .min()
        .unwrap()
}

fn is_commutative(a: &Algebra) -> bool {
    (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.product(i, j) == a.product(j, i)))
}

fn criterion_4() -> Outcome {
    let mut expected: Vec<(String, usize)> =
        vec![("L1".into(), 0), ("L2".into(), 0), ("T2".into(), 1), ("M2".into(), 2)];
    for name in CORPUS {
        let a = reg(name);
        if is_commutative(&a) {
            expected.push((name.into(), a.dim()));
        }
    }
    for (name, want) in &expected {
        let a = reg(name);
        let got = lie_index(&a, 0, 8);
        let oracle = oracle_index(&a, 17);
        if got != *want || oracle != *want {
            return fail(format!("{name}: lie_index {got}, skew-rank oracle {oracle}, expected {want}"));
        }
    }
    let names: Vec<&str> = expected.iter().map(|(n, _)| n.as_str()).collect();
    pass(names.join(", "))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for name in ["T2", "M2", "D", "C2", "T3", "dsum(L1,L1)", "dsum(T2,D)"] {
        let a = reg(name);
        for seed in 0..8 {
            let f = sample_generic(&a, seed).unwrap().functional;
            let r = verify_vn(&a, &f).unwrap();
            if r.checks.len() != 8 || !r.all_passed() {
                let bad: Vec<String> =
                    r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
                return fail(format!("{name} seed {seed}: {}", bad.join("; ")));
            }
            runs += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return fail(format!("{runs} runs took {elapsed:?}"));
    }
    for name in CORPUS {
        let a = reg(name);
        for trial in 0..8 {
            let f = sample_functional(a.dim(), 5, trial);
            let form = charpoly(&a, &f).unwrap().form;
            if form.swapped() != form {
                return fail(format!("{name}: χ(λ,μ) ≠ χ(μ,λ) at trial {trial}"));
            }
        }
    }
    pass(format!("{runs} runs in {elapsed:?}; χ symmetric on {} corpus algebras", CORPUS.len()))
}

fn criterion_6() -> Outcome {
    let a = reg("M2");
    let f = ints(&[1, 0, 0, 2]);
    for alpha in [int(2), rat(1, 2)] {
        let u = match u_operator(&a, &f, &SpectralValue::Finite(alpha.clone())) {
            Ok(u) => u,
            Err(e) => return fail(format!("α = {alpha}: {e}")),
        };
        if u.matrix != Matrix::diagonal(std::slice::from_ref(&alpha)) {
            return fail(format!("α = {alpha}: U = {:?}", u.matrix));
        }
        let n = u.matrix.rows();
        let shifted = u.matrix.sub(&Matrix::identity(n).scale(&alpha));
        if !shifted.pow(n).is_zero() {
            return fail(format!("α = {alpha}: (U − αI)^{n} ≠ 0"));
        }
    }
    match block_charpoly_check(&a, &f) {
        Ok(r) if r.passed => pass("U(2) = [2], U(1/2) = [1/2], block formula holds"),
        Ok(r) => fail(format!("block formula: ratio {:?}", r.ratio)),
        Err(e) => fail(format!("block formula: {e}")),
    }
}

fn criterion_7() -> Outcome {
    let t2 = reg("T2");
    let s = split(&t2, &ints(&[1, 0, 0])).unwrap();
    let built = build_index1(s.h_table.clone(), s.hprime_table.clone(), s.pairing.clone()).unwrap();
    if built != t2 {
        return fail("split(T2) → build differs from T2");
    }
    for seed in 0..8 {
        let f = sample_generic(&t2, seed).unwrap().functional;
        let s = split(&t2, &f).unwrap();
        let report = check_identities(&s).unwrap();
        if !report.all_passed() {
            return fail(format!("seed {seed}: {}", report.failure_summary()));
        }
        let built = build_index1(s.h_table.clone(), s.hprime_table.clone(), s.pairing.clone()).unwrap();
        let moved = table_in_basis(&t2.table().to_vec(), &s.basis.as_ref().unwrap().row_vecs());
        if built.table() != moved {
            return fail(format!("seed {seed}: rebuilt table differs after the adapted basis change"));
        }
    }
    let one = Matrix::identity(1);
    for (label, h, hp) in [("(x²=x, 0)", table1(1), table1(0)), ("(0, 0)", table1(0), table1(0))] {
        match build_index1(h, hp, one.clone()) {
            Err(Error::NotAssociative(m)) if m.contains("rank1_eqn violated") => {}
            other => return fail(format!("broken pair {label}: {other:?}")),
        }
    }
    pass("round trip exact at 9 functionals; both broken pairs fail rank1_eqn")
}

fn criterion_8() -> Outcome {
    let t2 = reg("T2");
    let mut table = t2.table().to_vec();
    table[2][1] = ints(&[0, 1, 1]);
    let y = ints(&[0, 0, 1]);
    let x = ints(&[0, 1, 0]);
    let oracle: Vec<Rational> = product(&table, &y, &product(&table, &x, &x))
        .iter()
        .zip(product(&table, &product(&table, &y, &x), &x))
        .map(|(l, r)| l - r)
        .collect();
    if oracle != ints(&[0, -1, 0]) {
        return fail(format!("oracle difference {oracle:?}"));
    }
    let bad = Algebra::new(t2.names().to_vec(), table, None).unwrap();
    match bad.check_associativity() {
        Associativity::Violation { i: 2, j: 1, k: 1, difference } if difference == oracle => {}
        other => return fail(format!("perturbed T2: {other:?}")),
    }
    let z = reg("Z2");
    let f = ints(&[1, 1]);
    let two = SpectralValue::int(2);
    let outcomes: Vec<(&str, Option<Error>)> = vec![
        ("sample_generic", sample_generic(&z, 0).err()),
        ("pencil_operator", pencil_operator(&z, &f, None).err()),
        ("decompose", decompose(&z, &f).err()),
        ("decompose_with", decompose_with(&z, &f, Some(&int(3))).err()),
        ("jordan_space", jordan_space(&z, &f, &two, 0).err()),
        ("verify_vn", verify_vn(&z, &f).err()),
        ("u_operator", u_operator(&z, &f, &two).err()),
        ("block_charpoly_check", block_charpoly_check(&z, &f).err()),
        ("phi_ideal_check", phi_ideal_check(&z, &f, &two).err()),
    ];
    for (entry, e) in &outcomes {
        if !matches!(e, Some(Error::DegeneratePencil(_))) {
            return fail(format!("Z2 through {entry}: {e:?}"));
        }
    }
    if !charpoly(&z, &f).unwrap().is_zero() {
        return fail("Z2: χ not identically zero");
    }
    pass(format!("Violation(y,x,x) = −x; Z2 degenerate through {} entry points", outcomes.len()))
}

fn property_failure(name: &str, f: &[Rational]) -> Option<String> {
    let a = reg(name);
    if charpoly(&a, f).unwrap().is_zero() {
        return None;
    }
    let statements = stabilizer_statements(&a, f).unwrap();
    if let Some(s) = statements.iter().find(|s| !s.passed) {
        return Some(format!("{}: {}", s.name, s.witness.clone().unwrap_or_default()));
    }
    let r = verify_vn(&a, f).unwrap();
    let products = r.check("block_products").unwrap();
    (!products.passed).then(|| format!("block_products: {}", products.detail))
}

fn criterion_9() -> Outcome {
    let config = Config { cases: 192, failure_persistence: None, ..Config::default() };
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    let mut runner = TestRunner::new_with_rng(config, rng);
    let strategy = (0..CORPUS.len()).prop_flat_map(|k| {
        let n = reg(CORPUS[k]).dim();
        (Just(k), proptest::collection::vec(-6i64..=6, n))
    });
    let result = runner.run(&strategy, |(k, coords)| {
        let f = ints(&coords);
        match property_failure(CORPUS[k], &f) {
            None => Ok(()),
            Some(w) => Err(TestCaseError::fail(w)),
        }
    });
    let mut extra = 0;
    for name in CORPUS {
        let a = reg(name);
        for seed in 0..4 {
            let Ok(g) = sample_generic(&a, seed) else { continue };
            if let Some(w) = property_failure(name, &g.functional) {
                return fail(format!("{name} generic seed {seed}: {w}"));
            }
            extra += 1;
        }
    }
    match result {
        Ok(()) => pass(format!("192 sampled (algebra, F) cases and {extra} generic functionals")),
        Err(TestError::Fail(reason, (k, coords))) => {
            fail(format!("minimal witness: {} at F = {coords:?}: {reason}", CORPUS[k]))
        }
        Err(e) => fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("dim-2 classification", criterion_1),
        ("dim-3 unital classification", criterion_2),
        ("exact characteristic forms", criterion_3),
        ("index values", criterion_4),
        ("V_n structure suite", criterion_5),
        ("U operator and block formula", criterion_6),
        ("split/build round trip", criterion_7),
        ("negative controls", criterion_8),
        ("stabilizer and product properties", criterion_9),
    ];
    let mut failures = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {title} ({:.2?}): {}", k + 1, start.elapsed(), o.detail);
        if !o.passed {
            failures += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
