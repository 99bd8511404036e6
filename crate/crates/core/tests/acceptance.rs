//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{central_difference, flat_root, random_polynomial_tree, random_tree};
use darboux_core::darboux::{self, DirichletOracle};
use darboux_core::expr::exemplars::{flat_family, EXEMPLARS};
use darboux_core::flatness::{check_stoica, check_uno, check_zero, locate_min_en, ConditionStatus, FlatCandidate};
use darboux_core::volterra;
use darboux_core::{parse, ExtendedExpr, Interval, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// sin(1) to 40 digits: 0.8414709848078965066525023216302989996226
const SIN_ONE: f64 = 0.841_470_984_807_896_5;
/// Root of 1/x + 10 ln x on (0, 1), 40-digit reference rounded to f64.
const FLAT_ROOT_10: f64 = 0.027_955_199_614_682_57;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ulps_apart(a: f64, b: f64) -> u64 {
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

fn exceeds_by_margin(lhs: f64, rhs: f64) -> bool {
    let scale = lhs.abs().max(rhs.abs());
    lhs - rhs > 8.0 * (scale.next_up() - scale)
}

fn sandwich_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacc1);
    let mut passed = 0;
    let mut first_bad = None;
    for case in 0..1000 {
        let big_h = common::random_antiderivative(&mut rng);
        let (a, b) = common::random_subdomain(&mut rng, -2.0, 2.0, 1e-3);
        let blocks = rng.gen_range(2..=64);
        let p = common::random_partition(&mut rng, a, b, blocks);
        match volterra::sandwich_check(&big_h, Interval::new(a, b).unwrap(), &p) {
            Ok(v) if v.pass => passed += 1,
            other => {
                first_bad.get_or_insert(format!("case {case}: {big_h}: {other:?}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut detail = format!("{passed}/1000 cases pass in {secs:.2} s");
    if let Some(bad) = first_bad {
        detail.push_str(&format!("; first failure {bad}"));
    }
    outcome(passed == 1000 && secs < 10.0, detail)
}

fn ftc_reconstruction() -> Outcome {
    let cases = [("x^3/3", 1.0 / 3.0), ("x^2/2", 0.5), ("sin(x)", SIN_ONE)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (src, increment) in cases {
        let big_h = ExtendedExpr::plain(parse(src).unwrap());
        match volterra::ftc_reconstruct(&big_h, Interval::new(0.0, 1.0).unwrap(), 1e-5, 1_000_000) {
            Ok(r) => {
                let ok = r.bracket.width() <= 1e-5 && r.bracket.contains(increment);
                pass &= ok;
                parts.push(format!(
                    "{src}: [{:.9}, {:.9}] width {:.2e} after {} steps",
                    r.bracket.lo(),
                    r.bracket.hi(),
                    r.bracket.width(),
                    r.enclosure.refinement_steps
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{src}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn uniform_closed_forms() -> Outcome {
    let f = ExtendedExpr::plain(parse("x").unwrap());
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [4usize, 16, 256] {
        let p = Partition::uniform(0.0, 1.0, n).unwrap();
        let (lo, hi) = darboux::sums(&f, &p).unwrap();
        let nf = n as f64;
        let (dl, du) = (ulps_apart(lo, (nf - 1.0) / (2.0 * nf)), ulps_apart(hi, (nf + 1.0) / (2.0 * nf)));
        pass &= dl <= 8 && du <= 8;
        parts.push(format!("n={n}: {dl}/{du} ulps"));
    }
    outcome(pass, parts.join(", "))
}

fn dirichlet_gap() -> Outcome {
    match darboux::enclose(&DirichletOracle, Interval::new(0.0, 1.0).unwrap(), 1e-6, 10_000) {
        Ok(e) => {
            let (lo, hi) = (e.best_lower_sum(), e.best_upper_sum());
            let pass = e.refinement_steps == 10_000 && lo <= 1e-12 && hi >= 1.0 - 1e-12 && !e.converged;
            outcome(pass, format!("after {} steps lower {lo}, upper {hi}", e.refinement_steps))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn stoica_witness_reverifies(cand: &FlatCandidate, x: f64) -> bool {
    let (Ok(f), Ok(df)) = (cand.f.eval_point(x), cand.f.derivative().eval_point(x)) else {
        return false;
    };
    exceeds_by_margin((x * df).abs(), cand.c * f.abs())
}

fn flatness_rigidity() -> Outcome {
    let mut failures = Vec::new();
    let mut witness_1_10 = None;
    for ex in flat_family() {
        for c in [1.0, 10.0, 100.0] {
            let cand = FlatCandidate::new(ex.expr(), c).unwrap();
            for n in [4, 10] {
                match check_uno(&cand, n) {
                    Ok(r) if r.holds() && r.delta.is_some_and(|d| d > 0.0) => {}
                    other => failures.push(format!("{} uno({n}): {other:?}", ex.name)),
                }
            }
            let r = check_stoica(&cand);
            match r.witness() {
                Some(x) if stoica_witness_reverifies(&cand, x) => {
                    if ex.source == "exp(-1/x)" && c == 10.0 {
                        witness_1_10 = Some(x);
                    }
                }
                _ => failures.push(format!("{} stoica C={c}: {r:?}", ex.name)),
            }
        }
    }
    for c in [1.0, 10.0, 100.0] {
        let zero = FlatCandidate::new(ExtendedExpr::plain(parse("0").unwrap()), c).unwrap();
        let mut ok = check_zero(&zero).status == ConditionStatus::Certified && check_stoica(&zero).holds();
        for n in [4, 10] {
            ok &= check_uno(&zero, n).is_ok_and(|r| r.holds());
        }
        if !ok {
            failures.push(format!("zero function with C={c}"));
        }
    }
    match witness_1_10 {
        Some(x) if x < 0.1 => {}
        other => failures.push(format!("exp(-1/x), C=10 witness {other:?} not below 0.1")),
    }
    let detail = if failures.is_empty() {
        format!("all conditions as expected; exp(-1/x), C=10 witness x = {}", witness_1_10.unwrap())
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn delta_anchor() -> Outcome {
    let oracle = flat_root(10.0);
    let oracle_ok = (oracle - FLAT_ROOT_10).abs() <= 1e-15;
    let cand = FlatCandidate::new(ExtendedExpr::new(parse("exp(-1/x)").unwrap(), true), 1.0).unwrap();
    match check_uno(&cand, 10) {
        Ok(r) => {
            let d = r.delta.unwrap_or(f64::NAN);
            let pass = oracle_ok && r.holds() && (0.02..=0.05).contains(&d) && d <= FLAT_ROOT_10;
            outcome(pass, format!("delta_10 = {d}, root = {FLAT_ROOT_10} (bisection oracle {oracle})"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn en_location() -> Outcome {
    let cube = FlatCandidate::new(ExtendedExpr::plain(parse("x^3").unwrap()), 1.0).unwrap();
    let five = locate_min_en(&cube, 5);
    let two = locate_min_en(&cube, 2);
    let five_ok = matches!(five, Ok(Some(b)) if b.contains(1.0) && b.width() <= libm::ldexp(1.0, -30));
    let two_ok = matches!(two, Ok(None));
    outcome(five_ok && two_ok, format!("n=5: {five:?} (expected bracket of 1); n=2: {two:?} (expected none)"))
}

fn soundness_fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let (mut checked, mut violations) = (0usize, 0usize);
    while checked < 10_000 {
        let e = ExtendedExpr::new(random_tree(&mut rng, 4), rng.gen_bool(0.2));
        let (a, b) = common::random_subdomain(&mut rng, -3.0, 3.0, 0.0);
        let p = rng.gen_range(a..=b);
        let (Ok(r), Ok(v)) = (e.eval_interval(Interval::new(a, b).unwrap()), e.eval_point(p)) else {
            continue;
        };
        if !v.is_finite() {
            continue;
        }
        checked += 1;
        if !r.contains(v) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("{checked} triples, {violations} violations"))
}

fn derivative_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd3e1);
    let mut functions: Vec<(String, ExtendedExpr, (f64, f64))> = (0..100)
        .map(|_| {
            let t = random_polynomial_tree(&mut rng, 4);
            (t.to_string(), ExtendedExpr::plain(t), (-2.0, 2.0))
        })
        .collect();
    functions.extend(EXEMPLARS.iter().map(|ex| (ex.name.to_string(), ex.expr(), ex.domain)));
    let mut worst = 0.0f64;
    let mut bad = None;
    for (name, e, (a, b)) in &functions {
        let d = e.derivative();
        let margin = 0.05 * (b - a);
        for _ in 0..20 {
            let x = rng.gen_range(a + margin..b - margin);
            let exact = d.eval_point(x).unwrap();
            let approx = central_difference(|t| e.eval_point(t).unwrap(), x, 1e-5);
            let rel = (exact - approx).abs() / (1.0 + exact.abs());
            worst = worst.max(rel);
            if rel > 1e-4 {
                bad.get_or_insert(format!("{name} at {x}"));
            }
        }
    }
    let detail = format!("{} functions x 20 points, worst relative error {worst:.2e}", functions.len());
    match bad {
        None => outcome(true, detail),
        Some(b) => outcome(false, format!("{detail}; first failure {b}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("volterra sandwich suite", sandwich_suite),
        ("FTC reconstruction", ftc_reconstruction),
        ("uniform-partition closed forms", uniform_closed_forms),
        ("Dirichlet gap persistence", dirichlet_gap),
        ("flatness rigidity", flatness_rigidity),
        ("delta_10 anchor", delta_anchor),
        ("E_n location", en_location),
        ("interval soundness fuzz", soundness_fuzz),
        ("symbolic derivative check", derivative_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
