use darboux_core::expr::exemplars::flat_family;
use darboux_core::flatness::{
    check_stoica, check_uno, check_zero, derivative_bound, locate_min_en, ConditionStatus, FlatCandidate,
};
use darboux_core::{parse, ExtendedExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cand(src: &str, zero_extend: bool, c: f64) -> FlatCandidate {
    FlatCandidate::new(ExtendedExpr::new(parse(src).unwrap(), zero_extend), c).unwrap()
}

fn margin_exceeds(lhs: f64, rhs: f64) -> bool {
    let scale = lhs.abs().max(rhs.abs());
    lhs - rhs > 8.0 * (scale.next_up() - scale)
}

#[test]
fn certified_uno_holds_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a0);
    let cases = [
        ("exp(-1/x)", true, 4),
        ("exp(-1/x)", true, 10),
        ("exp(-2/x)", true, 7),
        ("exp(-5/x)", true, 12),
        ("3*exp(-1/x)", true, 6),
        ("x^3", false, 2),
        ("5*x^4", false, 3),
        ("x^4 * exp(-1/x)", true, 3),
        ("x^2 * sin(x)", false, 2),
    ];
    for (src, z, n) in cases {
        let c = cand(src, z, 1.0);
        let r = check_uno(&c, n).unwrap();
        assert!(r.holds(), "{src}, n = {n}: {r:?}");
        let delta = r.delta.unwrap();
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(0.0..delta);
            if x == 0.0 {
                continue;
            }
            let v = c.f.eval_point(x).unwrap().abs();
            assert!(v < x.powi(n as i32) || v == 0.0, "{src}, n = {n}: |f({x})| = {v}");
        }
    }
}

#[test]
fn witnesses_reverify_by_margin() {
    for (src, z, c) in [("x^3", false, 2.0), ("x + x^4", false, 2.0), ("exp(-1/x)", true, 10.0), ("exp(-2/x)", true, 3.0)] {
        let cand = cand(src, z, c);
        let r = check_stoica(&cand);
        let x = r.witness().unwrap_or_else(|| panic!("{src}, C = {c}: {r:?}"));
        let f = cand.f.eval_point(x).unwrap();
        let df = cand.f.derivative().eval_point(x).unwrap();
        assert!(margin_exceeds((x * df).abs(), c * f.abs()), "{src} at {x}");
    }
    let cand = cand("x^3", false, 1.0);
    let x = check_uno(&cand, 5).unwrap().witness().unwrap();
    assert!(margin_exceeds(cand.f.eval_point(x).unwrap().abs(), x.powi(5)));
    let bad = self::cand("x^3 + 1", false, 1.0);
    assert_eq!(check_zero(&bad).witness(), Some(0.0));
}

#[test]
fn no_nonzero_flat_function_satisfies_all_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ex in flat_family() {
        let mut cs = vec![0.5, 1.0, 10.0, 100.0, 1000.0];
        cs.extend((0..10).map(|_| 10f64.powf(rng.gen_range(-1.0..3.0))));
        for c in cs {
            let cand = FlatCandidate::new(ex.expr(), c).unwrap();
            assert_eq!(check_zero(&cand).status, ConditionStatus::Certified);
            for n in [2, 5, 10, 20] {
                assert!(check_uno(&cand, n).unwrap().holds(), "{} n = {n}", ex.name);
            }
            let r = check_stoica(&cand);
            assert!(r.is_falsified(), "{} with C = {c}: {r:?}", ex.name);
        }
    }
}

#[test]
fn zero_function_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let c = rng.gen_range(0.01..500.0);
        let z = cand("0", false, c);
        assert_eq!(check_zero(&z).status, ConditionStatus::Certified);
        assert_eq!(check_stoica(&z).status, ConditionStatus::Certified);
        let n = rng.gen_range(2..30);
        assert!(check_uno(&z, n).unwrap().holds());
        assert_eq!(locate_min_en(&z, n), Ok(None));
    }
}

#[test]
fn derivative_is_bounded_when_zero_and_stoica_hold() {
    for (src, c) in [("x^3", 3.0), ("x + x^2", 2.0), ("0", 1.0), ("x^5/4", 6.0)] {
        let cand = cand(src, false, c);
        assert!(check_zero(&cand).holds() && check_stoica(&cand).holds(), "{src}");
        let b = derivative_bound(&cand).unwrap();
        assert!(b.is_finite(), "{src}");
    }
}
