use darboux_core::Interval;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    Powi(i32),
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
}

fn random_endpoint<R: Rng>(rng: &mut R) -> f64 {
    let mag = 10f64.powf(rng.gen_range(-3.0..3.0));
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    let (a, b) = (random_endpoint(rng), random_endpoint(rng));
    if rng.gen_bool(0.1) {
        return Interval::point(a);
    }
    Interval::new(a.min(b), a.max(b)).unwrap()
}

fn point_in<R: Rng>(rng: &mut R, x: Interval) -> f64 {
    let t: f64 = rng.gen();
    (x.lo() + t * (x.hi() - x.lo())).clamp(x.lo(), x.hi())
}

fn apply(op: Op, x: Interval, y: Interval) -> Option<Interval> {
    Some(match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
        Op::Div => x.div(y).ok()?,
        Op::Neg => -x,
        Op::Abs => x.abs(),
        Op::Powi(n) => x.powi(n).ok()?,
        Op::Exp => x.exp(),
        Op::Ln => x.ln().ok()?,
        Op::Sqrt => x.sqrt().ok()?,
        Op::Sin => x.sin(),
        Op::Cos => x.cos(),
    })
}

fn apply_point(op: Op, x: f64, y: f64) -> f64 {
    match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
        Op::Div => x / y,
        Op::Neg => -x,
        Op::Abs => x.abs(),
        Op::Powi(n) => libm::pow(x, n as f64),
        Op::Exp => libm::exp(x),
        Op::Ln => libm::log(x),
        Op::Sqrt => libm::sqrt(x),
        Op::Sin => libm::sin(x),
        Op::Cos => libm::cos(x),
    }
}

fn random_op<R: Rng>(rng: &mut R) -> Op {
    match rng.gen_range(0..12) {
        0 => Op::Add,
        1 => Op::Sub,
        2 => Op::Mul,
        3 => Op::Div,
        4 => Op::Neg,
        5 => Op::Abs,
        6 => Op::Powi(rng.gen_range(-4..=7)),
        7 => Op::Exp,
        8 => Op::Ln,
        9 => Op::Sqrt,
        10 => Op::Sin,
        _ => Op::Cos,
    }
}

#[test]
fn pointwise_results_lie_in_interval_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7e_5eed);
    let mut checked = 0usize;
    for _ in 0..120_000 {
        let op = random_op(&mut rng);
        let (x, y) = (random_interval(&mut rng), random_interval(&mut rng));
        let Some(r) = apply(op, x, y) else { continue };
        for _ in 0..3 {
            let (px, py) = (point_in(&mut rng, x), point_in(&mut rng, y));
            let v = apply_point(op, px, py);
            if v.is_finite() {
                assert!(r.contains(v), "{op:?} {x:?} {y:?} at ({px}, {py}) gave {v}, enclosure {r:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 100_000, "only {checked} finite cases");
}

#[test]
fn even_powers_and_abs_are_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let x = random_interval(&mut rng);
        assert!(x.abs().lo() >= 0.0);
        for n in [2, 4, 6, -2] {
            if let Ok(r) = x.powi(n) {
                assert!(r.lo() >= 0.0, "{x:?}^{n} = {r:?}");
            }
        }
    }
}

fn interval_strategy() -> impl Strategy<Value = Interval> {
    (-50.0f64..50.0, 0.0f64..20.0).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
}

/// `(inner, outer)` with `inner ⊆ outer`.
fn nested_strategy() -> impl Strategy<Value = (Interval, Interval)> {
    (interval_strategy(), 0.0f64..1.0, 0.0f64..1.0, 0.0f64..5.0, 0.0f64..5.0).prop_map(|(x, s, t, l, r)| {
        let a = x.lo() + s * (x.hi() - x.lo());
        let b = a + t * (x.hi() - a);
        let inner = Interval::new(a, b.min(x.hi())).unwrap();
        let outer = Interval::new(x.lo() - l, x.hi() + r).unwrap();
        (inner, outer)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn inclusion_monotonicity((x, xo) in nested_strategy(), (y, yo) in nested_strategy(), k in 0usize..12, n in -3i32..6) {
        let op = [Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Neg, Op::Abs, Op::Powi(n), Op::Exp, Op::Ln, Op::Sqrt, Op::Sin, Op::Cos][k];
        if let (Some(inner), Some(outer)) = (apply(op, x, y), apply(op, xo, yo)) {
            prop_assert!(inner.is_subset(outer), "{:?}: {:?} not in {:?}", op, inner, outer);
        }
    }

    #[test]
    fn hull_and_intersection_bracket_operands(x in interval_strategy(), y in interval_strategy()) {
        let h = x.hull(y);
        prop_assert!(x.is_subset(h) && y.is_subset(h));
        let i = x.intersect(y);
        prop_assert!(i.is_empty() || (i.is_subset(x) && i.is_subset(y)));
    }

    #[test]
    fn bisection_covers_the_parent(x in interval_strategy()) {
        if let Some((l, r)) = x.bisect() {
            prop_assert_eq!(l.lo(), x.lo());
            prop_assert_eq!(r.hi(), x.hi());
            prop_assert_eq!(l.hi(), r.lo());
        }
    }
}
