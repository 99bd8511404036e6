#![allow(dead_code)]

use darboux_core::Expr;
use rand::Rng;

/// Constants on a 1/8 grid in [-2, 2] so trees print and reparse exactly.
pub fn grid_const<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-16..=16) as f64 / 8.0
}

/// `sum c_k x^k` with random degree <= `max_degree`.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: u32) -> Expr {
    let degree = rng.gen_range(0..=max_degree);
    let mut acc = Expr::Const(grid_const(rng));
    for k in 1..=degree {
        let c = grid_const(rng);
        acc = Expr::add(acc, Expr::mul(Expr::Const(c), Expr::powi(Expr::Var, k as i32)));
    }
    acc
}

/// Random tree of `+ - *`, negation and small powers over `x` and grid
/// constants. The polynomial degree stays below `2^depth`.
pub fn random_polynomial_tree<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) { Expr::Var } else { Expr::Const(grid_const(rng)) };
    }
    let a = random_polynomial_tree(rng, depth - 1);
    match rng.gen_range(0..5) {
        0 => Expr::Add(Box::new(a), Box::new(random_polynomial_tree(rng, depth - 1))),
        1 => Expr::Sub(Box::new(a), Box::new(random_polynomial_tree(rng, depth - 1))),
        2 => Expr::Mul(Box::new(a), Box::new(random_polynomial_tree(rng, depth - 1))),
        3 => Expr::Neg(Box::new(a)),
        _ => Expr::PowInt(Box::new(a), rng.gen_range(0..=2)),
    }
}

/// Random tree over every node kind. Singular or out-of-domain
/// subexpressions are allowed; callers skip evaluation errors.
pub fn random_tree<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.6) { Expr::Var } else { Expr::Const(grid_const(rng)) };
    }
    let sub = |rng: &mut R| Box::new(random_tree(rng, depth - 1));
    match rng.gen_range(0..14) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Sub(sub(rng), sub(rng)),
        2 => Expr::Mul(sub(rng), sub(rng)),
        3 => Expr::Div(sub(rng), sub(rng)),
        4 => Expr::Neg(sub(rng)),
        5 => Expr::PowInt(sub(rng), rng.gen_range(-3..=5)),
        6 => Expr::Exp(sub(rng)),
        7 => Expr::Log(sub(rng)),
        8 => Expr::Sqrt(sub(rng)),
        9 => Expr::Abs(sub(rng)),
        10 => Expr::Sin(sub(rng)),
        11 => Expr::Cos(sub(rng)),
        12 => Expr::Sign(sub(rng)),
        _ => Expr::Mul(Box::new(Expr::Const(grid_const(rng))), sub(rng)),
    }
}

/// Central difference with step `h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Root of `1/x + n ln x` on (0, 1) by plain bisection in f64; the
/// function is decreasing there.
pub fn flat_root(n: f64) -> f64 {
    let g = |x: f64| 1.0 / x + n * x.ln();
    let (mut lo, mut hi) = (1e-6, 1.0 / n);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Partition of `[a, b]` into `blocks` pieces with uniformly random
/// interior points.
pub fn random_partition<R: Rng>(rng: &mut R, a: f64, b: f64, blocks: usize) -> darboux_core::Partition {
    loop {
        let mut pts: Vec<f64> = (1..blocks).map(|_| rng.gen_range(a..b)).collect();
        pts.push(a);
        pts.push(b);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if pts.len() == blocks + 1 && pts[1] > a {
            return darboux_core::Partition::new(pts).expect("sorted distinct points");
        }
    }
}

/// Random subdomain `[a, b]` of `[lo, hi]` with `b - a >= min_width`.
pub fn random_subdomain<R: Rng>(rng: &mut R, lo: f64, hi: f64, min_width: f64) -> (f64, f64) {
    loop {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if b - a >= min_width {
            return (a, b);
        }
    }
}

/// A random polynomial of degree <= 6 or, with equal probability, one of
/// the smooth exemplars.
pub fn random_antiderivative<R: Rng>(rng: &mut R) -> darboux_core::ExtendedExpr {
    use darboux_core::expr::exemplars::EXEMPLARS;
    if rng.gen_bool(0.5) {
        return darboux_core::ExtendedExpr::plain(random_polynomial(rng, 6));
    }
    let smooth: Vec<_> = EXEMPLARS.iter().filter(|e| !e.zero_extend).collect();
    smooth[rng.gen_range(0..smooth.len())].expr()
}
