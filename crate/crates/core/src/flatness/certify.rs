//! Adaptive interval proofs of sign conditions and witness re-verification.

use alloc::vec::Vec;

use crate::expr::{EvalError, ExtendedExpr};
use crate::interval::Interval;

/// Violations must exceed this many ulps of the larger side.
pub const WITNESS_MARGIN_ULPS: f64 = 8.0;

/// Enclosure of `e` on `x`: natural extension intersected with the
/// mean-value form `e(mid) + e'(x) (x - mid)` when the latter is defined.
pub fn tight_enclosure(e: &ExtendedExpr, de: &ExtendedExpr, x: Interval) -> Result<Interval, EvalError> {
    let natural = e.eval_interval(x);
    let mean_value = (|| {
        let m = x.mid();
        let at_mid = e.eval_interval(Interval::point(m))?;
        let slope = de.eval_interval(x)?;
        let r = at_mid + slope * (x - Interval::point(m));
        if r.is_bounded() {
            Ok(r)
        } else {
            Err(EvalError::Indeterminate)
        }
    })();
    match (natural, mean_value) {
        (Ok(a), Ok(b)) => {
            let both = a.intersect(b);
            Ok(if both.is_empty() { a } else { both })
        }
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e), Err(_)) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Proof {
    Proved,
    /// Budget exhausted or a block could not be split further.
    Unknown,
}

/// Proves `e > 0` (`strict`) or `e >= 0` on all of `dom` by bisection.
/// Domain errors count as failure to prove.
pub fn prove_positive(e: &ExtendedExpr, de: &ExtendedExpr, dom: Interval, strict: bool, budget: usize) -> Proof {
    let mut stack: Vec<Interval> = alloc::vec![dom];
    let mut visited = 0usize;
    while let Some(block) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Proof::Unknown;
        }
        let ok = match tight_enclosure(e, de, block) {
            Ok(r) if strict => r.lo() > 0.0,
            Ok(r) => r.lo() >= 0.0,
            Err(EvalError::Indeterminate) => false,
            Err(_) => return Proof::Unknown,
        };
        if ok {
            continue;
        }
        match block.bisect() {
            Some((l, r)) => {
                stack.push(r);
                stack.push(l);
            }
            None => return Proof::Unknown,
        }
    }
    Proof::Proved
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

/// `lhs > rhs` by more than [`WITNESS_MARGIN_ULPS`] ulps of the larger side.
pub fn exceeds(lhs: f64, rhs: f64) -> bool {
    lhs.is_finite() && rhs.is_finite() && lhs - rhs > WITNESS_MARGIN_ULPS * ulp(lhs.abs().max(rhs.abs()))
}

/// Re-checks that `|f(x)| < x^n` fails at `x`: `|f(x)| >= x^n`, and
/// strictly above by the witness margin unless both sides are equal.
pub fn uno_violated_at(f: &ExtendedExpr, n: u32, x: f64) -> bool {
    if !(x > 0.0) {
        return false;
    }
    match f.eval_point(x) {
        Ok(v) => {
            let lhs = v.abs();
            let rhs = libm::pow(x, n as f64);
            exceeds(lhs, rhs)
        }
        Err(_) => false,
    }
}

/// Re-checks that `|x f'(x)| <= C |f(x)|` fails at `x` by the margin.
pub fn stoica_violated_at(f: &ExtendedExpr, df: &ExtendedExpr, c: f64, x: f64) -> bool {
    match (f.eval_point(x), df.eval_point(x)) {
        (Ok(v), Ok(d)) => exceeds((x * d).abs(), c * v.abs()),
        _ => false,
    }
}

/// Re-checks `f(0) != 0` by the margin.
pub fn zero_violated(f: &ExtendedExpr) -> bool {
    matches!(f.eval_point(0.0), Ok(v) if exceeds(v.abs(), 0.0))
}

/// Deterministic sample of `(0, 1]`: half log-spaced on `[2^-20, 1]`, half
/// uniform.
pub fn sample_points(count: usize) -> Vec<f64> {
    let half = count / 2;
    let mut pts = Vec::with_capacity(count);
    let lo = libm::log(super::STOICA_EPSILON);
    for i in 0..half {
        let t = i as f64 / (half.max(2) - 1) as f64;
        pts.push(libm::exp(lo * (1.0 - t)));
    }
    let rest = count - half;
    for i in 1..=rest {
        pts.push(i as f64 / rest as f64);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
