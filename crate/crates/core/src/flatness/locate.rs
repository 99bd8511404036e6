//! Bracketing `min E_n` where `E_n = {x > 0 : |f(x)| = x^n}`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::certify::tight_enclosure;
use super::{check_uno, FlatCandidate, FlatnessError, DELTA_LADDER_DEPTH, EN_BRACKET_WIDTH};
use crate::expr::{EvalError, Expr, ExtendedExpr};
use crate::interval::Interval;

/// Blocks narrower than this are not split further while scanning.
const SCAN_MIN_WIDTH: f64 = 2.328_306_436_538_696_3e-10; // 2^-32
const SCAN_BUDGET: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Negative,
    Positive,
}

fn sign_of(r: Interval) -> Option<Sign> {
    if r.hi() < 0.0 {
        Some(Sign::Negative)
    } else if r.lo() > 0.0 {
        Some(Sign::Positive)
    } else {
        None
    }
}

fn is_exact_zero(d: &ExtendedExpr, x: f64) -> bool {
    matches!(d.eval_interval(Interval::point(x)), Ok(r) if r.lo() == 0.0 && r.hi() == 0.0)
}

/// Returns a certified bracket of `min E_n` of width at most `2^-30`, or
/// `None` when `|f(x)| - x^n < 0` is certified on `(0, 1]`.
///
/// The scan starts at the `δ_n` certified by [`check_uno`] (below which
/// `E_n` is empty) or, when no `δ_n` is certified, at `2^-40`. Blocks of
/// `[start, 1]` are visited left to right; a block whose enclosure of
/// `|f| - x^n` excludes 0 is root-free. The first certified root is either a
/// point where the difference evaluates to exactly 0 or a sign change across
/// a run of undecided blocks, and the bracket runs from the first undecided
/// point to that root.
pub fn locate_min_en(cand: &FlatCandidate, n: u32) -> Result<Option<Interval>, FlatnessError> {
    if n < 2 {
        return Err(FlatnessError::InvalidOrder(n));
    }
    let d = ExtendedExpr::new(
        Expr::Sub(Box::new(Expr::abs(cand.f.base.clone())), Box::new(Expr::powi(Expr::Var, n as i32))),
        cand.f.zero_extend,
    );
    let dd = d.derivative();

    let uno = check_uno(cand, n)?;
    let (start, mut last_sign) = match uno.delta {
        Some(delta) if uno.holds() => (delta, Some(Sign::Negative)),
        _ => {
            let s = libm::ldexp(1.0, -DELTA_LADDER_DEPTH);
            if is_exact_zero(&d, s) {
                return Ok(Some(Interval::point(s)));
            }
            let at_start = d.eval_interval(Interval::point(s))?;
            match sign_of(at_start) {
                Some(sign) => (s, Some(sign)),
                None => return Err(FlatnessError::Inconclusive("sign of |f| - x^n undecided at the scan start")),
            }
        }
    };
    if start >= 1.0 {
        return Ok(None);
    }

    // undecided run [run_lo, run_hi] since the last decided block
    let mut run: Option<(f64, f64)> = None;
    let mut stack: Vec<Interval> = alloc::vec![Interval::new(start, 1.0).unwrap()];
    let mut visited = 0usize;
    while let Some(block) = stack.pop() {
        visited += 1;
        if visited > SCAN_BUDGET {
            return Err(FlatnessError::Inconclusive("E_n scan budget exhausted"));
        }
        let decided = match tight_enclosure(&d, &dd, block) {
            Ok(r) => sign_of(r),
            Err(EvalError::Indeterminate) => None,
            Err(e) => return Err(e.into()),
        };
        match decided {
            Some(sign) => {
                if let Some((lo, hi)) = run.take() {
                    if Some(sign) != last_sign {
                        return bracket(lo, hi);
                    }
                    return Err(FlatnessError::Inconclusive("possible tangential contact of |f| and x^n"));
                }
                last_sign = Some(sign);
            }
            None if block.width() > SCAN_MIN_WIDTH => {
                let (l, r) = block.bisect().expect("wide block splits");
                stack.push(r);
                stack.push(l);
            }
            None => {
                let lo = run.map_or(block.lo(), |(lo, _)| lo);
                if is_exact_zero(&d, block.lo()) {
                    return bracket(lo, block.lo());
                }
                if is_exact_zero(&d, block.hi()) {
                    return bracket(lo, block.hi());
                }
                run = Some((lo, block.hi()));
            }
        }
    }
    match (run, last_sign) {
        (Some(_), _) => Err(FlatnessError::Inconclusive("undecided sign up to x = 1")),
        (None, Some(Sign::Negative)) => Ok(None),
        (None, _) => Err(FlatnessError::Inconclusive("|f| exceeds x^n on the whole scan; E_n may lie below 2^-40")),
    }
}

fn bracket(lo: f64, hi: f64) -> Result<Option<Interval>, FlatnessError> {
    let b = Interval::new(lo, hi).unwrap();
    if b.width() <= EN_BRACKET_WIDTH {
        Ok(Some(b))
    } else {
        Err(FlatnessError::Inconclusive("root bracket wider than 2^-30"))
    }
}
