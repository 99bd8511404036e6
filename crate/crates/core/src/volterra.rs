//! Machine checks of the sandwich
//! `lower ∫_a^b h <= H(b) - H(a) <= upper ∫_a^b h` for a bounded derivative
//! `h = H'`, and of FTC reconstruction when `h` is integrable.
//!
//! The sandwich holds for every bounded derivative, integrable or not, so a
//! failing verdict points at a soundness bug in this crate rather than at the
//! input.

use alloc::vec::Vec;

use thiserror::Error;

use crate::darboux::{self, DarbouxEnclosure, DarbouxError, Partition, RangeOracle};
use crate::expr::{EvalError, ExtendedExpr};
use crate::interval::round::{nudge_down, nudge_up};
use crate::interval::Interval;

/// Slack, in ulps, applied to the sandwich comparisons.
pub const COMPARISON_ULPS: u32 = 4;
/// Subdivision budget for certifying that `H'` is bounded.
pub const MAX_BOUNDEDNESS_BLOCKS: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum VolterraError {
    /// Boundedness of the derivative could not be certified within
    /// [`MAX_BOUNDEDNESS_BLOCKS`] blocks; the hypothesis is unverified.
    #[error("unverified hypothesis: derivative not certified bounded on the domain")]
    UnverifiedHypothesis,
    #[error("partition does not span the domain")]
    DomainMismatch,
    /// The Darboux gap did not close; the derivative may be
    /// non-integrable. The sandwich still holds and is reported.
    #[error("not converged: gap {gap:e} after {steps} steps", gap = enclosure.gap(), steps = enclosure.refinement_steps)]
    NotConverged { enclosure: DarbouxEnclosure, increment: Option<Interval>, sandwich_holds: bool },
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}

impl From<EvalError> for VolterraError {
    fn from(e: EvalError) -> Self {
        VolterraError::Darboux(DarbouxError::Eval(e))
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SandwichVerdict {
    pub lower_sum: f64,
    /// `H(b) - H(a)` in plain arithmetic.
    pub increment: f64,
    /// Certified enclosure of `H(b) - H(a)`; the verdict compares against it.
    pub increment_enclosure: Interval,
    pub upper_sum: f64,
    pub pass: bool,
    /// Number of subintervals.
    pub partition_size: usize,
    /// Certified bound on `sup |H'|` over the domain.
    pub derivative_bound: f64,
}

/// Certifies that `h` is bounded on `domain` by interval evaluation,
/// bisecting blocks that come back indeterminate or infinite. Returns a
/// bound on `sup |h|`.
pub fn certify_bounded(h: &ExtendedExpr, domain: Interval) -> Result<f64, VolterraError> {
    let mut pending: Vec<Interval> = alloc::vec![domain];
    let mut blocks = 1usize;
    let mut bound = 0.0f64;
    while let Some(block) = pending.pop() {
        let ok = match h.eval_interval(block) {
            Ok(r) if r.is_bounded() => {
                bound = bound.max(r.mag());
                true
            }
            Ok(_) | Err(EvalError::Indeterminate) => false,
            Err(e) => return Err(e.into()),
        };
        if ok {
            continue;
        }
        let Some((l, r)) = block.bisect() else {
            return Err(VolterraError::UnverifiedHypothesis);
        };
        blocks += 1;
        if blocks > MAX_BOUNDEDNESS_BLOCKS {
            return Err(VolterraError::UnverifiedHypothesis);
        }
        pending.push(r);
        pending.push(l);
    }
    Ok(bound)
}

fn increment_enclosure(big_h: &ExtendedExpr, domain: Interval) -> Result<Interval, VolterraError> {
    let hb = big_h.eval_interval(Interval::point(domain.hi()))?;
    let ha = big_h.eval_interval(Interval::point(domain.lo()))?;
    Ok(hb - ha)
}

/// `lower <= inc <= upper` with every comparison relaxed by
/// [`COMPARISON_ULPS`].
fn sandwiched(lower: f64, inc: Interval, upper: f64) -> bool {
    nudge_down(lower, COMPARISON_ULPS) <= nudge_up(inc.hi(), COMPARISON_ULPS)
        && nudge_down(inc.lo(), COMPARISON_ULPS) <= nudge_up(upper, COMPARISON_ULPS)
}

/// Computes `L(H', P) <= H(b) - H(a) <= U(H', P)` on `P`.
pub fn sandwich_check(
    big_h: &ExtendedExpr,
    domain: Interval,
    p: &Partition,
) -> Result<SandwichVerdict, VolterraError> {
    if !domain.is_bounded() || p.a() != domain.lo() || p.b() != domain.hi() {
        return Err(VolterraError::DomainMismatch);
    }
    let h = big_h.derivative();
    let derivative_bound = certify_bounded(&h, domain)?;
    let (lower_sum, upper_sum) = darboux::sums(&h, p)?;
    let inc = increment_enclosure(big_h, domain)?;
    let increment = big_h.eval_point(domain.hi())? - big_h.eval_point(domain.lo())?;
    Ok(SandwichVerdict {
        lower_sum,
        increment,
        increment_enclosure: inc,
        upper_sum,
        pass: sandwiched(lower_sum, inc, upper_sum),
        partition_size: p.num_blocks(),
        derivative_bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FtcReconstruction {
    /// Converged bracket `[lower sum, upper sum]` for `∫_a^b H'`.
    pub bracket: Interval,
    pub increment: Interval,
    /// The bracket and the increment enclosure overlap.
    pub contains_increment: bool,
    pub enclosure: DarbouxEnclosure,
}

/// Integrates `h` with [`darboux::enclose`] and requires convergence.
pub fn reconstruct_with<O: RangeOracle + ?Sized>(
    h: &O,
    domain: Interval,
    tol: f64,
    max_steps: usize,
) -> Result<DarbouxEnclosure, VolterraError> {
    let enclosure = darboux::enclose(h, domain, tol, max_steps)?;
    if !enclosure.converged {
        return Err(VolterraError::NotConverged { enclosure, increment: None, sandwich_holds: true });
    }
    Ok(enclosure)
}

/// Reconstructs `H(b) - H(a)` as `∫_a^b H'`. Fails with
/// [`VolterraError::NotConverged`] when the gap does not close within the
/// budget; the error then still reports whether the sandwich holds.
pub fn ftc_reconstruct(
    big_h: &ExtendedExpr,
    domain: Interval,
    tol: f64,
    max_steps: usize,
) -> Result<FtcReconstruction, VolterraError> {
    let h = big_h.derivative();
    let inc = increment_enclosure(big_h, domain)?;
    match reconstruct_with(&h, domain, tol, max_steps) {
        Ok(enclosure) => {
            let bracket = enclosure.lower_integral;
            Ok(FtcReconstruction {
                bracket,
                increment: inc,
                contains_increment: sandwiched(bracket.lo(), inc, bracket.hi()),
                enclosure,
            })
        }
        Err(VolterraError::NotConverged { enclosure, .. }) => {
            let holds = sandwiched(enclosure.best_lower_sum(), inc, enclosure.best_upper_sum());
            Err(VolterraError::NotConverged { enclosure, increment: Some(inc), sandwich_holds: holds })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::DirichletOracle;
    use crate::expr::parse;

    fn big_h(s: &str) -> ExtendedExpr {
        ExtendedExpr::plain(parse(s).unwrap())
    }

    fn dom(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn half_square_on_uniform_four() {
        let p = Partition::uniform(0.0, 1.0, 4).unwrap();
        let v = sandwich_check(&big_h("x^2/2"), dom(0.0, 1.0), &p).unwrap();
        assert_eq!((v.lower_sum, v.increment, v.upper_sum), (0.375, 0.5, 0.625));
        assert!(v.pass);
        assert_eq!(v.partition_size, 4);
    }

    #[test]
    fn constant_antiderivative() {
        let p = Partition::uniform(-3.0, 2.0, 5).unwrap();
        let v = sandwich_check(&big_h("7"), dom(-3.0, 2.0), &p).unwrap();
        assert_eq!((v.lower_sum, v.increment, v.upper_sum), (0.0, 0.0, 0.0));
        assert!(v.pass);
    }

    #[test]
    fn unbounded_derivative_is_unverified() {
        // derivative 2x sin(1/x^2) - 2 cos(1/x^2)/x blows up at 0
        let p = Partition::uniform(-1.0, 1.0, 4).unwrap();
        let r = sandwich_check(&big_h("x^2 * sin(1/x^2)"), dom(-1.0, 1.0), &p);
        assert_eq!(r, Err(VolterraError::UnverifiedHypothesis));
    }

    #[test]
    fn partition_must_span_domain() {
        let p = Partition::uniform(0.0, 0.5, 4).unwrap();
        assert_eq!(sandwich_check(&big_h("x"), dom(0.0, 1.0), &p), Err(VolterraError::DomainMismatch));
    }

    #[test]
    fn ftc_on_linear_function() {
        let r = ftc_reconstruct(&big_h("2.5*x"), dom(-1.0, 3.0), 1e-9, 10).unwrap();
        assert_eq!(r.bracket, Interval::point(10.0));
        assert!(r.contains_increment);
    }

    #[test]
    fn ftc_on_cubic() {
        let r = ftc_reconstruct(&big_h("x^3/3"), dom(0.0, 1.0), 1e-3, 100_000).unwrap();
        assert!(r.bracket.width() <= 1e-3);
        assert!(r.bracket.contains(1.0 / 3.0));
    }

    #[test]
    fn dirichlet_derivative_does_not_converge() {
        let r = reconstruct_with(&DirichletOracle, dom(0.0, 1.0), 1e-3, 200);
        assert!(matches!(r, Err(VolterraError::NotConverged { .. })));
    }

    #[test]
    fn ftc_not_converged_still_reports_sandwich() {
        let r = ftc_reconstruct(&big_h("sin(x)"), dom(0.0, 1.0), 1e-12, 50);
        match r {
            Err(VolterraError::NotConverged { sandwich_holds, increment, .. }) => {
                assert!(sandwich_holds);
                assert!(increment.unwrap().contains(libm::sin(1.0)));
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
