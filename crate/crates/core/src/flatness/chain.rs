//! Step-by-step evaluation of the contradiction chain
//! `x̄^n = |f(x̄)| = g(x̄) - g(0) <= upper ∫|g'| = upper ∫|f'| <= ∫ C|f|/x
//! < (C/n) x̄^n < x̄^n` at the bracket of `x̄ = min E_n`, where `g = |f|`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{
    check_stoica, check_uno, check_zero, locate_min_en, ConditionId, ConditionReport, Family, FlatCandidate,
    FlatnessError,
};
use crate::darboux;
use crate::expr::{Expr, ExtendedExpr};
use crate::interval::round::{add_up, div_down, mul_up};
use crate::interval::Interval;

const CHAIN_TOL_FRACTION: f64 = 1e-4;
const CHAIN_MAX_STEPS: usize = 20_000;
/// The Darboux part of each chain integral starts at `x̄ * 2^-20`.
const TAIL_FRACTION: f64 = 9.536_743_164_062_5e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StepLabel {
    /// `x̄^n = |f(x̄)|`
    EnDefinition,
    /// `|f(x̄)| = g(x̄) - g(0)`
    ZeroAtOrigin,
    /// `g(x̄) - g(0) <= upper ∫_0^x̄ |g'|`
    IncrementBound,
    /// `upper ∫|g'| = upper ∫|f'|`
    AbsDerivative,
    /// `upper ∫|f'| <= ∫_0^x̄ C|f(x)|/x`
    StoicaBound,
    /// `∫_0^x̄ C|f(x)|/x < (C/n) x̄^n`
    UnoBound,
    /// `(C/n) x̄^n < x̄^n`
    OrderBound,
}

impl StepLabel {
    pub fn formula(self) -> &'static str {
        match self {
            StepLabel::EnDefinition => "x̄^n = |f(x̄)|",
            StepLabel::ZeroAtOrigin => "|f(x̄)| = g(x̄) - g(0)",
            StepLabel::IncrementBound => "g(x̄) - g(0) <= upper∫_0^x̄ |g'|",
            StepLabel::AbsDerivative => "upper∫_0^x̄ |g'| = upper∫_0^x̄ |f'|",
            StepLabel::StoicaBound => "upper∫_0^x̄ |f'| <= ∫_0^x̄ C|f(x)|/x",
            StepLabel::UnoBound => "∫_0^x̄ C|f(x)|/x < (C/n) x̄^n",
            StepLabel::OrderBound => "(C/n) x̄^n < x̄^n",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChainStep {
    pub label: StepLabel,
    pub lhs: Interval,
    pub relation: Relation,
    pub rhs: Interval,
    /// The enclosures do not refute the relation.
    pub holds: bool,
    /// The enclosures prove the relation.
    pub certified: bool,
    /// Hypothesis that justifies the step, if any.
    pub relies_on: Option<ConditionId>,
    /// That hypothesis was falsified by its checker.
    pub hypothesis_falsified: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ChainTrace {
    pub n: u32,
    pub c: f64,
    /// Bracket of `min E_n`; `None` when `E_n` is empty.
    pub x_bar: Option<Interval>,
    pub steps: Vec<ChainStep>,
    pub outcome: ChainOutcome,
    /// Reports of the three hypotheses, computed for the annotation.
    pub conditions: Vec<ConditionReport>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ChainOutcome {
    /// `|f| < x^n` holds on `(0, 1]`, so there is nothing to contradict.
    EnEmpty,
    Evaluated {
        /// First step whose enclosures refute it.
        first_failure: Option<StepLabel>,
        /// Hypothesis blamed for the failure, or the first falsified
        /// hypothesis the chain relies on.
        violated_hypothesis: Option<ConditionId>,
    },
}

impl ChainTrace {
    pub fn first_failure(&self) -> Option<StepLabel> {
        match self.outcome {
            ChainOutcome::Evaluated { first_failure, .. } => first_failure,
            ChainOutcome::EnEmpty => None,
        }
    }

    pub fn violated_hypothesis(&self) -> Option<ConditionId> {
        match self.outcome {
            ChainOutcome::Evaluated { violated_hypothesis, .. } => violated_hypothesis,
            ChainOutcome::EnEmpty => None,
        }
    }

    pub fn step(&self, label: StepLabel) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.label == label)
    }
}

fn compare(lhs: Interval, relation: Relation, rhs: Interval) -> (bool, bool) {
    match relation {
        Relation::Le => (lhs.lo() <= rhs.hi(), lhs.hi() <= rhs.lo()),
        Relation::Lt => (lhs.lo() < rhs.hi(), lhs.hi() < rhs.lo()),
        Relation::Eq => {
            let overlap = !lhs.intersect(rhs).is_empty();
            (overlap, overlap && lhs.lo() == lhs.hi() && lhs == rhs)
        }
    }
}

/// Encloses `∫_0^x̄ h` for a nonnegative integrand `h` and every `x̄` in
/// `x_bar`. The integral over `[t0, lo]` comes from Darboux sums; the tail
/// `[0, t0]` contributes at most `t0 * sup h`, with the supremum read off at
/// `t0` when `h` is known to be nondecreasing there; the part beyond `lo`
/// contributes at most `sup h * width`.
fn integral_up_to(h: &ExtendedExpr, x_bar: Interval, t0: f64, monotone_tail: bool, tol: f64) -> Interval {
    let unknown = Interval::new(0.0, f64::INFINITY).unwrap();
    let sup_on = |x: Interval| match h.eval_interval(x) {
        Ok(r) if r.is_bounded() => r.hi().max(0.0),
        _ => f64::INFINITY,
    };
    let tail_sup = if monotone_tail { sup_on(Interval::point(t0)) } else { sup_on(Interval::new(0.0, t0).unwrap()) };
    let Ok(enc) = darboux::enclose(h, Interval::new(t0, x_bar.lo()).unwrap(), tol, CHAIN_MAX_STEPS) else {
        return unknown;
    };
    let lo = enc.best_lower_sum().max(0.0);
    let hi = add_up(add_up(enc.best_upper_sum(), mul_up(tail_sup, t0)), mul_up(sup_on(x_bar), x_bar.width()));
    Interval::new(lo, hi).unwrap_or(unknown)
}

/// Whether `|f'|` and `|f|/x` are nondecreasing on `(0, t0]`.
fn monotone_near_zero(family: Option<Family>, t0: f64) -> bool {
    match family {
        Some(Family::Zero) => true,
        Some(Family::Monomial { power, .. }) => power >= 1,
        // exp(-a/x)/x^2 increases for x < a/2, exp(-a/x)/x for x < a
        Some(Family::FlatExp { rate, .. }) => t0 <= div_down(rate, 2.0),
        None => false,
    }
}

fn or_entire(r: Result<Interval, impl Sized>) -> Interval {
    r.unwrap_or(Interval::ENTIRE)
}

/// Evaluates the chain for order `n > C`, annotating each step with the
/// hypothesis it uses and whether the enclosures confirm it.
pub fn chain_evaluate(cand: &FlatCandidate, n: u32) -> Result<ChainTrace, FlatnessError> {
    if n < 2 {
        return Err(FlatnessError::InvalidOrder(n));
    }
    if (n as f64) <= cand.c {
        return Err(FlatnessError::PreconditionViolated { n, c: cand.c });
    }
    let conditions = alloc::vec![check_zero(cand), check_uno(cand, n)?, check_stoica(cand)];
    let falsified = |id: ConditionId| conditions.iter().any(|r| r.condition == id && r.is_falsified());

    let Some(x_bar) = locate_min_en(cand, n)? else {
        return Ok(ChainTrace { n, c: cand.c, x_bar: None, steps: Vec::new(), outcome: ChainOutcome::EnEmpty, conditions });
    };

    let abs_f = cand.f.abs();
    let x_pow = or_entire(x_bar.powi(n as i32));
    let f_bar = or_entire(abs_f.eval_interval(x_bar));
    let f_zero = or_entire(abs_f.eval_interval(Interval::point(0.0)));
    let increment = f_bar - f_zero;
    let tol = (CHAIN_TOL_FRACTION * x_pow.lo()).max(f64::MIN_POSITIVE);

    let abs_df = cand.f.derivative().abs();
    let t0 = x_bar.lo() * TAIL_FRACTION;
    let monotone_tail = monotone_near_zero(cand.family(), t0);
    let upper_abs_df = integral_up_to(&abs_df, x_bar, t0, monotone_tail, tol);
    let c = Interval::point(cand.c);
    let stoica_integrand = ExtendedExpr::new(
        Expr::Div(Box::new(Expr::Mul(Box::new(Expr::Const(cand.c)), Box::new(Expr::abs(cand.f.base.clone())))), Box::new(Expr::Var)),
        true,
    );
    let stoica_integral = integral_up_to(&stoica_integrand, x_bar, t0, monotone_tail, tol);
    let c_over_n = or_entire(c.div(Interval::point(n as f64)));
    let bound = c_over_n * x_pow;

    let zero_exact = f_zero == Interval::ZERO;
    let rows: [(StepLabel, Interval, Relation, Interval, Option<ConditionId>, Option<bool>); 7] = [
        (StepLabel::EnDefinition, x_pow, Relation::Eq, f_bar, None, Some(true)),
        (StepLabel::ZeroAtOrigin, f_bar, Relation::Eq, increment, Some(ConditionId::Zero), Some(zero_exact)),
        (StepLabel::IncrementBound, increment, Relation::Le, upper_abs_df, Some(ConditionId::Stoica), None),
        (StepLabel::AbsDerivative, upper_abs_df, Relation::Eq, upper_abs_df, None, Some(true)),
        (StepLabel::StoicaBound, upper_abs_df, Relation::Le, stoica_integral, Some(ConditionId::Stoica), None),
        (StepLabel::UnoBound, stoica_integral, Relation::Lt, bound, Some(ConditionId::Uno(n)), None),
        (StepLabel::OrderBound, bound, Relation::Lt, x_pow, None, None),
    ];

    let mut steps = Vec::with_capacity(rows.len());
    for (label, lhs, relation, rhs, relies_on, structural) in rows {
        let (holds, certified) = match structural {
            // identities by construction: the enclosures only have to agree
            Some(ok) => {
                let (overlap, _) = compare(lhs, relation, rhs);
                (overlap && ok, overlap && ok)
            }
            None => compare(lhs, relation, rhs),
        };
        let hypothesis_falsified = relies_on.is_some_and(&falsified);
        steps.push(ChainStep { label, lhs, relation, rhs, holds, certified, relies_on, hypothesis_falsified });
    }

    let failing = steps.iter().find(|s| !s.holds);
    let violated_hypothesis = failing
        .and_then(|s| s.relies_on)
        .or_else(|| steps.iter().find(|s| s.hypothesis_falsified).and_then(|s| s.relies_on));
    let outcome = ChainOutcome::Evaluated { first_failure: failing.map(|s| s.label), violated_hypothesis };
    Ok(ChainTrace { n, c: cand.c, x_bar: Some(x_bar), steps, outcome, conditions })
}
