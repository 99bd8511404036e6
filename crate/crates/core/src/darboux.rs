//! Partitions, lower/upper Darboux sums and adaptive certified enclosures.
//!
//! A [`RangeOracle`] supplies certified bounds `m <= inf f <= sup f <= M` on
//! any subinterval. Lower sums are accumulated with downward rounding and
//! upper sums with upward rounding, so every lower sum is a certified lower
//! bound of the lower integral and every upper sum a certified upper bound of
//! the upper integral.
//!
//! The two brackets reported by [`enclose`] are one-sided in nature: the
//! upper end of the lower-integral bracket is the current upper sum (valid
//! because the lower integral never exceeds the upper one), and dually for
//! the upper integral. For a non-integrable function the brackets therefore
//! stay wide even though each one-sided certificate is tight.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::expr::{EvalError, Expr, ExtendedExpr};
use crate::interval::round::{add_down, add_up, mul_down, mul_up, sub_down, sub_up, CompensatedSum};
use crate::interval::Interval;

/// Blocks narrower than `MIN_WIDTH_FRACTION * (b - a)` are never split.
pub const MIN_WIDTH_FRACTION: f64 = 9.094_947_017_729_282e-13; // 2^-40
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum DarbouxError {
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
    #[error("invalid domain: endpoints must be finite with a < b")]
    InvalidDomain,
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("step budget must be at least 1")]
    InvalidBudget,
    #[error("oracle returned inconsistent bounds")]
    InvalidOracle,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Certified bounds on the range of a function over subintervals.
pub trait RangeOracle {
    /// Returns `(m, M)` with `m <= inf f <= sup f <= M` on `sub`.
    ///
    /// `Err(EvalError::Indeterminate)` means the oracle cannot bound this
    /// subinterval; callers treat it as `(-inf, +inf)`.
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError>;
}

impl<O: RangeOracle + ?Sized> RangeOracle for &O {
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError> {
        (**self).bounds(sub)
    }
}

impl RangeOracle for ExtendedExpr {
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError> {
        let r = self.eval_interval(sub)?;
        Ok((r.lo(), r.hi()))
    }
}

impl RangeOracle for Expr {
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError> {
        let r = self.eval_interval(sub)?;
        Ok((r.lo(), r.hi()))
    }
}

/// Indicator of the rationals: 0 and 1 are both attained on every
/// non-degenerate subinterval, so it is bounded but not integrable.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirichletOracle;

impl RangeOracle for DirichletOracle {
    fn bounds(&self, _sub: Interval) -> Result<(f64, f64), EvalError> {
        Ok((0.0, 1.0))
    }
}

/// Thomae's function: `1/q` at `p/q` in lowest terms, 0 at irrationals.
/// Integrable with integral 0, so its Darboux gap closes.
#[derive(Clone, Copy, Debug)]
pub struct ThomaeOracle {
    /// Denominators above this are not searched; the supremum is then
    /// bounded by `1 / max_denominator`.
    pub max_denominator: u32,
}

impl Default for ThomaeOracle {
    fn default() -> Self {
        ThomaeOracle { max_denominator: 1 << 16 }
    }
}

impl RangeOracle for ThomaeOracle {
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError> {
        if !sub.is_bounded() {
            return Ok((0.0, 1.0));
        }
        // smallest q with some p/q in sub; false positives only loosen M
        for q in 1..=self.max_denominator {
            let qf = q as f64;
            let first = libm::ceil(mul_down(sub.lo(), qf));
            let last = libm::floor(mul_up(sub.hi(), qf));
            if first <= last {
                return Ok((0.0, 1.0 / qf));
            }
        }
        Ok((0.0, 1.0 / self.max_denominator as f64))
    }
}

/// Piecewise-constant function: `values[i]` on `(breaks[i], breaks[i+1])`.
/// At a breakpoint both adjacent values are admitted.
#[derive(Clone, Debug)]
pub struct StepOracle {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepOracle {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<StepOracle, DarbouxError> {
        Partition::new(breaks.clone())?;
        if values.len() + 1 != breaks.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(DarbouxError::InvalidPartition("step values do not match breakpoints"));
        }
        Ok(StepOracle { breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl RangeOracle for StepOracle {
    fn bounds(&self, sub: Interval) -> Result<(f64, f64), EvalError> {
        let mut m = f64::INFINITY;
        let mut big = f64::NEG_INFINITY;
        for (i, &v) in self.values.iter().enumerate() {
            let (l, r) = (self.breaks[i], self.breaks[i + 1]);
            if sub.hi() >= l && sub.lo() <= r {
                m = m.min(v);
                big = big.max(v);
            }
        }
        if m > big {
            return Err(EvalError::Domain("step function outside its breakpoints"));
        }
        Ok((m, big))
    }
}

/// Strictly increasing breakpoints `a = x_0 < x_1 < ... < x_k = b`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Partition, DarbouxError> {
        if points.len() < 2 {
            return Err(DarbouxError::InvalidPartition("needs at least two points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(DarbouxError::InvalidPartition("points must be finite"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DarbouxError::InvalidPartition("points must be strictly increasing"));
        }
        Ok(Partition { points })
    }

    /// The single block `[a, b]`.
    pub fn trivial(a: f64, b: f64) -> Result<Partition, DarbouxError> {
        Partition::new(vec![a, b])
    }

    /// `n` equal blocks; endpoints are exactly `a` and `b`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Partition, DarbouxError> {
        if n == 0 {
            return Err(DarbouxError::InvalidPartition("needs at least one block"));
        }
        let mut pts = Vec::with_capacity(n + 1);
        pts.push(a);
        for i in 1..n {
            let t = i as f64 / n as f64;
            pts.push(a + (b - a) * t);
        }
        pts.push(b);
        Partition::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn a(&self) -> f64 {
        self.points[0]
    }

    pub fn b(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Number of subintervals.
    pub fn num_blocks(&self) -> usize {
        self.points.len() - 1
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.a(), self.b()).unwrap()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Interval> + '_ {
        self.points.windows(2).map(|w| Interval::new(w[0], w[1]).unwrap())
    }

    /// True when every point of `coarser` is a point of `self` and both
    /// share endpoints.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.a() == coarser.a()
            && self.b() == coarser.b()
            && coarser.points.iter().all(|p| self.points.binary_search_by(|q| q.total_cmp(p)).is_ok())
    }

    /// Inserts a breakpoint strictly inside the domain.
    pub fn with_point(&self, x: f64) -> Result<Partition, DarbouxError> {
        match self.points.binary_search_by(|q| q.total_cmp(&x)) {
            Ok(_) => Ok(self.clone()),
            Err(idx) if idx == 0 || idx == self.points.len() => {
                Err(DarbouxError::InvalidPartition("point outside the partition domain"))
            }
            Err(idx) => {
                let mut pts = self.points.clone();
                pts.insert(idx, x);
                Ok(Partition { points: pts })
            }
        }
    }
}

fn checked_bounds<O: RangeOracle + ?Sized>(f: &O, sub: Interval) -> Result<(f64, f64), DarbouxError> {
    match f.bounds(sub) {
        Ok((m, big)) => {
            if m.is_nan() || big.is_nan() || m > big || m == f64::INFINITY || big == f64::NEG_INFINITY {
                return Err(DarbouxError::InvalidOracle);
            }
            Ok((m, big))
        }
        Err(EvalError::Indeterminate) => Ok((f64::NEG_INFINITY, f64::INFINITY)),
        Err(e) => Err(e.into()),
    }
}

/// Lower bound of `m * (hi - lo)`.
fn term_down(m: f64, lo: f64, hi: f64) -> f64 {
    let dx = if m >= 0.0 { sub_down(hi, lo) } else { sub_up(hi, lo) };
    mul_down(m, dx)
}

/// Upper bound of `big * (hi - lo)`.
fn term_up(big: f64, lo: f64, hi: f64) -> f64 {
    let dx = if big >= 0.0 { sub_up(hi, lo) } else { sub_down(hi, lo) };
    mul_up(big, dx)
}

/// Lower Darboux sum, rounded down: a certified lower bound of the lower
/// integral.
pub fn lower_sum<O: RangeOracle + ?Sized>(f: &O, p: &Partition) -> Result<f64, DarbouxError> {
    let mut acc = CompensatedSum::new();
    for w in p.points.windows(2) {
        let (m, _) = checked_bounds(f, Interval::new(w[0], w[1]).unwrap())?;
        acc.push(term_down(m, w[0], w[1]));
    }
    Ok(acc.down())
}

/// Upper Darboux sum, rounded up: a certified upper bound of the upper
/// integral.
pub fn upper_sum<O: RangeOracle + ?Sized>(f: &O, p: &Partition) -> Result<f64, DarbouxError> {
    let mut acc = CompensatedSum::new();
    for w in p.points.windows(2) {
        let (_, big) = checked_bounds(f, Interval::new(w[0], w[1]).unwrap())?;
        acc.push(term_up(big, w[0], w[1]));
    }
    Ok(acc.up())
}

/// Both sums in one pass over the partition.
pub fn sums<O: RangeOracle + ?Sized>(f: &O, p: &Partition) -> Result<(f64, f64), DarbouxError> {
    let (mut lo, mut hi) = (CompensatedSum::new(), CompensatedSum::new());
    for w in p.points.windows(2) {
        let (m, big) = checked_bounds(f, Interval::new(w[0], w[1]).unwrap())?;
        lo.push(term_down(m, w[0], w[1]));
        hi.push(term_up(big, w[0], w[1]));
    }
    Ok((lo.down(), hi.up()))
}

fn oscillation_weight(m: f64, big: f64, lo: f64, hi: f64) -> f64 {
    let w = (big - m) * (hi - lo);
    if w.is_nan() {
        f64::INFINITY
    } else {
        w
    }
}

fn splittable(lo: f64, hi: f64, min_width: f64) -> Option<f64> {
    if hi - lo < min_width {
        return None;
    }
    Interval::new(lo, hi).unwrap().bisect().map(|(l, _)| l.hi())
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RefineOutcome {
    pub partition: Partition,
    /// The new breakpoint, `None` when the chosen block was already at the
    /// minimum width (the partition is then unchanged).
    pub inserted: Option<f64>,
    pub at_min_width: bool,
}

/// One greedy refinement step: bisect the block maximising
/// `(M_i - m_i) * dx_i`, ties going to the leftmost block.
pub fn refine_once<O: RangeOracle + ?Sized>(f: &O, p: &Partition) -> Result<RefineOutcome, DarbouxError> {
    let min_width = MIN_WIDTH_FRACTION * (p.b() - p.a());
    let mut best: Option<(f64, usize)> = None;
    for (i, w) in p.points.windows(2).enumerate() {
        let (m, big) = checked_bounds(f, Interval::new(w[0], w[1]).unwrap())?;
        let weight = oscillation_weight(m, big, w[0], w[1]);
        if best.is_none_or(|(bw, _)| weight > bw) {
            best = Some((weight, i));
        }
    }
    let (_, i) = best.expect("partition has at least one block");
    let (lo, hi) = (p.points[i], p.points[i + 1]);
    match splittable(lo, hi, min_width) {
        Some(mid) => Ok(RefineOutcome { partition: p.with_point(mid)?, inserted: Some(mid), at_min_width: false }),
        None => Ok(RefineOutcome { partition: p.clone(), inserted: None, at_min_width: true }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HistoryPoint {
    pub step: usize,
    pub lower_sum: f64,
    pub upper_sum: f64,
}

/// Certified brackets around the lower and upper integrals.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DarbouxEnclosure {
    /// `[best lower sum, best upper sum]`; the left end is certified.
    pub lower_integral: Interval,
    /// `[best lower sum, best upper sum]`; the right end is certified.
    pub upper_integral: Interval,
    /// Number of subintervals of the final partition.
    pub partition_size: usize,
    /// Number of bisections performed.
    pub refinement_steps: usize,
    /// `upper_sum - lower_sum <= tol` was reached.
    pub converged: bool,
    /// Some block could not be refined further (minimum width reached,
    /// typically because the oracle stayed indeterminate there).
    pub inconclusive: bool,
    /// Best-so-far sums after each step: lower non-decreasing, upper
    /// non-increasing.
    pub history: Vec<HistoryPoint>,
}

impl DarbouxEnclosure {
    pub fn best_lower_sum(&self) -> f64 {
        self.lower_integral.lo()
    }

    pub fn best_upper_sum(&self) -> f64 {
        self.upper_integral.hi()
    }

    /// `upper - lower`, rounded up.
    pub fn gap(&self) -> f64 {
        sub_up(self.best_upper_sum(), self.best_lower_sum())
    }
}

/// Fixed-capacity binary tree of directed-rounded partial sums.
struct SumTree {
    size: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SumTree {
    fn new(capacity: usize) -> SumTree {
        let size = capacity.next_power_of_two().max(1);
        SumTree { size, lower: vec![0.0; 2 * size], upper: vec![0.0; 2 * size] }
    }

    fn grow(&mut self) {
        let old = core::mem::replace(self, SumTree::new(2 * self.size));
        for slot in 0..old.size {
            let i = slot + old.size;
            self.set(slot, old.lower[i], old.upper[i]);
        }
    }

    fn set(&mut self, slot: usize, lo: f64, hi: f64) {
        while slot >= self.size {
            self.grow();
        }
        let mut i = slot + self.size;
        self.lower[i] = lo;
        self.upper[i] = hi;
        while i > 1 {
            i /= 2;
            self.lower[i] = add_down(self.lower[2 * i], self.lower[2 * i + 1]);
            self.upper[i] = add_up(self.upper[2 * i], self.upper[2 * i + 1]);
        }
    }

    fn totals(&self) -> (f64, f64) {
        (self.lower[1], self.upper[1])
    }
}

struct Block {
    lo: f64,
    hi: f64,
    m: f64,
    big: f64,
}

struct Candidate {
    weight: f64,
    lo: f64,
    slot: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: larger weight first, then smaller left endpoint
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| other.lo.total_cmp(&self.lo))
            .then_with(|| other.slot.cmp(&self.slot))
    }
}

/// Adaptive enclosure of the lower and upper integrals over `domain`.
///
/// Starts from the single block `domain` and repeatedly bisects the block
/// of largest weighted oscillation until `upper - lower <= tol` or
/// `max_steps` bisections were made. Exhausting the budget is not an error:
/// the result has `converged == false`.
pub fn enclose<O: RangeOracle + ?Sized>(
    f: &O,
    domain: Interval,
    tol: f64,
    max_steps: usize,
) -> Result<DarbouxEnclosure, DarbouxError> {
    if !domain.is_bounded() || domain.lo() >= domain.hi() {
        return Err(DarbouxError::InvalidDomain);
    }
    if !(tol > 0.0) {
        return Err(DarbouxError::InvalidTolerance);
    }
    if max_steps == 0 {
        return Err(DarbouxError::InvalidBudget);
    }
    let (a, b) = (domain.lo(), domain.hi());
    let min_width = MIN_WIDTH_FRACTION * (b - a);

    let mut tree = SumTree::new((max_steps + 1).min(1 << 12));
    let mut blocks: Vec<Block> = Vec::new();
    let mut heap = BinaryHeap::new();

    let (m, big) = checked_bounds(f, domain)?;
    tree.set(0, term_down(m, a, b), term_up(big, a, b));
    blocks.push(Block { lo: a, hi: b, m, big });
    heap.push(Candidate { weight: oscillation_weight(m, big, a, b), lo: a, slot: 0 });

    let (mut best_lo, mut best_hi) = tree.totals();
    let mut history = vec![HistoryPoint { step: 0, lower_sum: best_lo, upper_sum: best_hi }];
    let mut steps = 0;
    let mut inconclusive = false;
    let mut converged = false;

    loop {
        if sub_up(best_hi, best_lo) <= tol {
            converged = true;
            break;
        }
        if steps >= max_steps {
            break;
        }
        let Some(cand) = heap.pop() else {
            break;
        };
        let parent = &blocks[cand.slot];
        let (lo, hi, pm, pbig) = (parent.lo, parent.hi, parent.m, parent.big);
        let Some(mid) = splittable(lo, hi, min_width) else {
            inconclusive = true;
            continue;
        };

        // children inherit the parent's bounds, which remain valid on them
        let (lm, lbig) = checked_bounds(f, Interval::new(lo, mid).unwrap())?;
        let (rm, rbig) = checked_bounds(f, Interval::new(mid, hi).unwrap())?;
        let (lm, lbig) = (lm.max(pm), lbig.min(pbig));
        let (rm, rbig) = (rm.max(pm), rbig.min(pbig));

        let left_slot = cand.slot;
        let right_slot = blocks.len();
        blocks[left_slot] = Block { lo, hi: mid, m: lm, big: lbig };
        blocks.push(Block { lo: mid, hi, m: rm, big: rbig });
        tree.set(left_slot, term_down(lm, lo, mid), term_up(lbig, lo, mid));
        tree.set(right_slot, term_down(rm, mid, hi), term_up(rbig, mid, hi));
        heap.push(Candidate { weight: oscillation_weight(lm, lbig, lo, mid), lo, slot: left_slot });
        heap.push(Candidate { weight: oscillation_weight(rm, rbig, mid, hi), lo: mid, slot: right_slot });

        steps += 1;
        let (cur_lo, cur_hi) = tree.totals();
        best_lo = best_lo.max(cur_lo);
        best_hi = best_hi.min(cur_hi);
        history.push(HistoryPoint { step: steps, lower_sum: best_lo, upper_sum: best_hi });
    }

    let bracket = Interval::new(best_lo, best_hi).ok_or(DarbouxError::InvalidOracle)?;
    Ok(DarbouxEnclosure {
        lower_integral: bracket,
        upper_integral: bracket,
        partition_size: blocks.len(),
        refinement_steps: steps,
        converged,
        inconclusive,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn f(s: &str) -> ExtendedExpr {
        ExtendedExpr::plain(parse(s).unwrap())
    }

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.0]).is_err());
        assert!(Partition::new(vec![1.0, 0.5]).is_err());
        assert!(Partition::new(vec![0.0, f64::NAN]).is_err());
        let p = Partition::uniform(-1.0, 3.0, 7).unwrap();
        assert_eq!((p.a(), p.b(), p.num_blocks()), (-1.0, 3.0, 7));
    }

    #[test]
    fn sums_of_identity_on_uniform_four() {
        // (n-1)/(2n) and (n+1)/(2n) with n = 4
        let p = Partition::uniform(0.0, 1.0, 4).unwrap();
        assert_eq!(lower_sum(&f("x"), &p).unwrap(), 0.375);
        assert_eq!(upper_sum(&f("x"), &p).unwrap(), 0.625);
    }

    #[test]
    fn sums_of_constant() {
        let p = Partition::new(vec![-1.0, 0.25, 2.0, 3.5]).unwrap();
        let c = f("2.5");
        assert_eq!(lower_sum(&c, &p).unwrap(), 11.25);
        assert_eq!(upper_sum(&c, &p).unwrap(), 11.25);
    }

    #[test]
    fn dirichlet_sums() {
        let p = Partition::uniform(0.0, 1.0, 10).unwrap();
        assert_eq!(lower_sum(&DirichletOracle, &p).unwrap(), 0.0);
        let u = upper_sum(&DirichletOracle, &p).unwrap();
        assert!((1.0..1.0 + 1e-15).contains(&u));
    }

    #[test]
    fn indeterminate_blocks_give_infinite_sums() {
        let p = Partition::uniform(-1.0, 1.0, 2).unwrap();
        assert_eq!(lower_sum(&f("1/x"), &p).unwrap(), f64::NEG_INFINITY);
        assert_eq!(upper_sum(&f("1/x"), &p).unwrap(), f64::INFINITY);
        let p = Partition::uniform(-1.0, 1.0, 2).unwrap();
        assert_eq!(lower_sum(&f("log(x)"), &p), Err(DarbouxError::Eval(EvalError::Domain("log"))));
    }

    #[test]
    fn refine_once_examples() {
        let p = Partition::uniform(0.0, 1.0, 2).unwrap();
        let out = refine_once(&f("x"), &p).unwrap();
        assert_eq!(out.inserted, Some(0.25));
        let out = refine_once(&f("3"), &p).unwrap();
        assert_eq!(out.inserted, Some(0.25));
        let p = Partition::trivial(2.0, 5.0).unwrap();
        assert_eq!(refine_once(&f("x"), &p).unwrap().partition.points(), &[2.0, 3.5, 5.0]);
    }

    #[test]
    fn refine_once_reports_min_width() {
        let a = 1.0f64;
        let p = Partition::new(vec![a, a.next_up()]).unwrap();
        let out = refine_once(&DirichletOracle, &p).unwrap();
        assert!(out.at_min_width && out.inserted.is_none());
        assert_eq!(out.partition, p);
    }

    #[test]
    fn enclose_square_contains_one_third() {
        let enc = enclose(&f("x^2"), unit(), 1e-3, DEFAULT_MAX_STEPS).unwrap();
        assert!(enc.converged);
        assert!(enc.gap() <= 1e-3);
        assert!(enc.lower_integral.lo() <= 1.0 / 3.0 && 1.0 / 3.0 <= enc.upper_integral.hi());
    }

    #[test]
    fn enclose_constant_needs_no_refinement() {
        let dom = Interval::new(-2.0, 3.0).unwrap();
        let enc = enclose(&f("1.5"), dom, DEFAULT_TOL, 10).unwrap();
        assert!(enc.converged);
        assert_eq!(enc.refinement_steps, 0);
        assert_eq!(enc.history.len(), 1);
        assert_eq!(enc.lower_integral, Interval::point(7.5));
    }

    #[test]
    fn enclose_dirichlet_never_converges() {
        let enc = enclose(&DirichletOracle, unit(), 1e-3, 500).unwrap();
        assert!(!enc.converged);
        assert_eq!(enc.refinement_steps, 500);
        assert_eq!(enc.best_lower_sum(), 0.0);
        assert!(enc.best_upper_sum() >= 1.0);
    }

    #[test]
    fn enclose_thomae_closes_its_gap() {
        let enc = enclose(&ThomaeOracle::default(), unit(), 0.05, 20_000).unwrap();
        assert!(enc.converged, "gap {}", enc.gap());
        assert_eq!(enc.best_lower_sum(), 0.0);
    }

    #[test]
    fn enclose_flags_persistent_indeterminacy() {
        let enc = enclose(&f("1/x"), Interval::new(-1.0, 1.0).unwrap(), 1e-3, 10_000).unwrap();
        assert!(!enc.converged);
        assert!(enc.inconclusive);
    }

    #[test]
    fn enclose_rejects_bad_arguments() {
        assert_eq!(enclose(&f("x"), unit(), 0.0, 10), Err(DarbouxError::InvalidTolerance));
        assert_eq!(enclose(&f("x"), unit(), 1e-3, 0), Err(DarbouxError::InvalidBudget));
        assert_eq!(enclose(&f("x"), Interval::point(1.0), 1e-3, 10), Err(DarbouxError::InvalidDomain));
    }

    #[test]
    fn history_is_monotone() {
        let enc = enclose(&f("sin(3*x) + x^2"), Interval::new(-1.0, 2.0).unwrap(), 1e-5, 5000).unwrap();
        for w in enc.history.windows(2) {
            assert!(w[0].lower_sum <= w[1].lower_sum);
            assert!(w[0].upper_sum >= w[1].upper_sum);
        }
    }

    #[test]
    fn step_oracle_bounds() {
        let s = StepOracle::new(vec![0.0, 0.5, 1.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(s.bounds(Interval::new(0.1, 0.2).unwrap()).unwrap(), (2.0, 2.0));
        assert_eq!(s.bounds(Interval::new(0.4, 0.6).unwrap()).unwrap(), (-1.0, 2.0));
        assert!(StepOracle::new(vec![0.0, 1.0], vec![]).is_err());
    }
}
