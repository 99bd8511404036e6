//! Closed real intervals with outward-rounded endpoints.
//!
//! `lo` may be `-inf` and `hi` may be `+inf`; an empty interval is the
//! distinct [`Interval::EMPTY`] value. Every operation returns an interval
//! containing the exact real image of its operands.

pub mod round;

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use round::*;

/// Error budget, in ulps, applied to endpoints produced by `libm`
/// transcendentals that are not guaranteed to be correctly rounded.
pub const TRANSCENDENTAL_ULPS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum IntervalError {
    /// Division by an interval containing zero; the caller should subdivide.
    #[error("indeterminate: division by an interval containing zero")]
    Indeterminate,
    #[error("domain error in {0}")]
    Domain(&'static str),
}

#[derive(Clone, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        (self.is_empty() && other.is_empty()) || (self.lo == other.lo && self.hi == other.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{:e}, {:e}]", self.lo, self.hi)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Monotone transcendental and algebraic functions with interval images.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneFn {
    Exp,
    Log,
    Sqrt,
    Abs,
    Pow(i32),
    Sin,
    Cos,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: f64::NAN, hi: f64::NAN };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`. Returns `None` for `lo > hi`, NaN endpoints,
    /// `lo = +inf` or `hi = -inf`.
    pub fn new(lo: f64, hi: f64) -> Option<Interval> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return None;
        }
        Some(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]` for finite `x`.
    pub fn point(x: f64) -> Interval {
        assert!(x.is_finite(), "point interval needs a finite value, got {x}");
        Interval { lo: x, hi: x }
    }

    // Endpoints are already ordered; used by the arithmetic below.
    fn raw(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi, "raw interval misordered: {lo} > {hi}");
        Interval { lo, hi }
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn is_empty(self) -> bool {
        self.lo.is_nan()
    }

    pub fn is_bounded(self) -> bool {
        !self.is_empty() && self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(self, x: f64) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset(self, other: Interval) -> bool {
        self.is_empty() || (!other.is_empty() && other.lo <= self.lo && self.hi <= other.hi)
    }

    /// Width rounded upward.
    pub fn width(self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        sub_up(self.hi, self.lo)
    }

    /// A point inside the interval (not rounded; only used for splitting).
    pub fn mid(self) -> f64 {
        if self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY {
            return 0.0;
        }
        if self.lo == f64::NEG_INFINITY {
            return if self.hi > 0.0 { 0.0 } else { -f64::MAX };
        }
        if self.hi == f64::INFINITY {
            return if self.lo < 0.0 { 0.0 } else { f64::MAX };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value in the interval.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn hull(self, other: Interval) -> Interval {
        if self.is_empty() {
            return other;
        }
        if other.is_empty() {
            return self;
        }
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn intersect(self, other: Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Interval::EMPTY;
        }
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            Interval::EMPTY
        } else {
            Interval::raw(lo, hi)
        }
    }

    /// Splits at the midpoint. `None` when no representable point lies
    /// strictly inside.
    pub fn bisect(self) -> Option<(Interval, Interval)> {
        let m = self.mid();
        if !(self.lo < m && m < self.hi) {
            return None;
        }
        Some((Interval::raw(self.lo, m), Interval::raw(m, self.hi)))
    }

    /// Widens both endpoints outward by `n` ulps.
    pub fn inflate_ulps(self, n: u32) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::raw(nudge_down(self.lo, n), nudge_up(self.hi, n))
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if self.is_empty() || rhs.is_empty() {
            return Ok(Interval::EMPTY);
        }
        if rhs.contains_zero() {
            return Err(IntervalError::Indeterminate);
        }
        if self == Interval::ZERO {
            return Ok(Interval::ZERO);
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Interval::raw(min4(cands_lo), max4(cands_hi)))
    }

    pub fn recip(self) -> Result<Interval, IntervalError> {
        Interval::ONE.div(self)
    }

    pub fn abs(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval::raw(0.0, (-self.lo).max(self.hi))
        }
    }

    /// Image of the sign function, with `sign(0) = 0`.
    pub fn sign(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let lo = if self.lo > 0.0 {
            1.0
        } else if self.lo == 0.0 {
            0.0
        } else {
            -1.0
        };
        let hi = if self.hi < 0.0 {
            -1.0
        } else if self.hi == 0.0 {
            0.0
        } else {
            1.0
        };
        Interval::raw(lo, hi)
    }

    pub fn powi(self, n: i32) -> Result<Interval, IntervalError> {
        if self.is_empty() {
            return Ok(self);
        }
        if n == 0 {
            return Ok(Interval::ONE);
        }
        let k = n.unsigned_abs();
        let pos = if k.is_multiple_of(2) {
            let a = self.abs();
            Interval::raw(powi_nonneg_down(a.lo, k), powi_nonneg_up(a.hi, k))
        } else {
            // odd power is increasing
            let lo = if self.lo >= 0.0 {
                powi_nonneg_down(self.lo, k)
            } else {
                -powi_nonneg_up(-self.lo, k)
            };
            let hi = if self.hi >= 0.0 {
                powi_nonneg_up(self.hi, k)
            } else {
                -powi_nonneg_down(-self.hi, k)
            };
            Interval::raw(lo, hi)
        };
        if n > 0 {
            Ok(pos)
        } else {
            pos.recip()
        }
    }

    pub fn exp(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        let lo = nudge_down(libm::exp(self.lo), TRANSCENDENTAL_ULPS).max(0.0);
        let hi = nudge_up(libm::exp(self.hi), TRANSCENDENTAL_ULPS);
        Interval::raw(lo, hi)
    }

    pub fn ln(self) -> Result<Interval, IntervalError> {
        if self.is_empty() {
            return Ok(self);
        }
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain("log"));
        }
        let lo = nudge_down(libm::log(self.lo), TRANSCENDENTAL_ULPS);
        let hi = nudge_up(libm::log(self.hi), TRANSCENDENTAL_ULPS);
        Ok(Interval::raw(lo, hi))
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.is_empty() {
            return Ok(self);
        }
        if self.lo < 0.0 {
            return Err(IntervalError::Domain("sqrt"));
        }
        Ok(Interval::raw(sqrt_down(self.lo).max(0.0), sqrt_up(self.hi)))
    }

    pub fn sin(self) -> Interval {
        // sin(x) = cos(x - pi/2); reuse the cosine extremum search with a
        // shifted phase so no rounded subtraction enters the endpoint values.
        self.periodic_image(libm::sin, 0.25)
    }

    pub fn cos(self) -> Interval {
        self.periodic_image(libm::cos, 0.0)
    }

    /// Image of a unit-amplitude sinusoid whose maxima sit at
    /// `2*pi*(k + phase)` and minima half a period later.
    fn periodic_image(self, func: fn(f64) -> f64, phase: f64) -> Interval {
        if self.is_empty() {
            return self;
        }
        const FULL: Interval = Interval { lo: -1.0, hi: 1.0 };
        // beyond this the reduction by 2*pi below loses the needed accuracy
        const REDUCTION_LIMIT: f64 = 1.0e6;
        if self.mag() > REDUCTION_LIMIT || self.width() >= 2.0 * core::f64::consts::PI {
            return FULL;
        }
        // positions measured in periods; slack absorbs the rounding of the
        // division and of the constant pi, and only ever widens the result
        const SLACK: f64 = 1.0e-9;
        let tau = 2.0 * core::f64::consts::PI;
        let a = self.lo / tau - phase - SLACK;
        let b = self.hi / tau - phase + SLACK;
        let has_max = libm::ceil(a) <= libm::floor(b);
        let has_min = libm::ceil(a - 0.5) <= libm::floor(b - 0.5);
        let fl = func(self.lo);
        let fh = func(self.hi);
        let lo = if has_min {
            -1.0
        } else {
            nudge_down(fl.min(fh), TRANSCENDENTAL_ULPS).max(-1.0)
        };
        let hi = if has_max {
            1.0
        } else {
            nudge_up(fl.max(fh), TRANSCENDENTAL_ULPS).min(1.0)
        };
        Interval::raw(lo, hi)
    }

    /// Dispatches one of the named unary functions.
    pub fn apply(self, func: MonotoneFn) -> Result<Interval, IntervalError> {
        match func {
            MonotoneFn::Exp => Ok(self.exp()),
            MonotoneFn::Log => self.ln(),
            MonotoneFn::Sqrt => self.sqrt(),
            MonotoneFn::Abs => Ok(self.abs()),
            MonotoneFn::Pow(n) => self.powi(n),
            MonotoneFn::Sin => Ok(self.sin()),
            MonotoneFn::Cos => Ok(self.cos()),
        }
    }
}

fn min4(v: [f64; 4]) -> f64 {
    v[0].min(v[1]).min(v[2]).min(v[3])
}

fn max4(v: [f64; 4]) -> f64 {
    v[0].max(v[1]).max(v[2]).max(v[3])
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        if self == Interval::ZERO || rhs == Interval::ZERO {
            return Interval::ZERO;
        }
        // mul_down/mul_up treat 0 * inf as 0
        let lo = min4([
            mul_down(self.lo, rhs.lo),
            mul_down(self.lo, rhs.hi),
            mul_down(self.hi, rhs.lo),
            mul_down(self.hi, rhs.hi),
        ]);
        let hi = max4([
            mul_up(self.lo, rhs.lo),
            mul_up(self.lo, rhs.hi),
            mul_up(self.hi, rhs.lo),
            mul_up(self.hi, rhs.hi),
        ]);
        Interval::raw(lo, hi)
    }
}
