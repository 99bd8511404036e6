//! Directed rounding on top of round-to-nearest hardware arithmetic.
//!
//! Every primitive computes the nearest result, recovers the sign of the
//! rounding error with an error-free transform (TwoSum or an FMA residual),
//! and only then steps one ulp in the requested direction. Exact results stay
//! exact, which keeps dyadic computations such as `[1,2] + [3,4]` tight.

/// Magnitude below which product/quotient residuals may be polluted by
/// underflow; results there are nudged unconditionally.
const RESIDUAL_SAFE: f64 = 1.0e-290;

#[inline]
fn sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    let aa = s - bb;
    (a - aa) + (b - bb)
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_infinite() {
        if a.is_finite() && b.is_finite() && s > 0.0 {
            return f64::MAX;
        }
        return s;
    }
    if s.is_nan() {
        return s;
    }
    if sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Sign of `a*b - p` where `p` is the rounded product, or `None` when the
/// residual cannot be trusted.
fn mul_residual_sign(a: f64, b: f64, p: f64) -> Option<f64> {
    if p.abs() < RESIDUAL_SAFE || !p.is_finite() {
        return None;
    }
    Some(libm::fma(a, b, -p))
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    match mul_residual_sign(a, b, p) {
        Some(r) if r >= 0.0 => p,
        Some(_) => p.next_down(),
        None => p.next_down(),
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        if a.is_finite() && b.is_finite() && b != 0.0 && q > 0.0 {
            return f64::MAX;
        }
        return q;
    }
    if q == 0.0 {
        // underflow or finite / infinite
        if b.is_infinite() {
            return 0.0;
        }
        return if (a > 0.0) == (b > 0.0) { 0.0 } else { -f64::MIN_POSITIVE * f64::EPSILON };
    }
    if q.abs() < RESIDUAL_SAFE || b.abs() < RESIDUAL_SAFE || !b.is_finite() {
        return q.next_down();
    }
    // a - q*b exactly; true quotient = q + r/b
    let r = libm::fma(-q, b, a);
    let sign = r * b.signum();
    if sign < 0.0 {
        q.next_down()
    } else {
        q
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

pub fn sqrt_down(x: f64) -> f64 {
    let s = libm::sqrt(x);
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    // sqrt is correctly rounded; residual x - s*s tells the direction
    if libm::fma(-s, s, x) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn sqrt_up(x: f64) -> f64 {
    let s = libm::sqrt(x);
    if !s.is_finite() {
        return s;
    }
    if x > 0.0 && s == 0.0 {
        return f64::MIN_POSITIVE;
    }
    if libm::fma(-s, s, x) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Sum of many terms with a single directed rounding at the end.
///
/// The running sum is kept as an unevaluated pair `s + err`, where `s`
/// collects the nearest sums and the exact TwoSum residuals are added into
/// `err_lo`/`err_hi` with directed rounding. Rounding drift therefore does
/// not grow with the number of terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    s: f64,
    err_lo: f64,
    err_hi: f64,
}

impl CompensatedSum {
    pub fn new() -> CompensatedSum {
        CompensatedSum::default()
    }

    pub fn push(&mut self, x: f64) {
        let s = self.s + x;
        if s.is_finite() {
            let e = sum_err(self.s, x, s);
            self.err_lo = add_down(self.err_lo, e);
            self.err_hi = add_up(self.err_hi, e);
        }
        self.s = s;
    }

    /// Lower bound of the exact sum of the pushed terms.
    pub fn down(&self) -> f64 {
        if self.s.is_finite() {
            add_down(self.s, self.err_lo)
        } else {
            self.s
        }
    }

    /// Upper bound of the exact sum of the pushed terms.
    pub fn up(&self) -> f64 {
        if self.s.is_finite() {
            add_up(self.s, self.err_hi)
        } else {
            self.s
        }
    }
}

/// Steps `x` down by `n` ulps (infinities and NaN unchanged).
pub fn nudge_down(mut x: f64, n: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

/// Steps `x` up by `n` ulps (infinities and NaN unchanged).
pub fn nudge_up(mut x: f64, n: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// `x^n` rounded down for `x >= 0`.
pub fn powi_nonneg_down(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc = mul_down(acc, x);
    }
    acc
}

/// `x^n` rounded up for `x >= 0`.
pub fn powi_nonneg_up(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc = mul_up(acc, x);
    }
    acc
}
