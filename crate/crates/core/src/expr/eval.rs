use thiserror::Error;

use super::{Expr, ExtendedExpr};
use crate::interval::{Interval, IntervalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum EvalError {
    /// A zero-containing denominator was met; subdividing may help.
    #[error("indeterminate: division by an interval containing zero")]
    Indeterminate,
    #[error("domain error in {0}")]
    Domain(&'static str),
    #[error("division by zero")]
    DivisionByZero,
}

impl From<IntervalError> for EvalError {
    fn from(e: IntervalError) -> Self {
        match e {
            IntervalError::Indeterminate => EvalError::Indeterminate,
            IntervalError::Domain(what) => EvalError::Domain(what),
        }
    }
}

impl Expr {
    /// Plain round-to-nearest evaluation.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(x)? / d
            }
            Expr::Neg(a) => -a.eval(x)?,
            Expr::PowInt(a, n) => {
                let base = a.eval(x)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                libm::pow(base, *n as f64)
            }
            Expr::Exp(a) => libm::exp(a.eval(x)?),
            Expr::Log(a) => {
                let v = a.eval(x)?;
                if v <= 0.0 {
                    return Err(EvalError::Domain("log"));
                }
                libm::log(v)
            }
            Expr::Sqrt(a) => {
                let v = a.eval(x)?;
                if v < 0.0 {
                    return Err(EvalError::Domain("sqrt"));
                }
                libm::sqrt(v)
            }
            Expr::Abs(a) => a.eval(x)?.abs(),
            Expr::Sin(a) => libm::sin(a.eval(x)?),
            Expr::Cos(a) => libm::cos(a.eval(x)?),
            Expr::Sign(a) => {
                let v = a.eval(x)?;
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        };
        if v.is_nan() {
            return Err(EvalError::Domain("nan"));
        }
        Ok(v)
    }

    /// Sound enclosure of the image of `x` under the expression.
    pub fn eval_interval(&self, x: Interval) -> Result<Interval, EvalError> {
        Ok(match self {
            Expr::Const(c) => Interval::point(*c),
            Expr::Var => x,
            Expr::Add(a, b) => a.eval_interval(x)? + b.eval_interval(x)?,
            Expr::Sub(a, b) => a.eval_interval(x)? - b.eval_interval(x)?,
            Expr::Mul(a, b) => a.eval_interval(x)? * b.eval_interval(x)?,
            Expr::Div(a, b) => a.eval_interval(x)?.div(b.eval_interval(x)?)?,
            Expr::Neg(a) => -a.eval_interval(x)?,
            Expr::PowInt(a, n) => a.eval_interval(x)?.powi(*n)?,
            Expr::Exp(a) => a.eval_interval(x)?.exp(),
            Expr::Log(a) => a.eval_interval(x)?.ln()?,
            Expr::Sqrt(a) => a.eval_interval(x)?.sqrt()?,
            Expr::Abs(a) => a.eval_interval(x)?.abs(),
            Expr::Sin(a) => a.eval_interval(x)?.sin(),
            Expr::Cos(a) => a.eval_interval(x)?.cos(),
            Expr::Sign(a) => a.eval_interval(x)?.sign(),
        })
    }
}

impl ExtendedExpr {
    pub fn eval_point(&self, x: f64) -> Result<f64, EvalError> {
        if self.zero_extend && x == 0.0 {
            return Ok(0.0);
        }
        self.base.eval(x)
    }

    /// Interval evaluation. With zero-extension and `0 ∈ x`, the image is
    /// the hull of `{0}` and the base image over `x` with `(-tiny, tiny)`
    /// removed, `tiny` being the smallest positive normal number.
    pub fn eval_interval(&self, x: Interval) -> Result<Interval, EvalError> {
        if x.is_empty() {
            return Ok(x);
        }
        if !self.zero_extend || !x.contains_zero() {
            return self.base.eval_interval(x);
        }
        let tiny = f64::MIN_POSITIVE;
        let mut acc = Interval::ZERO;
        if x.hi() > 0.0 {
            let lo = tiny.min(x.hi());
            acc = acc.hull(self.base.eval_interval(Interval::new(lo, x.hi()).unwrap())?);
        }
        if x.lo() < 0.0 {
            let hi = (-tiny).max(x.lo());
            acc = acc.hull(self.base.eval_interval(Interval::new(x.lo(), hi).unwrap())?);
        }
        Ok(acc)
    }
}
