//! Closed-form families whose behaviour near `x = 0` is known exactly.
//!
//! Interval arithmetic cannot settle what happens on `(0, ε)` because both
//! sides of the inequalities vanish there. For the families below the
//! ratio `|x f'(x) / f(x)|` and the sign of `|f(x)| - x^n` near 0 have
//! closed forms, which the checkers use for the tail.

use crate::expr::Expr;
use crate::interval::round::{div_down, div_up, mul_down, mul_up};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `f ≡ 0`.
    Zero,
    /// `coef * x^power` with `coef != 0`, `power >= 0`.
    Monomial { coef: f64, power: u32 },
    /// `coef * exp(-rate / x)` with `coef != 0`, `rate > 0`.
    FlatExp { coef: f64, rate: f64 },
}

fn exact_mul(a: f64, b: f64) -> Option<f64> {
    let (lo, hi) = (mul_down(a, b), mul_up(a, b));
    (lo == hi && lo.is_finite()).then_some(lo)
}

fn exact_div(a: f64, b: f64) -> Option<f64> {
    if b == 0.0 {
        return None;
    }
    let (lo, hi) = (div_down(a, b), div_up(a, b));
    (lo == hi && lo.is_finite()).then_some(lo)
}

/// Rate `a > 0` if `e` is `-a/x` written in one of the usual ways.
fn negative_reciprocal(e: &Expr) -> Option<f64> {
    let rate = match e {
        Expr::Div(num, den) if **den == Expr::Var => -num.as_const()?,
        Expr::Neg(inner) => match &**inner {
            Expr::Div(num, den) if **den == Expr::Var => num.as_const()?,
            _ => return None,
        },
        Expr::Mul(c, p) | Expr::Mul(p, c) if **p == Expr::PowInt(alloc::boxed::Box::new(Expr::Var), -1) => {
            -c.as_const()?
        }
        _ => return None,
    };
    (rate > 0.0 && rate.is_finite()).then_some(rate)
}

impl Family {
    pub fn recognize(e: &Expr) -> Option<Family> {
        match e {
            Expr::Const(c) if *c == 0.0 => Some(Family::Zero),
            Expr::Const(c) => Some(Family::Monomial { coef: *c, power: 0 }),
            Expr::Var => Some(Family::Monomial { coef: 1.0, power: 1 }),
            Expr::PowInt(base, n) if **base == Expr::Var && *n >= 0 => {
                Some(Family::Monomial { coef: 1.0, power: *n as u32 })
            }
            Expr::Exp(arg) => negative_reciprocal(arg).map(|rate| Family::FlatExp { coef: 1.0, rate }),
            Expr::Neg(inner) => Family::recognize(inner)?.scaled(-1.0),
            Expr::Mul(a, b) => match (a.as_const(), b.as_const()) {
                (Some(c), _) => Family::recognize(b)?.scaled(c),
                (_, Some(c)) => Family::recognize(a)?.scaled(c),
                _ => None,
            },
            Expr::Div(a, b) => {
                let c = b.as_const()?;
                match Family::recognize(a)? {
                    Family::Zero => Some(Family::Zero),
                    Family::Monomial { coef, power } => {
                        Some(Family::Monomial { coef: exact_div(coef, c)?, power })
                    }
                    Family::FlatExp { coef, rate } => Some(Family::FlatExp { coef: exact_div(coef, c)?, rate }),
                }
            }
            _ => None,
        }
    }

    fn scaled(self, c: f64) -> Option<Family> {
        if c == 0.0 {
            return Some(Family::Zero);
        }
        match self {
            Family::Zero => Some(Family::Zero),
            Family::Monomial { coef, power } => Some(Family::Monomial { coef: exact_mul(coef, c)?, power }),
            Family::FlatExp { coef, rate } => Some(Family::FlatExp { coef: exact_mul(coef, c)?, rate }),
        }
    }

    /// True when every derivative vanishes at 0 and `f(0+) = 0`.
    pub fn is_flat(self) -> bool {
        matches!(self, Family::Zero | Family::FlatExp { .. })
    }
}
