//! Expression trees for real functions of one variable `x`.
//!
//! Trees are immutable once built. The smart constructors ([`Expr::add`],
//! [`Expr::mul`], ...) fold literal arithmetic, but only when the folded
//! constant is exactly representable, so a folded tree denotes the same
//! function as the unfolded one.

mod diff;
mod eval;
pub mod exemplars;
mod parse;

use alloc::boxed::Box;
use core::fmt;

use crate::interval::round;

pub use eval::EvalError;
pub use parse::{parse, ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i32),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sqrt(Box<Expr>),
    Abs(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `sign(u)` with `sign(0) = 0`; appears in derivatives of `abs`.
    Sign(Box<Expr>),
}

/// Result of `op(a, b)` if it is exactly representable.
fn exact(lo: f64, hi: f64) -> Option<f64> {
    (lo == hi && lo.is_finite()).then_some(lo)
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expr::Const(c) if *c == v)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(v) = exact(round::add_down(x, y), round::add_up(x, y)) {
                return Expr::Const(v);
            }
        }
        if a.is_const(0.0) {
            return b;
        }
        if b.is_const(0.0) {
            return a;
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(v) = exact(round::sub_down(x, y), round::sub_up(x, y)) {
                return Expr::Const(v);
            }
        }
        if b.is_const(0.0) {
            return a;
        }
        if a.is_const(0.0) {
            return Expr::neg(b);
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(v) = exact(round::mul_down(x, y), round::mul_up(x, y)) {
                return Expr::Const(v);
            }
        }
        if a.is_const(0.0) || b.is_const(0.0) {
            return Expr::Const(0.0);
        }
        if a.is_const(1.0) {
            return b;
        }
        if b.is_const(1.0) {
            return a;
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if y != 0.0 {
                if let Some(v) = exact(round::div_down(x, y), round::div_up(x, y)) {
                    return Expr::Const(v);
                }
            }
        }
        if b.is_const(1.0) {
            return a;
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::Const(1.0),
            1 => a,
            _ => Expr::PowInt(Box::new(a), n),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::Sqrt(Box::new(a))
    }

    pub fn abs(a: Expr) -> Expr {
        Expr::Abs(Box::new(a))
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }

    pub fn sign(a: Expr) -> Expr {
        Expr::Sign(Box::new(a))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Expr::Neg(a)
            | Expr::PowInt(a, _)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Sqrt(a)
            | Expr::Abs(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Sign(a) => 1 + a.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::PowInt(..) => 4,
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 0,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() >= min_prec {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

/// Prints in the parser's grammar; `parse(&e.to_string())` rebuilds `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "x"),
            Expr::Add(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " + ")?;
                b.fmt_child(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " - ")?;
                b.fmt_child(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, " * ")?;
                b.fmt_child(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, " / ")?;
                b.fmt_child(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                // "-2" would read back as the literal -2
                if matches!(**a, Expr::Const(_)) {
                    write!(f, "({a})")
                } else {
                    a.fmt_child(f, 3)
                }
            }
            Expr::PowInt(a, n) => {
                a.fmt_child(f, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Sign(a) => write!(f, "sign({a})"),
        }
    }
}

/// A base expression optionally extended by the value 0 at `x = 0`.
///
/// Flat exemplars such as `exp(-1/x)` cannot be evaluated at the origin as
/// trees; with `zero_extend` set the function is `base(x)` for `x != 0` and
/// exactly `0` at `x = 0`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExtendedExpr {
    pub base: Expr,
    pub zero_extend: bool,
}

impl ExtendedExpr {
    pub fn new(base: Expr, zero_extend: bool) -> ExtendedExpr {
        ExtendedExpr { base, zero_extend }
    }

    pub fn plain(base: Expr) -> ExtendedExpr {
        ExtendedExpr { base, zero_extend: false }
    }

    /// Symbolic derivative. The zero-extension flag is carried over, which
    /// is exact for flat functions (every derivative vanishes at 0).
    pub fn derivative(&self) -> ExtendedExpr {
        ExtendedExpr { base: self.base.derivative(), zero_extend: self.zero_extend }
    }

    /// Same function with `abs` applied on top.
    pub fn abs(&self) -> ExtendedExpr {
        ExtendedExpr { base: Expr::abs(self.base.clone()), zero_extend: self.zero_extend }
    }
}

impl From<Expr> for ExtendedExpr {
    fn from(base: Expr) -> Self {
        ExtendedExpr::plain(base)
    }
}

impl fmt::Display for ExtendedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero_extend {
            write!(f, "{} (extended by 0 at x = 0)", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}
