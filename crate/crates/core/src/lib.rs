//! Validated numerics for lower and upper Darboux integrals.
//!
//! * [`interval`]: outward-rounded interval arithmetic.
//! * [`expr`]: expression trees with parsing, symbolic derivatives and
//!   interval evaluation.
//! * [`darboux`]: partitions, range oracles, directed-rounded lower/upper
//!   sums and adaptive certified enclosures.
//! * [`volterra`]: the sandwich `lower ∫ h <= H(b) - H(a) <= upper ∫ h` for
//!   bounded derivatives, and FTC reconstruction when the derivative is
//!   integrable.
//! * [`flatness`]: checkers for the flat-function conditions
//!   `f(0) = 0`, `|f(x)| < x^n` near 0 and `|x f'(x)| <= C |f(x)|`, the
//!   `E_n` root locator and the step-by-step chain evaluator.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

extern crate alloc;

pub mod darboux;
pub mod expr;
pub mod flatness;
pub mod interval;
pub mod volterra;

pub use darboux::{DarbouxEnclosure, Partition, RangeOracle};
pub use expr::{parse, Expr, ExtendedExpr};
pub use interval::Interval;
