use super::Expr;

impl Expr {
    /// Exact symbolic derivative with respect to `x`.
    ///
    /// `abs(u)` differentiates to `sign(u) * u'`, so the derivative evaluates
    /// to 0 wherever `u = 0`.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Add(a, b) => Expr::add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => Expr::sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => match (a.as_const(), b.as_const()) {
                (Some(_), _) => Expr::mul((**a).clone(), b.derivative()),
                (_, Some(_)) => Expr::mul(a.derivative(), (**b).clone()),
                _ => Expr::add(
                    Expr::mul(a.derivative(), (**b).clone()),
                    Expr::mul((**a).clone(), b.derivative()),
                ),
            },
            Expr::Div(a, b) => {
                if b.as_const().is_some() {
                    return Expr::div(a.derivative(), (**b).clone());
                }
                let db = b.derivative();
                let denom = Expr::powi((**b).clone(), 2);
                if a.as_const().is_some() {
                    // (c/v)' = -c v' / v^2
                    return Expr::div(Expr::neg(Expr::mul((**a).clone(), db)), denom);
                }
                Expr::div(
                    Expr::sub(Expr::mul(a.derivative(), (**b).clone()), Expr::mul((**a).clone(), db)),
                    denom,
                )
            }
            Expr::Neg(a) => Expr::neg(a.derivative()),
            Expr::PowInt(a, n) => {
                let n = *n;
                Expr::mul(
                    Expr::mul(Expr::Const(n as f64), Expr::powi((**a).clone(), n - 1)),
                    a.derivative(),
                )
            }
            Expr::Exp(a) => Expr::mul(self.clone(), a.derivative()),
            Expr::Log(a) => Expr::div(a.derivative(), (**a).clone()),
            Expr::Sqrt(a) => Expr::div(a.derivative(), Expr::mul(Expr::Const(2.0), self.clone())),
            Expr::Abs(a) => Expr::mul(Expr::sign((**a).clone()), a.derivative()),
            Expr::Sin(a) => Expr::mul(Expr::cos((**a).clone()), a.derivative()),
            Expr::Cos(a) => Expr::neg(Expr::mul(Expr::sin((**a).clone()), a.derivative())),
            // zero wherever it is differentiable
            Expr::Sign(_) => Expr::Const(0.0),
        }
    }
}
