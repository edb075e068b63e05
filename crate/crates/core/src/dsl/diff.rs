//! Symbolic differentiation with respect to a single variable.

use super::expr::{Expr, Func};

/// Returns `∂e/∂z{k+1}` (zero-based `k`). Simplification happens through the
/// smart constructors on [`Expr`] and is best-effort.
pub fn differentiate(e: &Expr, k: usize) -> Expr {
    match e {
        Expr::Const(_) => Expr::real(0.0),
        Expr::Var(j) => Expr::real(if *j == k { 1.0 } else { 0.0 }),
        Expr::Neg(a) => Expr::neg(differentiate(a, k)),
        Expr::Add(a, b) => Expr::add(differentiate(a, k), differentiate(b, k)),
        Expr::Sub(a, b) => Expr::sub(differentiate(a, k), differentiate(b, k)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(differentiate(a, k), (**b).clone()),
            Expr::mul((**a).clone(), differentiate(b, k)),
        ),
        Expr::Div(a, b) => {
            let da = differentiate(a, k);
            let db = differentiate(b, k);
            if db.is_zero() {
                return Expr::div(da, (**b).clone());
            }
            Expr::div(
                Expr::sub(
                    Expr::mul(da, (**b).clone()),
                    Expr::mul((**a).clone(), db),
                ),
                Expr::pow((**b).clone(), 2),
            )
        }
        Expr::Pow(a, n) => {
            let da = differentiate(a, k);
            Expr::mul(
                Expr::mul(Expr::real(*n as f64), Expr::pow((**a).clone(), n - 1)),
                da,
            )
        }
        Expr::Call(Func::Exp, a) => Expr::mul(e.clone(), differentiate(a, k)),
        Expr::Call(Func::Log, a) => Expr::div(differentiate(a, k), (**a).clone()),
    }
}
