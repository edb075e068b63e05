//! Pointwise complex evaluation.

use num_complex::Complex64;
use thiserror::Error;

use super::expr::{Expr, Func};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainErrorKind {
    DivisionByZero,
    LogOfZero,
    NonFinite,
}

impl std::fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DomainErrorKind::DivisionByZero => "division by zero",
            DomainErrorKind::LogOfZero => "log of zero",
            DomainErrorKind::NonFinite => "non-finite result",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {kind} in `{subexpr}`")]
    Domain {
        kind: DomainErrorKind,
        subexpr: String,
    },
    #[error("point has {got} coordinates, expression needs at least {need}")]
    Arity { got: usize, need: usize },
}

fn domain(kind: DomainErrorKind, e: &Expr) -> EvalError {
    EvalError::Domain {
        kind,
        subexpr: e.to_string(),
    }
}

fn checked(v: Complex64, e: &Expr) -> Result<Complex64, EvalError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(domain(DomainErrorKind::NonFinite, e))
    }
}

fn powi(base: Complex64, n: i32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b *= b;
        k >>= 1;
    }
    if n < 0 {
        acc.inv()
    } else {
        acc
    }
}

fn eval(e: &Expr, z: &[Complex64]) -> Result<Complex64, EvalError> {
    let v = match e {
        Expr::Const(c) => *c,
        Expr::Var(k) => z[*k],
        Expr::Neg(a) => -eval(a, z)?,
        Expr::Add(a, b) => eval(a, z)? + eval(b, z)?,
        Expr::Sub(a, b) => eval(a, z)? - eval(b, z)?,
        Expr::Mul(a, b) => eval(a, z)? * eval(b, z)?,
        Expr::Div(a, b) => {
            let num = eval(a, z)?;
            let den = eval(b, z)?;
            if den.re == 0.0 && den.im == 0.0 {
                return Err(domain(DomainErrorKind::DivisionByZero, e));
            }
            num / den
        }
        Expr::Pow(a, n) => {
            let base = eval(a, z)?;
            if *n < 0 && base.re == 0.0 && base.im == 0.0 {
                return Err(domain(DomainErrorKind::DivisionByZero, e));
            }
            powi(base, *n)
        }
        Expr::Call(Func::Exp, a) => eval(a, z)?.exp(),
        Expr::Call(Func::Log, a) => {
            let arg = eval(a, z)?;
            if arg.re == 0.0 && arg.im == 0.0 {
                return Err(domain(DomainErrorKind::LogOfZero, e));
            }
            arg.ln()
        }
    };
    checked(v, e)
}

/// Evaluates `e` at the point `z` (principal branch for `log`).
pub fn evaluate(e: &Expr, z: &[Complex64]) -> Result<Complex64, EvalError> {
    if let Some(k) = e.max_var() {
        if k >= z.len() {
            return Err(EvalError::Arity {
                got: z.len(),
                need: k + 1,
            });
        }
    }
    eval(e, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use std::f64::consts::PI;

    #[test]
    fn cubic_at_one_plus_i() {
        let e = parse("z1^3/6", 1).unwrap();
        let v = evaluate(&e, &[Complex64::new(1.0, 1.0)]).unwrap();
        assert!((v - Complex64::new(-1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn euler_identity() {
        let e = parse("exp(z1)", 1).unwrap();
        let v = evaluate(&e, &[Complex64::new(0.0, PI)]).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
    }

    #[test]
    fn quarter_turn_quadratic() {
        let e = parse("(i/2)*(z1^2+z2^2)", 2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let v = evaluate(&e, &[one, one]).unwrap();
        assert_eq!(v, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn domain_errors_name_subexpression() {
        let e = parse("log(z1)", 1).unwrap();
        let err = evaluate(&e, &[Complex64::new(0.0, 0.0)]).unwrap_err();
        match err {
            EvalError::Domain { kind, subexpr } => {
                assert_eq!(kind, DomainErrorKind::LogOfZero);
                assert_eq!(subexpr, "log(z1)");
            }
            other => panic!("{other:?}"),
        }
        let e = parse("1/(z1-1)", 1).unwrap();
        let err = evaluate(&e, &[Complex64::new(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, EvalError::Domain { kind: DomainErrorKind::DivisionByZero, .. }));
        let e = parse("z1^-3", 1).unwrap();
        assert!(evaluate(&e, &[Complex64::new(0.0, 0.0)]).is_err());
        let e = parse("exp(z1)", 1).unwrap();
        let err = evaluate(&e, &[Complex64::new(1000.0, 0.0)]).unwrap_err();
        assert!(matches!(err, EvalError::Domain { kind: DomainErrorKind::NonFinite, .. }));
    }

    #[test]
    fn arity_mismatch() {
        let e = parse("z2", 2).unwrap();
        assert!(matches!(
            evaluate(&e, &[Complex64::new(0.0, 0.0)]),
            Err(EvalError::Arity { got: 1, need: 2 })
        ));
    }
}
