//! Expression trees for holomorphic functions of `z1..zm`.

use std::fmt;

use num_complex::Complex64;

/// Unary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

/// Immutable expression tree. Variables are stored zero-based; `Var(0)` prints as `z1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn finite(c: Complex64) -> Option<Complex64> {
    (c.re.is_finite() && c.im.is_finite()).then_some(c)
}

// Smart constructors. Each folds constants and drops neutral elements; a fold
// that would produce a non-finite constant is left unfolded so evaluation can
// report it with context.
impl Expr {
    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(c)
    }

    pub fn real(r: f64) -> Expr {
        Expr::Const(Complex64::new(r, 0.0))
    }

    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(ZERO)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(ONE)
    }

    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(c) = finite(x + y) {
                return Expr::Const(c);
            }
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(c) = finite(x - y) {
                return Expr::Const(c);
            }
        }
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Some(c) = finite(x * y) {
                return Expr::Const(c);
            }
        }
        if a.is_zero() || b.is_zero() {
            return Expr::Const(ZERO);
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if y != ZERO {
                if let Some(c) = finite(x / y) {
                    return Expr::Const(c);
                }
            }
        }
        if b.is_one() {
            return a;
        }
        if a.is_zero() && !b.is_zero() {
            return Expr::Const(ZERO);
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, exponent: i32) -> Expr {
        match exponent {
            0 => return Expr::Const(ONE),
            1 => return base,
            _ => {}
        }
        if let Some(c) = base.as_const() {
            if c != ZERO || exponent > 0 {
                if let Some(v) = finite(c.powi(exponent)) {
                    return Expr::Const(v);
                }
            }
        }
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        if let (Func::Exp, Some(c)) = (func, arg.as_const()) {
            if let Some(v) = finite(c.exp()) {
                return Expr::Const(v);
            }
        }
        Expr::Call(func, Box::new(arg))
    }

    /// Largest variable index (zero-based) that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(k) => Some(*k),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.max_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => 1 + e.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, r: f64) -> fmt::Result {
    // `Display` for f64 is the shortest exact representation without exponent,
    // which the tokenizer accepts.
    if r < 0.0 || (r == 0.0 && r.is_sign_negative()) {
        write!(f, "-{}", -r)
    } else {
        write!(f, "{r}")
    }
}

/// Fully parenthesized output that re-parses to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                f.write_str("(")?;
                if c.im == 0.0 {
                    write_real(f, c.re)?;
                } else if c.re == 0.0 {
                    write_real(f, c.im)?;
                    f.write_str("*i")?;
                } else {
                    write_real(f, c.re)?;
                    if c.im < 0.0 {
                        write!(f, "-{}*i", -c.im)?;
                    } else {
                        write!(f, "+{}*i", c.im)?;
                    }
                }
                f.write_str(")")
            }
            Expr::Var(k) => write!(f, "z{}", k + 1),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(e, n) => {
                if *n < 0 {
                    write!(f, "({e}^(-{}))", n.unsigned_abs())
                } else {
                    write!(f, "({e}^{n})")
                }
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}
