//! A parsed prepotential together with its cached symbolic derivatives.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::diff::differentiate;
use super::eval::{evaluate, EvalError};
use super::expr::Expr;
use super::parser::{parse, ParseError};

/// Value and derivatives through third order of a holomorphic function at a
/// point, optionally with fourth derivatives. Arrays are dense row-major and
/// symmetric by construction: each distinct multi-index is evaluated once and
/// mirrored into every permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloJet {
    m: usize,
    pub value: Complex64,
    pub grad: Vec<Complex64>,
    pub hess: Vec<Complex64>,
    pub third: Vec<Complex64>,
    pub fourth: Option<Vec<Complex64>>,
}

impl HoloJet {
    pub fn arity(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn d1(&self, i: usize) -> Complex64 {
        self.grad[i]
    }

    #[inline]
    pub fn d2(&self, i: usize, j: usize) -> Complex64 {
        self.hess[i * self.m + j]
    }

    #[inline]
    pub fn d3(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.third[(i * self.m + j) * self.m + k]
    }

    /// Fourth derivative, if the jet was built with them.
    #[inline]
    pub fn d4(&self, i: usize, j: usize, k: usize, l: usize) -> Option<Complex64> {
        let m = self.m;
        self.fourth
            .as_ref()
            .map(|f| f[((i * m + j) * m + k) * m + l])
    }
}

/// Nondecreasing multi-indices of the given order over `0..m`.
fn multi_indices(m: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(order);
    fn rec(m: usize, order: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == order {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, order, i, cur, out);
            cur.pop();
        }
    }
    rec(m, order, 0, &mut cur, &mut out);
    out
}

/// Every permutation of `idx` as a flat row-major offset into an `m^len` array.
fn mirrored_offsets(idx: &[usize], m: usize) -> Vec<usize> {
    fn perms(rest: &mut Vec<usize>, acc: &mut Vec<usize>, m: usize, out: &mut Vec<usize>) {
        if rest.is_empty() {
            out.push(acc.iter().fold(0, |off, &i| off * m + i));
            return;
        }
        for pos in 0..rest.len() {
            let v = rest.remove(pos);
            acc.push(v);
            perms(rest, acc, m, out);
            acc.pop();
            rest.insert(pos, v);
        }
    }
    let mut out = Vec::new();
    perms(&mut idx.to_vec(), &mut Vec::new(), m, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

type DerivTable = Vec<(Vec<usize>, Expr)>;

fn next_order(prev: &DerivTable, m: usize) -> DerivTable {
    let lookup: BTreeMap<&[usize], &Expr> =
        prev.iter().map(|(k, e)| (k.as_slice(), e)).collect();
    let order = prev.first().map_or(1, |(k, _)| k.len() + 1);
    multi_indices(m, order)
        .into_iter()
        .map(|idx| {
            let (head, last) = idx.split_at(order - 1);
            let d = differentiate(lookup[head], last[0]);
            (idx, d)
        })
        .collect()
}

/// A holomorphic prepotential `F(z1..zm)` with symbolic derivatives cached per
/// multi-index. Orders 1–3 are built eagerly; order 4 on first use.
#[derive(Debug)]
pub struct Prepotential {
    m: usize,
    source: String,
    expr: Expr,
    orders: [DerivTable; 3],
    fourth: OnceLock<DerivTable>,
}

impl Clone for Prepotential {
    fn clone(&self) -> Self {
        Prepotential::from_expr(self.expr.clone(), self.m, self.source.clone())
    }
}

impl Prepotential {
    pub fn parse(text: &str, m: usize) -> Result<Self, ParseError> {
        let expr = parse(text, m)?;
        Ok(Self::from_expr(expr, m, text.to_owned()))
    }

    pub fn from_expr(expr: Expr, m: usize, source: String) -> Self {
        assert!(m >= 1, "arity must be at least 1");
        let first: DerivTable = (0..m).map(|i| (vec![i], differentiate(&expr, i))).collect();
        let second = next_order(&first, m);
        let third = next_order(&second, m);
        Prepotential {
            m,
            source,
            expr,
            orders: [first, second, third],
            fourth: OnceLock::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// Symbolic `∂^{|idx|} F / ∂z^idx` for orders 1 through 4.
    pub fn derivative(&self, idx: &[usize]) -> Option<&Expr> {
        let mut key = idx.to_vec();
        key.sort_unstable();
        let table = match key.len() {
            1..=3 => &self.orders[key.len() - 1],
            4 => self.fourth_table(),
            _ => return None,
        };
        table.iter().find(|(k, _)| *k == key).map(|(_, e)| e)
    }

    fn fourth_table(&self) -> &DerivTable {
        self.fourth.get_or_init(|| next_order(&self.orders[2], self.m))
    }

    pub fn value(&self, z: &[Complex64]) -> Result<Complex64, EvalError> {
        evaluate(&self.expr, z)
    }

    fn fill(&self, table: &DerivTable, z: &[Complex64], len: usize) -> Result<Vec<Complex64>, EvalError> {
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (idx, e) in table {
            let v = evaluate(e, z)?;
            for off in mirrored_offsets(idx, self.m) {
                out[off] = v;
            }
        }
        Ok(out)
    }

    /// Gradient and Hessian only; enough for the flat coordinates and the
    /// potential's one-form.
    pub fn gradient_hessian(&self, z: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>), EvalError> {
        let m = self.m;
        Ok((self.fill(&self.orders[0], z, m)?, self.fill(&self.orders[1], z, m * m)?))
    }

    pub fn jet(&self, z: &[Complex64]) -> Result<HoloJet, EvalError> {
        let m = self.m;
        Ok(HoloJet {
            m,
            value: self.value(z)?,
            grad: self.fill(&self.orders[0], z, m)?,
            hess: self.fill(&self.orders[1], z, m * m)?,
            third: self.fill(&self.orders[2], z, m * m * m)?,
            fourth: None,
        })
    }

    pub fn jet_with_fourth(&self, z: &[Complex64]) -> Result<HoloJet, EvalError> {
        let mut jet = self.jet(z)?;
        let m = self.m;
        jet.fourth = Some(self.fill(self.fourth_table(), z, m * m * m * m)?);
        Ok(jet)
    }

    /// True when every third derivative simplifies to the constant zero, so the
    /// Hessian is constant.
    pub fn is_quadratic(&self) -> bool {
        self.orders[2].iter().all(|(_, e)| e.is_zero())
    }
}
