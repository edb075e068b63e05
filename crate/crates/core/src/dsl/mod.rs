//! Prepotential expression language: parsing, symbolic differentiation and
//! complex evaluation.

mod diff;
mod eval;
mod expr;
mod parser;
mod prepotential;

pub use diff::differentiate;
pub use eval::{evaluate, DomainErrorKind, EvalError};
pub use expr::{Expr, Func};
pub use parser::{parse, ParseError, ParseErrorKind};
pub use prepotential::{HoloJet, Prepotential};
