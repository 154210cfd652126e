//! A small language for q-series.
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary)*
//! unary   := '-' unary | factor
//! factor  := base ('^' intAtom)?
//! base    := 'q' ('^' intAtom)? | integer | var | floor | '(' expr ')'
//!          | ('sum'|'prod') '(' var '=' intExpr '..' (intExpr | 'inf') ',' expr ')'
//! intExpr := integer arithmetic with + - * / ^, unary minus, parentheses,
//!            'floor' '(' intExpr ')' and the parity power '(-1)^var'
//! ```
//!
//! Variables are single lowercase letters other than `q`. In series
//! position `/` is series division; between indices it is floor division
//! (toward negative infinity). Inside `floor(...)` the argument is computed
//! exactly over the rationals, so `floor((-1)^k*k/2)` is `-2` at `k = 3`.
//!
//! ```
//! use qzeta_core::dsl::{eval, parse, EvalContext};
//! let e = parse("sum(k=0..inf, q^k*(1+q^(2*k+1))/(1-q^(2*k+1))^2)").unwrap();
//! let s = eval(&e, &EvalContext::new(5)).unwrap();
//! assert_eq!(s.to_string(), "1 + 4q + 6q^2 + 8q^3 + 13q^4 + O(q^5)");
//! ```

mod ast;
mod eval;
mod lexer;
mod parser;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

pub use ast::{Expr, Indexed, IntExpr};
pub use eval::{eval, eval_int, EvalContext, DEFAULT_GUARD};
pub use parser::parse;

use crate::catalog::{timed, VerificationReport};
use crate::series::{equal_up_to, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    Parse { line: usize, col: usize, expected: Vec<String>, found: String },
    /// `line` and `col` are 0 when the variable is missing at evaluation time.
    UnboundVariable { name: char, line: usize, col: usize },
    DivergenceGuard { var: char, index: i64, degree: usize },
    NonUnitConstantTerm(BigInt),
    NegativeQExponent(i64),
    NegativeIntExponent(i64),
    NonIntegralExponent,
    IntegerOverflow,
    DivisionByZero,
    InvalidContext { order: usize, guard: usize },
    Series(SeriesError),
}

impl DslError {
    /// Syntax and scoping problems, as opposed to evaluation failures.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, DslError::Parse { .. } | DslError::UnboundVariable { line: 1.., .. })
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::Parse { line, col, expected, found } => {
                write!(f, "parse error at {line}:{col}: expected {}, found {found}", expected.join(" or "))
            }
            DslError::UnboundVariable { name, line: 0, .. } => write!(f, "unbound variable `{name}`"),
            DslError::UnboundVariable { name, line, col } => write!(f, "unbound variable `{name}` at {line}:{col}"),
            DslError::DivergenceGuard { var, index, degree } => write!(
                f,
                "infinite index `{var}` stopped raising the q-degree (still {degree} at {var} = {index})"
            ),
            DslError::NonUnitConstantTerm(c) => write!(f, "cannot invert a series with constant term {c}"),
            DslError::NegativeQExponent(n) => write!(f, "negative power q^{n}"),
            DslError::NegativeIntExponent(n) => write!(f, "negative integer exponent {n}"),
            DslError::NonIntegralExponent => f.write_str("exponent is not an integer"),
            DslError::IntegerOverflow => f.write_str("integer overflow in index arithmetic"),
            DslError::DivisionByZero => f.write_str("division by zero in index arithmetic"),
            DslError::InvalidContext { order, guard } => {
                write!(f, "order and guard must be at least 1 (got order {order}, guard {guard})")
            }
            DslError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DslError {}

impl From<SeriesError> for DslError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NonUnitConstantTerm(c) => DslError::NonUnitConstantTerm(c),
            e => DslError::Series(e),
        }
    }
}

/// Parses and evaluates both sides and compares them below `q^order`.
pub fn check(lhs: &str, rhs: &str, order: usize) -> Result<VerificationReport, DslError> {
    let (l, r) = (parse(lhs)?, parse(rhs)?);
    let ctx = EvalContext::new(order);
    let (cmp, elapsed) = timed(|| -> Result<_, DslError> {
        let a = eval(&l, &ctx)?;
        let b = eval(&r, &ctx)?;
        Ok(equal_up_to(&a, &b, order)?)
    });
    Ok(VerificationReport::from_comparison(alloc::format!("{lhs} = {rhs}"), order, cmp?, elapsed))
}

pub const CATALOG_IDS: [&str; 7] =
    ["eq13", "eq14", "eq18", "gauss-psi", "ramanujan", "hessami-pilehrood", "sigma-lambert"];

const EQ13_LHS: &str = "sum(k=0..inf, q^k*(1+q^(2*k+1))/(1-q^(2*k+1))^2)";

/// DSL text for both sides of a catalog identity.
pub fn catalog_text(id: &str) -> Option<(&'static str, &'static str)> {
    Some(match id {
        "eq13" => (EQ13_LHS, "prod(n=1..inf, (1-q^(2*n))^4/(1-q^(2*n-1))^4)"),
        "eq14" => (
            "sum(k=0..inf, q^(2*k - floor((-1)^k*k/2))/(1-q^(2*k+1))^2)",
            "prod(n=1..inf, (1-q^(2*n))^2*(1-q^(4*n))^2/((1-q^(2*n-1))^2*(1-q^(4*n-2))^2))",
        ),
        "eq18" => (
            "sum(k=0..inf, q^(2*k)*(1+4*q^(2*k+1)+q^(4*k+2))/(1-q^(2*k+1))^4)",
            "prod(n=1..inf, (1-q^(2*n))^8/(1-q^(2*n-1))^8)",
        ),
        "gauss-psi" => ("sum(n=0..inf, q^(n*(n+1)/2))", "prod(n=1..inf, (1-q^(2*n))/(1-q^(2*n-1)))"),
        "ramanujan" => (
            "sum(k=0..inf, (-1)^k*q^k/(1-q^(2*k+1)))",
            "prod(n=1..inf, (1-q^(4*n))^2/(1-q^(4*n-2))^2)",
        ),
        "hessami-pilehrood" => (
            "sum(n=1..inf, q^(n*n)*(1+2*q^n)*(1-q)^2/(1-q^n)^2/prod(i=1..n, (1-q^(n+i))/(1-q^i)))",
            "sum(n=1..inf, q^n*(1-q)^2/(1-q^n)^2)",
        ),
        "sigma-lambert" => (EQ13_LHS, "sum(k=0..inf, sum(j=0..inf, (2*j+1)*q^(2*j*k+j+k)))"),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    #[test]
    fn shipped_texts_match_builders() {
        for id in CATALOG_IDS {
            let (l, r) = catalog_text(id).unwrap();
            let (l, r) = (parse(l).unwrap(), parse(r).unwrap());
            for order in [1, 2, 7, 40, 120] {
                let (bl, br) = lookup(id).unwrap().build(order).unwrap();
                let ctx = EvalContext::new(order);
                assert_eq!(eval(&l, &ctx).unwrap(), bl, "{id} lhs at {order}");
                assert_eq!(eval(&r, &ctx).unwrap(), br, "{id} rhs at {order}");
            }
        }
    }

    #[test]
    fn check_reports() {
        let eq14 = catalog_text("eq14").unwrap();
        assert!(check(eq14.0, eq14.1, 100).unwrap().is_equal());
        let r = check("q^1", "q^2", 3).unwrap();
        assert_eq!(r.first_mismatch.map(|m| m.index), Some(1));
        let ram = catalog_text("ramanujan").unwrap();
        assert!(check(ram.0, ram.1, 200).unwrap().is_equal());
        assert!(matches!(check("q^", "q", 3), Err(DslError::Parse { .. })));
    }

    #[test]
    fn parse_error_classification() {
        assert!(parse("q^").unwrap_err().is_parse_error());
        assert!(parse("q^k").unwrap_err().is_parse_error());
        assert!(!DslError::DivisionByZero.is_parse_error());
    }
}
