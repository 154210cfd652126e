use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::{Expr, Indexed, IntExpr};
use super::DslError;
use crate::series::PowerSeries;

pub const DEFAULT_GUARD: usize = 64;

// rationals inside floor(...) are rejected past this size
const MAX_RATIONAL_BITS: u64 = 256;

/// Target order `N` and divergence guard `G` for [`eval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalContext {
    pub order: usize,
    /// Consecutive terms of an infinite sum or product allowed without
    /// raising the largest q-degree seen so far.
    pub guard: usize,
}

impl EvalContext {
    pub fn new(order: usize) -> Self {
        EvalContext { order, guard: DEFAULT_GUARD }
    }

    pub fn with_guard(self, guard: usize) -> Self {
        EvalContext { guard, ..self }
    }
}

/// Evaluates `expr` to a power series truncated at `ctx.order`.
///
/// Infinite sums stop after `G` consecutive terms vanishing mod `q^N`;
/// infinite products after `G` consecutive factors that are `1 mod q^N`.
pub fn eval(expr: &Expr, ctx: &EvalContext) -> Result<PowerSeries, DslError> {
    if ctx.order == 0 || ctx.guard == 0 {
        return Err(DslError::InvalidContext { order: ctx.order, guard: ctx.guard });
    }
    let mut ev = Evaluator { guard: ctx.guard, env: Vec::new() };
    ev.series(expr, ctx.order)
}

/// Evaluates an integer expression with the given bindings.
pub fn eval_int(expr: &IntExpr, env: &[(char, i64)]) -> Result<i64, DslError> {
    Evaluator { guard: DEFAULT_GUARD, env: env.to_vec() }.int(expr)
}

struct Evaluator {
    guard: usize,
    env: Vec<(char, i64)>,
}

fn floor_div(a: i64, b: i64) -> Result<i64, DslError> {
    if b == 0 {
        return Err(DslError::DivisionByZero);
    }
    a.checked_div(b).ok_or(DslError::IntegerOverflow)?;
    Ok(Integer::div_floor(&a, &b))
}

fn to_u32(n: i64) -> Result<u32, DslError> {
    u32::try_from(n).map_err(|_| DslError::IntegerOverflow)
}

fn bounded(r: BigRational) -> Result<BigRational, DslError> {
    if r.numer().bits() > MAX_RATIONAL_BITS || r.denom().bits() > MAX_RATIONAL_BITS {
        Err(DslError::IntegerOverflow)
    } else {
        Ok(r)
    }
}

// tracks the largest q-degree seen across the terms of an infinite sum/product
struct Progress {
    best: Option<usize>,
    stale: usize,
    vanished: usize,
    guard: usize,
}

enum Step {
    Continue,
    Done,
}

impl Progress {
    fn new(guard: usize) -> Self {
        Progress { best: None, stale: 0, vanished: 0, guard }
    }

    /// `degree` is `None` when the term vanishes mod `q^N`.
    fn observe(&mut self, var: char, index: i64, degree: Option<usize>) -> Result<Step, DslError> {
        match degree {
            None => {
                self.vanished += 1;
                if self.vanished >= self.guard {
                    return Ok(Step::Done);
                }
            }
            Some(d) => {
                self.vanished = 0;
                if self.best.is_none_or(|b| d > b) {
                    self.best = Some(d);
                    self.stale = 0;
                } else {
                    self.stale += 1;
                    if self.stale >= self.guard {
                        return Err(DslError::DivergenceGuard { var, index, degree: d });
                    }
                }
            }
        }
        Ok(Step::Continue)
    }
}

impl Evaluator {
    fn lookup(&self, v: char) -> Result<i64, DslError> {
        self.env
            .iter()
            .rev()
            .find(|(name, _)| *name == v)
            .map(|&(_, x)| x)
            .ok_or(DslError::UnboundVariable { name: v, line: 0, col: 0 })
    }

    fn int(&self, e: &IntExpr) -> Result<i64, DslError> {
        use IntExpr::*;
        let bin = |a: &IntExpr, b: &IntExpr| -> Result<(i64, i64), DslError> { Ok((self.int(a)?, self.int(b)?)) };
        match e {
            Lit(n) => Ok(*n),
            Var(v) => self.lookup(*v),
            Neg(a) => self.int(a)?.checked_neg().ok_or(DslError::IntegerOverflow),
            Add(a, b) => {
                let (x, y) = bin(a, b)?;
                x.checked_add(y).ok_or(DslError::IntegerOverflow)
            }
            Sub(a, b) => {
                let (x, y) = bin(a, b)?;
                x.checked_sub(y).ok_or(DslError::IntegerOverflow)
            }
            Mul(a, b) => {
                let (x, y) = bin(a, b)?;
                x.checked_mul(y).ok_or(DslError::IntegerOverflow)
            }
            Div(a, b) => {
                let (x, y) = bin(a, b)?;
                floor_div(x, y)
            }
            Pow(a, b) => {
                let (x, y) = bin(a, b)?;
                if y < 0 {
                    return Err(DslError::NegativeIntExponent(y));
                }
                x.checked_pow(to_u32(y)?).ok_or(DslError::IntegerOverflow)
            }
            Parity(v) => Ok(if self.lookup(*v)? % 2 == 0 { 1 } else { -1 }),
            Floor(a) => self.rational(a)?.floor().to_integer().to_i64().ok_or(DslError::IntegerOverflow),
        }
    }

    fn rational(&self, e: &IntExpr) -> Result<BigRational, DslError> {
        use IntExpr::*;
        let r = match e {
            Lit(_) | Var(_) | Parity(_) | Floor(_) => BigRational::from_integer(BigInt::from(self.int(e)?)),
            Neg(a) => -self.rational(a)?,
            Add(a, b) => self.rational(a)? + self.rational(b)?,
            Sub(a, b) => self.rational(a)? - self.rational(b)?,
            Mul(a, b) => self.rational(a)? * self.rational(b)?,
            Div(a, b) => {
                let d = self.rational(b)?;
                if d.is_zero() {
                    return Err(DslError::DivisionByZero);
                }
                self.rational(a)? / d
            }
            Pow(a, b) => {
                let y = self.rational(b)?;
                if !y.is_integer() {
                    return Err(DslError::NonIntegralExponent);
                }
                let y = y.to_integer();
                if y.is_negative() {
                    return Err(DslError::NegativeIntExponent(y.to_i64().unwrap_or(i64::MIN)));
                }
                let x = self.rational(a)?;
                let y = y.to_u32().ok_or(DslError::IntegerOverflow)?;
                if x.abs() > BigRational::one() && u64::from(y) > MAX_RATIONAL_BITS {
                    return Err(DslError::IntegerOverflow);
                }
                num_traits::pow(x, y as usize)
            }
        };
        bounded(r)
    }

    fn series(&mut self, e: &Expr, order: usize) -> Result<PowerSeries, DslError> {
        Ok(match e {
            Expr::Const(c) => PowerSeries::monomial(self.int(c)?, 0, order),
            Expr::QPow(x) => {
                let n = self.int(x)?;
                if n < 0 {
                    return Err(DslError::NegativeQExponent(n));
                }
                match usize::try_from(n) {
                    Ok(n) if n < order => PowerSeries::monomial(1, n, order),
                    _ => PowerSeries::zero(order),
                }
            }
            Expr::Neg(a) => -self.series(a, order)?,
            Expr::Add(a, b) => self.series(a, order)? + self.series(b, order)?,
            Expr::Sub(a, b) => self.series(a, order)? - self.series(b, order)?,
            Expr::Mul(a, b) => {
                // the second factor only matters below N - valuation(first)
                let x = self.series(a, order)?;
                let Some(v) = x.valuation() else { return Ok(x) };
                let y = self.series(b, order - v)?;
                x.mul_series(&y.as_polynomial(order))
            }
            Expr::Div(a, b) => {
                let x = self.series(a, order)?;
                let Some(v) = x.valuation() else { return Ok(x) };
                let y = self.series(b, order - v)?;
                let head = PowerSeries::from_coeffs(x.coeffs()[v..].to_vec());
                head.div_series(&y)?.as_polynomial(order).shift(v)
            }
            Expr::Pow(a, x) => {
                let n = self.int(x)?;
                let base = self.series(a, order)?;
                let mag = u32::try_from(n.unsigned_abs()).map_err(|_| DslError::IntegerOverflow)?;
                if n < 0 {
                    base.invert()?.pow(mag)
                } else {
                    base.pow(mag)
                }
            }
            Expr::Sum(ix) => self.indexed(ix, order, false)?,
            Expr::Prod(ix) => self.indexed(ix, order, true)?,
        })
    }

    fn indexed(&mut self, ix: &Indexed, order: usize, product: bool) -> Result<PowerSeries, DslError> {
        let lower = self.int(&ix.lower)?;
        let upper = ix.upper.as_ref().map(|u| self.int(u)).transpose()?;
        let mut acc = if product { PowerSeries::one(order) } else { PowerSeries::zero(order) };
        let mut progress = Progress::new(self.guard);
        let mut k = lower;
        loop {
            if upper.is_some_and(|u| k > u) {
                return Ok(acc);
            }
            self.env.push((ix.var, k));
            let term = self.series(&ix.body, order);
            self.env.pop();
            let term = term?;
            let degree = if product {
                let delta = &term - &PowerSeries::one(order);
                let d = delta.valuation();
                if d.is_some() {
                    acc = acc.mul_series(&term);
                }
                d
            } else {
                let d = term.valuation();
                if d.is_some() {
                    acc = acc + term;
                }
                d
            };
            if upper.is_none() {
                if let Step::Done = progress.observe(ix.var, k, degree)? {
                    return Ok(acc);
                }
            }
            k = k.checked_add(1).ok_or(DslError::IntegerOverflow)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn run(text: &str, order: usize) -> Result<Vec<i64>, DslError> {
        let s = eval(&parse(text)?, &EvalContext::new(order))?;
        Ok(s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect())
    }

    #[test]
    fn small_examples() {
        assert_eq!(run("q^0", 3).unwrap(), [1, 0, 0]);
        assert_eq!(run("q^2", 4).unwrap(), [0, 0, 1, 0]);
        assert_eq!(run("sum(k=0..inf, q^k*(1+q^(2*k+1))/(1-q^(2*k+1))^2)", 5).unwrap(), [1, 4, 6, 8, 13]);
        assert_eq!(run("1/(1-q)", 4).unwrap(), [1, 1, 1, 1]);
        assert_eq!(run("(1-q)^(-2)", 4).unwrap(), [1, 2, 3, 4]);
        assert_eq!(run("-q + 3", 3).unwrap(), [3, -1, 0]);
        assert_eq!(run("sum(k=1..3, k*q^k)", 5).unwrap(), [0, 1, 2, 3, 0]);
        assert_eq!(run("sum(k=3..1, q)", 3).unwrap(), [0, 0, 0]);
        assert_eq!(run("prod(n=1..2, 1+q^n)", 5).unwrap(), [1, 1, 1, 1, 0]);
    }

    #[test]
    fn division_keeps_high_order_terms() {
        // q^2/(1 - q) must not lose coefficients to the shifted evaluation
        assert_eq!(run("q^2/(1-q)", 6).unwrap(), [0, 0, 1, 1, 1, 1]);
        assert_eq!(run("(q+q^2)*(1+q)", 5).unwrap(), [0, 1, 2, 1, 0]);
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        let e = |text: &str, k: i64| {
            let Expr::Sum(ix) = parse(&alloc::format!("sum(k=0..0, q^({text}))")).unwrap() else { panic!() };
            let Expr::QPow(x) = ix.body else { panic!() };
            eval_int(&x, &[('k', k)]).unwrap()
        };
        assert_eq!(e("floor((-1)^k*k/2)", 3), -2);
        assert_eq!(e("floor((-1)^k*k/2)", 4), 2);
        assert_eq!(e("(0-7)/2", 0), -4);
        assert_eq!(e("floor(1/2 + 1/2)", 0), 1);
        // floor-div applied termwise would give 0 here
        assert_eq!(e("1/2 + 1/2", 0), 0);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(run("sum(k=0..inf, q^0)", 3), Err(DslError::DivergenceGuard { var: 'k', .. })));
        assert!(matches!(run("prod(k=0..inf, 1 - q)", 3), Err(DslError::DivergenceGuard { .. })));
        assert!(matches!(run("1/(2-q)", 3), Err(DslError::NonUnitConstantTerm(_))));
        assert!(matches!(run("sum(k=0..2, q^(k-1))", 3), Err(DslError::NegativeQExponent(-1))));
        assert!(matches!(run("q^(1/0)", 3), Err(DslError::DivisionByZero)));
        assert!(matches!(run("q^(2^(0-1))", 3), Err(DslError::NegativeIntExponent(-1))));
        assert!(matches!(run("9223372036854775807 + 1", 3), Err(DslError::IntegerOverflow)));
        assert!(matches!(run("q^floor(2^300)", 3), Err(DslError::IntegerOverflow)));
        assert!(matches!(eval(&parse("q").unwrap(), &EvalContext::new(0)), Err(DslError::InvalidContext { .. })));
    }

    #[test]
    fn guard_tolerates_interleaved_gaps() {
        // odd terms vanish long before even ones
        let text = "sum(k=0..inf, q^(2*k - floor((-1)^k*k/2))/(1-q^(2*k+1))^2)";
        assert!(run(text, 60).is_ok());
        // a guard of 1 cannot survive a repeated degree
        let ctx = EvalContext::new(20).with_guard(1);
        assert!(matches!(eval(&parse(text).unwrap(), &ctx), Err(DslError::DivergenceGuard { .. })));
    }
}
