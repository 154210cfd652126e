use alloc::boxed::Box;
use core::fmt;

/// Integer index arithmetic. `Div` floors toward negative infinity, except
/// inside `Floor`, where the argument is evaluated as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntExpr {
    Lit(i64),
    Var(char),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Div(Box<IntExpr>, Box<IntExpr>),
    /// Non-negative exponent only.
    Pow(Box<IntExpr>, Box<IntExpr>),
    /// `(-1)^v`
    Parity(char),
    Floor(Box<IntExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexed {
    pub var: char,
    pub lower: IntExpr,
    /// `None` is `inf`.
    pub upper: Option<IntExpr>,
    pub body: Expr,
}

/// A q-series expression. Integer subexpressions appear as constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(IntExpr),
    QPow(IntExpr),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a * invert(b)`
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, IntExpr),
    Sum(Box<Indexed>),
    Prod(Box<Indexed>),
}

// binding strength, loosest first
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

impl IntExpr {
    fn prec(&self) -> u8 {
        match self {
            IntExpr::Add(..) | IntExpr::Sub(..) => SUM,
            IntExpr::Mul(..) | IntExpr::Div(..) => PRODUCT,
            IntExpr::Neg(_) => UNARY,
            IntExpr::Pow(..) | IntExpr::Parity(_) => POWER,
            IntExpr::Lit(_) | IntExpr::Var(_) | IntExpr::Floor(_) => ATOM,
        }
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Const(c) => c.prec(),
            Expr::Add(..) | Expr::Sub(..) => SUM,
            Expr::Mul(..) | Expr::Div(..) => PRODUCT,
            Expr::Neg(_) => UNARY,
            Expr::Pow(..) | Expr::QPow(_) => POWER,
            Expr::Sum(_) | Expr::Prod(_) => ATOM,
        }
    }
}

struct Wrap<'a, T>(&'a T, bool);

impl<T: fmt::Display> fmt::Display for Wrap<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

// left operands may sit at the operator's level, right operands must bind tighter
fn binary<T: fmt::Display>(f: &mut fmt::Formatter<'_>, a: (&T, u8), op: &str, b: (&T, u8), level: u8) -> fmt::Result {
    write!(f, "{} {op} {}", Wrap(a.0, a.1 < level), Wrap(b.0, b.1 <= level))
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IntExpr::*;
        match self {
            Lit(n) => write!(f, "{n}"),
            Var(v) => write!(f, "{v}"),
            Neg(a) => write!(f, "-{}", Wrap(&**a, a.prec() < UNARY)),
            Add(a, b) => binary(f, (&**a, a.prec()), "+", (&**b, b.prec()), SUM),
            Sub(a, b) => binary(f, (&**a, a.prec()), "-", (&**b, b.prec()), SUM),
            Mul(a, b) => binary(f, (&**a, a.prec()), "*", (&**b, b.prec()), PRODUCT),
            Div(a, b) => binary(f, (&**a, a.prec()), "/", (&**b, b.prec()), PRODUCT),
            Pow(a, b) => write!(f, "{}^{}", Wrap(&**a, a.prec() < ATOM), Wrap(&**b, b.prec() < ATOM)),
            Parity(v) => write!(f, "(-1)^{v}"),
            Floor(a) => write!(f, "floor({a})"),
        }
    }
}

impl fmt::Display for Indexed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}..", self.var, self.lower)?;
        match &self.upper {
            Some(u) => write!(f, "{u}")?,
            None => f.write_str("inf")?,
        }
        write!(f, ", {}", self.body)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            QPow(e) => write!(f, "q^{}", Wrap(e, e.prec() < ATOM)),
            Neg(a) => write!(f, "-{}", Wrap(&**a, a.prec() < UNARY)),
            Add(a, b) => binary(f, (&**a, a.prec()), "+", (&**b, b.prec()), SUM),
            Sub(a, b) => binary(f, (&**a, a.prec()), "-", (&**b, b.prec()), SUM),
            Mul(a, b) => binary(f, (&**a, a.prec()), "*", (&**b, b.prec()), PRODUCT),
            Div(a, b) => binary(f, (&**a, a.prec()), "/", (&**b, b.prec()), PRODUCT),
            Pow(a, e) => write!(f, "{}^{}", Wrap(&**a, a.prec() < ATOM), Wrap(e, e.prec() < ATOM)),
            Sum(ix) => write!(f, "sum({ix})"),
            Prod(ix) => write!(f, "prod({ix})"),
        }
    }
}
