use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::ast::{Expr, Indexed, IntExpr};
use super::lexer::{tokenize, Pos, Spanned, Tok};
use super::DslError;

/// Parses a q-series expression. Every index variable must be bound by an
/// enclosing `sum` or `prod`, and may not be rebound inside it.
pub fn parse(text: &str) -> Result<Expr, DslError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, scope: Vec::new() };
    let e = p.expr()?;
    p.expect(Tok::End, "end of input")?;
    Ok(e)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    scope: Vec<char>,
}

// smart constructors: integer-only subtrees stay integer so that printing and
// re-parsing lands on the same tree

fn int_pow(base: IntExpr, exp: IntExpr) -> IntExpr {
    match (&base, &exp) {
        (IntExpr::Neg(one), IntExpr::Var(v)) if **one == IntExpr::Lit(1) => IntExpr::Parity(*v),
        _ => IntExpr::Pow(Box::new(base), Box::new(exp)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(IntExpr::Neg(Box::new(c))),
        a => Expr::Neg(Box::new(a)),
    }
}

fn pow(base: Expr, exp: IntExpr) -> Expr {
    match base {
        Expr::Const(c) => Expr::Const(int_pow(c, exp)),
        b => Expr::Pow(Box::new(b), exp),
    }
}

fn combine(
    a: Expr,
    b: Expr,
    ints: fn(Box<IntExpr>, Box<IntExpr>) -> IntExpr,
    series: fn(Box<Expr>, Box<Expr>) -> Expr,
) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(ints(Box::new(x), Box::new(y))),
        (a, b) => series(Box::new(a), Box::new(b)),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        let pos = self.pos();
        Err(DslError::Parse {
            line: pos.line,
            col: pos.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[what])
        }
    }

    fn bound_var(&mut self, v: char) -> Result<char, DslError> {
        if self.scope.contains(&v) {
            self.bump();
            Ok(v)
        } else {
            let pos = self.pos();
            Err(DslError::UnboundVariable { name: v, line: pos.line, col: pos.col })
        }
    }

    // --- series level ---

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut a = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    a = combine(a, self.term()?, IntExpr::Add, Expr::Add);
                }
                Tok::Minus => {
                    self.bump();
                    a = combine(a, self.term()?, IntExpr::Sub, Expr::Sub);
                }
                _ => return Ok(a),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut a = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    a = combine(a, self.unary()?, IntExpr::Mul, Expr::Mul);
                }
                Tok::Slash => {
                    self.bump();
                    a = Expr::Div(Box::new(a), Box::new(self.unary()?));
                }
                _ => return Ok(a),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            Ok(neg(self.unary()?))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            Ok(pow(base, self.int_atom()?))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, DslError> {
        match self.peek().clone() {
            Tok::Q => {
                self.bump();
                if *self.peek() == Tok::Caret {
                    self.bump();
                    Ok(Expr::QPow(self.int_atom()?))
                } else {
                    Ok(Expr::QPow(IntExpr::Lit(1)))
                }
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Const(IntExpr::Lit(n)))
            }
            Tok::Var(v) => Ok(Expr::Const(IntExpr::Var(self.bound_var(v)?))),
            Tok::Floor => Ok(Expr::Const(self.floor()?)),
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            Tok::Sum => {
                self.bump();
                Ok(Expr::Sum(Box::new(self.indexed()?)))
            }
            Tok::Prod => {
                self.bump();
                Ok(Expr::Prod(Box::new(self.indexed()?)))
            }
            _ => self.fail(&["q", "integer", "variable", "(", "sum", "prod", "floor", "-"]),
        }
    }

    fn indexed(&mut self) -> Result<Indexed, DslError> {
        self.expect(Tok::LParen, "(")?;
        let var = match self.peek() {
            Tok::Var(v) if !self.scope.contains(v) => *v,
            Tok::Var(_) => return self.fail(&["variable not already bound"]),
            _ => return self.fail(&["index variable"]),
        };
        self.bump();
        self.expect(Tok::Eq, "=")?;
        let lower = self.int_expr()?;
        self.expect(Tok::DotDot, "..")?;
        let upper = if *self.peek() == Tok::Inf {
            self.bump();
            None
        } else {
            Some(self.int_expr()?)
        };
        self.expect(Tok::Comma, ",")?;
        self.scope.push(var);
        let body = self.expr();
        self.scope.pop();
        let body = body?;
        self.expect(Tok::RParen, ")")?;
        Ok(Indexed { var, lower, upper, body })
    }

    // --- integer level ---

    fn int_expr(&mut self) -> Result<IntExpr, DslError> {
        let mut a = self.int_term()?;
        loop {
            let op: fn(Box<IntExpr>, Box<IntExpr>) -> IntExpr = match self.peek() {
                Tok::Plus => IntExpr::Add,
                Tok::Minus => IntExpr::Sub,
                _ => return Ok(a),
            };
            self.bump();
            a = op(Box::new(a), Box::new(self.int_term()?));
        }
    }

    fn int_term(&mut self) -> Result<IntExpr, DslError> {
        let mut a = self.int_unary()?;
        loop {
            let op: fn(Box<IntExpr>, Box<IntExpr>) -> IntExpr = match self.peek() {
                Tok::Star => IntExpr::Mul,
                Tok::Slash => IntExpr::Div,
                _ => return Ok(a),
            };
            self.bump();
            a = op(Box::new(a), Box::new(self.int_unary()?));
        }
    }

    fn int_unary(&mut self) -> Result<IntExpr, DslError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(IntExpr::Neg(Box::new(self.int_unary()?)));
        }
        let a = self.int_atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            Ok(int_pow(a, self.int_atom()?))
        } else {
            Ok(a)
        }
    }

    fn int_atom(&mut self) -> Result<IntExpr, DslError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(IntExpr::Lit(n))
            }
            Tok::Var(v) => Ok(IntExpr::Var(self.bound_var(v)?)),
            Tok::Floor => self.floor(),
            Tok::LParen => {
                self.bump();
                let e = self.int_expr()?;
                self.expect(Tok::RParen, ")")?;
                Ok(e)
            }
            _ => self.fail(&["integer", "variable", "floor", "("]),
        }
    }

    fn floor(&mut self) -> Result<IntExpr, DslError> {
        self.expect(Tok::Floor, "floor")?;
        self.expect(Tok::LParen, "(")?;
        let e = self.int_expr()?;
        self.expect(Tok::RParen, ")")?;
        Ok(IntExpr::Floor(Box::new(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_lambert_and_product_texts() {
        let e = parse("sum(k=0..inf, q^k*(1+q^(2*k+1))/(1-q^(2*k+1))^2)").unwrap();
        assert!(matches!(e, Expr::Sum(ref ix) if ix.var == 'k' && ix.upper.is_none()));
        let p = parse("prod(n=1..inf, (1-q^(2*n))^4/(1-q^(2*n-1))^4)").unwrap();
        assert!(matches!(p, Expr::Prod(_)));
    }

    #[test]
    fn unbound_variable_is_reported() {
        assert_eq!(
            parse("sum(k=0..inf, q^j)").unwrap_err(),
            DslError::UnboundVariable { name: 'j', line: 1, col: 17 }
        );
        assert!(matches!(parse("q^k"), Err(DslError::UnboundVariable { name: 'k', .. })));
        // the lower bound cannot see its own variable
        assert!(matches!(parse("sum(k=k..3, q)"), Err(DslError::UnboundVariable { .. })));
    }

    #[test]
    fn rebinding_is_rejected() {
        assert!(matches!(parse("sum(k=0..3, sum(k=0..3, q^k))"), Err(DslError::Parse { .. })));
    }

    #[test]
    fn parse_errors_carry_position_and_expectations() {
        match parse("1 +\n  * q").unwrap_err() {
            DslError::Parse { line, col, expected, found } => {
                assert_eq!((line, col), (2, 3));
                assert!(expected.iter().any(|e| e == "q"));
                assert_eq!(found, "*");
            }
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse("(1 + q"), Err(DslError::Parse { .. })));
        assert!(matches!(parse("sum(k=0..inf q)"), Err(DslError::Parse { .. })));
        assert!(matches!(parse("q^q"), Err(DslError::Parse { .. })));
        assert!(matches!(parse(""), Err(DslError::Parse { .. })));
    }

    #[test]
    fn parity_power_is_recognised() {
        let e = parse("sum(k=0..3, (-1)^k)").unwrap();
        let Expr::Sum(ix) = e else { panic!() };
        assert_eq!(ix.body, Expr::Const(IntExpr::Parity('k')));
        let e = parse("sum(k=0..3, q^(2*k - floor((-1)^k*k/2)))").unwrap();
        assert!(e.to_string().contains("floor((-1)^k * k / 2)"));
    }

    #[test]
    fn integer_subtrees_collapse() {
        assert_eq!(parse("2*3 + 1").unwrap().to_string(), "2 * 3 + 1");
        assert!(matches!(parse("2*3 + 1").unwrap(), Expr::Const(_)));
        assert!(matches!(parse("-q").unwrap(), Expr::Neg(_)));
        assert_eq!(parse("q").unwrap(), Expr::QPow(IntExpr::Lit(1)));
    }

    #[test]
    fn printing_round_trips_on_shipped_texts() {
        for id in super::super::CATALOG_IDS {
            let (l, r) = super::super::catalog_text(id).unwrap();
            for text in [l, r] {
                let a = parse(text).unwrap();
                let b = parse(&a.to_string()).unwrap();
                assert_eq!(a, b, "{text}");
            }
        }
    }
}
