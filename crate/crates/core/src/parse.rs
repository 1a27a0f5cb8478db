//! Tiny recursive-descent parser shared by the polynomial, series and value
//! literal grammars.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := INT | '(' '-'? INT ('/' INT)? ')'
//! atom     := INT | IDENT | IDENT '(' INT ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Number(BigRational),
    Ident(String),
    /// `name(k)`, e.g. `sqrt(2)`.
    Call(String, BigInt),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, BigRational),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Int(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!(
                "unexpected character `{c}` in `{src}`"
            )));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = if self.eat('(') {
            let neg = self.eat('-');
            let n = self.int()?;
            let d = if self.eat('/') {
                self.int()?
            } else {
                BigInt::one()
            };
            self.expect(')')?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let q = BigRational::new(n, d);
            if neg {
                -q
            } else {
                q
            }
        } else {
            BigRational::from_integer(self.int()?)
        };
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Number(BigRational::from_integer(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let k = self.int()?;
                    self.expect(')')?;
                    Ok(Expr::Call(name, k))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.err("expected a number, a name or `(`")),
        }
    }
}

pub(crate) fn parse_expr(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        src,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// A ring the expression AST can be evaluated into.
pub(crate) trait ExprTarget: Sized {
    fn number(&self, q: &BigRational) -> Result<Self>;
    fn ident(&self, name: &str) -> Result<Self>;
    fn call(&self, name: &str, _arg: &BigInt) -> Result<Self> {
        Err(Error::Parse(format!("unknown function `{name}`")))
    }
    fn add(a: Self, b: Self) -> Result<Self>;
    fn mul(a: Self, b: Self) -> Result<Self>;
    fn neg(a: Self) -> Result<Self>;
    /// Division, only defined when the divisor is a nonzero constant.
    fn div(a: Self, b: Self) -> Result<Self>;
    fn pow(a: Self, e: &BigRational) -> Result<Self>;
}

/// `proto` only supplies context (ring, field) to the leaf constructors.
pub(crate) fn eval<T: ExprTarget>(proto: &T, e: &Expr) -> Result<T> {
    Ok(match e {
        Expr::Number(q) => proto.number(q)?,
        Expr::Ident(name) => proto.ident(name)?,
        Expr::Call(name, k) => proto.call(name, k)?,
        Expr::Add(a, b) => T::add(eval(proto, a)?, eval(proto, b)?)?,
        Expr::Sub(a, b) => T::add(eval(proto, a)?, T::neg(eval(proto, b)?)?)?,
        Expr::Mul(a, b) => T::mul(eval(proto, a)?, eval(proto, b)?)?,
        Expr::Div(a, b) => T::div(eval(proto, a)?, eval(proto, b)?)?,
        Expr::Neg(a) => T::neg(eval(proto, a)?)?,
        Expr::Pow(a, q) => T::pow(eval(proto, a)?, q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("1/2*x1*x2^3 - x1").unwrap();
        match e {
            Expr::Sub(lhs, _) => match *lhs {
                Expr::Mul(..) => {}
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_exponent_and_unary_minus() {
        let e = parse_expr("t^(3/2)*1 + t^2*-1").unwrap();
        assert!(matches!(e, Expr::Add(..)));
        assert!(parse_expr("t^(-1)").is_ok());
    }

    #[test]
    fn errors() {
        assert!(parse_expr("x1 +").is_err());
        assert!(parse_expr("x1 $ 2").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("(x1").is_err());
    }
}
