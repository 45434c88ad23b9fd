//! Expressions such as `2/231*(D1+3D2)^2 + 15/11*S2` or `63(-27T1+20T3)`.
//!
//! Juxtaposition multiplies, so `3D2` and `D1(D1+D2)` parse as products.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
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
            if i < chars.len() && chars[i] == '.' {
                return Err(parse_error(src, i, "decimal numbers are not accepted; use p/q"));
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(parse_error(src, i, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn parse_error(src: &str, col: usize, msg: &str) -> Error {
    Error::Parse(format!("{msg} at column {} in `{src}`", col + 1))
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.chars().count(), |(c, _)| *c)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
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
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
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
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| parse_error(self.src, col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(parse_error(self.src, col, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_error(self.src, self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(t) => Err(parse_error(self.src, col, &format!("unexpected token {t:?}"))),
            None => Err(parse_error(self.src, col, "unexpected end of expression")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_error(src, p.col(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Box<Expr> {
        Box::new(Expr::Sym(s.into()))
    }

    fn num(n: i64) -> Box<Expr> {
        Box::new(Expr::Num(n.into()))
    }

    #[test]
    fn juxtaposition_and_powers() {
        assert_eq!(parse("3D2").unwrap(), Expr::Mul(num(3), sym("D2")));
        assert_eq!(parse("D1^2*D2").unwrap(), Expr::Mul(Box::new(Expr::Pow(sym("D1"), 2)), sym("D2")));
        assert_eq!(
            parse("63(-27T1)").unwrap(),
            Expr::Mul(num(63), Box::new(Expr::Mul(Box::new(Expr::Neg(num(27))), sym("T1"))))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("a - b*c").unwrap(),
            Expr::Sub(sym("a"), Box::new(Expr::Mul(sym("b"), sym("c"))))
        );
        assert_eq!(
            parse("2/3*x").unwrap(),
            Expr::Mul(Box::new(Expr::Div(num(2), num(3))), sym("x"))
        );
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse("D1 + $").unwrap_err().to_string();
        assert!(e.contains("column 6"), "{e}");
        assert!(parse("(D1").is_err());
        assert!(parse("D1^x").is_err());
        assert!(parse("0.5*D1").is_err());
        assert!(parse("D1 D2)").is_err());
    }
}
