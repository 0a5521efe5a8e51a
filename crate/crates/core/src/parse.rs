//! A small expression parser for Laurent polynomials in x, y, z.
//!
//! Integer coefficients, `^` powers (negative exponents allowed, e.g. `x^-1`),
//! explicit `*` or implicit juxtaposition for products, parentheses.

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::poly::IntLaurentPoly;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                it.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                toks.push(Token::Int(s.parse().unwrap()));
            }
            'x' => {
                it.next();
                toks.push(Token::Var(0));
            }
            'y' => {
                it.next();
                toks.push(Token::Var(1));
            }
            'z' => {
                it.next();
                toks.push(Token::Var(2));
            }
            '+' => {
                it.next();
                toks.push(Token::Plus);
            }
            '-' | '−' => {
                it.next();
                toks.push(Token::Minus);
            }
            '*' | '·' => {
                it.next();
                toks.push(Token::Star);
            }
            '^' => {
                it.next();
                toks.push(Token::Caret);
            }
            '(' => {
                it.next();
                toks.push(Token::LParen);
            }
            ')' => {
                it.next();
                toks.push(Token::RParen);
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<IntLaurentPoly> {
        let mut negate = false;
        if let Some(Token::Minus) = self.peek() {
            self.next();
            negate = true;
        } else if let Some(Token::Plus) = self.peek() {
            self.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Token::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntLaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                // implicit multiplication: `3x`, `x y`, `2(1+x)`
                Some(Token::Int(_)) | Some(Token::Var(_)) | Some(Token::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntLaurentPoly> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.next();
            let mut sign = 1i64;
            if let Some(Token::Minus) = self.peek() {
                self.next();
                sign = -1;
            }
            match self.next() {
                Some(Token::Int(n)) => {
                    let n: i64 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    self.pow(base, sign * n)
                }
                _ => Err(Error::Parse("expected integer exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn pow(&self, base: IntLaurentPoly, n: i64) -> Result<IntLaurentPoly> {
        if n >= 0 {
            let mut acc = IntLaurentPoly::one(self.dim);
            for _ in 0..n {
                acc = acc.mul(&base)?;
            }
            return Ok(acc);
        }
        // negative exponents only apply to monomials (units of R_d)
        if base.num_terms() != 1 {
            return Err(Error::Parse(
                "negative exponent on a non-monomial base".into(),
            ));
        }
        let (e, c) = base.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        if c != BigInt::from(1) && c != BigInt::from(-1) {
            return Err(Error::Parse(
                "negative exponent on a non-unit coefficient".into(),
            ));
        }
        let mut exp = LatticePoint::zero(self.dim);
        for (o, b) in exp.0.iter_mut().zip(&e.0) {
            *o = b * n;
        }
        let coef = if c == BigInt::from(-1) && n % 2 != 0 {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        };
        Ok(IntLaurentPoly::monomial(exp, coef))
    }

    fn atom(&mut self) -> Result<IntLaurentPoly> {
        match self.next() {
            Some(Token::Int(n)) => Ok(IntLaurentPoly::constant(self.dim, n)),
            Some(Token::Var(j)) => {
                let mut e = vec![0i64; self.dim];
                e[j] = 1;
                Ok(IntLaurentPoly::monomial(LatticePoint::new(e), BigInt::from(1)))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an inline polynomial expression. When `dim` is `None` the dimension is
/// inferred from the highest variable used (constants get d = 1).
pub fn parse_poly(src: &str, dim: Option<usize>) -> Result<IntLaurentPoly> {
    let toks = lex(src)?;
    let max_var = toks
        .iter()
        .filter_map(|t| match t {
            Token::Var(j) => Some(*j + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let dim = match dim {
        Some(d) => {
            if max_var > d {
                return Err(Error::Parse(format!(
                    "expression uses {max_var} variables but dim = {d}"
                )));
            }
            d
        }
        None => max_var.max(1),
    };
    let mut p = Parser { toks, pos: 0, dim };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing tokens after expression".into()));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_expressions() {
        let f = parse_poly("x^2 - x - 1", None).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.num_terms(), 3);

        let g = parse_poly("3 + x + y + x^-1 + y^-1", None).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g, g.adjoint());

        let h = parse_poly("(x - 2)(x + 2)", None).unwrap();
        assert_eq!(h, parse_poly("x^2 - 4", None).unwrap());
    }

    #[test]
    fn negative_exponent_monomials() {
        let f = parse_poly("x^-2 * y^3", Some(2)).unwrap();
        assert_eq!(f.num_terms(), 1);
        let (e, _) = f.terms().next().unwrap();
        assert_eq!(e.0, vec![-2, 3]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +", None).is_err());
        assert!(parse_poly("q", None).is_err());
        assert!(parse_poly("(1+x", None).is_err());
        assert!(parse_poly("(1+x)^-1", None).is_err());
    }
}
