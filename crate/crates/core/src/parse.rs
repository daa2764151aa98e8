//! Text parser for germ input.
//!
//! Grammar: `+`, `-`, `*`, `^`, parentheses, integer and `a/b` rational
//! literals, and the declared variable names. Whitespace is insignificant.
//! `^` takes a nonnegative integer exponent; `/` is only allowed with a
//! nonzero constant divisor, so `1/3` and `5/6*x` parse but `x/y` does not.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, VarSet};
use crate::rat::Rat;

/// Parse `text` in the ring with the given ordered variables.
pub fn parse_polynomial(text: &str, vars: &VarSet) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars };
    let poly = p.expression()?;
    let t = p.peek();
    if t.kind == Tk::End {
        Ok(poly)
    } else {
        Err(p.unexpected(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Integer(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    position: usize,
}

use TokenKind as Tk;

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let position = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push(Token { kind: Tk::Plus, position }),
            '-' => out.push(Token { kind: Tk::Minus, position }),
            '*' => out.push(Token { kind: Tk::Star, position }),
            '/' => out.push(Token { kind: Tk::Slash, position }),
            '^' => out.push(Token { kind: Tk::Caret, position }),
            '(' => out.push(Token { kind: Tk::LParen, position }),
            ')' => out.push(Token { kind: Tk::RParen, position }),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n: BigInt = s.parse().expect("digits parse as integer");
                out.push(Token { kind: Tk::Integer(n), position });
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                out.push(Token { kind: Tk::Ident(s), position });
                i = j;
                continue;
            }
            other => {
                return Err(Error::Parse {
                    position,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
        i += 1;
    }
    out.push(Token { kind: Tk::End, position: chars.len() });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a VarSet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Token {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: Token) -> Error {
        let what = match t.kind {
            Tk::End => "end of input".to_string(),
            Tk::Integer(n) => format!("number `{n}`"),
            Tk::Ident(s) => format!("`{s}`"),
            Tk::Plus => "`+`".to_string(),
            Tk::Minus => "`-`".to_string(),
            Tk::Star => "`*`".to_string(),
            Tk::Slash => "`/`".to_string(),
            Tk::Caret => "`^`".to_string(),
            Tk::LParen => "`(`".to_string(),
            Tk::RParen => "`)`".to_string(),
        };
        Error::Parse { position: t.position, message: format!("unexpected {what}") }
    }

    fn expression(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        loop {
            match self.peek().kind {
                Tk::Plus => {
                    self.bump();
                }
                Tk::Minus => {
                    self.bump();
                    negate = !negate;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek().kind {
                Tk::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Tk::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().kind {
                Tk::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Tk::Slash => {
                    let slash = self.bump();
                    let f = self.factor()?;
                    if !f.is_constant() {
                        return Err(Error::Parse {
                            position: slash.position,
                            message: "division is only allowed by a constant".to_string(),
                        });
                    }
                    let c = f.constant_part();
                    if c.is_zero() {
                        return Err(Error::Parse {
                            position: slash.position,
                            message: "division by zero".to_string(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek().kind == Tk::Caret {
            self.bump();
            let t = self.bump();
            match t.kind {
                Tk::Integer(n) => {
                    let e = num_traits::ToPrimitive::to_u32(&n).ok_or_else(|| Error::Parse {
                        position: t.position,
                        message: format!("exponent `{n}` is out of range"),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => {
                    return Err(Error::Parse {
                        position: t.position,
                        message: "expected a nonnegative integer exponent after `^`".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let t = self.bump();
        match t.kind {
            Tk::Integer(n) => Ok(Polynomial::constant(self.vars.clone(), Rat::from_integer(n))),
            Tk::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Polynomial::variable(self.vars.clone(), i)),
                None => Err(Error::UnknownVariable { name, position: t.position }),
            },
            Tk::Minus => {
                let inner = self.atom()?;
                Ok(inner.neg())
            }
            Tk::LParen => {
                let inner = self.expression()?;
                let close = self.bump();
                if close.kind != Tk::RParen {
                    return Err(Error::Parse {
                        position: close.position,
                        message: "expected `)`".to_string(),
                    });
                }
                Ok(inner)
            }
            _ => Err(self.unexpected(t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{varset, Monomial};
    use crate::rat::{rat, rat_int};

    fn xy() -> VarSet {
        varset(vec!["x", "y"])
    }

    #[test]
    fn reads_simple_sum() {
        let p = parse_polynomial("x^3 + y^4", &xy()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial(vec![3, 0])), rat_int(1));
        assert_eq!(p.coeff(&Monomial(vec![0, 4])), rat_int(1));
    }

    #[test]
    fn zero_literal_is_empty() {
        let p = parse_polynomial("0", &varset(vec!["x"])).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn rational_coefficients() {
        let p = parse_polynomial("2*x*y - 1/3", &xy()).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![1, 1])), rat_int(2));
        assert_eq!(p.coeff(&Monomial(vec![0, 0])), rat(-1, 3));
    }

    #[test]
    fn parens_and_powers() {
        let p = parse_polynomial("(x + y)^2", &xy()).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![1, 1])), rat_int(2));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn unary_minus() {
        let p = parse_polynomial("-x^2 + -3", &xy()).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![2, 0])), rat_int(-1));
        assert_eq!(p.constant_part(), rat_int(-3));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_polynomial("x^3+y^4", &xy()).unwrap();
        let b = parse_polynomial("  x ^ 3 +  y^ 4 ", &xy()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_variable_is_reported_with_position() {
        match parse_polynomial("x + z", &xy()) {
            Err(Error::UnknownVariable { name, position }) => {
                assert_eq!(name, "z");
                assert_eq!(position, 4);
            }
            other => panic!("expected UnknownVariable, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs_have_positions() {
        for (text, pos) in [("x +", 3), ("x^y", 2), ("(x", 2), ("x$", 1), ("x^-1", 2)] {
            match parse_polynomial(text, &xy()) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "input {text:?}"),
                other => panic!("expected ParseError for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn division_rules() {
        let p = parse_polynomial("x/2", &xy()).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![1, 0])), rat(1, 2));
        assert!(matches!(parse_polynomial("x/y", &xy()), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("1/0", &xy()), Err(Error::Parse { .. })));
    }

    #[test]
    fn print_then_parse_round_trip() {
        let texts = ["x^3 + y^4", "2*x*y - 1/3", "-x^2 - x*y^3 + 5/6", "0", "7"];
        for t in texts {
            let p = parse_polynomial(t, &xy()).unwrap();
            let q = parse_polynomial(&p.render(), &xy()).unwrap();
            assert_eq!(p, q, "round trip failed for {t:?}: rendered {}", p.render());
        }
    }
}
