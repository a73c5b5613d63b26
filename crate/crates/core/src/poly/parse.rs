//! Recursive-descent parser for the polynomial expression grammar:
//!
//! ```text
//! expr     := ("+"|"-")? term (("+"|"-") term)* ;
//! term     := factor ("*" factor)* ;
//! factor   := base ("^" nat)? ;
//! base     := rational | "x" | "y" | "(" expr ")" ;
//! rational := int ("/" nat)? ;
//! ```
//!
//! Whitespace is insignificant. Juxtaposition is not multiplication.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, Rational};
use crate::Error;

pub fn parse_polynomial(text: &str) -> Result<Polynomial, Error> {
    let mut parser = Parser::new(text);
    let p = parser.expr()?;
    match parser.peek() {
        None => Ok(p),
        Some((pos, c)) => Err(parse_error(pos, format!("unexpected '{c}'"))),
    }
}

fn parse_error(pos: usize, message: String) -> Error {
    Error::Parse {
        position: pos,
        message,
    }
}

struct Parser {
    // (1-based position, char), whitespace removed
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Parser {
            chars,
            at: 0,
            end: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.at).copied()
    }

    fn pos(&self) -> usize {
        self.peek().map(|(p, _)| p).unwrap_or(self.end)
    }

    fn eat(&mut self, want: char) -> bool {
        if matches!(self.peek(), Some((_, c)) if c == want) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, Error> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, Error> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, Error> {
        let base = self.base()?;
        if self.eat('^') {
            let pos = self.pos();
            let e = self.nat()?;
            let e = u32::try_from(e).map_err(|_| parse_error(pos, "exponent too large".into()))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial, Error> {
        match self.peek() {
            Some((_, 'x')) => {
                self.at += 1;
                Ok(Polynomial::x())
            }
            Some((_, 'y')) => {
                self.at += 1;
                Ok(Polynomial::y())
            }
            Some((_, '(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_error(self.pos(), "expected ')'".into()));
                }
                Ok(inner)
            }
            Some((_, c)) if c.is_ascii_digit() => {
                let numer = self.nat()?;
                if self.eat('/') {
                    let pos = self.pos();
                    let denom = self.nat()?;
                    if denom.is_zero() {
                        return Err(parse_error(pos, "zero denominator".into()));
                    }
                    Ok(Polynomial::constant(Rational::new(numer, denom)))
                } else {
                    Ok(Polynomial::constant(Rational::from_integer(numer)))
                }
            }
            Some((pos, c)) => Err(parse_error(pos, format!("unexpected '{c}'"))),
            None => Err(parse_error(self.end, "unexpected end of input".into())),
        }
    }

    // Digits must be contiguous in the original text.
    fn nat(&mut self) -> Result<BigInt, Error> {
        let start = self.pos();
        let mut digits = String::new();
        let mut last_pos = None;
        while let Some((pos, c)) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            if let Some(prev) = last_pos {
                if pos != prev + 1 {
                    return Err(parse_error(pos, "whitespace inside a number".into()));
                }
            }
            digits.push(c);
            last_pos = Some(pos);
            self.at += 1;
        }
        if digits.is_empty() {
            let msg = match self.peek() {
                Some((_, c)) => format!("expected a number, found '{c}'"),
                None => "expected a number".to_string(),
            };
            return Err(parse_error(start, msg));
        }
        Ok(digits.parse().expect("ascii digits"))
    }
}
