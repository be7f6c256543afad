//! Recursive descent parser for the symbol grammar.
//!
//! ```text
//! symbol      := ['+'|'-'] term (('+'|'-') term)*
//! term        := item (['*'] item)*
//! item        := coefficient | factor
//! coefficient := number | '(' complex ')' | 'polar' '(' number ',' angle ')' | 'i'
//! factor      := 'z' ['^' int] | 'zb' ['^' int] | '|z|' '^' (int | '(' int ')')
//! angle       := float or rational, optionally times 'pi', optionally '/' number
//! ```
//!
//! `|z|^(2c)` is sugar for `z^c zb^c`; odd powers of `|z|` are rejected.

use std::f64::consts::PI;

use num_traits::Zero;

use super::{Coefficient, Monomial, SymbolPoly};
use crate::arith::{parse_rational, to_f64, GaussianRational, Rational};
use crate::error::{Error, Result};

pub fn parse_symbol(text: &str) -> Result<SymbolPoly> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let terms = p.symbol()?;
    Ok(SymbolPoly::new(terms))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
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
            self.err(format!("expected '{c}'"))
        }
    }

    fn starts_with(&mut self, word: &str) -> bool {
        self.skip_ws();
        word.chars().enumerate().all(|(i, c)| self.peek_raw(i) == Some(c))
    }

    fn symbol(&mut self) -> Result<Vec<Monomial>> {
        let mut terms = Vec::new();
        if self.peek().is_none() {
            return self.err("empty symbol");
        }
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = t.coeff.neg();
            }
            terms.push(t);
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(c) => return self.err(format!("unexpected '{c}'")),
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Monomial> {
        let mut coeff = Coefficient::one();
        let (mut m, mut n) = (0u32, 0u32);
        let mut items = 0;
        loop {
            if items > 0 {
                self.eat('*');
            }
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '.' => {
                    let r = self.number()?;
                    coeff = coeff.mul(&Coefficient::real(r));
                }
                Some('(') => {
                    let g = self.parenthesized()?;
                    coeff = coeff.mul(&Coefficient::Exact(g));
                }
                Some('|') => {
                    let start = self.pos;
                    if !self.starts_with("|z|") {
                        return self.err("expected |z|");
                    }
                    self.pos += 3;
                    if !self.eat('^') {
                        return Err(Error::OddAbsolutePower {
                            position: start,
                            power: 1,
                        });
                    }
                    let parens = self.eat('(');
                    let e = self.integer()?;
                    if parens {
                        self.expect(')')?;
                    }
                    if e % 2 == 1 {
                        return Err(Error::OddAbsolutePower {
                            position: start,
                            power: e as u64,
                        });
                    }
                    m += e / 2;
                    n += e / 2;
                }
                Some('p') if self.starts_with("polar") => {
                    self.pos += 5;
                    let c = self.polar()?;
                    coeff = coeff.mul(&c);
                }
                Some('z') => {
                    self.pos += 1;
                    let bar = self.peek_raw(0) == Some('b');
                    if bar {
                        self.pos += 1;
                    }
                    let e = if self.eat('^') {
                        let parens = self.eat('(');
                        let e = self.integer()?;
                        if parens {
                            self.expect(')')?;
                        }
                        e
                    } else {
                        1
                    };
                    if bar {
                        n += e;
                    } else {
                        m += e;
                    }
                }
                Some('i') => {
                    self.pos += 1;
                    coeff = coeff.mul(&Coefficient::Exact(GaussianRational::i()));
                }
                _ => {
                    if items == 0 {
                        return self.err("expected a coefficient or a factor");
                    }
                    break;
                }
            }
            items += 1;
        }
        Ok(Monomial { m, n, coeff })
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw(0).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer exponent");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().or_else(|_| {
            self.pos = start;
            self.err("exponent out of range")
        })
    }

    /// Unsigned rational literal: digits, `p/q` or a decimal.
    fn number(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek_raw(0).is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos > s
        };
        let whole = digits(self);
        if self.peek_raw(0) == Some('.') {
            self.pos += 1;
            if !digits(self) && !whole {
                return self.err("malformed number");
            }
        } else if !whole {
            return self.err("expected a number");
        } else if self.peek_raw(0) == Some('/')
            && self.peek_raw(1).is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 1;
            digits(self);
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        match parse_rational(&s) {
            Some(r) => Ok(r),
            None => {
                self.pos = start;
                self.err(format!("invalid number '{s}'"))
            }
        }
    }

    /// `(re)`, `(im i)`, `(re +- im i)` with optional signs.
    fn parenthesized(&mut self) -> Result<GaussianRational> {
        self.expect('(')?;
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut parts = 0;
        loop {
            let negative = if self.eat('-') {
                true
            } else {
                if parts > 0 && !self.eat('+') {
                    break;
                }
                if parts == 0 {
                    self.eat('+');
                }
                false
            };
            let value = match self.peek() {
                Some('i') => {
                    self.pos += 1;
                    im += if negative { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
                    parts += 1;
                    continue;
                }
                Some(c) if c.is_ascii_digit() || c == '.' => self.number()?,
                _ => return self.err("expected a number"),
            };
            let value = if negative { -value } else { value };
            if self.eat('i') {
                im += value;
            } else {
                re += value;
            }
            parts += 1;
        }
        self.expect(')')?;
        Ok(GaussianRational::new(re, im))
    }

    fn polar(&mut self) -> Result<Coefficient> {
        self.expect('(')?;
        let modulus = self.number()?;
        if modulus.is_zero() {
            return self.err("polar modulus must be positive");
        }
        self.expect(',')?;
        let phase = self.angle()?;
        self.expect(')')?;
        Ok(Coefficient::polar(modulus, phase))
    }

    /// Float angle with optional `pi` factor: `0.5`, `-pi/2`, `3pi/4`, `2*pi`,
    /// `1e-3`.
    fn angle(&mut self) -> Result<f64> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut value = 1.0;
        let mut any = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            let start = self.pos;
            while let Some(c) = self.peek_raw(0) {
                let prev = if self.pos > start { self.chars[self.pos - 1] } else { ' ' };
                let ok = c.is_ascii_digit()
                    || c == '.'
                    || c == 'e'
                    || c == 'E'
                    || ((c == '-' || c == '+') && (prev == 'e' || prev == 'E'));
                if !ok {
                    break;
                }
                self.pos += 1;
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            value = match s.parse::<f64>() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = start;
                    return self.err(format!("invalid angle '{s}'"));
                }
            };
            any = true;
        }
        self.eat('*');
        if self.starts_with("pi") {
            self.pos += 2;
            value *= PI;
            any = true;
        }
        if !any {
            return self.err("expected an angle");
        }
        if self.eat('/') {
            let d = self.number()?;
            if d.is_zero() {
                return self.err("division by zero in angle");
            }
            value /= to_f64(&d);
        }
        Ok(if negative { -value } else { value })
    }
}
