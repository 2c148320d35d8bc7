//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      // '/' only by constants
//! factor := '-' factor | atom ['^' INT]
//! atom   := INT | 'i' | 'x' INT | '(' expr ')'
//! ```
//!
//! Whitespace is ignored everywhere. Columns in errors are 1-based positions
//! in the original text.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::BasePoly;
use crate::scalar::Scalar;

pub fn parse_poly(text: &str, nvars: usize) -> Result<BasePoly> {
    let chars: Vec<(usize, char)> =
        text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).map(|(i, c)| (i + 1, c)).collect();
    let mut p = Parser { chars, pos: 0, nvars, end_col: text.chars().count() + 1 };
    if p.chars.is_empty() {
        return Err(Error::Parse { column: 1, message: "empty polynomial".into() });
    }
    let out = p.expr()?;
    if let Some(&(col, c)) = p.chars.get(p.pos) {
        return Err(Error::Parse { column: col, message: format!("unexpected '{c}'") });
    }
    Ok(out)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    nvars: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn col(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end_col, |&(c, _)| c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<BasePoly> {
        let mut acc = BasePoly::zero(self.nvars);
        let mut sign = Scalar::from_int(1);
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                self.pos += 1;
                sign = Scalar::from_int(-1);
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    sign = Scalar::from_int(1);
                }
                Some('-') => {
                    self.pos += 1;
                    sign = Scalar::from_int(-1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BasePoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some('/') => {
                    self.pos += 1;
                    let col = self.col();
                    let d = self.factor()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse { column: col, message: "division only by nonzero constants".into() });
                    }
                    let inv = d.constant_term().inv().expect("nonzero");
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BasePoly> {
        if self.peek() == Some('-') {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(-&f);
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 =
                e.try_into().map_err(|_| Error::Parse { column: self.col(), message: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BasePoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.big_integer()?;
                Ok(BasePoly::constant(self.nvars, Scalar::real(BigRational::from_integer(n))))
            }
            Some('i') => {
                self.pos += 1;
                Ok(BasePoly::constant(self.nvars, Scalar::i()))
            }
            Some('x') => {
                let col = self.col();
                self.pos += 1;
                let k = self.integer()?;
                if k == 0 || k as usize > self.nvars {
                    return Err(Error::Parse {
                        column: col,
                        message: format!("variable x{k} outside x1..x{}", self.nvars),
                    });
                }
                Ok(BasePoly::var(self.nvars, k as usize - 1))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn big_integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("digits"))
    }

    fn integer(&mut self) -> Result<u64> {
        let col = self.col();
        let n = self.big_integer()?;
        u64::try_from(n).map_err(|_| Error::Parse { column: col, message: "integer too large".into() })
    }
}

/// Parse a rational or Gaussian-rational constant such as `-3/4` or `1/2*i`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let p = parse_poly(text, 0)?;
    if p.is_zero() {
        return Ok(Scalar::zero());
    }
    Ok(p.constant_term())
}
