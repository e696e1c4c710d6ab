//! Recursive-descent parsers for the text formats shared by the library and the CLI.
//!
//! Bundle expressions:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := 'O' '(' int ')' | 'O' | '(' expr ')'
//! ```
//!
//! Laurent polynomials (`3/2 t^-1 + 1 - 2 t^3`):
//!
//! ```text
//! poly    := ['-'] mono (('+' | '-') mono)*
//! mono    := rational ['*'] ['t' ['^' int]] | 't' ['^' int]
//! matrix  := row (';' row)*        row := poly (',' poly)*
//! ```
//!
//! Ring descriptors are `PB(n=<int>, a=<int>)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bundle::SplitBundle;
use crate::error::SyntaxError;
use crate::laurent::{LaurentMatrix, LaurentPoly};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.pos, message)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    /// Optionally signed integer.
    fn integer(&mut self) -> Result<i64, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let at = self.pos;
        let Some(ds) = self.digits() else {
            self.pos = at;
            return Err(self.error("expected an integer"));
        };
        let v: i64 = ds
            .parse()
            .map_err(|_| SyntaxError::new(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn big_unsigned(&mut self) -> Option<BigInt> {
        self.skip_ws();
        self.digits().and_then(|d| d.parse().ok())
    }
}

pub fn parse_bundle(text: &str) -> Result<SplitBundle, SyntaxError> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Err(cur.error("empty expression"));
    }
    let b = bundle_expr(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(b)
}

fn bundle_expr(cur: &mut Cursor) -> Result<SplitBundle, SyntaxError> {
    let mut acc = bundle_term(cur)?;
    while cur.eat(b'+') {
        acc = acc.direct_sum(&bundle_term(cur)?);
    }
    Ok(acc)
}

fn bundle_term(cur: &mut Cursor) -> Result<SplitBundle, SyntaxError> {
    let mut acc = bundle_factor(cur)?;
    while cur.eat(b'*') {
        acc = acc.tensor(&bundle_factor(cur)?);
    }
    Ok(acc)
}

fn bundle_factor(cur: &mut Cursor) -> Result<SplitBundle, SyntaxError> {
    match cur.peek() {
        Some(b'O') => {
            cur.pos += 1;
            if cur.eat(b'(') {
                let d = cur.integer()?;
                cur.expect(b')')?;
                Ok(SplitBundle::line(d))
            } else {
                Ok(SplitBundle::line(0))
            }
        }
        Some(b'(') => {
            cur.pos += 1;
            let inner = bundle_expr(cur)?;
            cur.expect(b')')?;
            Ok(inner)
        }
        Some(_) => Err(cur.error("expected `O` or `(`")),
        None => Err(cur.error("unexpected end of input")),
    }
}

/// Parses `p` or `p/q` with an optional sign.
pub fn parse_rational(text: &str) -> Result<BigRational, SyntaxError> {
    let mut cur = Cursor::new(text);
    let neg = cur.eat(b'-');
    if !neg {
        cur.eat(b'+');
    }
    let r = unsigned_rational(&mut cur)?.ok_or_else(|| cur.error("expected a rational number"))?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(if neg { -r } else { r })
}

fn unsigned_rational(cur: &mut Cursor) -> Result<Option<BigRational>, SyntaxError> {
    let Some(num) = cur.big_unsigned() else {
        return Ok(None);
    };
    if cur.eat(b'/') {
        let at = cur.pos;
        let den = cur.big_unsigned().ok_or_else(|| cur.error("expected a denominator"))?;
        if den.is_zero() {
            return Err(SyntaxError::new(at, "zero denominator"));
        }
        Ok(Some(BigRational::new(num, den)))
    } else {
        Ok(Some(BigRational::from_integer(num)))
    }
}

pub fn parse_laurent_poly(text: &str) -> Result<LaurentPoly, SyntaxError> {
    let mut cur = Cursor::new(text);
    let p = laurent_poly(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(p)
}

fn laurent_poly(cur: &mut Cursor) -> Result<LaurentPoly, SyntaxError> {
    let mut acc = LaurentPoly::zero();
    let mut neg = cur.eat(b'-');
    if !neg {
        cur.eat(b'+');
    }
    loop {
        let (c, e) = laurent_mono(cur)?;
        acc.add_term(e, if neg { -c } else { c });
        if cur.eat(b'+') {
            neg = false;
        } else if cur.eat(b'-') {
            neg = true;
        } else {
            break;
        }
    }
    Ok(acc)
}

fn laurent_mono(cur: &mut Cursor) -> Result<(BigRational, i64), SyntaxError> {
    let coef = unsigned_rational(cur)?;
    if coef.is_some() {
        cur.eat(b'*');
    }
    if cur.eat(b't') {
        let e = if cur.eat(b'^') { cur.integer()? } else { 1 };
        Ok((coef.unwrap_or_else(BigRational::one), e))
    } else {
        match coef {
            Some(c) => Ok((c, 0)),
            None => Err(cur.error("expected a coefficient or `t`")),
        }
    }
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_laurent_rows(text: &str) -> Result<Vec<Vec<LaurentPoly>>, SyntaxError> {
    let mut cur = Cursor::new(text);
    let mut rows = vec![vec![laurent_poly(&mut cur)?]];
    loop {
        if cur.eat(b',') {
            let p = laurent_poly(&mut cur)?;
            rows.last_mut().expect("nonempty").push(p);
        } else if cur.eat(b';') {
            rows.push(vec![laurent_poly(&mut cur)?]);
        } else {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(rows)
}

pub fn parse_laurent_matrix(text: &str) -> Result<LaurentMatrix, crate::error::TransitionError> {
    let rows = parse_laurent_rows(text)?;
    LaurentMatrix::from_rows(rows)
}

/// Parses `PB(n=2, a=1)` into `(n, a)`.
pub fn parse_ring_descriptor(text: &str) -> Result<(usize, i64), SyntaxError> {
    let mut cur = Cursor::new(text);
    for &c in b"PB(" {
        cur.expect(c)?;
    }
    cur.expect(b'n')?;
    cur.expect(b'=')?;
    let at = cur.pos;
    let n = cur.integer()?;
    if n < 1 {
        return Err(SyntaxError::new(at, "fiber dimension must be at least 1"));
    }
    cur.expect(b',')?;
    cur.expect(b'a')?;
    cur.expect(b'=')?;
    let a = cur.integer()?;
    cur.expect(b')')?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok((n as usize, a))
}
