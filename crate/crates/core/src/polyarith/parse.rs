//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := int | var | '(' expr ')'
//! ```
//!
//! Juxtaposition (`2x`, `x y`) is rejected. Variable names are identifiers
//! (letters, digits, `_`, trailing `'` allowed) declared in the context.

use num_bigint::BigInt;

use crate::polyarith::{CoeffRing, Integers, ModPoly, Poly, PolyError, PrimeContext, Zmod};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("exponent at position {pos} must be a nonnegative integer literal")]
    BadExponent { pos: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Parses `text` into a polynomial over `Z/p^k`; integer literals are reduced mod `p^k`.
pub fn parse_poly(text: &str, ctx: &PrimeContext, precision: u32) -> Result<ModPoly, ParseError> {
    let ring = Zmod::new(ctx.p(), precision)?;
    parse_in(text, ctx, ring)
}

/// Parses `text` into a polynomial with exact integer coefficients.
pub fn parse_int_poly(text: &str, ctx: &PrimeContext) -> Result<Poly<Integers>, ParseError> {
    parse_in(text, ctx, Integers::new(ctx.p()))
}

pub fn parse_in<R: CoeffRing>(
    text: &str,
    ctx: &PrimeContext,
    ring: R,
) -> Result<Poly<R>, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
        ring,
    };
    let result = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected input"));
    }
    Ok(result)
}

struct Parser<'a, R: CoeffRing> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a PrimeContext,
    ring: R,
}

impl<R: CoeffRing> Parser<'_, R> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr(&mut self) -> Result<Poly<R>, ParseError> {
        let negate_first = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate_first {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<R>, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.try_mul(&f)?;
        }
        // Anything that could start another factor means juxtaposition.
        if let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' {
                return Err(self.syntax("implicit multiplication is not allowed; use `*`"));
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<R>, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(ParseError::BadExponent { pos: start });
            }
            let e: u64 = digits
                .parse()
                .map_err(|_| ParseError::BadExponent { pos: start })?;
            if self.peek() == Some(b'^') {
                return Err(self.syntax("chained exponents need parentheses"));
            }
            return Ok(base.pow(e)?);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly<R>, ParseError> {
        let nvars = self.ctx.nvars();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let value: BigInt = digits.parse().expect("digits");
                let c = self.ring.from_bigint(&value);
                Ok(Poly::constant(self.ring.clone(), nvars, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name =
                    self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'\'');
                match self.ctx.index_of(&name) {
                    Some(i) => Ok(Poly::var(self.ring.clone(), nvars, i)),
                    None => Err(ParseError::UnknownIdentifier { pos: start, name }),
                }
            }
            Some(_) => Err(self.syntax("expected a number, variable or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && pred(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
