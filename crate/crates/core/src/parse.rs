//! The element grammar shared by the library and the command line.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? digits)?
//! atom  := digits | 'u' | 't' | 'z' | '(' expr ')'
//! ```
//!
//! Division and negative powers are only allowed for divisors free of z.

use crate::family::{FamilyError, FamilyModule};
use crate::field::{
    is_irreducible, Field, FqElem, FqPoly, ParamPoly, Place, RatFunc,
};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("at position {pos}: expected {expected}, found {found}")]
    Syntax { pos: usize, expected: &'static str, found: String },
    #[error("at position {pos}: {value} is not a residue modulo {p}")]
    OutOfRange { pos: usize, value: String, p: u32 },
    #[error("at position {pos}: u is only available in a proper extension of F_p")]
    NoGenerator { pos: usize },
    #[error("at position {pos}: division by zero")]
    DivisionByZero { pos: usize },
    #[error("at position {pos}: the divisor involves z")]
    DivisorInvolvesZ { pos: usize },
    #[error("at position {pos}: exponent exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize },
    #[error("expected {expected}, got {found}")]
    WrongKind { expected: &'static str, found: String },
    #[error("invalid place {0}: expected inf or a monic irreducible polynomial in t")]
    BadPlace(String),
    #[error("invalid family description: {0}")]
    BadFamily(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a Field,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn found(&self) -> String {
        match self.src.get(self.pos) {
            None => "end of input".into(),
            Some(&b) => format!("'{}'", b as char),
        }
    }

    fn fail<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos, expected, found: self.found() })
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| (start, std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")))
    }

    fn expr(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                let d = rhs.as_constant().ok_or(ParseError::DivisorInvolvesZ { pos: at })?;
                if d.is_zero() {
                    return Err(ParseError::DivisionByZero { pos: at });
                }
                acc.scale(&d.inv())
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamPoly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let Some((at, text)) = self.digits() else { return self.fail("an exponent") };
        let k: u64 = text
            .parse()
            .ok()
            .filter(|&k| k <= MAX_EXPONENT)
            .ok_or(ParseError::ExponentTooLarge { pos: at })?;
        if negative {
            let b = base.as_constant().ok_or(ParseError::DivisorInvolvesZ { pos: at })?;
            if b.is_zero() {
                return Err(ParseError::DivisionByZero { pos: at });
            }
            return Ok(ParamPoly::from(b.pow(-(k as i64))));
        }
        if let Some(b) = base.as_constant() {
            return Ok(ParamPoly::from(b.pow(k as i64)));
        }
        let mut out = ParamPoly::one(self.field);
        let mut sq = base;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<ParamPoly, ParseError> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.fail("')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(ParamPoly::from(RatFunc::t(f)))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(ParamPoly::z(f))
            }
            Some(b'u') => {
                if f.degree() == 1 {
                    return Err(ParseError::NoGenerator { pos: self.pos });
                }
                self.pos += 1;
                Ok(ParamPoly::from(RatFunc::constant(f, f.generator_u())))
            }
            Some(b) if b.is_ascii_digit() => {
                let (at, text) = self.digits().expect("digit present");
                let value = text
                    .parse::<u32>()
                    .ok()
                    .filter(|&v| v < f.characteristic())
                    .ok_or_else(|| ParseError::OutOfRange { pos: at, value: text.into(), p: f.characteristic() })?;
                Ok(ParamPoly::from(RatFunc::constant(f, f.from_int(value as i64))))
            }
            _ => self.fail("a number, u, t, z or '('"),
        }
    }
}

/// Parse any element of K[z].
pub fn parse_param(field: &Field, text: &str) -> Result<ParamPoly, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, field };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.fail("an operator or end of input");
    }
    Ok(out)
}

/// Parse an element of K = F_{q^s}(t).
pub fn parse_ratfunc(field: &Field, text: &str) -> Result<RatFunc, ParseError> {
    let p = parse_param(field, text)?;
    p.as_constant().ok_or_else(|| ParseError::WrongKind { expected: "an element of K", found: p.to_string() })
}

/// Parse a polynomial in t.
pub fn parse_fqpoly(field: &Field, text: &str) -> Result<FqPoly, ParseError> {
    let r = parse_ratfunc(field, text)?;
    if !r.is_polynomial() {
        return Err(ParseError::WrongKind { expected: "a polynomial in t", found: r.to_string() });
    }
    Ok(r.num().clone())
}

/// Parse a constant of F_{q^s}.
pub fn parse_constant(field: &Field, text: &str) -> Result<FqElem, ParseError> {
    let r = parse_ratfunc(field, text)?;
    r.as_constant()
        .ok_or_else(|| ParseError::WrongKind { expected: "a constant", found: r.to_string() })
}

/// `inf` or a monic irreducible polynomial in t.
pub fn parse_place(field: &Field, text: &str) -> Result<Place, ParseError> {
    let trimmed = text.trim();
    if trimmed == "inf" || trimmed == "∞" {
        return Ok(Place::Infinity);
    }
    let p = parse_fqpoly(field, trimmed)?;
    if p.is_constant() || !p.is_monic() || !is_irreducible(&p) {
        return Err(ParseError::BadPlace(trimmed.into()));
    }
    Ok(Place::finite(p))
}

/// A family description such as `r=2; g1=z`.
pub fn parse_family(field: &Field, text: &str) -> Result<FamilyModule, ParseError> {
    let mut rank: Option<usize> = None;
    let mut entries: Vec<(usize, ParamPoly)> = Vec::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| ParseError::BadFamily(format!("'{part}' is not key=value")))?;
        let key = key.trim();
        if key == "r" {
            let r = value.trim().parse().map_err(|_| ParseError::BadFamily(format!("bad rank '{value}'")))?;
            rank = Some(r);
        } else if let Some(idx) = key.strip_prefix('g') {
            let i: usize = idx.parse().map_err(|_| ParseError::BadFamily(format!("bad key '{key}'")))?;
            entries.push((i, parse_param(field, value)?));
        } else {
            return Err(ParseError::BadFamily(format!("unknown key '{key}'")));
        }
    }
    let r = rank.ok_or_else(|| ParseError::BadFamily("missing r".into()))?;
    let mut g = vec![ParamPoly::zero(field); r.saturating_sub(1)];
    for (i, p) in entries {
        if i == 0 || i >= r {
            return Err(ParseError::BadFamily(format!("g{i} is outside 1..{}", r.saturating_sub(1))));
        }
        g[i - 1] = p;
    }
    Ok(FamilyModule::new(field, r, g)?)
}
