//! System literals such as `L2(3;2^4,1)`.
//!
//! ```text
//! system := "L" INT "(" INT (";" mults)? ")"
//! mults  := mult ("," mult)*
//! mult   := INT ("^" INT)?
//! ```
//!
//! `m^r` repeats multiplicity `m` r times. Whitespace between tokens is
//! ignored; every INT is a non-negative decimal.

use std::fmt;

use k3sys::classifier::{normalize, LinearSystemSpec};
use k3sys::lattice::{DivisorClass, SurfaceParams};
use thiserror::Error;

/// Upper bound on the number of points a literal may expand to.
pub const MAX_POINTS: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Expected {
        expected: &'static str,
        found: String,
    },
    #[error("negative values are not allowed")]
    Negative,
    #[error("integer too large")]
    IntegerTooLarge,
    #[error("n must be even (n = 2g-2), got {0}")]
    OddN(i64),
    #[error("n must be at least 2, got {0}")]
    NTooSmall(i64),
    #[error("too many points (at most {MAX_POINTS})")]
    TooManyPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

/// A parsed literal. `runs` keeps the multiplicities as written, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLiteral {
    pub source: String,
    pub n: i64,
    pub d: i64,
    /// `(multiplicity, repetitions)` in source order.
    pub runs: Vec<(i64, i64)>,
}

impl SystemLiteral {
    /// Multiplicities in source order, zeros kept.
    pub fn raw_mults(&self) -> Vec<i64> {
        self.runs
            .iter()
            .flat_map(|&(m, r)| std::iter::repeat_n(m, r as usize))
            .collect()
    }

    pub fn spec(&self) -> LinearSystemSpec {
        normalize(self.n, self.d, &self.raw_mults()).expect("validated while parsing")
    }

    /// The class with points in source order, for positional pairings.
    pub fn raw_class(&self) -> DivisorClass {
        let surface = SurfaceParams::new(self.n).expect("validated while parsing");
        DivisorClass::new(surface, self.d, self.raw_mults())
    }
}

impl fmt::Display for SystemLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec().fmt(f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn expected(&mut self, expected: &'static str) -> ParseError {
        let found = match self.peek() {
            Some('-') => return self.error(ParseErrorKind::Negative),
            Some(c) => format!("'{c}'"),
            None => "end of input".to_owned(),
        };
        self.error(ParseErrorKind::Expected { expected, found })
    }

    fn eat(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.expected(expected))
        }
    }

    /// Returns the integer and the offset where it starts.
    fn int(&mut self, expected: &'static str) -> Result<(i64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.expected(expected));
        }
        let text = &self.src[start..start + digits];
        let value = text
            .parse::<i64>()
            .map_err(|_| self.error(ParseErrorKind::IntegerTooLarge))?;
        self.pos += digits;
        Ok((value, start))
    }
}

pub fn parse_literal(text: &str) -> Result<SystemLiteral, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    p.eat('L', "'L'")?;
    let (n, n_at) = p.int("n")?;
    if n < 2 {
        return Err(ParseError {
            offset: n_at,
            kind: ParseErrorKind::NTooSmall(n),
        });
    }
    if n % 2 != 0 {
        return Err(ParseError {
            offset: n_at,
            kind: ParseErrorKind::OddN(n),
        });
    }
    p.eat('(', "'('")?;
    let (d, _) = p.int("degree d")?;

    let mut runs = Vec::new();
    let mut points = 0i64;
    if p.peek() == Some(';') {
        p.pos += 1;
        loop {
            let (m, _) = p.int("multiplicity")?;
            let mut reps = 1;
            if p.peek() == Some('^') {
                p.pos += 1;
                reps = p.int("repetition count")?.0;
            }
            points = points.saturating_add(reps);
            if points > MAX_POINTS {
                return Err(p.error(ParseErrorKind::TooManyPoints));
            }
            runs.push((m, reps));
            if p.peek() == Some(',') {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    p.eat(')', "')'")?;
    if p.peek().is_some() {
        return Err(p.expected("end of input"));
    }
    Ok(SystemLiteral {
        source: text.to_owned(),
        n,
        d,
        runs,
    })
}
