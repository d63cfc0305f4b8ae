//! Text input for pitch-class multisets and weighted distributions.
//!
//! Accepted forms, whitespace-insensitive:
//!
//! ```text
//! {0, 4, 7}          multiset, each entry adds 1
//! 0:2, 4:1, 7:0.5    weighted entries
//! {0:2, 0, 7}        both may be mixed, braces are optional
//! ```
//!
//! Pitch classes must be integers in 0..=11.

use thiserror::Error;

use super::PitchClassVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PcParseError {
    #[error("parse error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("negative weight at position {position}")]
    NegativeWeight { position: usize },
}

pub fn parse_pc_text(s: &str) -> Result<PitchClassVector, PcParseError> {
    Parser { s, pos: 0 }.parse()
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, position: usize, message: impl Into<String>) -> Result<T, PcParseError> {
        Err(PcParseError::Syntax {
            position,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn token(&mut self, accept: impl Fn(char) -> bool) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !accept(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        (start, &self.s[start..self.pos])
    }

    fn parse(mut self) -> Result<PitchClassVector, PcParseError> {
        let braced = self.eat('{');
        let mut v = PitchClassVector::zeros();

        self.skip_ws();
        let empty = match self.peek() {
            None => true,
            Some('}') => braced,
            _ => false,
        };
        if !empty {
            loop {
                let (pc, weight) = self.item()?;
                v.0[pc] += weight;
                if !self.eat(',') {
                    break;
                }
            }
        }

        if braced && !self.eat('}') {
            return self.err(self.pos, "expected ',' or '}'");
        }
        self.skip_ws();
        if self.pos != self.s.len() {
            return self.err(self.pos, "unexpected trailing input");
        }
        Ok(v)
    }

    fn item(&mut self) -> Result<(usize, f64), PcParseError> {
        let (at, tok) = self.token(|c| c.is_ascii_digit() || c == '-' || c == '+');
        if tok.is_empty() {
            return self.err(at, "expected a pitch class");
        }
        let pc = match tok.parse::<i64>() {
            Ok(pc @ 0..=11) => pc as usize,
            Ok(pc) => return self.err(at, format!("pitch class {pc} outside 0..=11")),
            Err(_) => return self.err(at, format!("invalid pitch class '{tok}'")),
        };

        if !self.eat(':') {
            return Ok((pc, 1.0));
        }
        let (at, tok) = self.token(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '+'));
        let weight: f64 = match tok.parse() {
            Ok(w) => w,
            Err(_) => return self.err(at, format!("invalid weight '{tok}'")),
        };
        if weight < 0.0 {
            return Err(PcParseError::NegativeWeight { position: at });
        }
        if !weight.is_finite() {
            return self.err(at, "weight must be finite");
        }
        Ok((pc, weight))
    }
}
