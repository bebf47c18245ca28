//! Character-level cursor shared by the formula and proof parsers.

use thiserror::Error;

use crate::formula::{Atom, Context, Formula, Modality};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn peek_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(s)
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return self.error("expected identifier"),
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_' || *c == '\''))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    pub(crate) fn natural(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return self.error("expected natural number");
        }
        let n = rest[..end].parse().or_else(|_| self.error("number out of range"))?;
        self.pos += end;
        Ok(n)
    }

    pub(crate) fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E')))
            .unwrap_or(rest.len());
        match rest[..end].parse::<f64>() {
            Ok(x) if end > 0 => {
                self.pos += end;
                Ok(x)
            }
            _ => self.error("expected number"),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(Formula::Atom(Atom::negative(self.ident()?)))
            }
            Some('(') => {
                self.pos += 1;
                let a = self.formula()?;
                let f = if self.eat("%") {
                    Formula::par(a, self.formula()?)
                } else if self.eat("*") {
                    Formula::tensor(a, self.formula()?)
                } else {
                    return self.error("expected `%` or `*`");
                };
                self.expect(")")?;
                Ok(f)
            }
            _ if self.eat("[]") => Ok(Formula::boxed(self.formula()?)),
            _ if self.eat("<>") => Ok(Formula::diamond(self.formula()?)),
            _ => Ok(Formula::Atom(Atom::positive(self.ident()?))),
        }
    }

    pub(crate) fn context(&mut self) -> Result<Context, ParseError> {
        if self.eat("[.]") {
            return Ok(Context::Hole);
        }
        if self.eat("[]") {
            return Ok(Context::Modal(Modality::Box, Box::new(self.context()?)));
        }
        if self.eat("<>") {
            return Ok(Context::Modal(Modality::Diamond, Box::new(self.context()?)));
        }
        if !self.eat("(") {
            return self.error("expected context");
        }
        // Exactly one side holds the hole; try the left side as a context first.
        let start = self.pos;
        let c = match self.context() {
            Ok(left) => {
                let par = self.binary_op()?;
                let right = self.formula()?;
                if par {
                    Context::ParLeft(Box::new(left), right)
                } else {
                    Context::TensorLeft(Box::new(left), right)
                }
            }
            Err(_) => {
                self.pos = start;
                let left = self.formula()?;
                let par = self.binary_op()?;
                let right = self.context()?;
                if par {
                    Context::ParRight(left, Box::new(right))
                } else {
                    Context::TensorRight(left, Box::new(right))
                }
            }
        };
        self.expect(")")?;
        Ok(c)
    }

    fn binary_op(&mut self) -> Result<bool, ParseError> {
        if self.eat("%") {
            Ok(true)
        } else if self.eat("*") {
            Ok(false)
        } else {
            self.error("expected `%` or `*`")
        }
    }
}
