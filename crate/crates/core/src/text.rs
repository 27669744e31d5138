//! Small hand-rolled scanner shared by the field, matrix and MSC literal parsers.
//!
//! Whitespace is skipped before every token and errors carry the byte offset
//! into the original input.

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    /// Consumes `word` if the input continues with it (after whitespace).
    pub(crate) fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> Result<()> {
        if self.eat_word(word) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{word}'")))
        }
    }

    /// Unsigned decimal integer.
    pub(crate) fn natural(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let digits: usize = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.error("expected a decimal integer"));
        }
        let text = &self.rest()[..digits];
        self.pos += digits;
        Ok(text.parse().expect("ascii digits"))
    }

    /// Optionally signed decimal integer.
    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let n = self.natural()?;
        Ok(if negative { -n } else { n })
    }

    pub(crate) fn small_integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let n = self.integer()?;
        i64::try_from(n).map_err(|_| Error::parse(start, "integer out of range"))
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.pos, message)
    }
}
