use thiserror::Error;

use super::{Letter, Sign};

/// Largest accepted `|n|` in an `^n` exponent.
const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    /// Zero-based character offset into the input.
    pub position: usize,
    pub message: String,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    symbol: char,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn sequence(&mut self, closers: &[char]) -> Result<Vec<Letter>, ParseError> {
        let mut letters = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                None => return Ok(letters),
                Some(c) if closers.contains(&c) => return Ok(letters),
                Some(_) => letters.extend(self.item()?),
            }
        }
    }

    fn item(&mut self) -> Result<Vec<Letter>, ParseError> {
        let atom = self.atom()?;
        self.skip_whitespace();
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_whitespace();
        let exponent = self.integer()?;
        if exponent.unsigned_abs() > MAX_EXPONENT {
            return self.error(format!("exponent {exponent} exceeds the limit {MAX_EXPONENT}"));
        }
        let base: Vec<Letter> = if exponent < 0 {
            atom.iter().rev().map(|l| l.inverse()).collect()
        } else {
            atom
        };
        let mut out = Vec::with_capacity(base.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            out.extend_from_slice(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Vec<Letter>, ParseError> {
        match self.peek() {
            Some(c) if c == self.symbol => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return self.error(format!("expected a generator index after '{}'", self.symbol));
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                match digits.parse::<u32>() {
                    Ok(index) => Ok(vec![Letter::new(index, Sign::Pos)]),
                    Err(_) => {
                        self.pos = start;
                        self.error(format!("generator index {digits} out of range"))
                    }
                }
            }
            Some('e') => {
                self.pos += 1;
                if matches!(self.peek(), Some(c) if c.is_alphanumeric()) {
                    self.pos -= 1;
                    return self.error("unexpected token starting with 'e'");
                }
                Ok(Vec::new())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sequence(&[')'])?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.sequence(&[','])?;
                self.expect(',')?;
                let b = self.sequence(&[']'])?;
                self.expect(']')?;
                let inv = |v: &[Letter]| v.iter().rev().map(|l| l.inverse()).collect::<Vec<_>>();
                let mut out = inv(&a);
                out.extend(inv(&b));
                out.extend_from_slice(&a);
                out.extend_from_slice(&b);
                Ok(out)
            }
            Some(c) => self.error(format!(
                "unexpected character '{c}'; expected '{}<index>', 'e', '(' or '['",
                self.symbol
            )),
            None => self.error("unexpected end of input"),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return self.error("expected an integer exponent");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.error(format!("exponent {text} out of range"))
        })
    }
}

/// Parses word text into a raw (not yet reduced) letter sequence.
///
/// Tokens are separated by whitespace or `*`. A token is `<symbol><index>`,
/// `e`, a parenthesised group or a commutator `[u, v]`, optionally followed by
/// `^<integer>`.
pub fn parse_letters(text: &str, symbol: char) -> Result<Vec<Letter>, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        symbol,
    };
    let letters = parser.sequence(&[])?;
    if parser.pos != parser.chars.len() {
        return parser.error("trailing input");
    }
    Ok(letters)
}

/// Splits on `separator` outside of brackets and parentheses.
pub fn split_top_level(text: &str, separator: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == separator && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}
