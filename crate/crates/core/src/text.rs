//! Tokenizer and term parser shared by the vacuum, UEA, chain and polynomial
//! text formats. Errors carry 1-based line/column positions.

use std::fmt;

use thiserror::Error;

use crate::arith::Rational;
use crate::lie::Generator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Unsigned integer or `p/q` literal.
    Num(String),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    /// `|0>`
    Ket,
    Pipe,
    Colon,
    Semi,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Ket => f.write_str("`|0>`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

/// Tokenizes `src`; `#` starts a comment that runs to the end of the line.
pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut advance = 1;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                out.push((Tok::Num(chars[i..j].iter().collect()), pos));
                advance = j - i;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().collect()), pos));
                advance = j - i;
            }
            '|' => {
                if chars.get(i + 1) == Some(&'0') && chars.get(i + 2) == Some(&'>') {
                    out.push((Tok::Ket, pos));
                    advance = 3;
                } else {
                    out.push((Tok::Pipe, pos));
                }
            }
            '(' => out.push((Tok::LParen, pos)),
            ')' => out.push((Tok::RParen, pos)),
            '[' => out.push((Tok::LBracket, pos)),
            ']' => out.push((Tok::RBracket, pos)),
            '{' => out.push((Tok::LBrace, pos)),
            '}' => out.push((Tok::RBrace, pos)),
            ',' => out.push((Tok::Comma, pos)),
            '+' => out.push((Tok::Plus, pos)),
            '-' | '\u{2212}' => out.push((Tok::Minus, pos)),
            '*' => out.push((Tok::Star, pos)),
            '^' => out.push((Tok::Caret, pos)),
            ':' => out.push((Tok::Colon, pos)),
            ';' => out.push((Tok::Semi, pos)),
            '=' => out.push((Tok::Eq, pos)),
            other => return Err(ParseError::new(pos, format!("unexpected character `{other}`"))),
        }
        i += advance;
        col += advance;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

pub struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor { toks: tokenize(src)?, at: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.at + k).min(self.toks.len() - 1);
        &self.toks[idx].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {t}")))
        }
    }

    pub fn unexpected(&self, what: &str) -> ParseError {
        ParseError::new(self.pos(), format!("{what}, found {}", self.peek()))
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn number(&mut self) -> Result<Rational, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(s) => s.parse().map_err(|e| ParseError::new(pos, format!("{e}"))),
            other => Err(ParseError::new(pos, format!("expected a number, found {other}"))),
        }
    }

    pub fn small_int(&mut self) -> Result<usize, ParseError> {
        let pos = self.pos();
        let q = self.number()?;
        q.to_i64()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| ParseError::new(pos, format!("expected a nonnegative integer, found {q}")))
    }

    pub fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let v = self.small_int()? as i64;
        Ok(if neg { -v } else { v })
    }

    /// Does the next token start a generator name?
    pub fn at_generator(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                let bracketed = matches!(self.peek_at(1), Tok::LBracket | Tok::LBrace);
                match s.as_str() {
                    "e" | "f" | "h" | "e_" | "f_" | "h_" => bracketed,
                    _ => parse_h_ident(s).is_some(),
                }
            }
            _ => false,
        }
    }

    /// `e[i,j]`, `f[i,j]`, `h[i]`, `e_{i,j}`, `h_{i}`, `h_i`, `hi`.
    pub fn generator(&mut self) -> Result<(Generator, Pos), ParseError> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            other => return Err(ParseError::new(pos, format!("expected a generator, found {other}"))),
        };
        if let Some(i) = parse_h_ident(&name) {
            return Ok((Generator::H(i), pos));
        }
        let kind = name.trim_end_matches('_');
        let close = match self.bump() {
            Tok::LBracket => Tok::RBracket,
            Tok::LBrace => Tok::RBrace,
            other => return Err(ParseError::new(pos, format!("expected `[` after `{name}`, found {other}"))),
        };
        let i = self.small_int()?;
        let g = match kind {
            "h" => Generator::H(i),
            "e" | "f" => {
                self.expect(&Tok::Comma)?;
                let j = self.small_int()?;
                if kind == "e" {
                    Generator::E(i, j)
                } else {
                    Generator::F(i, j)
                }
            }
            _ => return Err(ParseError::new(pos, format!("unknown generator `{name}`"))),
        };
        self.expect(&close)?;
        Ok((g, pos))
    }
}

fn parse_h_ident(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('h')?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// One letter of a parsed term: a generator with an optional mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLetter {
    pub gen: Generator,
    pub mode: Option<i64>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: Rational,
    pub letters: Vec<RawLetter>,
}

/// Parses `[+|-] term ((+|-) term)*` up to (not including) a token in `stop`.
///
/// A term is an optional coefficient (optionally followed by `*`), then a
/// product of letters, each `gen` or `gen(m)` (when `modes` is set), with
/// an optional `^k` power, then an optional `|0>`. A bare `0` is the empty sum.
pub fn parse_sum(cur: &mut Cursor, modes: bool, stop: &[Tok]) -> Result<Vec<RawTerm>, ParseError> {
    let mut terms = Vec::new();
    let stopped = |c: &Cursor| c.at_end() || stop.contains(c.peek());
    let mut first = true;
    loop {
        if stopped(cur) {
            if first {
                return Err(cur.unexpected("expected a term"));
            }
            break;
        }
        let mut sign = Rational::one();
        if cur.eat(&Tok::Minus) {
            sign = -sign;
        } else if !cur.eat(&Tok::Plus) && !first {
            return Err(cur.unexpected("expected `+` or `-` between terms"));
        }
        first = false;
        let term_pos = cur.pos();
        let mut coeff = sign;
        let mut had_coeff = false;
        if let Tok::Num(_) = cur.peek() {
            coeff = &coeff * &cur.number()?;
            had_coeff = true;
            cur.eat(&Tok::Star);
        }
        let mut letters = Vec::new();
        while cur.at_generator() {
            let (gen, pos) = cur.generator()?;
            let mode = if modes {
                cur.expect(&Tok::LParen)?;
                let m = cur.signed_int()?;
                cur.expect(&Tok::RParen)?;
                Some(m)
            } else {
                None
            };
            let mut power = 1;
            if cur.eat(&Tok::Caret) {
                power = cur.small_int()?;
            }
            for _ in 0..power {
                letters.push(RawLetter { gen, mode, pos });
            }
            cur.eat(&Tok::Star);
        }
        let had_ket = cur.eat(&Tok::Ket);
        if !had_coeff && letters.is_empty() && !had_ket {
            return Err(ParseError::new(term_pos, format!("expected a term, found {}", cur.peek())));
        }
        if !(had_coeff && coeff.is_zero() && letters.is_empty()) {
            terms.push(RawTerm { coeff, letters });
        }
    }
    Ok(terms)
}
