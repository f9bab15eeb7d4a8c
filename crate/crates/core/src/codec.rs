//! The `.vkd` text format.
//!
//! ```text
//! # right-handed trefoil
//! X+(1,4,2,5)
//! X+(3,6,4,1)
//! X+(5,2,6,3)
//! ```
//!
//! Tokens are `X+(a,b,c,d)`, `X-(a,b,c,d)`, `V(a,b,c,d)` and `U` (a
//! crossing-free circle), separated by whitespace. Lines starting with `#` are
//! comments. The renderer writes one token per line with crossings in
//! canonical order and free loops last.

use crate::diagram::{Crossing, CrossingKind, Diagram, Edge};
use crate::error::{Error, Result};

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut crossings = Vec::new();
    let mut free_loops = 0;
    for (ln, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut lexer = Lexer {
            line: ln + 1,
            src: line.as_bytes(),
            pos: 0,
        };
        while let Some(tok) = lexer.next_token()? {
            match tok {
                Token::Loop => free_loops += 1,
                Token::Crossing(c) => crossings.push(c),
            }
        }
    }
    Diagram::new(crossings, free_loops)
}

pub fn render_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    for c in d.crossings() {
        let head = match c.kind {
            CrossingKind::Positive => "X+",
            CrossingKind::Negative => "X-",
            CrossingKind::Virtual => "V",
        };
        let [a, b, cc, dd] = c.slots;
        out.push_str(&format!("{head}({a},{b},{cc},{dd})\n"));
    }
    for _ in 0..d.free_loops() {
        out.push_str("U\n");
    }
    out
}

enum Token {
    Crossing(Crossing),
    Loop,
}

struct Lexer<'a> {
    line: usize,
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn number(&mut self) -> Result<Edge> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an edge label"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| {
                self.pos = start;
                self.err("edge label out of range")
            })
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        self.skip_ws();
        let Some(b) = self.peek() else {
            return Ok(None);
        };
        let kind = match b {
            b'U' => {
                self.pos += 1;
                self.ensure_boundary()?;
                return Ok(Some(Token::Loop));
            }
            b'V' => {
                self.pos += 1;
                CrossingKind::Virtual
            }
            b'X' => {
                self.pos += 1;
                match self.peek() {
                    Some(b'+') => CrossingKind::Positive,
                    Some(b'-') => CrossingKind::Negative,
                    _ => return Err(self.err("expected '+' or '-' after 'X'")),
                }
            }
            _ => return Err(self.err(format!("unexpected character '{}'", b as char))),
        };
        if kind.is_classical() {
            self.pos += 1;
        }
        self.expect(b'(')?;
        let mut slots = [0; 4];
        for (i, s) in slots.iter_mut().enumerate() {
            if i > 0 {
                self.expect(b',')?;
            }
            *s = self.number()?;
        }
        self.expect(b')')?;
        self.ensure_boundary()?;
        Ok(Some(Token::Crossing(Crossing { kind, slots })))
    }

    fn ensure_boundary(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(b) if b.is_ascii_whitespace() => Ok(()),
            Some(_) => Err(self.err("tokens must be separated by whitespace")),
        }
    }
}
