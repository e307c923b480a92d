//! Tokenizer for expressions and declaration files.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn error(self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Prime,
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: &str = "+-*/^(){}[],;:|=";

pub fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(s), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
                col += 1;
            }
            let n = s.parse().expect("digits");
            out.push(Token { tok: Tok::Int(n), pos });
            continue;
        }
        chars.next();
        col += 1;
        let tok = match c {
            '\'' => Tok::Prime,
            c if SYMBOLS.contains(c) => Tok::Sym(c),
            c => return Err(pos.error(format!("unexpected character '{c}'"))),
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let t = lex("u'' + 3/2*c # note\n  v").unwrap();
        let kinds: Vec<&Tok> = t.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::Ident("u".into()));
        assert_eq!(kinds[1], &Tok::Prime);
        assert_eq!(kinds[2], &Tok::Prime);
        assert_eq!(t[9].pos, Pos { line: 2, col: 3 });
        assert!(matches!(lex("u $ v"), Err(Error::Parse { line: 1, col: 3, .. })));
    }
}
