//! Tokenizer shared by the algebra DSL and the formula syntax.

use std::fmt;

use serde::{Deserialize, Serialize};

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Bare word: letters, digits, `_` and `'`.
    Word(String),
    /// Double-quoted label.
    Quoted(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Comma,
    Dot,
    Lt,
    Le,
    Eq,
    FatArrow,
    Arrow,
    Tilde,
    Bang,
    Wedge,
    Vee,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Word(w) => return write!(f, "`{w}`"),
            Tok::Quoted(w) => return write!(f, "\"{w}\""),
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Colon => "`:`",
            Tok::Semi => "`;`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Eq => "`=`",
            Tok::FatArrow => "`=>`",
            Tok::Arrow => "`->`",
            Tok::Tilde => "`~`",
            Tok::Bang => "`!`",
            Tok::Wedge => "`/\\`",
            Tok::Vee => "`\\/`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens; `#` starts a comment running to end of line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, (Loc, String)> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if is_word_char(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                // an inner hyphen joins words (`monadic-godel`) but not `->`
                let joins = c == '-' && chars.clone().nth(1).is_some_and(char::is_alphabetic);
                if !is_word_char(c) && !joins {
                    break;
                }
                w.push(c);
                bump(&mut chars);
            }
            out.push(Token { tok: Tok::Word(w), loc });
            continue;
        }
        if c == '"' {
            bump(&mut chars);
            let mut w = String::new();
            loop {
                match bump(&mut chars) {
                    Some('"') => break,
                    Some('\n') | None => return Err((loc, "unterminated quoted label".into())),
                    Some(c) => w.push(c),
                }
            }
            out.push(Token { tok: Tok::Quoted(w), loc });
            continue;
        }
        bump(&mut chars);
        let next = chars.peek().copied();
        let tok = match (c, next) {
            ('<', Some('=')) => {
                bump(&mut chars);
                Tok::Le
            }
            ('=', Some('>')) => {
                bump(&mut chars);
                Tok::FatArrow
            }
            ('-', Some('>')) => {
                bump(&mut chars);
                Tok::Arrow
            }
            ('/', Some('\\')) => {
                bump(&mut chars);
                Tok::Wedge
            }
            ('\\', Some('/')) => {
                bump(&mut chars);
                Tok::Vee
            }
            ('<', _) => Tok::Lt,
            ('=', _) => Tok::Eq,
            ('{', _) => Tok::LBrace,
            ('}', _) => Tok::RBrace,
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            ('[', _) => Tok::LBracket,
            (']', _) => Tok::RBracket,
            (':', _) => Tok::Colon,
            (';', _) => Tok::Semi,
            (',', _) => Tok::Comma,
            ('.', _) => Tok::Dot,
            ('~', _) => Tok::Tilde,
            ('!', _) => Tok::Bang,
            _ => return Err((loc, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, loc });
    }
    out.push(Token {
        tok: Tok::Eof,
        loc: Loc { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_positions() {
        let toks = tokenize("A (E x \\/ y) <= x -> y # tail\n=>").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Word("A".into()),
                Tok::LParen,
                Tok::Word("E".into()),
                Tok::Word("x".into()),
                Tok::Vee,
                Tok::Word("y".into()),
                Tok::RParen,
                Tok::Le,
                Tok::Word("x".into()),
                Tok::Arrow,
                Tok::Word("y".into()),
                Tok::FatArrow,
                Tok::Eof,
            ]
        );
        assert_eq!(toks[11].loc, Loc { line: 2, col: 1 });
    }

    #[test]
    fn quoted_labels() {
        let toks = tokenize("\"(0,x)\"<\"(x,0)\"").unwrap();
        assert_eq!(toks[0].tok, Tok::Quoted("(0,x)".into()));
        assert_eq!(toks[1].tok, Tok::Lt);
        assert!(tokenize("\"open").is_err());
        assert!(tokenize("x @ y").is_err());
        let toks = tokenize("monadic-godel x->y").unwrap();
        assert_eq!(toks[0].tok, Tok::Word("monadic-godel".into()));
        assert_eq!(toks[2].tok, Tok::Arrow);
    }
}
