use std::fmt;

use super::ast::Loc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Lt,
    Comma,
    Semi,
    LBrace,
    RBrace,
    Colon,
    LBracket,
    RBracket,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

/// A character the lexer cannot start a token with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub loc: Loc,
    pub found: char,
}

/// Splits input into tokens. `#` starts a comment running to end of line.
/// The final token is always `Eof`, located just past the last token.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut end = Loc { line: 1, column: 1 };
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, column: col };
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
                col += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                name.push(c);
                chars.next();
                col += 1;
            }
            out.push(Token {
                tok: Tok::Name(name),
                loc,
            });
            end = Loc { line, column: col };
            continue;
        }
        let tok = match c {
            '<' => Tok::Lt,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '/' => Tok::Slash,
            other => return Err(LexError { loc, found: other }),
        };
        chars.next();
        col += 1;
        out.push(Token { tok, loc });
        end = Loc { line, column: col };
    }
    out.push(Token {
        tok: Tok::Eof,
        loc: end,
    });
    Ok(out)
}
