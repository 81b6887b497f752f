//! Hand-rolled lexer with line/column tracking.
//!
//! `//` line comments are trivia for the parser but are what the
//! informational index reads out of payloads, so comment extraction is a
//! first-class entry point here.

use super::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    // Digits only; sign handling and range checks happen in the parser so
    // that `i64::MIN` round-trips.
    Int(String),
    Str(String),
    Fn,
    Let,
    In,
    If,
    Then,
    Else,
    True,
    False,
    Not,
    And,
    Or,
    ConcatKw,
    TyInt,
    TyStr,
    TyBool,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Assign,
    Arrow,
    Question,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Int(text) => format!("integer `{text}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.lexeme()),
        }
    }

    fn lexeme(&self) -> &'static str {
        match self {
            Tok::Fn => "fn",
            Tok::Let => "let",
            Tok::In => "in",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Not => "not",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::ConcatKw => "concat",
            Tok::TyInt => "Int",
            Tok::TyStr => "Str",
            Tok::TyBool => "Bool",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Assign => "=",
            Tok::Arrow => "->",
            Tok::Question => "?",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! push {
        ($tok:expr, $line:expr, $col:expr) => {
            out.push(Token {
                tok: $tok,
                line: $line,
                col: $col,
            })
        };
    }

    while let Some(&ch) = chars.peek() {
        let (tl, tc) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '/' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'/') {
                    // line comment
                    for c in chars.by_ref() {
                        if c == '\n' {
                            line += 1;
                            col = 1;
                            break;
                        }
                    }
                } else {
                    push!(Tok::Slash, tl, tc);
                }
            }
            '"' => {
                chars.next();
                col += 1;
                let mut text = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    col += 1;
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            let esc = chars.next().ok_or(ParseError::Syntax {
                                line,
                                col,
                                expected: "escape character".into(),
                                found: "end of input".into(),
                            })?;
                            col += 1;
                            text.push(match esc {
                                '"' => '"',
                                '\\' => '\\',
                                'n' => '\n',
                                't' => '\t',
                                other => {
                                    return Err(ParseError::Syntax {
                                        line,
                                        col,
                                        expected: "one of \\\" \\\\ \\n \\t".into(),
                                        found: format!("\\{other}"),
                                    })
                                }
                            });
                        }
                        '\n' => {
                            return Err(ParseError::Syntax {
                                line,
                                col,
                                expected: "closing quote".into(),
                                found: "newline".into(),
                            })
                        }
                        other => text.push(other),
                    }
                }
                if !closed {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        expected: "closing quote".into(),
                        found: "end of input".into(),
                    });
                }
                push!(Tok::Str(text), tl, tc);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Int(digits), tl, tc);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        word.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "fn" => Tok::Fn,
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    "if" => Tok::If,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "concat" => Tok::ConcatKw,
                    "Int" => Tok::TyInt,
                    "Str" => Tok::TyStr,
                    "Bool" => Tok::TyBool,
                    _ => Tok::Ident(word),
                };
                push!(tok, tl, tc);
            }
            _ => {
                chars.next();
                col += 1;
                let two = |chars: &mut std::iter::Peekable<std::str::Chars>,
                           col: &mut u32,
                           next: char|
                 -> bool {
                    if chars.peek() == Some(&next) {
                        chars.next();
                        *col += 1;
                        true
                    } else {
                        false
                    }
                };
                let tok = match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '?' => Tok::Question,
                    '+' => Tok::Plus,
                    '-' => {
                        if two(&mut chars, &mut col, '>') {
                            Tok::Arrow
                        } else {
                            Tok::Minus
                        }
                    }
                    '*' => Tok::Star,
                    '%' => Tok::Percent,
                    '=' => {
                        if two(&mut chars, &mut col, '=') {
                            Tok::EqEq
                        } else {
                            Tok::Assign
                        }
                    }
                    '!' => {
                        if two(&mut chars, &mut col, '=') {
                            Tok::NotEq
                        } else {
                            return Err(ParseError::Syntax {
                                line: tl,
                                col: tc,
                                expected: "`!=`".into(),
                                found: "`!`".into(),
                            });
                        }
                    }
                    '<' => {
                        if two(&mut chars, &mut col, '=') {
                            Tok::Le
                        } else {
                            Tok::Lt
                        }
                    }
                    '>' => {
                        if two(&mut chars, &mut col, '=') {
                            Tok::Ge
                        } else {
                            Tok::Gt
                        }
                    }
                    other => {
                        return Err(ParseError::Syntax {
                            line: tl,
                            col: tc,
                            expected: "a token".into(),
                            found: format!("`{other}`"),
                        })
                    }
                };
                push!(tok, tl, tc);
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Extract `//` line comments from source, string-literal aware.
///
/// Feeds the informational index: payload comments are part of an asset's
/// text bag. Never fails; malformed source just yields fewer comments.
pub fn extract_comments(source: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = source.chars().peekable();
    let mut in_str = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if !in_str => in_str = true,
            '"' if in_str => in_str = false,
            '\\' if in_str => {
                chars.next();
            }
            '\n' if in_str => in_str = false, // unterminated literal; resync
            '/' if !in_str && chars.peek() == Some(&'/') => {
                chars.next();
                let mut text = String::new();
                for d in chars.by_ref() {
                    if d == '\n' {
                        break;
                    }
                    text.push(d);
                }
                let trimmed = text.trim();
                if !trimmed.is_empty() {
                    out.push(trimmed.to_string());
                }
            }
            _ => {}
        }
    }
    out
}
