//! Hand-rolled lexer. `#` starts a line comment.

use super::ast::Span;
use super::rational::parse_decimal;
use super::ParseError;
use num::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    NatLit(u64),
    RatLit(BigRational),
    // keywords
    Def,
    Check,
    Forall,
    BangKw,
    SizeKw,
    SensKw,
    Fun,
    Let,
    In,
    Case,
    LCase,
    ZPat,
    SPat,
    Nil,
    Cons,
    Add,
    CMul,
    Iter,
    RealTy,
    UnitTy,
    NatTy,
    ListTy,
    Inf,
    // symbols
    Colon,
    Semi,
    Eq,
    FatArrow,
    LinArrow,
    FnArrow,
    Star,
    Plus,
    Caret,
    BangSym,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Pipe,
    Comma,
    Dot,
    Less,
    At,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::NatLit(n) => format!("natural `{n}`"),
            TokenKind::RatLit(_) => "rational literal".to_string(),
            TokenKind::Def => "`def`".to_string(),
            TokenKind::Check => "`check`".to_string(),
            TokenKind::Forall => "`forall`".to_string(),
            TokenKind::BangKw => "`bang`".to_string(),
            TokenKind::SizeKw => "`size`".to_string(),
            TokenKind::SensKw => "`sens`".to_string(),
            TokenKind::Fun => "`fun`".to_string(),
            TokenKind::Let => "`let`".to_string(),
            TokenKind::In => "`in`".to_string(),
            TokenKind::Case => "`case`".to_string(),
            TokenKind::LCase => "`lcase`".to_string(),
            TokenKind::ZPat => "`Z`".to_string(),
            TokenKind::SPat => "`S`".to_string(),
            TokenKind::Nil => "`nil`".to_string(),
            TokenKind::Cons => "`cons`".to_string(),
            TokenKind::Add => "`add`".to_string(),
            TokenKind::CMul => "`cmul`".to_string(),
            TokenKind::Iter => "`iter`".to_string(),
            TokenKind::RealTy => "`R`".to_string(),
            TokenKind::UnitTy => "`Unit`".to_string(),
            TokenKind::NatTy => "`Nat`".to_string(),
            TokenKind::ListTy => "`List`".to_string(),
            TokenKind::Inf => "`inf`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Semi => "`;`".to_string(),
            TokenKind::Eq => "`=`".to_string(),
            TokenKind::FatArrow => "`=>`".to_string(),
            TokenKind::LinArrow => "`-o`".to_string(),
            TokenKind::FnArrow => "`->`".to_string(),
            TokenKind::Star => "`*`".to_string(),
            TokenKind::Plus => "`+`".to_string(),
            TokenKind::Caret => "`^`".to_string(),
            TokenKind::BangSym => "`!`".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Pipe => "`|`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Dot => "`.`".to_string(),
            TokenKind::Less => "`<`".to_string(),
            TokenKind::At => "`@`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "def" => TokenKind::Def,
        "check" => TokenKind::Check,
        "forall" => TokenKind::Forall,
        "bang" => TokenKind::BangKw,
        "size" => TokenKind::SizeKw,
        "sens" => TokenKind::SensKw,
        "fun" => TokenKind::Fun,
        "let" => TokenKind::Let,
        "in" => TokenKind::In,
        "case" => TokenKind::Case,
        "lcase" => TokenKind::LCase,
        "Z" => TokenKind::ZPat,
        "S" => TokenKind::SPat,
        "nil" => TokenKind::Nil,
        "cons" => TokenKind::Cons,
        "add" => TokenKind::Add,
        "cmul" => TokenKind::CMul,
        "iter" => TokenKind::Iter,
        "R" => TokenKind::RealTy,
        "Unit" => TokenKind::UnitTy,
        "Nat" => TokenKind::NatTy,
        "List" => TokenKind::ListTy,
        "inf" => TokenKind::Inf,
        _ => return None,
    })
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let mut pos = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            if chars[pos] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            pos += 1;
        }};
    }

    while pos < chars.len() {
        let c = chars[pos];
        let span = Span::new(line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => bump!(),
            '#' => {
                while pos < chars.len() && chars[pos] != '\n' {
                    bump!();
                }
            }
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    bump!();
                }
                // A digit run followed by `.digits` is a rational literal.
                if pos + 1 < chars.len() && chars[pos] == '.' && chars[pos + 1].is_ascii_digit() {
                    bump!();
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        bump!();
                    }
                    let text: String = chars[start..pos].iter().collect();
                    let value = parse_decimal(&text).ok_or_else(|| ParseError::Lex {
                        message: format!("malformed rational literal `{text}`"),
                        span,
                    })?;
                    tokens.push(Token {
                        kind: TokenKind::RatLit(value),
                        span,
                    });
                } else {
                    let text: String = chars[start..pos].iter().collect();
                    let value: u64 = text.parse().map_err(|_| ParseError::Lex {
                        message: format!("natural literal `{text}` out of range"),
                        span,
                    })?;
                    tokens.push(Token {
                        kind: TokenKind::NatLit(value),
                        span,
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_' || chars[pos] == '\'')
                {
                    bump!();
                }
                let word: String = chars[start..pos].iter().collect();
                let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
                tokens.push(Token { kind, span });
            }
            '-' => {
                bump!();
                match chars.get(pos) {
                    Some('o') => {
                        bump!();
                        tokens.push(Token {
                            kind: TokenKind::LinArrow,
                            span,
                        });
                    }
                    Some('>') => {
                        bump!();
                        tokens.push(Token {
                            kind: TokenKind::FnArrow,
                            span,
                        });
                    }
                    _ => {
                        return Err(ParseError::Lex {
                            message: "expected `-o` or `->` after `-`".to_string(),
                            span,
                        })
                    }
                }
            }
            '=' => {
                bump!();
                if chars.get(pos) == Some(&'>') {
                    bump!();
                    tokens.push(Token {
                        kind: TokenKind::FatArrow,
                        span,
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Eq,
                        span,
                    });
                }
            }
            _ => {
                let kind = match c {
                    ':' => TokenKind::Colon,
                    ';' => TokenKind::Semi,
                    '*' => TokenKind::Star,
                    '+' => TokenKind::Plus,
                    '^' => TokenKind::Caret,
                    '!' => TokenKind::BangSym,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '|' => TokenKind::Pipe,
                    ',' => TokenKind::Comma,
                    '.' => TokenKind::Dot,
                    '<' => TokenKind::Less,
                    '@' => TokenKind::At,
                    other => {
                        return Err(ParseError::Lex {
                            message: format!("unexpected character `{other}`"),
                            span,
                        })
                    }
                };
                bump!();
                tokens.push(Token { kind, span });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span::new(line, col),
    });
    Ok(tokens)
}
