use crate::error::{ParseError, ParseErrorKind};

use super::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Lowercase identifier (constant, predicate, functor, keyword).
    Ident(String),
    /// Uppercase identifier.
    Variable(String),
    Int(i64),
    /// `#name`
    Directive(String),
    If,
    Dot,
    Comma,
    Semicolon,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Minus,
    Plus,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) | TokenKind::Variable(s) => s.clone(),
            TokenKind::Int(i) => i.to_string(),
            TokenKind::Directive(d) => format!("#{d}"),
            TokenKind::If => ":-".into(),
            TokenKind::Dot => ".".into(),
            TokenKind::Comma => ",".into(),
            TokenKind::Semicolon => ";".into(),
            TokenKind::Colon => ":".into(),
            TokenKind::LParen => "(".into(),
            TokenKind::RParen => ")".into(),
            TokenKind::LBrace => "{".into(),
            TokenKind::RBrace => "}".into(),
            TokenKind::Minus => "-".into(),
            TokenKind::Plus => "+".into(),
            TokenKind::Arrow => "=>".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

pub struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { chars: src.char_indices().peekable(), src, line: 1, column: 1 }
    }

    /// Tokenizes the whole input. The result always ends with `Eof`.
    pub fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            let tok = self.next_token()?;
            let eof = tok.kind == TokenKind::Eof;
            out.push(tok);
            if eof {
                return Ok(out);
            }
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.offset();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        let end = self.offset();
        &self.src[start..end]
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let pos = Pos { line: self.line, column: self.column };
        let Some(c) = self.peek() else {
            return Ok(Token { kind: TokenKind::Eof, pos });
        };
        let kind = match c {
            'a'..='z' => TokenKind::Ident(self.word().to_string()),
            'A'..='Z' => TokenKind::Variable(self.word().to_string()),
            '0'..='9' => {
                let text = self.word();
                let value = text.parse::<i64>().map_err(|_| {
                    ParseError::new(ParseErrorKind::Lex, pos, text, "malformed integer")
                })?;
                TokenKind::Int(value)
            }
            '#' => {
                self.bump();
                let name = self.word();
                if name.is_empty() {
                    return Err(ParseError::new(ParseErrorKind::Lex, pos, "#", "expected directive name"));
                }
                TokenKind::Directive(name.to_string())
            }
            ':' => {
                self.bump();
                if self.peek() == Some('-') {
                    self.bump();
                    TokenKind::If
                } else {
                    TokenKind::Colon
                }
            }
            '=' => {
                self.bump();
                if self.peek() == Some('>') {
                    self.bump();
                    TokenKind::Arrow
                } else {
                    return Err(ParseError::new(ParseErrorKind::Lex, pos, "=", "unexpected character"));
                }
            }
            _ => {
                self.bump();
                match c {
                    '.' => TokenKind::Dot,
                    ',' => TokenKind::Comma,
                    ';' => TokenKind::Semicolon,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '-' => TokenKind::Minus,
                    '+' => TokenKind::Plus,
                    other => {
                        return Err(ParseError::new(
                            ParseErrorKind::Lex,
                            pos,
                            other.to_string(),
                            "unexpected character",
                        ))
                    }
                }
            }
        };
        Ok(Token { kind, pos })
    }
}
