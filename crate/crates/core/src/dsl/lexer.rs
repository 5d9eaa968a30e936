use std::fmt;

use super::ParseError;
use crate::ident::is_ident;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Keyword {
    Symptom,
    Disease,
    Symptoms,
    Treatment,
    IfUntreated,
    Rule,
    If,
    Then,
    And,
    Or,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "SYMPTOM" => Keyword::Symptom,
            "DISEASE" => Keyword::Disease,
            "SYMPTOMS" => Keyword::Symptoms,
            "TREATMENT" => Keyword::Treatment,
            "IF_UNTREATED" => Keyword::IfUntreated,
            "RULE" => Keyword::Rule,
            "IF" => Keyword::If,
            "THEN" => Keyword::Then,
            "AND" => Keyword::And,
            "OR" => Keyword::Or,
            _ => return None,
        })
    }

    pub(crate) fn as_str(self) -> &'static str {
        match self {
            Keyword::Symptom => "SYMPTOM",
            Keyword::Disease => "DISEASE",
            Keyword::Symptoms => "SYMPTOMS",
            Keyword::Treatment => "TREATMENT",
            Keyword::IfUntreated => "IF_UNTREATED",
            Keyword::Rule => "RULE",
            Keyword::If => "IF",
            Keyword::Then => "THEN",
            Keyword::And => "AND",
            Keyword::Or => "OR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Keyword(Keyword),
    Ident(String),
    Str(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Newline,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Keyword(k) => write!(f, "`{}`", k.as_str()),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Str(_) => f.write_str("string"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Comma => f.write_str("`,`"),
            Token::Colon => f.write_str("`:`"),
            Token::Newline => f.write_str("end of line"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub pos: Pos,
}

/// Streaming tokenizer. After `Eof` it keeps returning `Eof`.
pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    pub(crate) fn next_token(&mut self) -> Result<Spanned, ParseError> {
        loop {
            let pos = self.pos;
            let Some(c) = self.peek() else {
                return Ok(Spanned {
                    token: Token::Eof,
                    pos,
                });
            };
            let token = match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                    continue;
                }
                '#' => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                    continue;
                }
                '"' => {
                    self.bump();
                    Token::Str(lex_string(self, pos)?)
                }
                c if c.is_ascii_alphanumeric() || c == '_' => self.word(pos)?,
                _ => {
                    self.bump();
                    match c {
                        '\n' => Token::Newline,
                        '(' => Token::LParen,
                        ')' => Token::RParen,
                        ',' => Token::Comma,
                        ':' => Token::Colon,
                        other => {
                            return Err(ParseError::at(
                                pos,
                                format!("unexpected character {other:?}"),
                            ))
                        }
                    }
                }
            };
            return Ok(Spanned { token, pos });
        }
    }

    fn word(&mut self, pos: Pos) -> Result<Token, ParseError> {
        let mut word = String::new();
        while let Some(c) = self
            .peek()
            .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            word.push(c);
            self.bump();
        }
        if is_ident(&word) {
            Ok(Token::Ident(word))
        } else if let Some(k) = Keyword::from_word(&word) {
            Ok(Token::Keyword(k))
        } else {
            Err(ParseError::at(
                pos,
                format!("invalid word `{word}`: expected a keyword or a lowercase identifier"),
            ))
        }
    }
}

fn lex_string(cur: &mut Lexer<'_>, start: Pos) -> Result<String, ParseError> {
    let mut s = String::new();
    loop {
        let pos = cur.pos;
        match cur.bump() {
            Some('"') => return Ok(s),
            Some('\\') => match cur.bump() {
                Some(c @ ('"' | '\\')) => s.push(c),
                Some(other) => {
                    return Err(ParseError::at(
                        pos,
                        format!("invalid escape `\\{other}`: expected `\\\"` or `\\\\`"),
                    ))
                }
                None => return Err(ParseError::at(start, "unterminated string")),
            },
            Some('\n') | None => return Err(ParseError::at(start, "unterminated string")),
            Some(c) => s.push(c),
        }
    }
}
