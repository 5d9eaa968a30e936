use super::lexer::{Keyword, Lexer, Pos, Spanned, Token};
use super::ParseError;
use crate::ident::{DiseaseId, Ident, SymptomId};
use crate::kb::{DiseaseRecord, KnowledgeBase, Symptom};
use crate::rule::{Fact, PremiseExpr, Rule};

/// Deepest parenthesis nesting accepted in a premise.
pub const MAX_NESTING: usize = 128;

pub(crate) struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Spanned,
    depth: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(text);
        let current = lexer.next_token()?;
        Ok(Self {
            lexer,
            current,
            depth: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.current.token
    }

    fn pos(&self) -> Pos {
        self.current.pos
    }

    /// Consumes the current token and returns it.
    fn bump(&mut self) -> Result<Token, ParseError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.current, next).token)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::at(
            self.pos(),
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    fn eat_keyword(&mut self, k: Keyword) -> Result<bool, ParseError> {
        if *self.peek() == Token::Keyword(k) {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect_keyword(&mut self, k: Keyword) -> Result<(), ParseError> {
        if self.eat_keyword(k)? {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", k.as_str())))
        }
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump()?;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Token::Ident(_) => match self.bump()? {
                Token::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error(what)),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Token::Str(_) => match self.bump()? {
                Token::Str(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error(what)),
        }
    }

    fn skip_newlines(&mut self) -> Result<(), ParseError> {
        while *self.peek() == Token::Newline {
            self.bump()?;
        }
        Ok(())
    }

    /// `keyword ":"`, allowing the clause to start on a continuation line.
    fn clause(&mut self, k: Keyword) -> Result<(), ParseError> {
        self.skip_newlines()?;
        self.expect_keyword(k)?;
        self.expect(Token::Colon, "`:`")
    }

    fn end_of_decl(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Token::Newline => {
                self.bump()?;
                Ok(())
            }
            Token::Eof => Ok(()),
            _ => Err(self.error("end of line")),
        }
    }

    pub(crate) fn kb(mut self) -> Result<KnowledgeBase, ParseError> {
        let mut kb = KnowledgeBase::default();
        loop {
            self.skip_newlines()?;
            match self.peek() {
                Token::Eof => return Ok(kb),
                Token::Keyword(Keyword::Symptom) => {
                    self.bump()?;
                    kb.symptoms.push(self.symptom()?);
                }
                Token::Keyword(Keyword::Disease) => {
                    self.bump()?;
                    kb.diseases.push(self.disease()?);
                }
                Token::Keyword(Keyword::Rule) => {
                    self.bump()?;
                    kb.rules.push(self.rule()?);
                }
                _ => return Err(self.error("`SYMPTOM`, `DISEASE` or `RULE`")),
            }
            self.end_of_decl()?;
        }
    }

    fn symptom(&mut self) -> Result<Symptom, ParseError> {
        let id = self.ident("a symptom id")?;
        let display_name = self.string("a quoted display name")?;
        Ok(Symptom {
            id: SymptomId::new(id).expect("lexer yields valid identifiers"),
            display_name,
        })
    }

    fn disease(&mut self) -> Result<DiseaseRecord, ParseError> {
        let id = self.ident("a disease id")?;
        let display_name = self.string("a quoted display name")?;
        self.clause(Keyword::Symptoms)?;
        let mut symptoms = vec![self.ident("a symptom id")?];
        while *self.peek() == Token::Comma {
            self.bump()?;
            symptoms.push(self.ident("a symptom id")?);
        }
        self.clause(Keyword::Treatment)?;
        let care_treatment = self.string("a quoted treatment text")?;
        self.clause(Keyword::IfUntreated)?;
        let if_untreated = self.string("a quoted if-untreated text")?;
        Ok(DiseaseRecord {
            id: DiseaseId::new(id).expect("lexer yields valid identifiers"),
            display_name,
            symptoms: symptoms
                .into_iter()
                .map(|s| SymptomId::new(s).expect("lexer yields valid identifiers"))
                .collect(),
            care_treatment,
            if_untreated,
        })
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        let name = self.ident("a rule name")?;
        self.expect(Token::Colon, "`:`")?;
        self.expect_keyword(Keyword::If)?;
        let premise = self.expr()?;
        self.expect_keyword(Keyword::Then)?;
        let mut conclusion = vec![self.fact()?];
        while self.eat_keyword(Keyword::And)? {
            conclusion.push(self.fact()?);
        }
        Ok(Rule::new(to_ident(name), premise, conclusion))
    }

    pub(crate) fn standalone_premise(mut self) -> Result<PremiseExpr, ParseError> {
        let expr = self.expr()?;
        if *self.peek() != Token::Eof {
            return Err(self.error("`AND`, `OR` or end of input"));
        }
        Ok(expr)
    }

    fn expr(&mut self) -> Result<PremiseExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat_keyword(Keyword::Or)? {
            terms.push(self.term()?);
        }
        Ok(collapse(terms, PremiseExpr::Or))
    }

    fn term(&mut self) -> Result<PremiseExpr, ParseError> {
        let mut atoms = vec![self.atom()?];
        while self.eat_keyword(Keyword::And)? {
            atoms.push(self.atom()?);
        }
        Ok(collapse(atoms, PremiseExpr::And))
    }

    fn atom(&mut self) -> Result<PremiseExpr, ParseError> {
        match self.peek() {
            Token::LParen => {
                if self.depth >= MAX_NESTING {
                    return Err(ParseError::at(
                        self.pos(),
                        format!("parentheses nested deeper than {MAX_NESTING}"),
                    ));
                }
                self.bump()?;
                self.depth += 1;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                self.depth -= 1;
                Ok(inner)
            }
            Token::Ident(_) => Ok(PremiseExpr::Atom(self.fact()?)),
            _ => Err(self.error("a fact or `(`")),
        }
    }

    fn fact(&mut self) -> Result<Fact, ParseError> {
        let predicate = self.ident("a fact")?;
        self.expect(Token::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() != Token::RParen {
            args.push(to_ident(self.ident("an argument or `)`")?));
            while *self.peek() == Token::Comma {
                self.bump()?;
                args.push(to_ident(self.ident("an argument")?));
            }
        }
        self.expect(Token::RParen, "`,` or `)`")?;
        Ok(Fact::new(to_ident(predicate), args))
    }
}

fn to_ident(s: String) -> Ident {
    Ident::new(s).expect("lexer yields valid identifiers")
}

fn collapse(mut items: Vec<PremiseExpr>, node: fn(Vec<PremiseExpr>) -> PremiseExpr) -> PremiseExpr {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        node(items)
    }
}
