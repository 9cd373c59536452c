use std::collections::BTreeSet;

use super::lexer::{tokenize, Tok, Token};
use super::{Block, DslError, DslErrorKind, ScenarioFixture, SourceSpan, Spanned};
use crate::af::ArgumentId;
use crate::domain::{CurationAction, RequestContext, Sphere};
use crate::rules::{Atom, ArgumentRule, ConditionExpr, Field, Stance, TopicDecl, TopicTarget};
use crate::value::EthicalValue;

const MAX_NESTING: usize = 64;

pub(super) fn parse_blocks(text: &str) -> Result<Vec<Spanned<Block>>, DslError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    p.file()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn err(kind: DslErrorKind, message: impl Into<String>, span: SourceSpan) -> DslError {
    DslError::new(kind, message, span)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.pos += 1;
        }
    }

    fn unexpected(&self, expected: &str) -> DslError {
        let t = self.peek();
        err(
            DslErrorKind::Syntax,
            format!("expected {expected}, found {}", t.tok.describe()),
            t.span,
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<SourceSpan, DslError> {
        if self.peek().tok == tok {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn word(&mut self, expected: &str) -> Result<(String, SourceSpan), DslError> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let w = w.clone();
                Ok((w, self.next().span))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn string(&mut self, expected: &str) -> Result<(String, SourceSpan), DslError> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                Ok((s, self.next().span))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    /// A field entry ends at a newline, or right before the closing brace.
    fn end_of_entry(&mut self) -> Result<(), DslError> {
        match self.peek().tok {
            Tok::Newline => {
                self.skip_newlines();
                Ok(())
            }
            Tok::RBrace => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }

    fn file(&mut self) -> Result<Vec<Spanned<Block>>, DslError> {
        let mut blocks = Vec::new();
        loop {
            self.skip_newlines();
            let span = self.peek().span;
            let block = match &self.peek().tok {
                Tok::Eof => break,
                Tok::Word(w) if w == "argument" => Block::Rule(self.argument()?),
                Tok::Word(w) if w == "scenario" => Block::Scenario(self.scenario()?),
                Tok::Word(w) if w == "topic" => Block::Topic(self.topic()?),
                _ => return Err(self.unexpected("`argument`, `scenario` or `topic`")),
            };
            match self.peek().tok {
                Tok::Newline | Tok::Eof => {}
                _ => return Err(self.unexpected("end of line after block")),
            }
            blocks.push(Spanned { node: block, span });
        }
        Ok(blocks)
    }

    /// `key:` where key must be `name`; other known keys are out of order,
    /// anything else is an unknown field.
    fn key(&mut self, name: &str, known: &[&str]) -> Result<(), DslError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Word(w) if w == name => {
                self.next();
                self.expect(Tok::Colon, "`:`")?;
                Ok(())
            }
            Tok::Word(w) if !known.contains(&w.as_str()) => Err(err(
                DslErrorKind::UnknownField,
                format!("unknown field `{w}`"),
                t.span,
            )),
            _ => Err(self.unexpected(&format!("`{name}:`"))),
        }
    }

    fn argument(&mut self) -> Result<ArgumentRule, DslError> {
        const KNOWN: &[&str] = &["promotes", "applies-if", "stance"];
        self.next();
        let (name, name_span) = self.word("argument name")?;
        let name = ArgumentId::new(name.as_str()).map_err(|e| err(DslErrorKind::Syntax, e.to_string(), name_span))?;
        self.expect(Tok::LBrace, "`{`")?;
        self.skip_newlines();

        self.key("promotes", KNOWN)?;
        let mut promotes = BTreeSet::new();
        loop {
            let (v, span) = self.word("value name")?;
            let value: EthicalValue = v
                .parse()
                .map_err(|_| err(DslErrorKind::UnknownValue, format!("unknown value `{v}`"), span))?;
            promotes.insert(value);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.end_of_entry()?;

        self.key("applies-if", KNOWN)?;
        let cond = self.cond()?;
        self.end_of_entry()?;

        self.key("stance", KNOWN)?;
        let (s, span) = self.word("stance")?;
        let stance: Stance = s
            .parse()
            .map_err(|_| err(DslErrorKind::UnknownStance, format!("unknown stance `{s}`"), span))?;
        self.end_of_entry()?;
        if let Tok::Word(w) = &self.peek().tok {
            if !KNOWN.contains(&w.as_str()) {
                return Err(err(DslErrorKind::UnknownField, format!("unknown field `{w}`"), self.peek().span));
            }
        }
        self.expect(Tok::RBrace, "`}`")?;

        ArgumentRule::new(name, cond, stance, promotes)
            .map_err(|e| err(DslErrorKind::Syntax, e.to_string(), name_span))
    }

    fn cond(&mut self) -> Result<ConditionExpr, DslError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(err(DslErrorKind::Syntax, "condition nested too deeply", self.peek().span));
        }
        let mut terms = vec![self.conj()?];
        while matches!(&self.peek().tok, Tok::Word(w) if w == "or") {
            self.next();
            terms.push(self.conj()?);
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            ConditionExpr::Or(terms)
        })
    }

    fn conj(&mut self) -> Result<ConditionExpr, DslError> {
        let mut terms = vec![self.neg()?];
        while matches!(&self.peek().tok, Tok::Word(w) if w == "and") {
            self.next();
            terms.push(self.neg()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            ConditionExpr::And(terms)
        })
    }

    fn neg(&mut self) -> Result<ConditionExpr, DslError> {
        if matches!(&self.peek().tok, Tok::Word(w) if w == "not") {
            self.next();
            Ok(ConditionExpr::negate(self.atom()?))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<ConditionExpr, DslError> {
        if self.peek().tok == Tok::LParen {
            self.next();
            let inner = self.cond()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        let (name, span) = self.word("condition field")?;
        let field = Field::lookup(&name)
            .ok_or_else(|| err(DslErrorKind::UnknownField, format!("unknown field `{name}`"), span))?;
        let negated = match self.peek().tok {
            Tok::Eq => false,
            Tok::Ne => true,
            _ => return Err(self.unexpected("`=` or `!=`")),
        };
        self.next();
        let (lit, lit_span) = self.word("value")?;
        let value = field
            .parse_literal(&lit)
            .map_err(|e| err(DslErrorKind::UnknownValue, e.to_string(), lit_span))?;
        Ok(ConditionExpr::Atom(Atom {
            field,
            negated,
            value,
        }))
    }

    fn topic(&mut self) -> Result<TopicDecl, DslError> {
        self.next();
        let (topic, _) = self.word("topic name")?;
        self.expect(Tok::Arrow, "`->`")?;
        let (target, _) = self.word("sphere or topic")?;
        let target = match target.parse::<Sphere>() {
            Ok(s) => TopicTarget::Sphere(s),
            Err(_) => TopicTarget::Topic(target),
        };
        Ok(TopicDecl {
            topic: topic.to_lowercase(),
            target,
        })
    }

    fn bool_value(&mut self) -> Result<bool, DslError> {
        let (w, span) = self.word("`true` or `false`")?;
        match w.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(err(DslErrorKind::UnknownValue, format!("expected boolean, found `{w}`"), span)),
        }
    }

    fn parse_word<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, DslError> {
        let (w, span) = self.word(what)?;
        w.parse()
            .map_err(|_| err(DslErrorKind::UnknownValue, format!("unknown {what} `{w}`"), span))
    }

    fn scenario(&mut self) -> Result<ScenarioFixture, DslError> {
        self.next();
        let (name, _) = self.string("scenario name in quotes")?;
        self.expect(Tok::LBrace, "`{`")?;
        self.skip_newlines();

        let mut ctx = RequestContext::default();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            let field = match &t.tok {
                Tok::Word(w) if w == "expect" => break,
                Tok::Word(w) => w.clone(),
                _ => return Err(self.unexpected("context field or `expect:`")),
            };
            if field == "note" {
                return Err(self.unexpected("`expect:` before `note:`"));
            }
            if !seen.insert(field.clone()) {
                return Err(err(DslErrorKind::Syntax, format!("duplicate field `{field}`"), t.span));
            }
            self.next();
            self.expect(Tok::Colon, "`:`")?;
            match field.as_str() {
                "request_text" => ctx.request_text = self.string("quoted request text")?.0,
                "situatedness" => ctx.situatedness = self.string("quoted situatedness note")?.0,
                "topic_tags" => {
                    loop {
                        let tag = match &self.peek().tok {
                            Tok::Word(_) => self.word("tag")?.0,
                            Tok::Str(_) => self.string("tag")?.0,
                            _ => return Err(self.unexpected("topic tag")),
                        };
                        ctx.topic_tags.insert(tag);
                        if self.peek().tok == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                "sphere" => ctx.sphere = Some(self.parse_word("sphere")?),
                "demographic_target" => ctx.demographic_target = self.bool_value()?,
                "skill_specific" => ctx.skill_specific = self.bool_value()?,
                "sensitive" => ctx.sensitive = self.bool_value()?,
                "harm" => ctx.harm = self.bool_value()?,
                "diversity_preference" => ctx.diversity_preference = self.parse_word("diversity preference")?,
                other => {
                    return Err(err(
                        DslErrorKind::UnknownField,
                        format!("unknown context field `{other}`"),
                        t.span,
                    ))
                }
            }
            self.end_of_entry()?;
            if self.peek().tok == Tok::RBrace {
                return Err(self.unexpected("`expect:`"));
            }
        }

        self.key("expect", &["expect", "note"])?;
        let expect: CurationAction = self.parse_word("curation action")?;
        self.end_of_entry()?;

        let mut note = None;
        if matches!(&self.peek().tok, Tok::Word(w) if w == "note") {
            self.next();
            self.expect(Tok::Colon, "`:`")?;
            note = Some(self.string("quoted note")?.0);
            self.end_of_entry()?;
        }
        if let Tok::Word(w) = &self.peek().tok {
            return Err(err(DslErrorKind::UnknownField, format!("unexpected field `{w}` after `expect:`"), self.peek().span));
        }
        self.expect(Tok::RBrace, "`}`")?;

        Ok(ScenarioFixture {
            name,
            context: ctx,
            expect,
            note,
        })
    }
}
