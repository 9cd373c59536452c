use std::fmt;

use serde::{Serialize, Serializer};

use crate::domain::{kebab_enum, DiversityPreference, DomainError, RequestContext, Sphere};

kebab_enum! {
    /// Context field an atom can test.
    Field, "field" {
        Sphere => "sphere",
        Sensitive => "sensitive",
        Harm => "harm",
        DemographicTarget => "demographic_target",
        SkillSpecific => "skill_specific",
        Preference => "preference",
    }
}

impl Field {
    /// Accepts the context JSON spelling `diversity_preference` as well.
    pub fn lookup(name: &str) -> Option<Field> {
        match name {
            "diversity_preference" => Some(Field::Preference),
            other => other.parse().ok(),
        }
    }

    pub fn parse_literal(self, text: &str) -> Result<Literal, DomainError> {
        Ok(match self {
            Field::Sphere => Literal::Sphere(text.parse()?),
            Field::Preference => Literal::Preference(text.parse()?),
            _ => Literal::Bool(match text {
                "true" => true,
                "false" => false,
                other => {
                    return Err(DomainError::UnknownName {
                        kind: "boolean",
                        value: other.to_string(),
                    })
                }
            }),
        })
    }

    fn read(self, ctx: &RequestContext) -> Option<Literal> {
        Some(match self {
            Field::Sphere => Literal::Sphere(ctx.sphere?),
            Field::Sensitive => Literal::Bool(ctx.sensitive),
            Field::Harm => Literal::Bool(ctx.harm),
            Field::DemographicTarget => Literal::Bool(ctx.demographic_target),
            Field::SkillSpecific => Literal::Bool(ctx.skill_specific),
            Field::Preference => Literal::Preference(ctx.diversity_preference),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Sphere(Sphere),
    Bool(bool),
    Preference(DiversityPreference),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Sphere(s) => fmt::Display::fmt(s, f),
            Literal::Bool(b) => fmt::Display::fmt(b, f),
            Literal::Preference(p) => fmt::Display::fmt(p, f),
        }
    }
}

/// `field = value` or `field != value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub field: Field,
    pub negated: bool,
    pub value: Literal,
}

impl Atom {
    pub fn eq(field: Field, value: Literal) -> Self {
        Self {
            field,
            negated: false,
            value,
        }
    }

    pub fn ne(field: Field, value: Literal) -> Self {
        Self {
            field,
            negated: true,
            value,
        }
    }

    fn eval(&self, ctx: &RequestContext) -> bool {
        // an unresolved sphere matches nothing
        match self.field.read(ctx) {
            Some(actual) => (actual == self.value) != self.negated,
            None => false,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.negated { "!=" } else { "=" };
        write!(f, "{} {op} {}", self.field, self.value)
    }
}

/// Boolean condition over context atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConditionExpr {
    Atom(Atom),
    Not(Box<ConditionExpr>),
    And(Vec<ConditionExpr>),
    Or(Vec<ConditionExpr>),
}

impl ConditionExpr {
    pub fn atom(field: Field, value: Literal) -> Self {
        ConditionExpr::Atom(Atom::eq(field, value))
    }

    pub fn negate(inner: ConditionExpr) -> Self {
        ConditionExpr::Not(Box::new(inner))
    }

    pub fn eval(&self, ctx: &RequestContext) -> bool {
        match self {
            ConditionExpr::Atom(a) => a.eval(ctx),
            ConditionExpr::Not(e) => !e.eval(ctx),
            ConditionExpr::And(es) => es.iter().all(|e| e.eval(ctx)),
            ConditionExpr::Or(es) => es.iter().any(|e| e.eval(ctx)),
        }
    }

    /// The facts that make the condition true, or `None` when it is false.
    pub fn support(&self, ctx: &RequestContext) -> Option<Vec<String>> {
        match self {
            ConditionExpr::Atom(a) => a.eval(ctx).then(|| vec![a.to_string()]),
            ConditionExpr::Not(e) => (!e.eval(ctx)).then(|| vec![self.to_string()]),
            ConditionExpr::And(es) => {
                let mut out = Vec::new();
                for e in es {
                    out.extend(e.support(ctx)?);
                }
                Some(out)
            }
            ConditionExpr::Or(es) => {
                let out: Vec<String> = es.iter().filter_map(|e| e.support(ctx)).flatten().collect();
                (!out.is_empty()).then_some(out)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ConditionExpr::Or(_) => 0,
            ConditionExpr::And(_) => 1,
            ConditionExpr::Not(_) => 2,
            ConditionExpr::Atom(_) => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_at(f, 0)?;
            return f.write_str(")");
        }
        let join = |f: &mut fmt::Formatter<'_>, es: &[ConditionExpr], sep: &str, min: u8| {
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                e.fmt_at(f, min)?;
            }
            Ok(())
        };
        match self {
            ConditionExpr::Atom(a) => fmt::Display::fmt(a, f),
            ConditionExpr::Not(e) => {
                f.write_str("not ")?;
                e.fmt_at(f, 3)
            }
            // nested same-kind groups keep their parentheses so the parse
            // tree survives a round trip
            ConditionExpr::And(es) => join(f, es, " and ", 2),
            ConditionExpr::Or(es) => join(f, es, " or ", 1),
        }
    }
}

impl fmt::Display for ConditionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl Serialize for ConditionExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
