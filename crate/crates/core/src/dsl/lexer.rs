use super::{DslError, DslErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    /// Letters, digits, `_` and `-`.
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    Ne,
    Arrow,
    Newline,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(_) => "string".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

pub(super) fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let span = SourceSpan { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            column += 1;
            c
        };
        let tok = match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                out.push(Token {
                    tok: Tok::Newline,
                    span,
                });
                continue;
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|c| *c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '{' | '}' | '(' | ')' | ',' | ':' | '=' => {
                bump(&mut chars);
                match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    _ => Tok::Eq,
                }
            }
            '!' => {
                bump(&mut chars);
                if chars.peek() == Some(&'=') {
                    bump(&mut chars);
                    Tok::Ne
                } else {
                    return Err(DslError::new(DslErrorKind::Syntax, "expected `!=`", span));
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        None | Some('\n') => {
                            return Err(DslError::new(
                                DslErrorKind::Syntax,
                                "unterminated string",
                                span,
                            ))
                        }
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            _ => {
                                return Err(DslError::new(
                                    DslErrorKind::Syntax,
                                    "invalid escape in string",
                                    SourceSpan { line, column: column - 1 },
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c == '-' && {
                let mut ahead = chars.clone();
                ahead.next();
                ahead.peek() == Some(&'>')
            } =>
            {
                bump(&mut chars);
                bump(&mut chars);
                Tok::Arrow
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    let arrow_next = ch == '-' && {
                        let mut ahead = chars.clone();
                        ahead.next();
                        ahead.peek() == Some(&'>')
                    };
                    if !is_word_char(ch) || arrow_next {
                        break;
                    }
                    w.push(ch);
                    bump(&mut chars);
                }
                Tok::Word(w)
            }
            other => {
                return Err(DslError::new(
                    DslErrorKind::Syntax,
                    format!("unexpected character `{}`", other.escape_debug()),
                    span,
                ))
            }
        };
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan { line, column },
    });
    Ok(out)
}
