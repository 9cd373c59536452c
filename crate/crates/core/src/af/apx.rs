//! ICCMA `apx` text format: `arg(NAME).` and `att(A,B).` facts, `%` comments.

use std::fmt::Write as _;

use super::{is_valid_name, AfError, ArgumentId, ArgumentationFramework, Result};

pub fn parse_apx(text: &str) -> Result<ArgumentationFramework> {
    let mut af = ArgumentationFramework::default();
    let mut attacks = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let syntax = |message: &str| AfError::Syntax {
            line: line_no,
            message: message.to_string(),
        };
        let body = line
            .strip_suffix('.')
            .ok_or_else(|| syntax("expected `.` at end of fact"))?;
        let (head, rest) = body
            .split_once('(')
            .ok_or_else(|| syntax("expected `arg(...)` or `att(...)`"))?;
        let inner = rest
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| syntax("expected `)`"))?;
        let name = |s: &str| -> Result<ArgumentId> {
            let s = s.trim();
            if is_valid_name(s) {
                Ok(ArgumentId(s.to_string()))
            } else {
                Err(syntax(&format!("invalid argument name `{s}`")))
            }
        };
        match head.trim() {
            "arg" => {
                af.add_argument(name(inner)?);
            }
            "att" => {
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| syntax("expected `att(A,B)`"))?;
                attacks.push((line_no, name(a)?, name(b)?));
            }
            other => return Err(syntax(&format!("unknown fact `{other}`"))),
        }
    }

    // Declarations may follow the attacks that use them.
    for (line, from, to) in attacks {
        for end in [&from, &to] {
            if !af.contains(end) {
                return Err(AfError::UndeclaredArgument {
                    line,
                    name: end.to_string(),
                });
            }
        }
        af.add_attack(from, to)?;
    }
    Ok(af)
}

/// Sorted `arg` lines followed by sorted `att` lines, LF terminated.
pub fn emit_apx(af: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for a in af.arguments() {
        let _ = writeln!(out, "arg({a}).");
    }
    for (a, b) in af.attacks() {
        let _ = writeln!(out, "att({a},{b}).");
    }
    out
}
