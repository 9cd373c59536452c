//! Append-only knowledge-base log.
//!
//! ```text
//! kbversion 1
//! ---
//! timestamp: 2026-10-16T09:30:00Z
//! author: ethics-team
//! argument efficiency {
//!   ...
//! }
//! ---
//! ...
//! ```
//!
//! Replaying the entries in order reconstructs the knowledge base; the
//! version is the number of entries.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use super::CoachError;
use crate::dsl::{emit_entry, parse_entries, parse_kb, SourceSpan};
use crate::rules::{ArgumentRule, KbEntry, KnowledgeBase};

pub const LOG_HEADER: &str = "kbversion 1";
const SEPARATOR: &str = "---";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub timestamp: String,
    pub author: String,
    pub entry: KbEntry,
}

pub fn is_log(text: &str) -> bool {
    text.lines().next() == Some(LOG_HEADER)
}

fn corrupt(line: usize, message: impl Into<String>) -> CoachError {
    CoachError::CorruptEntry {
        span: SourceSpan { line, column: 1 },
        message: message.into(),
    }
}

pub fn parse_log(text: &str) -> Result<Vec<LogEntry>, CoachError> {
    let mut lines = text.split('\n').enumerate().peekable();
    match lines.next() {
        Some((_, LOG_HEADER)) => {}
        _ => return Err(CoachError::BadHeader),
    }

    let mut entries = Vec::new();
    while let Some((idx, line)) = lines.next() {
        if line.is_empty() && lines.peek().is_none() {
            break;
        }
        if line != SEPARATOR {
            return Err(corrupt(idx + 1, "expected `---` entry separator"));
        }
        let start = idx + 2;
        let mut meta = |key: &str| -> Result<String, CoachError> {
            match lines.next() {
                Some((i, l)) => l
                    .strip_prefix(key)
                    .and_then(|rest| rest.strip_prefix(": "))
                    .map(str::to_string)
                    .ok_or_else(|| corrupt(i + 1, format!("expected `{key}:` line"))),
                None => Err(corrupt(start, format!("entry is missing `{key}:`"))),
            }
        };
        let timestamp = meta("timestamp")?;
        let author = meta("author")?;
        let body_start = start + 2;
        let mut body = String::new();
        while let Some((_, l)) = lines.peek() {
            if *l == SEPARATOR {
                break;
            }
            body.push_str(l);
            body.push('\n');
            lines.next();
        }
        let mut parsed = parse_entries(&body).map_err(|e| CoachError::CorruptEntry {
            span: SourceSpan {
                line: e.span.line + body_start - 1,
                column: e.span.column,
            },
            message: e.message,
        })?;
        if parsed.len() != 1 {
            return Err(corrupt(body_start, format!("expected one block per entry, found {}", parsed.len())));
        }
        entries.push(LogEntry {
            timestamp,
            author,
            entry: parsed.pop().expect("one entry").node,
        });
    }
    Ok(entries)
}

fn replay<'a>(entries: impl IntoIterator<Item = &'a LogEntry>) -> Result<KnowledgeBase, CoachError> {
    let mut kb = KnowledgeBase::empty();
    for e in entries {
        kb.apply(e.entry.clone())
            .map_err(|err| CoachError::Validation(err.to_string()))?;
    }
    Ok(kb)
}

pub fn read_log(path: &Path) -> Result<Vec<LogEntry>, CoachError> {
    parse_log(&fs::read_to_string(path)?)
}

/// Current knowledge base: every entry replayed.
pub fn kb_load(path: &Path) -> Result<KnowledgeBase, CoachError> {
    replay(&read_log(path)?)
}

/// The knowledge base as it was at `version` (the first `version` entries).
pub fn kb_load_at(path: &Path, version: u64) -> Result<KnowledgeBase, CoachError> {
    let entries = read_log(path)?;
    let n = usize::try_from(version).unwrap_or(usize::MAX);
    if n > entries.len() {
        return Err(CoachError::UnknownVersion {
            requested: version,
            latest: entries.len() as u64,
        });
    }
    replay(&entries[..n])
}

/// Loads either a log file or a plain `.kb` rule file.
pub fn load_kb_file(path: &Path) -> Result<KnowledgeBase, CoachError> {
    let text = fs::read_to_string(path)?;
    if is_log(&text) {
        replay(&parse_log(&text)?)
    } else {
        parse_kb(&text).map_err(CoachError::Parse)
    }
}

fn timestamp() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn check_author(author: &str) -> Result<(), CoachError> {
    if author.trim().is_empty() || author.contains(['\n', '\r']) {
        Err(CoachError::Validation(format!("invalid author `{}`", author.escape_debug())))
    } else {
        Ok(())
    }
}

fn format_entry(entry: &KbEntry, author: &str) -> String {
    format!(
        "{SEPARATOR}\ntimestamp: {}\nauthor: {author}\n{}",
        timestamp(),
        emit_entry(entry)
    )
}

/// Creates a new log holding `kb`'s topics and rules. Fails if `path`
/// already exists.
pub fn kb_init(path: &Path, kb: &KnowledgeBase, author: &str) -> Result<u64, CoachError> {
    check_author(author)?;
    let entries: Vec<KbEntry> = kb
        .topics()
        .iter()
        .cloned()
        .map(KbEntry::Topic)
        .chain(kb.rules().iter().cloned().map(KbEntry::Rule))
        .collect();
    let mut text = format!("{LOG_HEADER}\n");
    for e in &entries {
        text.push_str(&format_entry(e, author));
    }
    let mut file = OpenOptions::new().write(true).create_new(true).open(path)?;
    file.write_all(text.as_bytes())?;
    file.sync_all()?;
    Ok(entries.len() as u64)
}

/// Appends one entry and returns the new version. Existing bytes are never
/// rewritten. Callers serialize appends to the same file.
pub fn kb_append_entry(path: &Path, entry: KbEntry, author: &str) -> Result<u64, CoachError> {
    check_author(author)?;
    let entries = read_log(path)?;
    let mut kb = replay(&entries)?;
    kb.apply(entry.clone())
        .map_err(|e| CoachError::Validation(e.to_string()))?;

    let mut file = OpenOptions::new().append(true).open(path)?;
    file.write_all(format_entry(&entry, author).as_bytes())?;
    file.sync_all()?;
    Ok(entries.len() as u64 + 1)
}

pub fn kb_append(path: &Path, rule: ArgumentRule, author: &str) -> Result<u64, CoachError> {
    kb_append_entry(path, KbEntry::Rule(rule), author)
}

/// Parses `text` as exactly one rule or topic block and appends it.
pub fn kb_append_text(path: &Path, text: &str, author: &str) -> Result<u64, CoachError> {
    let mut entries = parse_entries(text).map_err(|e| CoachError::Validation(e.to_string()))?;
    if entries.len() != 1 {
        return Err(CoachError::Validation(format!(
            "expected exactly one block, found {}",
            entries.len()
        )));
    }
    kb_append_entry(path, entries.pop().expect("one entry").node, author)
}
