//! Decision log records and their replay against a knowledge-base log.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coach::{read_log, CoachError, LogEntry};
use crate::domain::RequestContext;
use crate::rules::{decide, KnowledgeBase};

/// One line of the decision log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub kb_version: u64,
    pub context: RequestContext,
    pub decision_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayMismatch {
    pub line: usize,
    pub kb_version: u64,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub checked: usize,
    pub mismatches: Vec<ReplayMismatch>,
}

/// Re-decides every logged context against the knowledge base at the logged
/// version and compares decision hashes.
pub fn replay_decisions(decision_log: &Path, kb_log: &Path) -> Result<ReplayReport, CoachError> {
    let entries = read_log(kb_log)?;
    let at = |version: u64| -> Result<KnowledgeBase, CoachError> {
        let n = usize::try_from(version).unwrap_or(usize::MAX);
        if n > entries.len() {
            return Err(CoachError::UnknownVersion {
                requested: version,
                latest: entries.len() as u64,
            });
        }
        let mut kb = KnowledgeBase::empty();
        for LogEntry { entry, .. } in &entries[..n] {
            kb.apply(entry.clone())
                .map_err(|e| CoachError::Validation(e.to_string()))?;
        }
        Ok(kb)
    };

    let mut report = ReplayReport::default();
    for (i, line) in fs::read_to_string(decision_log)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: DecisionRecord = serde_json::from_str(line)
            .map_err(|e| CoachError::Validation(format!("decision log line {}: {e}", i + 1)))?;
        let actual = decide(rec.context, &at(rec.kb_version)?)?.sha256();
        report.checked += 1;
        if actual != rec.decision_sha256 {
            report.mismatches.push(ReplayMismatch {
                line: i + 1,
                kb_version: rec.kb_version,
                expected: rec.decision_sha256,
                actual,
            });
        }
    }
    Ok(report)
}
