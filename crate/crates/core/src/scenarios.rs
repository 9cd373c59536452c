//! Runs scenario fixtures through the decision pipeline and reports
//! verdicts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::domain::CurationAction;
use crate::dsl::{parse_scenario, DslError, ScenarioFixture};
use crate::rules::{decide, explain, KnowledgeBase};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{}:{source}", file.display())]
    Parse { file: PathBuf, source: DslError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A fixture together with the file it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadedFixture {
    pub file: String,
    #[serde(flatten)]
    pub fixture: ScenarioFixture,
}

/// Every `.scn` file in `dir`, sorted by file name.
pub fn load_fixture_dir(dir: &Path) -> Result<Vec<LoadedFixture>, ScenarioError> {
    let io = |source| ScenarioError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "scn") && p.is_file())
        .collect();
    files.sort();

    let mut out = Vec::new();
    for path in files {
        let text = fs::read_to_string(&path).map_err(|source| ScenarioError::Io {
            path: path.clone(),
            source,
        })?;
        let fixtures = parse_scenario(&text).map_err(|source| ScenarioError::Parse {
            file: path.clone(),
            source,
        })?;
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.extend(fixtures.into_iter().map(|fixture| LoadedFixture {
            file: file.clone(),
            fixture,
        }));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub file: String,
    pub name: String,
    pub expected: CurationAction,
    pub actual: Option<CurationAction>,
    pub contested: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Rendered explanation, kept for failures only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub results: Vec<FixtureResult>,
}

pub fn run_fixtures(fixtures: &[LoadedFixture], kb: &KnowledgeBase) -> ScenarioReport {
    let results: Vec<FixtureResult> = fixtures
        .iter()
        .map(|f| {
            let expected = f.fixture.expect;
            let base = FixtureResult {
                file: f.file.clone(),
                name: f.fixture.name.clone(),
                expected,
                actual: None,
                contested: false,
                pass: false,
                error: None,
                trace: None,
            };
            match decide(f.fixture.context.clone(), kb) {
                Ok(d) => {
                    let pass = d.action == expected;
                    FixtureResult {
                        actual: Some(d.action),
                        contested: d.contested,
                        pass,
                        trace: (!pass).then(|| explain(&d).render_text()),
                        ..base
                    }
                }
                Err(e) => FixtureResult {
                    error: Some(e.to_string()),
                    ..base
                },
            }
        })
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    ScenarioReport {
        total: results.len(),
        passed,
        failed: results.len() - passed,
        results,
    }
}

impl ScenarioReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn failure_detail(r: &FixtureResult) -> Vec<String> {
        let mut lines = vec![format!(
            "expected {}, got {}",
            r.expected,
            r.actual.map_or("no decision".to_string(), |a| a.to_string())
        )];
        if let Some(e) = &r.error {
            lines.push(format!("error: {e}"));
        }
        if let Some(t) = &r.trace {
            lines.extend(t.lines().map(str::to_string));
        }
        lines
    }

    pub fn to_tap(&self) -> String {
        let mut out = format!("TAP version 13\n1..{}\n", self.total);
        for (i, r) in self.results.iter().enumerate() {
            let status = if r.pass { "ok" } else { "not ok" };
            let _ = writeln!(out, "{status} {} - {} ({})", i + 1, r.name, r.file);
            if !r.pass {
                for line in Self::failure_detail(r) {
                    let _ = writeln!(out, "  # {line}");
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let contested = if r.contested { " (contested)" } else { "" };
            let _ = writeln!(
                out,
                "{status} {} [{}] -> {}{contested}",
                r.name,
                r.file,
                r.actual.map_or("error".to_string(), |a| a.to_string())
            );
            if !r.pass {
                for line in Self::failure_detail(r) {
                    let _ = writeln!(out, "    {line}");
                }
            }
        }
        let _ = writeln!(out, "{}/{} fixtures passed", self.passed, self.total);
        out
    }
}
