use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use curator::af::{extensions, parse_apx, Semantics};
use curator::coach::{coach, kb_append_text, kb_init, load_kb_file, read_log};
use curator::domain::RequestContext;
use curator::dsl::emit_kb;
use curator::rules::{decide, default_kb, explain, KnowledgeBase};
use curator::scenarios::{load_fixture_dir, run_fixtures};
use curator::service::{replay_decisions, serve, AppState};

#[derive(Parser)]
#[command(name = "curator", version, about = "Value-weighted argumentation for diversity curation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct KbArg {
    /// Knowledge base: a `.kb` rule file or an append-only log. Defaults to
    /// the built-in knowledge base.
    #[arg(long, env = "CURATOR_KB")]
    kb: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one request context.
    Decide {
        /// Context JSON file, or `-` for stdin.
        #[arg(long)]
        context: PathBuf,
        #[command(flatten)]
        kb: KbArg,
        /// Print the explanation after the action.
        #[arg(long)]
        explain: bool,
        /// Print the Decision JSON exactly as the HTTP API returns it.
        #[arg(long)]
        json: bool,
    },
    /// Scenario fixtures.
    Scenarios {
        #[command(subcommand)]
        command: ScenariosCommand,
    },
    /// Generic argumentation framework solver.
    Af {
        #[command(subcommand)]
        command: AfCommand,
    },
    /// Preview a counter-rule's effect on a context without committing it.
    Coach {
        #[arg(long)]
        context: PathBuf,
        /// File holding one `argument` block.
        #[arg(long)]
        rule: PathBuf,
        #[command(flatten)]
        kb: KbArg,
    },
    /// Knowledge-base log management.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
    /// Re-decide a decision log against the knowledge-base log and compare hashes.
    Replay {
        #[arg(long)]
        decisions: PathBuf,
        #[arg(long)]
        kb: PathBuf,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Append-only log; commits are persisted to it. Plain `.kb` files
        /// and the built-in knowledge base are served read-only from memory.
        #[command(flatten)]
        kb: KbArg,
        /// Append one JSON line per decision to this file.
        #[arg(long)]
        decision_log: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ScenariosCommand {
    Run {
        #[arg(long)]
        fixtures: PathBuf,
        #[command(flatten)]
        kb: KbArg,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Text,
    Json,
    Tap,
}

#[derive(Subcommand)]
enum AfCommand {
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        semantics: Semantics,
    },
}

#[derive(Subcommand)]
enum KbCommand {
    /// Create a log seeded with a knowledge base (built-in by default).
    Init {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long, default_value = "system")]
        author: String,
    },
    /// Append one rule or topic block to a log.
    Append {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        rule: PathBuf,
        #[arg(long)]
        author: String,
    },
    /// Print the canonical knowledge base, optionally as of an older version.
    Show {
        #[command(flatten)]
        kb: KbArg,
        #[arg(long)]
        at: Option<u64>,
    },
}

/// Bad input: unreadable or malformed files, invalid contexts.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T, E: Into<anyhow::Error>>(r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| InputError(e.into()).into())
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        input(std::io::stdin().read_to_string(&mut s).context("reading stdin"))?;
        return Ok(s);
    }
    input(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn read_context(path: &Path) -> Result<RequestContext> {
    let text = read_text(path)?;
    input(serde_json::from_str(&text).with_context(|| format!("parsing context {}", path.display())))
}

fn load_kb(arg: &KbArg) -> Result<KnowledgeBase> {
    match &arg.kb {
        None => Ok(default_kb()),
        Some(p) => input(load_kb_file(p).with_context(|| format!("loading knowledge base {}", p.display()))),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Decide {
            context,
            kb,
            explain: want_explain,
            json,
        } => {
            let kb = load_kb(&kb)?;
            let ctx = read_context(&context)?;
            let decision = input(decide(ctx, &kb))?;
            if json {
                // byte-identical to the POST /v1/decide body
                print!("{}", decision.to_json());
            } else {
                println!("{}", decision.action);
                if !decision.instruments.is_empty() {
                    let names: Vec<_> = decision.instruments.iter().map(|i| i.as_str()).collect();
                    println!("instruments: {}", names.join(", "));
                }
                if decision.contested {
                    println!("contested: precautionary fallback applied");
                }
                if want_explain {
                    print!("{}", explain(&decision).render_text());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenarios {
            command: ScenariosCommand::Run { fixtures, kb, report },
        } => {
            let kb = load_kb(&kb)?;
            let loaded = input(load_fixture_dir(&fixtures))?;
            if loaded.is_empty() {
                eprintln!("warning: 0 fixtures found in {}", fixtures.display());
            }
            let result = run_fixtures(&loaded, &kb);
            match report {
                Report::Text => print!("{}", result.to_text()),
                Report::Json => println!("{}", result.to_json()),
                Report::Tap => print!("{}", result.to_tap()),
            }
            Ok(if result.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Af {
            command: AfCommand::Solve { input: path, semantics },
        } => {
            let af = input(parse_apx(&read_text(&path)?))?;
            let exts = input(extensions(&af, semantics))?;
            if exts.is_empty() {
                println!("NO");
            }
            for ext in exts {
                let names: Vec<_> = ext.iter().map(|a| a.as_str()).collect();
                println!("[{}]", names.join(","));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Coach { context, rule, kb } => {
            let kb = load_kb(&kb)?;
            let ctx = read_context(&context)?;
            let step = input(coach(ctx, &kb, &read_text(&rule)?))?;
            println!("{}", serde_json::to_string_pretty(&step)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Kb { command } => kb_command(command),
        Command::Replay { decisions, kb } => {
            let report = input(replay_decisions(&decisions, &kb))?;
            for m in &report.mismatches {
                println!(
                    "line {}: kb version {}: expected {} got {}",
                    m.line, m.kb_version, m.expected, m.actual
                );
            }
            println!(
                "{} decisions replayed, {} mismatches",
                report.checked,
                report.mismatches.len()
            );
            Ok(if report.mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Serve {
            port,
            host,
            kb,
            decision_log,
        } => {
            let mut state = match &kb.kb {
                Some(p) if input(fs::read_to_string(p))?.starts_with(curator::coach::LOG_HEADER) => {
                    input(AppState::with_kb_log(p))?
                }
                _ => AppState::in_memory(load_kb(&kb)?),
            };
            if let Some(p) = decision_log {
                state = input(state.with_decision_log(&p))?;
            }
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                tracing::info!(addr = %listener.local_addr()?, "listening");
                serve(listener, Arc::new(state)).await
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn kb_command(command: KbCommand) -> Result<ExitCode> {
    match command {
        KbCommand::Init { out, from, author } => {
            let kb = match from {
                Some(p) => input(load_kb_file(&p))?,
                None => default_kb(),
            };
            let v = input(kb_init(&out, &kb, &author))?;
            println!("initialized {} at version {v}", out.display());
        }
        KbCommand::Append { kb, rule, author } => {
            let v = input(kb_append_text(&kb, &read_text(&rule)?, &author))?;
            println!("version {v}");
        }
        KbCommand::Show { kb, at } => {
            let loaded = match (at, &kb.kb) {
                (None, _) => load_kb(&kb)?,
                (Some(v), Some(p)) => input(curator::coach::kb_load_at(p, v))?,
                (Some(_), None) => bail!(InputError(anyhow::anyhow!("--at needs a --kb log"))),
            };
            if let Some(p) = &kb.kb {
                if let Ok(entries) = read_log(p) {
                    if let Some(last) = entries.last() {
                        eprintln!("# {} entries, last by {} at {}", entries.len(), last.author, last.timestamp);
                    }
                }
            }
            println!("# version {}", loaded.version());
            print!("{}", emit_kb(&loaded));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
