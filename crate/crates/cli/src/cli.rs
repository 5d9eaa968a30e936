use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use mates_core::diagnosis::DiseaseGuidance;
use mates_core::{
    consult_by_disease, default_kb, parse_kb, rank, ConsultationResult, DiagnosisError,
    KnowledgeBase, ParseError, Query, Violation,
};
use thiserror::Error;

use crate::api::{self, DiseaseConsultation};

#[derive(Debug, Parser)]
#[command(name = "mates", version, about = "Maternal-care expert system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the JSON API (and the UI bundle, if given).
    Serve {
        /// Knowledge-base file; defaults to the bundled maternal-care KB.
        #[arg(long, env = "MATES_KB")]
        kb: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory holding the built browser client.
        #[arg(long, env = "MATES_UI_DIR")]
        ui_dir: Option<PathBuf>,
    },
    /// One-shot consultation.
    #[command(group(ArgGroup::new("input").required(true).args(["symptoms", "diseases"])))]
    Consult {
        #[arg(long, env = "MATES_KB")]
        kb: Option<PathBuf>,
        /// Comma-separated symptom ids.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        symptoms: Option<Vec<String>>,
        /// Comma-separated disease ids.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        diseases: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check a knowledge-base file.
    Validate {
        #[arg(long, env = "MATES_KB")]
        kb: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{}", render_violations(.path, .violations))]
    Invalid {
        path: String,
        violations: Vec<Violation>,
    },
    #[error(transparent)]
    Diagnosis(#[from] DiagnosisError),
    #[error("cannot serve on {addr}: {source}")]
    Serve {
        addr: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for I/O failures, 2 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Serve { .. } => 1,
            CliError::Parse { .. } | CliError::Invalid { .. } | CliError::Diagnosis(_) => 2,
        }
    }
}

fn render_violations(path: &str, violations: &[Violation]) -> String {
    let mut out = format!("{path}: {} violation(s)", violations.len());
    for v in violations {
        write!(out, "\n  {v}").unwrap();
    }
    out
}

const BUNDLED: &str = "<bundled maternal_care.kb>";

/// Reads and parses a KB file, or the bundled KB when `path` is `None`.
pub fn load_kb(path: Option<&Path>) -> Result<(KnowledgeBase, String), CliError> {
    let Some(path) = path else {
        return Ok((default_kb(), BUNDLED.to_owned()));
    };
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let kb = parse_kb(&text).map_err(|source| CliError::Parse {
        path: shown.clone(),
        source,
    })?;
    Ok((kb, shown))
}

/// Like [`load_kb`], but also rejects a KB with violations.
pub fn load_valid_kb(path: Option<&Path>) -> Result<KnowledgeBase, CliError> {
    let (kb, shown) = load_kb(path)?;
    let violations = kb.validate();
    if violations.is_empty() {
        Ok(kb)
    } else {
        Err(CliError::Invalid {
            path: shown,
            violations,
        })
    }
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: Cli, out: &mut impl std::io::Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { kb } => {
            let kb = load_valid_kb(kb.as_deref())?;
            writeln!(
                out,
                "ok: {} symptoms, {} diseases, {} rules",
                kb.symptoms.len(),
                kb.diseases.len(),
                kb.rules.len()
            )
            .map_err(stdout_error)?;
            Ok(())
        }
        Command::Consult {
            kb,
            symptoms,
            diseases,
            format,
        } => {
            let kb = load_valid_kb(kb.as_deref())?;
            let text = match (symptoms, diseases) {
                (Some(symptoms), _) => {
                    let symptoms: Vec<String> =
                        symptoms.into_iter().filter(|s| !s.is_empty()).collect();
                    let result = rank(&kb, &Query::resolve(&kb, &symptoms)?)?;
                    match format {
                        Format::Json => to_json(&result),
                        Format::Table => suggestion_table(&kb, &result),
                    }
                }
                (None, Some(diseases)) => {
                    let results = consult_by_disease(&kb, &diseases)?;
                    match format {
                        Format::Json => to_json(&DiseaseConsultation { results }),
                        Format::Table => guidance_table(&results),
                    }
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            writeln!(out, "{text}").map_err(stdout_error)?;
            Ok(())
        }
        Command::Serve {
            kb,
            port,
            host,
            ui_dir,
        } => {
            let kb = load_valid_kb(kb.as_deref())?;
            serve(kb, &host, port, ui_dir)
        }
    }
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("response types serialize")
}

fn suggestion_table(kb: &KnowledgeBase, result: &ConsultationResult) -> String {
    if result.suggestions.is_empty() {
        return "no matching disease".into();
    }
    let mut out = String::new();
    for (i, s) in result.suggestions.iter().enumerate() {
        let matched: Vec<&str> = s
            .matched
            .iter()
            .map(|id| {
                kb.symptom(id.as_str())
                    .map_or(id.as_str(), |x| x.display_name.as_str())
            })
            .collect();
        writeln!(
            out,
            "{}. {} [{}]  score {}",
            i + 1,
            s.display_name,
            s.disease,
            s.score
        )
        .unwrap();
        writeln!(out, "   matched: {}", matched.join(", ")).unwrap();
        writeln!(out, "   Care and Treatment: {}", s.care_treatment).unwrap();
        writeln!(out, "   If not treated: {}", s.if_untreated).unwrap();
    }
    out.truncate(out.trim_end().len());
    out
}

fn guidance_table(results: &[DiseaseGuidance]) -> String {
    let mut out = String::new();
    for g in results {
        writeln!(out, "{} [{}]", g.display_name, g.disease_id).unwrap();
        writeln!(out, "   Care and Treatment: {}", g.care_treatment).unwrap();
        writeln!(out, "   If not treated: {}", g.if_untreated).unwrap();
    }
    out.truncate(out.trim_end().len());
    out
}

fn serve(
    kb: KnowledgeBase,
    host: &str,
    port: u16,
    ui_dir: Option<PathBuf>,
) -> Result<(), CliError> {
    let addr = format!("{host}:{port}");
    let io_err = |source| CliError::Serve {
        addr: addr.clone(),
        source,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(io_err)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr).await.map_err(io_err)?;
        let local: SocketAddr = listener.local_addr().map_err(io_err)?;
        eprintln!("mates: listening on http://{local}");
        axum::serve(listener, api::app(kb, ui_dir))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(io_err)
    })
}
