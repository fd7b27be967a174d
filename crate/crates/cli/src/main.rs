mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bogomolov::corpus::{self, CorpusError};
use bogomolov::pipeline::{compute_b0, compute_schur, Mode, Options, PipelineError};
use bogomolov::presentation::{parse_presentation, validate, ParseError, PcGroup, PcPresentation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "bogomolov",
    version,
    about = "Bogomolov and Schur multipliers of pc-presented finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// How commuting pairs are harvested: default or oracle-all-pairs.
    #[arg(long, global = true, default_value_t = Mode::Default)]
    mode: Mode,
    /// Longest commutator product tried when searching for generator words.
    #[arg(long = "max-word-len", global = true, default_value_t = 4)]
    max_word_len: usize,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation and run its consistency checks.
    Check { file: PathBuf },
    /// Bogomolov multiplier, extension and commutator words.
    B0(Input),
    /// Schur multiplier (consistency relations only).
    Schur(Input),
    /// Run every corpus family and compare with the published results.
    Corpus,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Presentation file (text grammar or JSON).
    file: Option<PathBuf>,
    /// A corpus family, 1 to 115.
    #[arg(long)]
    family: Option<u32>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: inconsistent presentation\n{details}")]
    Inconsistent { path: String, details: String },
    #[error(transparent)]
    Family(#[from] CorpusError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("corpus mismatch in families {0:?}")]
    Mismatch(Vec<u32>),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } | CliError::Inconsistent { .. } | CliError::Family(_) => 2,
            CliError::Pipeline(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

fn read_presentation(path: &Path) -> Result<PcPresentation, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let parsed = if text.trim_start().starts_with('{') {
        PcPresentation::from_json(&text)
    } else {
        parse_presentation(&text)
    };
    parsed.map_err(|source| CliError::Parse {
        path: shown,
        source,
    })
}

fn load_group(path: &Path) -> Result<PcGroup, CliError> {
    let p = read_presentation(path)?;
    PcGroup::new(p).map_err(|e| CliError::Inconsistent {
        path: path.display().to_string(),
        details: report::failures_text(&e.report),
    })
}

fn resolve(input: &Input) -> Result<(PcGroup, Option<u32>), CliError> {
    match (&input.file, input.family) {
        (_, Some(f)) => Ok((corpus::expected_result(f)?.presentation.clone(), Some(f))),
        (Some(path), None) => Ok((load_group(path)?, None)),
        (None, None) => unreachable!("clap requires an input"),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let opts = Options {
        mode: cli.mode,
        max_word_len: cli.max_word_len,
    };
    match &cli.command {
        Command::Check { file } => {
            let p = read_presentation(file)?;
            let rep = validate(&p);
            let text = report::check(&p, &rep, cli.format);
            if rep.ok {
                Ok(text)
            } else {
                Err(CliError::Inconsistent {
                    path: file.display().to_string(),
                    details: report::failures_text(&rep),
                })
            }
        }
        Command::B0(input) => {
            let (g, family) = resolve(input)?;
            let r = compute_b0(&g, family, &opts)?;
            let entry = family.and_then(|f| corpus::expected_result(f).ok());
            Ok(report::b0(&r, &g, entry, cli.format))
        }
        Command::Schur(input) => {
            let (g, family) = resolve(input)?;
            let schur = compute_schur(&g)?;
            let b0 = bogomolov::pipeline::b0_quotient(&g, opts.mode)?;
            Ok(report::schur(&g, family, &schur, &b0, cli.format))
        }
        Command::Corpus => {
            let checks: Vec<_> = corpus::load_corpus()
                .par_iter()
                .map(|e| corpus::check_family(e, &opts))
                .collect();
            let text = report::corpus(&checks, opts.mode, cli.format);
            let failed: Vec<u32> = checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| c.family)
                .collect();
            if failed.is_empty() {
                Ok(text)
            } else {
                // The table is still useful when something differs.
                emit(cli, &text)?;
                Err(CliError::Mismatch(failed))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bogomolov: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
