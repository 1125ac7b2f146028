//! The `pvn` command line.
//!
//! ```text
//! pvn check FILE
//! pvn eval FILE -e "QUERY"
//! pvn diff FILE --mutations FILE2 --owner NAME [--commit OUT]
//! pvn repl FILE
//! ```
//!
//! `--machine` switches every command to line-oriented `key=value` records.
//! `PVN_COLOR=0` disables colour.

mod render;
mod repl;

use std::ffi::OsString;
use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use render::{render_answer, render_diff, Style};
pub use repl::{Repl, Reply};

use crate::evolution::{apply_batch, whatif, Mutation, WhatIfError};
use crate::lang::{self, BindError, Bound, Loc, QueryError, SyntaxError};
use crate::model::NetworkSnapshot;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Semantic or query failure, e.g. an unknown name.
    Failure = 1,
    Syntax = 2,
    Io = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pvn",
    version,
    about = "Privacy policies for evolving social networks"
)]
pub struct Cli {
    /// Emit key=value records instead of human-readable text.
    #[arg(long, global = true)]
    pub machine: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and bind a policy file.
    Check { file: PathBuf },
    /// Run queries against a policy file.
    Eval {
        file: PathBuf,
        /// Query text, e.g. "can JJ see Nina:/Everything;".
        #[arg(short = 'e', long = "expr")]
        query: String,
    },
    /// Show how a list of mutations would change an owner's visibility.
    Diff {
        file: PathBuf,
        #[arg(long)]
        mutations: PathBuf,
        #[arg(long)]
        owner: String,
        /// Apply the mutations and write the resulting network here.
        #[arg(long)]
        commit: Option<PathBuf>,
    },
    /// Interactive session over a policy file.
    Repl { file: PathBuf },
}

/// A command failure, carrying enough context for a one-line diagnostic.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}:{err}")]
    Syntax { file: String, err: SyntaxError },
    #[error("{file}:{err}")]
    Bind { file: String, err: BindError },
    #[error("{file}:{err}")]
    Query { file: String, err: QueryError },
    #[error("{file}:{loc}: {err}")]
    Mutation {
        file: String,
        loc: Loc,
        err: WhatIfError,
    },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Io { .. } => ExitStatus::Io,
            CliError::Syntax { .. } => ExitStatus::Syntax,
            _ => ExitStatus::Failure,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses and binds `text` onto `base`, labelling errors with `file`.
pub fn load_text(base: &NetworkSnapshot, text: &str, file: &str) -> Result<Bound, CliError> {
    let doc = lang::parse(text).map_err(|err| CliError::Syntax {
        file: file.to_string(),
        err,
    })?;
    lang::bind_onto(base, &doc).map_err(|err| CliError::Bind {
        file: file.to_string(),
        err,
    })
}

pub fn load_file(path: &Path) -> Result<Bound, CliError> {
    let text = read(path)?;
    load_text(&NetworkSnapshot::new(), &text, &path.display().to_string())
}

pub fn cmd_check(file: &Path) -> Result<String, CliError> {
    let bound = load_file(file)?;
    let s = &bound.snapshot;
    Ok(format!(
        "ok: {} groups, {} members, {} assignments\n",
        s.group_count(),
        s.member_count(),
        s.assignment_count()
    ))
}

pub fn cmd_eval(file: &Path, query: &str, machine: bool, style: Style) -> Result<String, CliError> {
    let bound = load_file(file)?;
    let q = load_text(&bound.snapshot, query, "<query>")?;
    let mut out = String::new();
    for bq in &q.queries {
        let answer = bq.run().map_err(|err| CliError::Query {
            file: "<query>".to_string(),
            err,
        })?;
        out.push_str(&render_answer(&bq.snapshot, &answer, machine, style));
    }
    Ok(out)
}

pub fn cmd_diff(
    file: &Path,
    mutations: &Path,
    owner: &str,
    commit: Option<&Path>,
    machine: bool,
) -> Result<String, CliError> {
    let bound = load_file(file)?;
    let mfile = mutations.display().to_string();
    let doc = lang::parse(&read(mutations)?).map_err(|err| CliError::Syntax {
        file: mfile.clone(),
        err,
    })?;
    let located = lang::mutations_from_document(&doc).map_err(|err| CliError::Bind {
        file: mfile.clone(),
        err,
    })?;
    let ms: Vec<Mutation> = located.iter().map(|(_, m)| m.clone()).collect();
    let at_mutation = |err: WhatIfError| {
        let loc = match &err {
            WhatIfError::Batch(b) => located[b.index].0,
            WhatIfError::Diff(_) => Loc::default(),
        };
        CliError::Mutation {
            file: mfile.clone(),
            loc,
            err,
        }
    };
    let diff = match whatif(&bound.snapshot, &ms, owner) {
        Ok(d) => d,
        Err(WhatIfError::Diff(e)) => return Err(CliError::Other(e.to_string())),
        Err(e) => return Err(at_mutation(e)),
    };
    if let Some(out_path) = commit {
        let after = apply_batch(&bound.snapshot, &ms).map_err(|e| at_mutation(e.into()))?;
        std::fs::write(out_path, lang::print_snapshot(&after)).map_err(|source| CliError::Io {
            path: out_path.display().to_string(),
            source,
        })?;
    }
    Ok(render_diff(&diff, machine))
}

fn color_enabled() -> bool {
    std::env::var("PVN_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

/// Runs the CLI with explicit streams; returns the exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{e}");
            return if code == 0 {
                ExitStatus::Success
            } else {
                ExitStatus::Syntax
            };
        }
    };
    let style = Style {
        color: color_enabled(),
    };
    let result = match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Eval { file, query } => cmd_eval(file, query, cli.machine, style),
        Command::Diff {
            file,
            mutations,
            owner,
            commit,
        } => cmd_diff(file, mutations, owner, commit.as_deref(), cli.machine),
        Command::Repl { file } => match load_file(file) {
            Ok(bound) => {
                let mut repl = Repl::new(bound.snapshot, cli.machine, style);
                let prompt = std::io::stdin().is_terminal();
                return match repl.run(stdin, stdout, stderr, prompt) {
                    Ok(()) => ExitStatus::Success,
                    Err(e) => {
                        let _ = writeln!(stderr, "error: {e}");
                        ExitStatus::Io
                    }
                };
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            ExitStatus::Success
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.status()
        }
    }
}

/// Entry point used by the `pvn` binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run(args, &mut stdin, &mut stdout, &mut stderr).code()
}
