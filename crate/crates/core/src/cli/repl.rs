use std::io::{self, BufRead, Write};

use crate::evolution::diff_visibility;
use crate::lang;
use crate::lang::ast::Statement;
use crate::model::NetworkSnapshot;

use super::{load_text, render_answer, render_diff, CliError, Style};

/// What one input line produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reply {
    Output(String),
    Error(String),
    /// The line opened a block; more input is needed.
    Continue,
    Quit,
}

/// Interactive session state. Every accepted line that changes the network
/// commits a new snapshot.
#[derive(Debug)]
pub struct Repl {
    snapshot: NetworkSnapshot,
    machine: bool,
    style: Style,
    watch: Option<String>,
    pending: String,
}

fn brace_depth(text: &str) -> i64 {
    let mut depth = 0;
    for line in text.lines() {
        let code = line.split('#').next().unwrap_or("");
        for c in code.chars() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                _ => {}
            }
        }
    }
    depth
}

impl Repl {
    pub fn new(snapshot: NetworkSnapshot, machine: bool, style: Style) -> Self {
        Repl {
            snapshot,
            machine,
            style,
            watch: None,
            pending: String::new(),
        }
    }

    pub fn snapshot(&self) -> &NetworkSnapshot {
        &self.snapshot
    }

    pub fn watching(&self) -> Option<&str> {
        self.watch.as_deref()
    }

    pub fn handle_line(&mut self, line: &str) -> Reply {
        if self.pending.is_empty() {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                [] => return Reply::Output(String::new()),
                ["quit" | "exit"] => return Reply::Quit,
                ["unwatch"] => {
                    self.watch = None;
                    return Reply::Output(String::new());
                }
                ["watch", name] => {
                    let name = name.trim_end_matches(';');
                    if self.snapshot.member_id(name).is_none() {
                        return Reply::Error(format!("unknown member `{name}`"));
                    }
                    self.watch = Some(name.to_string());
                    return Reply::Output(String::new());
                }
                ["save", file] => {
                    return match std::fs::write(file, lang::print_snapshot(&self.snapshot)) {
                        Ok(()) => Reply::Output(format!("saved {file}\n")),
                        Err(e) => Reply::Error(format!("{file}: {e}")),
                    };
                }
                _ => {}
            }
        }
        self.pending.push_str(line);
        self.pending.push('\n');
        if brace_depth(&self.pending) > 0 {
            return Reply::Continue;
        }
        let mut text = std::mem::take(&mut self.pending);
        let trimmed = text.trim_end();
        if !trimmed.ends_with(';') && !trimmed.ends_with('}') {
            text = format!("{trimmed};");
        }
        match self.eval(&text) {
            Ok(out) => Reply::Output(out),
            Err(e) => Reply::Error(e.to_string()),
        }
    }

    fn eval(&mut self, text: &str) -> Result<String, CliError> {
        let doc = lang::parse(text).map_err(|err| CliError::Syntax {
            file: "<repl>".into(),
            err,
        })?;
        let changes = doc
            .statements
            .iter()
            .any(|s| !matches!(s.node, Statement::Query(_) | Statement::WhatIf(_)));
        let bound = load_text(&self.snapshot, text, "<repl>")?;
        let mut out = String::new();
        for q in &bound.queries {
            let answer = q.run().map_err(|err| CliError::Query {
                file: "<repl>".into(),
                err,
            })?;
            out.push_str(&render_answer(
                &q.snapshot,
                &answer,
                self.machine,
                self.style,
            ));
        }
        if changes {
            if let Some(owner) = &self.watch {
                let d = diff_visibility(&self.snapshot, &bound.snapshot, owner)
                    .map_err(|e| CliError::Other(e.to_string()))?;
                out.push_str(&render_diff(&d, self.machine));
            }
            self.snapshot = bound.snapshot;
        }
        Ok(out)
    }

    /// Reads lines until end of input or `quit`. Errors are reported and the
    /// session continues.
    pub fn run(
        &mut self,
        input: &mut dyn BufRead,
        out: &mut dyn Write,
        err: &mut dyn Write,
        prompt: bool,
    ) -> io::Result<()> {
        let mut line = String::new();
        loop {
            if prompt {
                let p = if self.pending.is_empty() {
                    "pvn> "
                } else {
                    "...> "
                };
                write!(out, "{p}")?;
                out.flush()?;
            }
            line.clear();
            if input.read_line(&mut line)? == 0 {
                return Ok(());
            }
            match self.handle_line(line.trim_end_matches(['\n', '\r'])) {
                Reply::Output(s) => out.write_all(s.as_bytes())?,
                Reply::Error(e) => writeln!(err, "error: {e}")?,
                Reply::Continue => {}
                Reply::Quit => return Ok(()),
            }
        }
    }
}
