//! Bridge to external answer-set solvers run as subprocesses.
//!
//! The solver command is fully user-supplied. The emitted program is
//! written to the child's standard input, unless some argument contains
//! the token `{file}`, in which case the program is written to a temporary
//! file whose path replaces the token. Standard output is captured and
//! handed to [`parse_answer_sets`]; the raw transcript is kept for
//! diagnostics.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::ast::AnswerSet;
use crate::emitter::{parse_answer_sets, Dialect, OutputError};

/// The outcome of one external solver call.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub answer_sets: Vec<AnswerSet>,
    /// Raw transcript, for diagnostics.
    pub stdout: String,
    pub stderr: String,
    pub exit_code: Option<i32>,
}

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("the external solver command is empty")]
    EmptyCommand,
    #[error("failed to launch `{command}`: {source}")]
    Launch {
        command: String,
        source: std::io::Error,
    },
    #[error("failed to hand the program to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("external solver timed out after {}s", .timeout.as_secs())]
    Timeout { timeout: Duration },
    #[error("external solver exited with {code:?} and produced no answer sets{}",
            if .stderr.is_empty() { String::new() } else { format!("; stderr: {}", .stderr.trim()) })]
    ExitFailure {
        code: Option<i32>,
        stdout: String,
        stderr: String,
    },
    #[error(transparent)]
    Output(#[from] OutputError),
}

/// Pipes `program_text` into `command`, waits up to `timeout`, and parses
/// the answer sets from standard output.
///
/// Launch failures, timeouts, nonzero exits without parseable sets, and
/// malformed output are each distinguished in the error. A nonzero exit
/// *with* parseable answer sets is a success: several solvers encode the
/// satisfiability verdict in their exit code.
pub fn run_external(
    program_text: &str,
    command: &[String],
    dialect: Dialect,
    timeout: Duration,
) -> Result<SolverRun, ExternalError> {
    let (executable, args) = command.split_first().ok_or(ExternalError::EmptyCommand)?;

    let uses_file = command.iter().any(|a| a.contains("{file}"));
    let mut tempfile = None;
    let args: Vec<String> = if uses_file {
        let mut file = tempfile::Builder::new()
            .prefix("plpc-")
            .suffix(".lp")
            .tempfile()?;
        file.write_all(program_text.as_bytes())?;
        file.flush()?;
        let path = file.path().to_string_lossy().into_owned();
        tempfile = Some(file); // keep it alive until the child exits
        args.iter().map(|a| a.replace("{file}", &path)).collect()
    } else {
        args.to_vec()
    };

    let mut child = Command::new(executable)
        .args(&args)
        .stdin(if uses_file {
            Stdio::null()
        } else {
            Stdio::piped()
        })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| ExternalError::Launch {
            command: executable.clone(),
            source,
        })?;

    if !uses_file {
        let mut stdin = child.stdin.take().expect("stdin was piped");
        let text = program_text.to_string();
        // Write on a separate thread so a solver that fills its output
        // pipe before reading all of its input cannot deadlock us.
        std::thread::spawn(move || {
            let _ = stdin.write_all(text.as_bytes());
        });
    }

    let stdout_pipe = child.stdout.take().expect("stdout was piped");
    let stderr_pipe = child.stderr.take().expect("stderr was piped");
    let stdout_thread = std::thread::spawn(move || read_all(stdout_pipe));
    let stderr_thread = std::thread::spawn(move || read_all(stderr_pipe));

    let started = Instant::now();
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if started.elapsed() > timeout {
            let _ = child.kill();
            let _ = child.wait();
            return Err(ExternalError::Timeout { timeout });
        }
        std::thread::sleep(Duration::from_millis(10));
    };
    drop(tempfile);

    let stdout = stdout_thread.join().unwrap_or_default();
    let stderr = stderr_thread.join().unwrap_or_default();

    let answer_sets = parse_answer_sets(&stdout, dialect)?;
    if answer_sets.is_empty() && !status.success() {
        return Err(ExternalError::ExitFailure {
            code: status.code(),
            stdout,
            stderr,
        });
    }
    Ok(SolverRun {
        answer_sets,
        stdout,
        stderr,
        exit_code: status.code(),
    })
}

fn read_all(mut pipe: impl std::io::Read) -> String {
    let mut buf = String::new();
    let _ = pipe.read_to_string(&mut buf);
    buf
}
