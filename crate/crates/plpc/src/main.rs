use std::io::Read;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use plpc::compiler::{compile, CompileOptions};
use plpc::emitter::{self, Dialect};
use plpc::external::run_external;
use plpc::grounder::{flatten_names, ground_program};
use plpc::parser::parse_program;
use plpc::solver::{GroundNormalProgram, DEFAULT_BUDGET};

const EXTERNAL_TIMEOUT: Duration = Duration::from_secs(60);

/// Compile ordered logic programs into regular extended logic programs.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    /// Input program, or `-` for standard input
    input: String,

    /// Output dialect
    #[arg(long, value_enum, default_value_t = EmitOpt::Dlv)]
    emit: EmitOpt,

    /// Stop after grounding and name flattening
    #[arg(long)]
    ground_only: bool,

    /// Solve the compiled program instead of printing it
    #[arg(long, value_enum)]
    solve: Option<SolveOpt>,

    /// External solver command (whitespace-separated; `{file}` is replaced
    /// by the path of the emitted program)
    #[arg(long)]
    external_cmd: Option<String>,

    /// Suppress control atoms from answer sets and restore `neg` display
    #[arg(long)]
    nice: bool,

    /// Do not emit coherence constraints for compiled strong negation
    #[arg(long)]
    no_coherence: bool,

    /// Derive neg_prec(m, n) from prec(n, m)
    #[arg(long)]
    emit_neg_prec: bool,

    /// Print each intermediate program
    #[arg(long)]
    verbose: bool,

    /// Cap on the internal solver's candidate enumeration
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EmitOpt {
    Core,
    Dlv,
    Smodels,
}

impl From<EmitOpt> for Dialect {
    fn from(v: EmitOpt) -> Dialect {
        match v {
            EmitOpt::Core => Dialect::Core,
            EmitOpt::Dlv => Dialect::Dlv,
            EmitOpt::Smodels => Dialect::Smodels,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SolveOpt {
    Internal,
    External,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn compile(err: impl std::fmt::Display) -> Failure {
        Failure {
            message: err.to_string(),
            code: 1,
        }
    }

    fn solve(err: impl std::fmt::Display) -> Failure {
        Failure {
            message: err.to_string(),
            code: 2,
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("plpc: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_input(input: &str) -> Result<String, Failure> {
    if input == "-" {
        let mut src = String::new();
        std::io::stdin()
            .read_to_string(&mut src)
            .map_err(|e| Failure::compile(format!("cannot read standard input: {e}")))?;
        Ok(src)
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| Failure::compile(format!("cannot read `{input}`: {e}")))
    }
}

fn run(args: Args) -> Result<(), Failure> {
    let src = read_input(&args.input)?;
    let dialect = Dialect::from(args.emit);

    let program = parse_program(&src)
        .map_err(|e| Failure::compile(format!("{}: {e}", args.input)))?;
    let ground = ground_program(&program).map_err(Failure::compile)?;
    if args.verbose {
        print!(
            "%% stage: ground\n{}",
            emitter::emit(&ground, Dialect::Core).map_err(Failure::compile)?
        );
    }
    let flat = flatten_names(&ground).map_err(Failure::compile)?;
    if args.verbose {
        print!(
            "%% stage: flatten\n{}",
            emitter::emit(&flat, Dialect::Core).map_err(Failure::compile)?
        );
    }

    if args.ground_only {
        print!("{}", emitter::emit(&flat, dialect).map_err(Failure::compile)?);
        return Ok(());
    }

    let options = CompileOptions {
        coherence: !args.no_coherence,
        emit_neg_prec: args.emit_neg_prec,
    };
    let compiled = compile(&flat, &options).map_err(Failure::compile)?;
    if args.verbose {
        print!(
            "%% stage: compile\n{}",
            emitter::emit_compiled(&compiled, Dialect::Core).map_err(Failure::compile)?
        );
    }

    let sets = match args.solve {
        None => {
            print!(
                "{}",
                emitter::emit_compiled(&compiled, dialect).map_err(Failure::compile)?
            );
            return Ok(());
        }
        Some(SolveOpt::Internal) => GroundNormalProgram::from_compiled(&compiled)
            .map_err(Failure::solve)?
            .answer_sets(args.budget)
            .map_err(Failure::solve)?,
        Some(SolveOpt::External) => {
            let command: Vec<String> = args
                .external_cmd
                .as_deref()
                .unwrap_or("")
                .split_whitespace()
                .map(str::to_string)
                .collect();
            if command.is_empty() {
                return Err(Failure::solve(
                    "--solve external needs --external-cmd <command>",
                ));
            }
            // Compiled programs carry no strong negation, so the core and
            // dlv renderings coincide; parse output as dlv unless the
            // smodels dialect was chosen.
            let (text_dialect, out_dialect) = match dialect {
                Dialect::Smodels => (Dialect::Smodels, Dialect::Smodels),
                _ => (Dialect::Dlv, Dialect::Dlv),
            };
            let text =
                emitter::emit_compiled(&compiled, text_dialect).map_err(Failure::compile)?;
            run_external(&text, &command, out_dialect, EXTERNAL_TIMEOUT)
                .map_err(Failure::solve)?
                .answer_sets
        }
    };

    let mut lines: Vec<String> = if args.nice {
        let mut nice: Vec<_> = sets.iter().map(emitter::filter_nice).collect();
        nice.sort();
        nice.dedup();
        nice.iter().map(emitter::render_answer_set).collect()
    } else {
        sets.iter().map(emitter::render_answer_set).collect()
    };
    lines.sort();
    for line in lines {
        println!("{line}");
    }
    Ok(())
}
