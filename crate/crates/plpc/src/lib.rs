//! A compiler for ordered logic programs.
//!
//! An *ordered logic program* is an extended logic program in which rules
//! carry unique name terms and preferences between rules (or between named
//! sets of rules) are stated at the object level by atoms `s < t` — the
//! rule or set named `t` has the higher priority. This crate translates
//! such programs into regular extended logic programs whose answer sets
//! are exactly the preferred answer sets of the input, so any answer-set
//! system can serve as the reasoning engine. A small internal solver and
//! an output filter make every result checkable offline.
//!
//! The pipeline is parse → ground → flatten names → compile → emit, with
//! optional solving:
//!
//! ```
//! use plpc::ast::Literal;
//! use plpc::compiler::{compile, CompileOptions};
//! use plpc::emitter::{filter_nice, render_answer_set};
//! use plpc::grounder::{flatten_names, ground_program};
//! use plpc::parser::parse_program;
//! use plpc::solver::{GroundNormalProgram, DEFAULT_BUDGET};
//!
//! let program = parse_program(
//!     "penguin(tweety). bird(tweety).
//!      flies(tweety) :- name(1), not neg flies(tweety), bird(tweety).
//!      neg flies(tweety) :- name(2), not flies(tweety), penguin(tweety).
//!      1 < 2.",
//! )?;
//! let ground = flatten_names(&ground_program(&program)?)?;
//! let compiled = compile(&ground, &CompileOptions::default())?;
//! let sets = GroundNormalProgram::from_compiled(&compiled)?.answer_sets(DEFAULT_BUDGET)?;
//!
//! assert_eq!(sets.len(), 1);
//! assert_eq!(
//!     render_answer_set(&filter_nice(&sets[0])),
//!     "{bird(tweety), neg flies(tweety), penguin(tweety)}"
//! );
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod ast;
pub mod compiler;
pub mod emitter;
pub mod external;
pub mod grounder;
pub mod parser;
pub mod solver;

pub use ast::{AnswerSet, Literal, OrderedProgram, Rule, Term};
pub use compiler::{compile, CompileOptions, CompiledProgram};
pub use emitter::{emit, emit_compiled, filter_nice, Dialect};
pub use grounder::{flatten_names, ground_program};
pub use parser::{parse_program, SourceError};
pub use solver::{GroundNormalProgram, DEFAULT_BUDGET};
