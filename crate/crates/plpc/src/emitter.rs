//! Serialization of programs and answer sets, the `nice` output filter,
//! and parsers for external solvers' answer-set output.
//!
//! Three dialects are supported. `core` is this toolkit's own grammar and
//! round-trips through the parser. `dlv` and `smodels` are plain
//! extended-logic-program renderings for external systems; they require
//! ground programs, print strong negation as a `-` prefix, and cannot
//! express preference atoms or set declarations (compile first).

use std::fmt::Write as _;

use thiserror::Error;

use crate::ast::{AnswerSet, BodyElement, Head, Literal, OrderedProgram, Rule, SetDecl, Term};
use crate::compiler::{CompiledProgram, CONTROL_PREDICATES, STRONG_NEG_PREFIX};
use crate::parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Core,
    Dlv,
    Smodels,
}

impl Dialect {
    fn label(self) -> &'static str {
        match self {
            Dialect::Core => "core",
            Dialect::Dlv => "dlv",
            Dialect::Smodels => "smodels",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("the {} dialect requires a ground program", .0.label())]
    NonGround(Dialect),
    #[error("{what} cannot be rendered in the {} dialect", .dialect.label())]
    Unsupported { what: String, dialect: Dialect },
}

/// A problem in an external solver's output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse solver output at `{line}`: {message}")]
pub struct OutputError {
    pub line: String,
    pub message: String,
}

fn render_literal(lit: &Literal, dialect: Dialect, out: &mut String) {
    if lit.strong_neg {
        out.push_str(match dialect {
            Dialect::Core => "neg ",
            Dialect::Dlv | Dialect::Smodels => "-",
        });
    }
    out.push_str(&lit.predicate);
    if !lit.args.is_empty() {
        out.push('(');
        for (i, a) in lit.args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{a}");
        }
        out.push(')');
    }
}

fn render_rule(rule: &Rule, dialect: Dialect, out: &mut String) -> Result<(), EmitError> {
    let mut body: Vec<BodyElement> = Vec::with_capacity(rule.body.len() + 1);
    // The surface form names a rule through a name(...) body atom; put it
    // first, matching where programs usually write it.
    if let Some(n) = &rule.name {
        body.push(BodyElement::pos(Literal::new("name", vec![n.clone()])));
    }
    body.extend(rule.body.iter().cloned());

    match &rule.head {
        None => {}
        Some(Head::Literal(l)) => render_literal(l, dialect, out),
        Some(Head::Preference(p)) => {
            if dialect != Dialect::Core {
                return Err(EmitError::Unsupported {
                    what: format!("the preference atom `{p}`"),
                    dialect,
                });
            }
            if body.is_empty() {
                let _ = write!(out, "{p}");
            } else {
                let _ = write!(out, "({p})");
            }
        }
    }
    if !body.is_empty() {
        if rule.head.is_some() {
            out.push(' ');
        }
        out.push_str(":- ");
        for (i, elem) in body.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            match elem {
                BodyElement::Literal(b) => {
                    if b.naf {
                        out.push_str("not ");
                    }
                    render_literal(&b.lit, dialect, out);
                }
                BodyElement::Preference(p) => {
                    if dialect != Dialect::Core {
                        return Err(EmitError::Unsupported {
                            what: format!("the preference atom `{p}`"),
                            dialect,
                        });
                    }
                    let _ = write!(out, "{p}");
                }
            }
        }
    }
    out.push_str(".\n");
    Ok(())
}

fn render_rules(rules: &[Rule], dialect: Dialect, out: &mut String) -> Result<(), EmitError> {
    for rule in rules {
        if dialect != Dialect::Core && !rule.is_ground() {
            return Err(EmitError::NonGround(dialect));
        }
        render_rule(rule, dialect, out)?;
    }
    Ok(())
}

/// Serializes an ordered program. In the `core` dialect the result parses
/// back to a structurally equal program.
pub fn emit(p: &OrderedProgram, dialect: Dialect) -> Result<String, EmitError> {
    let mut out = String::new();
    render_rules(&p.rules, dialect, &mut out)?;
    for decl in &p.set_decls {
        if dialect != Dialect::Core {
            return Err(EmitError::Unsupported {
                what: format!("the set declaration `{}`", decl.name),
                dialect,
            });
        }
        render_set_decl(decl, &mut out);
    }
    Ok(out)
}

/// Serializes a compiled program. The output is a regular extended logic
/// program; in the `core` dialect it parses back with
/// [`parser::parse_regular_program`].
pub fn emit_compiled(p: &CompiledProgram, dialect: Dialect) -> Result<String, EmitError> {
    let mut out = String::new();
    render_rules(&p.rules, dialect, &mut out)?;
    Ok(out)
}

fn render_set_decl(decl: &SetDecl, out: &mut String) {
    let _ = write!(out, "{} : [", decl.name);
    for (i, m) in decl.members.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{m}");
    }
    out.push_str("].\n");
}

/// Predicates suppressed by [`filter_nice`]: the control predicates plus
/// `true`, which some systems add to every answer set.
pub fn is_special_predicate(predicate: &str) -> bool {
    predicate == "true" || CONTROL_PREDICATES.contains(&predicate)
}

/// The `nice` filter: drops control atoms from an answer set and restores
/// the strong-negation reading of compiled `neg_q` atoms.
///
/// Idempotent: literals that already carry strong negation pass through.
pub fn filter_nice(x: &AnswerSet) -> AnswerSet {
    x.iter()
        .filter(|l| !is_special_predicate(&l.predicate))
        .map(|l| {
            if !l.strong_neg && l.predicate.starts_with(STRONG_NEG_PREFIX)
                && l.predicate.len() > STRONG_NEG_PREFIX.len()
            {
                Literal::new(&l.predicate[STRONG_NEG_PREFIX.len()..], l.args.clone()).negated()
            } else {
                l.clone()
            }
        })
        .collect()
}

fn atom_from_text(text: &str) -> Result<Literal, OutputError> {
    let text = text.trim();
    let (strong, rest) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text),
    };
    let term = parser::parse_term(rest).map_err(|e| OutputError {
        line: text.to_string(),
        message: e.message,
    })?;
    let lit = match term {
        Term::Constant(s) if !s.starts_with(|c: char| c.is_ascii_digit()) => Literal::prop(s),
        Term::Compound(f, args) => Literal::new(f, args),
        other => {
            return Err(OutputError {
                line: text.to_string(),
                message: format!("`{other}` is not an atom"),
            })
        }
    };
    Ok(if strong { lit.negated() } else { lit })
}

/// Splits `a, b(c, d), e` on the commas outside parentheses.
fn split_atoms(body: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&body[start..]);
    parts
}

/// Parses the answer sets printed by an external solver.
///
/// In the `dlv` dialect every `{a, b, ...}` group in the stream (possibly
/// spanning lines) is one answer set; in the `smodels` dialect every line
/// beginning `Stable Model:` is one. Anything else — banners, timings — is
/// ignored.
pub fn parse_answer_sets(out: &str, dialect: Dialect) -> Result<Vec<AnswerSet>, OutputError> {
    match dialect {
        Dialect::Core => Err(OutputError {
            line: String::new(),
            message: "answer sets are parsed in the dlv or smodels dialects".to_string(),
        }),
        Dialect::Dlv => {
            let mut sets = Vec::new();
            let mut rest = out;
            while let Some(open) = rest.find('{') {
                let after = &rest[open + 1..];
                let close = after.find('}').ok_or_else(|| OutputError {
                    line: rest[open..].lines().next().unwrap_or("").to_string(),
                    message: "unterminated `{`".to_string(),
                })?;
                let body = &after[..close];
                let mut literals = Vec::new();
                if !body.trim().is_empty() {
                    for part in split_atoms(body) {
                        literals.push(atom_from_text(part)?);
                    }
                }
                sets.push(literals.into_iter().collect());
                rest = &after[close + 1..];
            }
            Ok(sets)
        }
        Dialect::Smodels => {
            let mut sets = Vec::new();
            for line in out.lines() {
                if let Some(atoms) = line.trim_start().strip_prefix("Stable Model:") {
                    let mut literals = Vec::new();
                    for word in atoms.split_whitespace() {
                        literals.push(atom_from_text(word)?);
                    }
                    sets.push(literals.into_iter().collect());
                }
            }
            Ok(sets)
        }
    }
}

fn render_term_compact(t: &Term, out: &mut String) {
    match t {
        Term::Constant(s) | Term::Variable(s) => out.push_str(s),
        Term::Compound(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_term_compact(a, out);
            }
            out.push(')');
        }
    }
}

fn render_atom_for(lit: &Literal, dialect: Dialect) -> String {
    match dialect {
        Dialect::Core | Dialect::Dlv => {
            let mut s = String::new();
            render_literal(lit, dialect, &mut s);
            s
        }
        // smodels atoms are whitespace-separated, so keep them compact.
        Dialect::Smodels => {
            let mut s = String::new();
            if lit.strong_neg {
                s.push('-');
            }
            s.push_str(&lit.predicate);
            if !lit.args.is_empty() {
                s.push('(');
                for (i, a) in lit.args.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    render_term_compact(a, &mut s);
                }
                s.push(')');
            }
            s
        }
    }
}

/// Renders one answer set in this toolkit's own output format: braces,
/// lexicographic atom order, `neg ` for strong negation.
pub fn render_answer_set(x: &AnswerSet) -> String {
    let mut atoms: Vec<String> = x.iter().map(|l| render_atom_for(l, Dialect::Core)).collect();
    atoms.sort();
    format!("{{{}}}", atoms.join(", "))
}

/// Renders answer sets in a given dialect, one set per line, inverse to
/// [`parse_answer_sets`] for `dlv` and `smodels`.
pub fn render_answer_sets(sets: &[AnswerSet], dialect: Dialect) -> String {
    let mut out = String::new();
    for set in sets {
        let mut atoms: Vec<String> = set.iter().map(|l| render_atom_for(l, dialect)).collect();
        atoms.sort();
        match dialect {
            Dialect::Core | Dialect::Dlv => {
                let _ = writeln!(out, "{{{}}}", atoms.join(", "));
            }
            Dialect::Smodels => {
                let _ = writeln!(out, "Stable Model: {}", atoms.join(" "));
            }
        }
    }
    out
}
