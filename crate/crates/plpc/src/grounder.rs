//! Preprocessing of programs with variables and compound name terms.
//!
//! Two steps run before compilation: [`ground_program`] replaces every rule
//! with variables by all of its instances over the program's constants, and
//! [`flatten_names`] turns compound name terms into fresh constants
//! (`r(f(c))` becomes `r_f_c`) so that the compiled control atoms range
//! over plain constants.
//!
//! Instantiation is deliberately naive: every variable ranges over every
//! constant of the program, with no safety restriction. Dynamic preference
//! rules such as `(r1(X) < r2(X)) :- not water_shy(X).` mention `X` only
//! under `not` and inside names, so a safety-based grounder would reject
//! them. The instantiation domain is the program's constants only, never
//! constructed compound terms.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::ast::{BodyElement, Head, OrderedProgram, Rule, SetDecl, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("the program has variables but no constants to instantiate them with")]
    EmptyDomain,
    #[error("grounding produced two rules named `{0}`")]
    DuplicateName(Term),
    #[error("set `{set}` lists `{member}`, which names no rule after grounding")]
    UnboundSetMember { set: Term, member: Term },
    #[error("names `{first}` and `{second}` both flatten to `{flattened}`")]
    FlattenCollision {
        first: Term,
        second: Term,
        flattened: String,
    },
    #[error("name `{0}` is not ground and cannot be flattened")]
    NonGroundName(Term),
}

/// Replaces every rule with variables by its ground instances over the
/// program's constants. Ground rules and set declarations pass through.
///
/// Instances are emitted in input rule order; within one rule, bindings are
/// enumerated lexicographically (variables sorted by symbol, constants in
/// sorted order).
pub fn ground_program(p: &OrderedProgram) -> Result<OrderedProgram, GroundError> {
    let constants: Vec<Term> = p.collect_constants().into_iter().collect();
    let mut rules = Vec::new();
    for rule in &p.rules {
        let vars: Vec<String> = rule.variables().into_iter().collect();
        if vars.is_empty() {
            rules.push(rule.clone());
            continue;
        }
        if constants.is_empty() {
            return Err(GroundError::EmptyDomain);
        }
        // The odometer runs with the first variable as the most
        // significant digit, giving lexicographic binding order.
        let mut indices = vec![0usize; vars.len()];
        loop {
            let binding: HashMap<String, Term> = vars
                .iter()
                .zip(&indices)
                .map(|(v, &i)| (v.clone(), constants[i].clone()))
                .collect();
            rules.push(rule.substitute(&binding));
            let mut digit = vars.len();
            loop {
                if digit == 0 {
                    break;
                }
                digit -= 1;
                indices[digit] += 1;
                if indices[digit] < constants.len() {
                    break;
                }
                indices[digit] = 0;
            }
            if indices.iter().all(|&i| i == 0) {
                break;
            }
        }
    }

    let out = OrderedProgram::new(rules, p.set_decls.clone());
    check_output(&out)?;
    Ok(out)
}

fn check_output(p: &OrderedProgram) -> Result<(), GroundError> {
    let mut seen = BTreeSet::new();
    for rule in &p.rules {
        if let Some(n) = &rule.name {
            if !seen.insert(n.clone()) {
                return Err(GroundError::DuplicateName(n.clone()));
            }
        }
    }
    for decl in &p.set_decls {
        for member in &decl.members {
            if !seen.contains(member) {
                return Err(GroundError::UnboundSetMember {
                    set: decl.name.clone(),
                    member: member.clone(),
                });
            }
        }
    }
    Ok(())
}

fn flatten_term(t: &Term, out: &mut String) -> Result<(), GroundError> {
    match t {
        Term::Constant(c) => {
            out.push_str(c);
            Ok(())
        }
        Term::Compound(f, args) => {
            out.push_str(f);
            for a in args {
                out.push('_');
                flatten_term(a, out)?;
            }
            Ok(())
        }
        Term::Variable(_) => Err(GroundError::NonGroundName(t.clone())),
    }
}

/// Rewrites every compound name term — rule names, preference-atom
/// arguments, set names and set members — into a constant joining functor
/// and arguments with `_`. Ordinary atoms are untouched.
///
/// Two distinct name terms flattening to the same constant abort the
/// pipeline: silent merging of rules would change the program's meaning.
pub fn flatten_names(p: &OrderedProgram) -> Result<OrderedProgram, GroundError> {
    // Every term in name position, in deterministic order.
    let mut name_terms: BTreeSet<Term> = BTreeSet::new();
    let visit_pref = |pref: &crate::ast::PrefAtom, terms: &mut BTreeSet<Term>| {
        terms.insert(pref.lesser.clone());
        terms.insert(pref.greater.clone());
    };
    for rule in &p.rules {
        if let Some(n) = &rule.name {
            name_terms.insert(n.clone());
        }
        if let Some(Head::Preference(pref)) = &rule.head {
            visit_pref(pref, &mut name_terms);
        }
        for elem in &rule.body {
            if let BodyElement::Preference(pref) = elem {
                visit_pref(pref, &mut name_terms);
            }
        }
    }
    for decl in &p.set_decls {
        name_terms.insert(decl.name.clone());
        for m in &decl.members {
            name_terms.insert(m.clone());
        }
    }

    let mut map: HashMap<Term, Term> = HashMap::new();
    let mut taken: HashMap<String, Term> = HashMap::new();
    for term in &name_terms {
        let mut flat = String::new();
        flatten_term(term, &mut flat)?;
        if let Some(prev) = taken.get(&flat) {
            if prev != term {
                return Err(GroundError::FlattenCollision {
                    first: prev.clone(),
                    second: term.clone(),
                    flattened: flat,
                });
            }
        } else {
            taken.insert(flat.clone(), term.clone());
        }
        map.insert(term.clone(), Term::Constant(flat));
    }

    let apply = |t: &Term| map.get(t).cloned().unwrap_or_else(|| t.clone());
    let apply_pref = |pref: &crate::ast::PrefAtom| crate::ast::PrefAtom {
        lesser: apply(&pref.lesser),
        greater: apply(&pref.greater),
    };

    let rules = p
        .rules
        .iter()
        .map(|rule| Rule {
            name: rule.name.as_ref().map(&apply),
            head: rule.head.as_ref().map(|h| match h {
                Head::Literal(l) => Head::Literal(l.clone()),
                Head::Preference(pref) => Head::Preference(apply_pref(pref)),
            }),
            body: rule
                .body
                .iter()
                .map(|elem| match elem {
                    BodyElement::Literal(b) => BodyElement::Literal(b.clone()),
                    BodyElement::Preference(pref) => BodyElement::Preference(apply_pref(pref)),
                })
                .collect(),
        })
        .collect();
    let set_decls = p
        .set_decls
        .iter()
        .map(|decl| SetDecl {
            name: apply(&decl.name),
            members: decl.members.iter().map(&apply).collect(),
        })
        .collect();
    Ok(OrderedProgram::new(rules, set_decls))
}
