//! A small internal answer-set solver for ground normal programs with
//! constraints.
//!
//! The solver enumerates candidate truth assignments over the atoms whose
//! value is genuinely undetermined, completes each candidate through the
//! least model of the Gelfond–Lifschitz reduct, and keeps the candidates
//! that reproduce themselves. Correctness and auditability are the goals
//! here, not performance: every step is re-checkable with [`reduct`] and
//! [`least_model`](GroundNormalProgram::least_model) by hand.
//!
//! Only atoms that occur under negation as failure can influence the
//! reduct, so only those need to be guessed; every other atom's membership
//! is forced by the least model. Two further refinements keep the guess
//! space small without losing any answer set: an atom that heads no rule
//! can never be derived (it is always false), and an atom stated as a fact
//! is derived under every reduct (it is always true).

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::ast::{AnswerSet, BodyElement, Head, Literal, Rule};
use crate::compiler::CompiledProgram;

/// Default cap on the number of candidate interpretations enumerated by
/// [`GroundNormalProgram::answer_sets`].
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("the program is not ground")]
    NonGround,
    #[error("literal `{0}` carries strong negation; compile the program first")]
    StrongNegation(Literal),
    #[error("a preference atom remains; compile the program first")]
    PreferenceAtom,
    #[error("rule named `{0}` has not been compiled; names are meaningless to the solver")]
    NamedRule(crate::ast::Term),
    #[error(
        "{undetermined} undetermined atoms give 2^{undetermined} candidate \
         interpretations, which exceeds the enumeration budget of {budget}"
    )]
    BudgetExceeded { undetermined: usize, budget: u64 },
}

#[derive(Debug, Clone)]
struct NormalRule {
    head: Option<u32>,
    pos: Vec<u32>,
    naf: Vec<u32>,
}

/// A ground program of atom-headed rules (or headless constraints) whose
/// bodies are atoms with optional negation as failure. No variables, no
/// strong negation, no preference atoms.
#[derive(Debug, Clone)]
pub struct GroundNormalProgram {
    atoms: Vec<Literal>,
    index: HashMap<Literal, u32>,
    rules: Vec<NormalRule>,
    naf_free: bool,
}

impl GroundNormalProgram {
    pub fn new(rules: &[Rule]) -> Result<Self, SolverError> {
        let mut program = GroundNormalProgram {
            atoms: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
            naf_free: true,
        };
        for rule in rules {
            if let Some(name) = &rule.name {
                return Err(SolverError::NamedRule(name.clone()));
            }
            let head = match &rule.head {
                None => None,
                Some(Head::Preference(_)) => return Err(SolverError::PreferenceAtom),
                Some(Head::Literal(l)) => Some(program.intern(l)?),
            };
            let mut pos = Vec::new();
            let mut naf = Vec::new();
            for elem in &rule.body {
                match elem {
                    BodyElement::Preference(_) => return Err(SolverError::PreferenceAtom),
                    BodyElement::Literal(b) => {
                        let id = program.intern(&b.lit)?;
                        if b.naf {
                            naf.push(id);
                            program.naf_free = false;
                        } else {
                            pos.push(id);
                        }
                    }
                }
            }
            program.rules.push(NormalRule { head, pos, naf });
        }
        Ok(program)
    }

    pub fn from_compiled(p: &CompiledProgram) -> Result<Self, SolverError> {
        Self::new(&p.rules)
    }

    fn intern(&mut self, lit: &Literal) -> Result<u32, SolverError> {
        if lit.strong_neg {
            return Err(SolverError::StrongNegation(lit.clone()));
        }
        if !lit.is_ground() {
            return Err(SolverError::NonGround);
        }
        if let Some(&id) = self.index.get(lit) {
            return Ok(id);
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(lit.clone());
        self.index.insert(lit.clone(), id);
        Ok(id)
    }

    /// The atom universe: every atom occurring in the rules.
    pub fn atoms(&self) -> impl Iterator<Item = &Literal> {
        self.atoms.iter()
    }

    pub fn is_naf_free(&self) -> bool {
        self.naf_free
    }

    /// The Gelfond–Lifschitz reduct relative to `interpretation`: rules
    /// with a failing `not a` (where `a` is in the interpretation) are
    /// dropped, and the surviving rules lose their naf literals.
    pub fn reduct(&self, interpretation: &BTreeSet<Literal>) -> GroundNormalProgram {
        let marked: Vec<bool> = self
            .atoms
            .iter()
            .map(|a| interpretation.contains(a))
            .collect();
        let rules: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| r.naf.iter().all(|&a| !marked[a as usize]))
            .map(|r| {
                Rule::new(
                    r.head
                        .map(|h| Head::Literal(self.atoms[h as usize].clone())),
                    r.pos
                        .iter()
                        .map(|&a| BodyElement::pos(self.atoms[a as usize].clone()))
                        .collect(),
                )
            })
            .collect();
        GroundNormalProgram::new(&rules).expect("a reduct of a valid program is valid")
    }

    /// The least model of a naf-free program, or `None` when some
    /// constraint's body is satisfied by the fixpoint.
    ///
    /// Panics if the program still contains negation as failure.
    pub fn least_model(&self) -> Option<BTreeSet<Literal>> {
        assert!(
            self.naf_free,
            "least_model is defined on naf-free programs; take a reduct first"
        );
        let model = self.fixpoint(|_| true)?;
        Some(
            model
                .iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| self.atoms[i].clone())
                .collect(),
        )
    }

    /// Iterates immediate consequences of the kept rules to a fixpoint,
    /// ignoring naf literals, then checks constraints. `None` means a
    /// constraint fired.
    fn fixpoint(&self, keep: impl Fn(&NormalRule) -> bool) -> Option<Vec<bool>> {
        let mut model = vec![false; self.atoms.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if let Some(h) = r.head {
                    if !model[h as usize]
                        && keep(r)
                        && r.pos.iter().all(|&a| model[a as usize])
                    {
                        model[h as usize] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for r in &self.rules {
            if r.head.is_none() && keep(r) && r.pos.iter().all(|&a| model[a as usize]) {
                return None;
            }
        }
        Some(model)
    }

    /// Enumerates all answer sets: the interpretations equal to the least
    /// model of their own reduct, with no violated constraint. The result
    /// is sorted by the sets' sorted atom lists.
    ///
    /// `budget` caps the number of candidate interpretations; the default
    /// is [`DEFAULT_BUDGET`].
    pub fn answer_sets(&self, budget: u64) -> Result<Vec<AnswerSet>, SolverError> {
        let n = self.atoms.len();
        let mut under_naf = vec![false; n];
        let mut heads = vec![false; n];
        let mut facts = vec![false; n];
        for r in &self.rules {
            for &a in &r.naf {
                under_naf[a as usize] = true;
            }
            if let Some(h) = r.head {
                heads[h as usize] = true;
                if r.pos.is_empty() && r.naf.is_empty() {
                    facts[h as usize] = true;
                }
            }
        }
        let undetermined: Vec<u32> = (0..n as u32)
            .filter(|&a| under_naf[a as usize] && heads[a as usize] && !facts[a as usize])
            .collect();
        if undetermined.len() >= 64 || (1u64 << undetermined.len()) > budget {
            return Err(SolverError::BudgetExceeded {
                undetermined: undetermined.len(),
                budget,
            });
        }

        let forced: Vec<u32> = (0..n as u32)
            .filter(|&a| under_naf[a as usize] && facts[a as usize])
            .collect();

        let mut found: Vec<BTreeSet<Literal>> = Vec::new();
        let mut guess = vec![false; n];
        for mask in 0u64..(1u64 << undetermined.len()) {
            guess.iter_mut().for_each(|g| *g = false);
            for &a in &forced {
                guess[a as usize] = true;
            }
            for (bit, &a) in undetermined.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    guess[a as usize] = true;
                }
            }
            let Some(model) = self.fixpoint(|r| r.naf.iter().all(|&a| !guess[a as usize]))
            else {
                continue;
            };
            // The guess must reproduce itself on the naf-relevant atoms.
            let stable = (0..n).all(|a| !under_naf[a] || model[a] == guess[a]);
            if stable {
                found.push(
                    model
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m)
                        .map(|(a, _)| self.atoms[a].clone())
                        .collect(),
                );
            }
        }
        found.sort();
        Ok(found.into_iter().map(AnswerSet::new).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile, CompileOptions};
    use crate::parser::{parse_program, parse_regular_program};

    fn normal(src: &str) -> GroundNormalProgram {
        GroundNormalProgram::new(&parse_regular_program(src).unwrap().rules).unwrap()
    }

    fn lits(names: &[&str]) -> BTreeSet<Literal> {
        names.iter().map(|s| Literal::prop(*s)).collect()
    }

    #[test]
    fn reduct_drops_rules_with_failing_naf() {
        let p = normal("q :- not r.");
        let empty = p.reduct(&BTreeSet::new());
        assert_eq!(empty.least_model(), Some(lits(&["q"])));
        let with_r = p.reduct(&lits(&["r"]));
        assert_eq!(with_r.least_model(), Some(BTreeSet::new()));
    }

    #[test]
    fn least_model_iterates_consequences() {
        assert_eq!(normal("p. q :- p.").least_model(), Some(lits(&["p", "q"])));
        assert_eq!(normal("").least_model(), Some(BTreeSet::new()));
        assert_eq!(normal("p. :- p.").least_model(), None);
    }

    #[test]
    fn the_unique_answer_set_of_the_compiled_penguin_program_is_stable() {
        let p = parse_program(
            "penguin(tweety). bird(tweety).
             flies(tweety) :- name(1), not neg flies(tweety), bird(tweety).
             neg flies(tweety) :- name(2), not flies(tweety), penguin(tweety).
             1 < 2.",
        )
        .unwrap();
        let cp = compile(&p, &CompileOptions::default()).unwrap();
        let solver = GroundNormalProgram::from_compiled(&cp).unwrap();
        let sets = solver.answer_sets(DEFAULT_BUDGET).unwrap();
        assert_eq!(sets.len(), 1);
        let x = sets[0].literals().clone();
        // Stability is re-checkable with the public operations.
        assert_eq!(solver.reduct(&x).least_model(), Some(x.clone()));
        assert!(x.contains(&Literal::new(
            "neg_flies",
            vec![crate::ast::Term::constant("tweety")]
        )));
        assert!(x.contains(&Literal::new("ap", vec![crate::ast::Term::constant("2")])));
        assert!(x.contains(&Literal::new("bl", vec![crate::ast::Term::constant("1")])));
    }

    #[test]
    fn the_order_erased_penguin_program_has_two_answer_sets() {
        let p = parse_program(
            "penguin(tweety). bird(tweety).
             flies(tweety) :- not neg flies(tweety), bird(tweety).
             neg flies(tweety) :- not flies(tweety), penguin(tweety).",
        )
        .unwrap();
        let cp = compile(&p, &CompileOptions::default()).unwrap();
        let sets = GroundNormalProgram::from_compiled(&cp)
            .unwrap()
            .answer_sets(DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(sets.len(), 2);
        let tweety = crate::ast::Term::constant("tweety");
        let flies = Literal::new("flies", vec![tweety.clone()]);
        let neg_flies = Literal::new("neg_flies", vec![tweety]);
        assert!(sets.iter().any(|x| x.contains(&flies) && !x.contains(&neg_flies)));
        assert!(sets.iter().any(|x| x.contains(&neg_flies) && !x.contains(&flies)));
    }

    #[test]
    fn a_naf_free_program_has_exactly_its_least_model() {
        let p = normal("p. q :- p. r :- q, p.");
        let sets = p.answer_sets(DEFAULT_BUDGET).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].literals(), &p.least_model().unwrap());
    }

    #[test]
    fn an_even_negative_loop_gives_two_answer_sets() {
        let p = normal("a :- not b. b :- not a.");
        let sets = p.answer_sets(DEFAULT_BUDGET).unwrap();
        assert_eq!(sets.len(), 2);
        // No answer set is a subset of another.
        assert!(!sets[0].literals().is_subset(sets[1].literals()));
        assert!(!sets[1].literals().is_subset(sets[0].literals()));
    }

    #[test]
    fn an_odd_negative_loop_has_no_answer_set() {
        let p = normal("a :- not a.");
        assert!(p.answer_sets(DEFAULT_BUDGET).unwrap().is_empty());
    }

    #[test]
    fn constraints_with_naf_are_honoured() {
        // The constraint :- not a forces a, which only the even loop can
        // provide.
        let p = normal("a :- not b. b :- not a. :- not a.");
        let sets = p.answer_sets(DEFAULT_BUDGET).unwrap();
        assert_eq!(sets.len(), 1);
        assert!(sets[0].contains(&Literal::prop("a")));
    }

    #[test]
    fn the_budget_is_enforced() {
        let p = normal("a :- not b. b :- not a. c :- not d. d :- not c.");
        assert_eq!(
            p.answer_sets(16).unwrap().len(),
            4,
            "4 undetermined atoms fit a budget of 16"
        );
        assert_eq!(
            p.answer_sets(8),
            Err(SolverError::BudgetExceeded {
                undetermined: 4,
                budget: 8
            })
        );
    }

    #[test]
    fn answer_sets_form_an_anti_chain() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n_atoms = rng.random_range(1..=8usize);
            let n_rules = rng.random_range(0..=8usize);
            let rules: Vec<Rule> = (0..n_rules)
                .map(|_| {
                    let head = if rng.random_bool(0.1) {
                        None
                    } else {
                        Some(Head::Literal(Literal::prop(format!(
                            "a{}",
                            rng.random_range(0..n_atoms)
                        ))))
                    };
                    let body = (0..rng.random_range(0..=3usize))
                        .map(|_| {
                            let lit = Literal::prop(format!("a{}", rng.random_range(0..n_atoms)));
                            if rng.random_bool(0.5) {
                                BodyElement::naf(lit)
                            } else {
                                BodyElement::pos(lit)
                            }
                        })
                        .collect();
                    Rule::new(head, body)
                })
                .collect();
            let sets = GroundNormalProgram::new(&rules)
                .unwrap()
                .answer_sets(DEFAULT_BUDGET)
                .unwrap();
            for (i, a) in sets.iter().enumerate() {
                for (j, b) in sets.iter().enumerate() {
                    if i != j {
                        assert!(
                            !a.literals().is_subset(b.literals()),
                            "answer sets are not an anti-chain"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn uncompiled_programs_are_rejected() {
        let named = parse_program("p :- name(1), not q.").unwrap();
        assert!(matches!(
            GroundNormalProgram::new(&named.rules),
            Err(SolverError::NamedRule(_))
        ));
        let strong = parse_program("neg p :- not q.").unwrap();
        assert!(matches!(
            GroundNormalProgram::new(&strong.rules),
            Err(SolverError::StrongNegation(_))
        ));
        let pref = parse_program("a < b.").unwrap();
        assert!(matches!(
            GroundNormalProgram::new(&pref.rules),
            Err(SolverError::PreferenceAtom)
        ));
        let open = parse_program("p(X) :- q(X), r.").unwrap();
        assert!(matches!(
            GroundNormalProgram::new(&open.rules),
            Err(SolverError::NonGround)
        ));
    }
}
