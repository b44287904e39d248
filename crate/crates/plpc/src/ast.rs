//! The data model shared by every stage of the pipeline: terms, literals,
//! rules, ordered programs, and answer sets.
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely between threads.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// A first-order term: a constant, a variable, or a compound term.
///
/// Constant symbols begin with a lowercase letter or are integer spellings
/// (`tweety`, `1`); variable symbols begin with an uppercase letter or an
/// underscore (`X`, `_Y`). Compound terms have arity at least one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(String),
    Variable(String),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn constant(symbol: impl Into<String>) -> Self {
        Term::Constant(symbol.into())
    }

    pub fn variable(symbol: impl Into<String>) -> Self {
        Term::Variable(symbol.into())
    }

    pub fn compound(functor: impl Into<String>, args: Vec<Term>) -> Self {
        debug_assert!(!args.is_empty(), "compound terms have arity >= 1");
        Term::Compound(functor.into(), args)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) => true,
            Term::Variable(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Replaces every variable bound in `binding`, simultaneously and
    /// recursively through compound arguments. Unbound variables stay.
    pub fn substitute(&self, binding: &HashMap<String, Term>) -> Term {
        match self {
            Term::Constant(_) => self.clone(),
            Term::Variable(v) => binding.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Compound(f, args) => Term::Compound(
                f.clone(),
                args.iter().map(|a| a.substitute(binding)).collect(),
            ),
        }
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_variables(out);
                }
            }
        }
    }

    pub(crate) fn collect_constants(&self, out: &mut BTreeSet<Term>) {
        match self {
            Term::Constant(_) => {
                out.insert(self.clone());
            }
            Term::Variable(_) => {}
            // Functors are not constants; only the leaves count.
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_constants(out);
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(s) | Term::Variable(s) => f.write_str(s),
            Term::Compound(functor, args) => {
                write!(f, "{functor}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An atom with an optional classical-negation sign (`neg p(a)`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub strong_neg: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Literal {
            strong_neg: false,
            predicate: predicate.into(),
            args,
        }
    }

    /// A propositional atom (no arguments).
    pub fn prop(predicate: impl Into<String>) -> Self {
        Literal::new(predicate, Vec::new())
    }

    pub fn negated(mut self) -> Self {
        self.strong_neg = true;
        self
    }

    /// The literal with the opposite classical-negation sign.
    pub fn complement(&self) -> Literal {
        Literal {
            strong_neg: !self.strong_neg,
            ..self.clone()
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn substitute(&self, binding: &HashMap<String, Term>) -> Literal {
        Literal {
            strong_neg: self.strong_neg,
            predicate: self.predicate.clone(),
            args: self.args.iter().map(|a| a.substitute(binding)).collect(),
        }
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        for a in &self.args {
            a.collect_variables(out);
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Term>) {
        for a in &self.args {
            a.collect_constants(out);
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            f.write_str("neg ")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A body occurrence of a literal, with a negation-as-failure flag.
///
/// Both negations compose: `not neg p` is `naf = true` over a literal with
/// `strong_neg = true`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BodyLiteral {
    pub naf: bool,
    pub lit: Literal,
}

impl fmt::Display for BodyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.lit)
    }
}

/// A preference atom `lesser < greater`: the rule or set named by the
/// right-hand term has the higher priority.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefAtom {
    pub lesser: Term,
    pub greater: Term,
}

impl PrefAtom {
    pub fn new(lesser: Term, greater: Term) -> Self {
        PrefAtom { lesser, greater }
    }
}

impl fmt::Display for PrefAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} < {}", self.lesser, self.greater)
    }
}

/// A rule head: an ordinary literal or a preference atom. Constraints are
/// represented as rules with no head at all ([`Rule::head`] of `None`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Literal(Literal),
    Preference(PrefAtom),
}

/// One element of a rule body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyElement {
    Literal(BodyLiteral),
    Preference(PrefAtom),
}

impl BodyElement {
    pub fn pos(lit: Literal) -> Self {
        BodyElement::Literal(BodyLiteral { naf: false, lit })
    }

    pub fn naf(lit: Literal) -> Self {
        BodyElement::Literal(BodyLiteral { naf: true, lit })
    }

    pub fn pref(lesser: Term, greater: Term) -> Self {
        BodyElement::Preference(PrefAtom::new(lesser, greater))
    }
}

/// A rule of an ordered logic program.
///
/// The name, when present, comes from a `name(...)` atom in the surface
/// form; it is removed from the body on construction. A fact is a rule with
/// an empty body, a constraint is a rule with no head.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub name: Option<Term>,
    pub head: Option<Head>,
    pub body: Vec<BodyElement>,
}

impl Rule {
    pub fn new(head: Option<Head>, body: Vec<BodyElement>) -> Self {
        Rule {
            name: None,
            head,
            body,
        }
    }

    pub fn fact(lit: Literal) -> Self {
        Rule::new(Some(Head::Literal(lit)), Vec::new())
    }

    pub fn constraint(body: Vec<BodyElement>) -> Self {
        Rule::new(None, body)
    }

    pub fn with_name(mut self, name: Term) -> Self {
        self.name = Some(name);
        self
    }

    pub fn is_fact(&self) -> bool {
        self.head.is_some() && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }

    /// All variables of the rule, name term included.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(name) = &self.name {
            name.collect_variables(&mut out);
        }
        match &self.head {
            Some(Head::Literal(l)) => l.collect_variables(&mut out),
            Some(Head::Preference(p)) => {
                p.lesser.collect_variables(&mut out);
                p.greater.collect_variables(&mut out);
            }
            None => {}
        }
        for elem in &self.body {
            match elem {
                BodyElement::Literal(b) => b.lit.collect_variables(&mut out),
                BodyElement::Preference(p) => {
                    p.lesser.collect_variables(&mut out);
                    p.greater.collect_variables(&mut out);
                }
            }
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.variables().is_empty()
    }

    pub fn substitute(&self, binding: &HashMap<String, Term>) -> Rule {
        Rule {
            name: self.name.as_ref().map(|n| n.substitute(binding)),
            head: self.head.as_ref().map(|h| match h {
                Head::Literal(l) => Head::Literal(l.substitute(binding)),
                Head::Preference(p) => Head::Preference(PrefAtom::new(
                    p.lesser.substitute(binding),
                    p.greater.substitute(binding),
                )),
            }),
            body: self
                .body
                .iter()
                .map(|elem| match elem {
                    BodyElement::Literal(b) => BodyElement::Literal(BodyLiteral {
                        naf: b.naf,
                        lit: b.lit.substitute(binding),
                    }),
                    BodyElement::Preference(p) => BodyElement::Preference(PrefAtom::new(
                        p.lesser.substitute(binding),
                        p.greater.substitute(binding),
                    )),
                })
                .collect(),
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Term>) {
        if let Some(name) = &self.name {
            name.collect_constants(out);
        }
        match &self.head {
            Some(Head::Literal(l)) => l.collect_constants(out),
            Some(Head::Preference(p)) => {
                p.lesser.collect_constants(out);
                p.greater.collect_constants(out);
            }
            None => {}
        }
        for elem in &self.body {
            match elem {
                BodyElement::Literal(b) => b.lit.collect_constants(out),
                BodyElement::Preference(p) => {
                    p.lesser.collect_constants(out);
                    p.greater.collect_constants(out);
                }
            }
        }
    }
}

/// A named set of rule names, declared as `m : [a, b].`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetDecl {
    pub name: Term,
    pub members: Vec<Term>,
}

/// A structural problem with an [`OrderedProgram`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("duplicate rule name `{0}`")]
    DuplicateRuleName(Term),
    #[error("duplicate set name `{0}`")]
    DuplicateSetName(Term),
    #[error("`{0}` is used both as a rule name and as a set name")]
    NameIsAlsoSet(Term),
    #[error("set `{set}` lists `{member}`, which names no rule")]
    UnknownSetMember { set: Term, member: Term },
}

/// An ordered logic program: rules plus set declarations.
///
/// Rule names are pairwise distinct, set names are pairwise distinct and
/// disjoint from rule names, and every set member names some rule —
/// [`OrderedProgram::validate`] checks all of this.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderedProgram {
    pub rules: Vec<Rule>,
    pub set_decls: Vec<SetDecl>,
}

impl OrderedProgram {
    pub fn new(rules: Vec<Rule>, set_decls: Vec<SetDecl>) -> Self {
        OrderedProgram { rules, set_decls }
    }

    /// Rule names in rule order.
    pub fn rule_names(&self) -> Vec<&Term> {
        self.rules.iter().filter_map(|r| r.name.as_ref()).collect()
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    /// Every constant occurring anywhere in the program, compound
    /// arguments included, functors excluded.
    pub fn collect_constants(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            rule.collect_constants(&mut out);
        }
        for decl in &self.set_decls {
            decl.name.collect_constants(&mut out);
            for m in &decl.members {
                m.collect_constants(&mut out);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ProgramError> {
        let mut names = BTreeSet::new();
        for rule in &self.rules {
            if let Some(n) = &rule.name {
                if !names.insert(n.clone()) {
                    return Err(ProgramError::DuplicateRuleName(n.clone()));
                }
            }
        }
        let mut set_names = BTreeSet::new();
        for decl in &self.set_decls {
            if !set_names.insert(decl.name.clone()) {
                return Err(ProgramError::DuplicateSetName(decl.name.clone()));
            }
            if names.contains(&decl.name) {
                return Err(ProgramError::NameIsAlsoSet(decl.name.clone()));
            }
            for member in &decl.members {
                if !names.contains(member) {
                    return Err(ProgramError::UnknownSetMember {
                        set: decl.name.clone(),
                        member: member.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A consistent set of ground literals, the unit of exchange between the
/// solver and the output filter.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AnswerSet {
    literals: BTreeSet<Literal>,
}

impl AnswerSet {
    pub fn new(literals: BTreeSet<Literal>) -> Self {
        AnswerSet { literals }
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.literals.contains(lit)
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// True when no literal occurs together with its strong complement.
    pub fn is_consistent(&self) -> bool {
        self.literals
            .iter()
            .all(|l| !l.strong_neg || !self.literals.contains(&l.complement()))
    }
}

impl FromIterator<Literal> for AnswerSet {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        AnswerSet {
            literals: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for AnswerSet {
    /// Braces with the literals in lexicographic order of their rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rendered: Vec<String> = self.literals.iter().map(|l| l.to_string()).collect();
        rendered.sort();
        write!(f, "{{{}}}", rendered.join(", "))
    }
}
