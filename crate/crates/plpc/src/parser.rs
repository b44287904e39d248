//! Parser for the surface syntax of ordered logic programs.
//!
//! The grammar, statement by statement (`%` starts a line comment,
//! whitespace is insignificant outside identifiers):
//!
//! ```text
//! statement   := rule | setdecl
//! rule        := head ( ":-" bodylist )? "."
//! head        := "neg"? atom | prefatom
//! bodylist    := bodyelem ("," bodyelem)*
//! bodyelem    := bodyliteral | prefatom
//! bodyliteral := "not"? "neg"? atom
//! prefatom    := "("? term "<" term ")"?
//! setdecl     := constant ":" "[" term ("," term)* "]" "."
//! ```
//!
//! `neg` binds tighter than `not`, so `not neg p` is legal and `neg not p`
//! is an error. A positive `name(T)` atom in a rule body names the rule; it
//! is removed from the body and must occur at most once per rule.
//!
//! [`parse_program`] applies the full ordered-program validation (unique
//! rule names, unique set names, members naming rules) and rejects
//! constraints, which have no surface form. [`parse_regular_program`] reads
//! regular extended programs instead — the output of the compiler — where
//! `name(T)` body atoms are ordinary atoms and `:- body.` constraints are
//! allowed.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::ast::{
    BodyElement, BodyLiteral, Head, Literal, OrderedProgram, PrefAtom, Rule, SetDecl, Term,
};

/// A syntax or validation error, pointing into the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SourceError {
    fn new(pos: Pos, message: impl Into<String>) -> Self {
        SourceError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(String),
    Not,
    Neg,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    ColonDash,
    Colon,
    Less,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Neg => f.write_str("`neg`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::ColonDash => f.write_str("`:-`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Less => f.write_str("`<`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SourceError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = src.chars().peekable();

    macro_rules! bump {
        () => {{
            let ch = chars.next();
            if ch == Some('\n') {
                line += 1;
                column = 1;
            } else if ch.is_some() {
                column += 1;
            }
            ch
        }};
    }

    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, column };
        match ch {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' => {
                bump!();
                tokens.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                tokens.push((Tok::RParen, pos));
            }
            '[' => {
                bump!();
                tokens.push((Tok::LBracket, pos));
            }
            ']' => {
                bump!();
                tokens.push((Tok::RBracket, pos));
            }
            ',' => {
                bump!();
                tokens.push((Tok::Comma, pos));
            }
            '.' => {
                bump!();
                tokens.push((Tok::Dot, pos));
            }
            '<' => {
                bump!();
                tokens.push((Tok::Less, pos));
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    tokens.push((Tok::ColonDash, pos));
                } else {
                    tokens.push((Tok::Colon, pos));
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push((Tok::Int(s), pos));
            }
            'a'..='z' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let tok = match s.as_str() {
                    "not" => Tok::Not,
                    "neg" => Tok::Neg,
                    _ => Tok::Ident(s),
                };
                tokens.push((tok, pos));
            }
            'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push((Tok::Var(s), pos));
            }
            other => {
                return Err(SourceError::new(
                    pos,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    tokens.push((Tok::Eof, Pos { line, column }));
    Ok(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Ordered surface syntax: name absorption, program validation, no
    /// constraints.
    Ordered,
    /// Regular extended programs (compiled output): `name(T)` is an
    /// ordinary atom and `:- body.` is accepted.
    Regular,
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    at: usize,
    mode: Mode,
}

enum Statement {
    Rule(Rule),
    SetDecl(SetDecl),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].1
    }

    fn advance(&mut self) -> (Tok, Pos) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, SourceError> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(SourceError::new(
                self.pos(),
                format!("expected {tok}, found {}", self.peek()),
            ))
        }
    }

    fn parse_term(&mut self) -> Result<Term, SourceError> {
        let (tok, pos) = self.advance();
        match tok {
            Tok::Int(n) => Ok(Term::constant(n)),
            Tok::Var(v) => Ok(Term::variable(v)),
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    self.advance();
                    let mut args = vec![self.parse_term()?];
                    while *self.peek() == Tok::Comma {
                        self.advance();
                        args.push(self.parse_term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Term::compound(name, args))
                } else {
                    Ok(Term::constant(name))
                }
            }
            other => Err(SourceError::new(
                pos,
                format!("expected a term, found {other}"),
            )),
        }
    }

    /// Turns a freshly parsed term into an atom. Predicates are
    /// identifiers, so integers and variables are rejected.
    fn term_to_atom(&self, term: Term, pos: Pos) -> Result<Literal, SourceError> {
        match term {
            Term::Constant(s) => {
                if s.starts_with(|c: char| c.is_ascii_digit()) {
                    Err(SourceError::new(
                        pos,
                        format!("`{s}` cannot be an atom: predicates are identifiers"),
                    ))
                } else {
                    Ok(Literal::prop(s))
                }
            }
            Term::Compound(f, args) => Ok(Literal::new(f, args)),
            Term::Variable(v) => Err(SourceError::new(
                pos,
                format!("variable `{v}` cannot stand alone as an atom"),
            )),
        }
    }

    fn parse_atom(&mut self) -> Result<Literal, SourceError> {
        let pos = self.pos();
        let term = self.parse_term()?;
        self.term_to_atom(term, pos)
    }

    /// `"("? term "<" term ")"?` where the leading `(` has already been
    /// consumed when `parenthesized` is set.
    fn parse_pref_tail(&mut self, first: Term, parenthesized: bool) -> Result<PrefAtom, SourceError> {
        self.expect(Tok::Less)?;
        let greater = self.parse_term()?;
        if parenthesized {
            self.expect(Tok::RParen)?;
        }
        Ok(PrefAtom::new(first, greater))
    }

    fn parse_head(&mut self) -> Result<Head, SourceError> {
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let lesser = self.parse_term()?;
                Ok(Head::Preference(self.parse_pref_tail(lesser, true)?))
            }
            Tok::Neg => {
                self.advance();
                Ok(Head::Literal(self.parse_atom()?.negated()))
            }
            _ => {
                let pos = self.pos();
                let term = self.parse_term()?;
                if *self.peek() == Tok::Less {
                    Ok(Head::Preference(self.parse_pref_tail(term, false)?))
                } else {
                    Ok(Head::Literal(self.term_to_atom(term, pos)?))
                }
            }
        }
    }

    fn parse_body_element(&mut self) -> Result<BodyElement, SourceError> {
        match self.peek() {
            Tok::LParen => {
                self.advance();
                let lesser = self.parse_term()?;
                Ok(BodyElement::Preference(self.parse_pref_tail(lesser, true)?))
            }
            Tok::Not => {
                self.advance();
                let strong = if *self.peek() == Tok::Neg {
                    self.advance();
                    true
                } else {
                    false
                };
                if *self.peek() == Tok::Not {
                    return Err(SourceError::new(self.pos(), "`not` cannot be repeated"));
                }
                let mut lit = self.parse_atom()?;
                lit.strong_neg = strong;
                Ok(BodyElement::Literal(BodyLiteral { naf: true, lit }))
            }
            Tok::Neg => {
                self.advance();
                if *self.peek() == Tok::Not {
                    return Err(SourceError::new(
                        self.pos(),
                        "`neg` binds tighter than `not`; write `not neg ...`",
                    ));
                }
                Ok(BodyElement::pos(self.parse_atom()?.negated()))
            }
            _ => {
                let pos = self.pos();
                let term = self.parse_term()?;
                if *self.peek() == Tok::Less {
                    Ok(BodyElement::Preference(self.parse_pref_tail(term, false)?))
                } else {
                    Ok(BodyElement::pos(self.term_to_atom(term, pos)?))
                }
            }
        }
    }

    fn parse_body(&mut self) -> Result<Vec<BodyElement>, SourceError> {
        let mut body = vec![self.parse_body_element()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            body.push(self.parse_body_element()?);
        }
        Ok(body)
    }

    /// Pulls the rule name out of a positive `name(T)` body atom.
    fn absorb_name(&self, mut rule: Rule, positions: &[Pos]) -> Result<Rule, SourceError> {
        let mut name_at: Option<usize> = None;
        for (i, elem) in rule.body.iter().enumerate() {
            if let BodyElement::Literal(BodyLiteral { naf: false, lit }) = elem {
                if !lit.strong_neg && lit.predicate == "name" && lit.args.len() == 1 {
                    if name_at.is_some() {
                        return Err(SourceError::new(
                            positions[i],
                            "a rule may carry at most one name(...) atom",
                        ));
                    }
                    name_at = Some(i);
                }
            }
        }
        if let Some(i) = name_at {
            let BodyElement::Literal(BodyLiteral { lit, .. }) = rule.body.remove(i) else {
                unreachable!()
            };
            rule.name = Some(lit.args.into_iter().next().unwrap());
        }
        Ok(rule)
    }

    fn parse_statement(&mut self) -> Result<(Statement, Pos), SourceError> {
        let start = self.pos();
        if *self.peek() == Tok::ColonDash {
            if self.mode == Mode::Ordered {
                return Err(SourceError::new(
                    start,
                    "constraints have no surface form in ordered programs",
                ));
            }
            self.advance();
            let body = self.parse_body()?;
            self.expect(Tok::Dot)?;
            return Ok((Statement::Rule(Rule::constraint(body)), start));
        }

        // A constant followed by `:` opens a set declaration.
        if matches!(self.peek(), Tok::Ident(_) | Tok::Int(_))
            && self.tokens[self.at + 1].0 == Tok::Colon
        {
            let name = self.parse_term()?;
            self.advance(); // the colon
            self.expect(Tok::LBracket)?;
            let mut members = vec![self.parse_term()?];
            while *self.peek() == Tok::Comma {
                self.advance();
                members.push(self.parse_term()?);
            }
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Dot)?;
            return Ok((Statement::SetDecl(SetDecl { name, members }), start));
        }

        let head = self.parse_head()?;
        let mut body = Vec::new();
        let mut positions = Vec::new();
        if *self.peek() == Tok::ColonDash {
            self.advance();
            loop {
                positions.push(self.pos());
                body.push(self.parse_body_element()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Dot)?;

        let mut rule = Rule::new(Some(head), body);
        if self.mode == Mode::Ordered {
            rule = self.absorb_name(rule, &positions)?;
        }
        Ok((Statement::Rule(rule), start))
    }

    fn parse_all(&mut self) -> Result<Vec<(Statement, Pos)>, SourceError> {
        let mut stmts = Vec::new();
        while *self.peek() != Tok::Eof {
            stmts.push(self.parse_statement()?);
        }
        Ok(stmts)
    }
}

fn validate_ordered(stmts: &[(Statement, Pos)]) -> Result<(), SourceError> {
    let mut rule_names: HashMap<Term, Pos> = HashMap::new();
    let mut set_names: HashMap<Term, Pos> = HashMap::new();
    for (stmt, pos) in stmts {
        match stmt {
            Statement::Rule(rule) => {
                if let Some(name) = &rule.name {
                    if rule_names.insert(name.clone(), *pos).is_some() {
                        return Err(SourceError::new(
                            *pos,
                            format!("duplicate rule name `{name}`"),
                        ));
                    }
                }
            }
            Statement::SetDecl(decl) => {
                if set_names.insert(decl.name.clone(), *pos).is_some() {
                    return Err(SourceError::new(
                        *pos,
                        format!("duplicate set name `{}`", decl.name),
                    ));
                }
            }
        }
    }
    for (stmt, pos) in stmts {
        if let Statement::SetDecl(decl) = stmt {
            if rule_names.contains_key(&decl.name) {
                return Err(SourceError::new(
                    *pos,
                    format!("`{}` is used both as a rule name and as a set name", decl.name),
                ));
            }
            for member in &decl.members {
                if !rule_names.contains_key(member) {
                    return Err(SourceError::new(
                        *pos,
                        format!("set `{}` lists `{member}`, which names no rule", decl.name),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn parse_with_mode(src: &str, mode: Mode) -> Result<OrderedProgram, SourceError> {
    let tokens = lex(src)?;
    let mut parser = Parser { tokens, at: 0, mode };
    let stmts = parser.parse_all()?;
    if mode == Mode::Ordered {
        validate_ordered(&stmts)?;
    }
    let mut rules = Vec::new();
    let mut set_decls = Vec::new();
    for (stmt, _) in stmts {
        match stmt {
            Statement::Rule(r) => rules.push(r),
            Statement::SetDecl(d) => set_decls.push(d),
        }
    }
    Ok(OrderedProgram::new(rules, set_decls))
}

/// Parses an ordered logic program from its surface syntax.
pub fn parse_program(src: &str) -> Result<OrderedProgram, SourceError> {
    parse_with_mode(src, Mode::Ordered)
}

/// Parses a regular extended logic program, as emitted by the compiler:
/// no name absorption, and `:- body.` constraints are accepted.
pub fn parse_regular_program(src: &str) -> Result<OrderedProgram, SourceError> {
    parse_with_mode(src, Mode::Regular)
}

/// Parses a single term.
pub fn parse_term(src: &str) -> Result<Term, SourceError> {
    let tokens = lex(src)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        mode: Mode::Regular,
    };
    let term = parser.parse_term()?;
    if *parser.peek() != Tok::Eof {
        return Err(SourceError::new(
            parser.pos(),
            format!("trailing input after term: {}", parser.peek()),
        ));
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Head;

    const PENGUIN: &str = "\
penguin(tweety).
bird(tweety).
flies(tweety) :- name(1), not neg flies(tweety), bird(tweety).
neg flies(tweety) :- name(2), not flies(tweety), penguin(tweety).
1 < 2.
";

    fn c(s: &str) -> Term {
        Term::constant(s)
    }

    #[test]
    fn parses_the_penguin_listing() {
        let p = parse_program(PENGUIN).unwrap();
        assert_eq!(p.rules.len(), 5);
        assert_eq!(p.set_decls.len(), 0);
        assert_eq!(p.rules[2].name, Some(c("1")));
        assert_eq!(p.rules[3].name, Some(c("2")));
        // The name atom is stripped from the body.
        assert_eq!(p.rules[2].body.len(), 2);
        assert_eq!(
            p.rules[2].body[0],
            BodyElement::naf(Literal::new("flies", vec![c("tweety")]).negated())
        );
        // The fifth statement is a fact with a preference-atom head.
        assert!(p.rules[4].is_fact());
        assert_eq!(
            p.rules[4].head,
            Some(Head::Preference(PrefAtom::new(c("1"), c("2"))))
        );
    }

    #[test]
    fn parses_the_empty_program() {
        let p = parse_program("").unwrap();
        assert!(p.rules.is_empty());
        assert!(p.set_decls.is_empty());
    }

    #[test]
    fn parses_a_dynamic_preference_rule() {
        let p = parse_program("(r1(X) < r2(X)) :- not water_shy(X).").unwrap();
        assert_eq!(p.rules.len(), 1);
        let rule = &p.rules[0];
        assert_eq!(rule.name, None);
        let x = Term::variable("X");
        assert_eq!(
            rule.head,
            Some(Head::Preference(PrefAtom::new(
                Term::compound("r1", vec![x.clone()]),
                Term::compound("r2", vec![x.clone()]),
            )))
        );
        assert_eq!(
            rule.body,
            vec![BodyElement::naf(Literal::new("water_shy", vec![x]))]
        );
    }

    #[test]
    fn parses_a_bare_preference_head_with_body() {
        let a = parse_program("r1(X) < r2(X) :- q(X).").unwrap();
        let b = parse_program("(r1(X) < r2(X)) :- q(X).").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_a_set_declaration() {
        let p = parse_program("p :- name(p1). s :- name(s1). m4 : [p1, s1].").unwrap();
        assert_eq!(
            p.set_decls,
            vec![SetDecl {
                name: c("m4"),
                members: vec![c("p1"), c("s1")],
            }]
        );
    }

    #[test]
    fn parse_term_examples() {
        assert_eq!(
            parse_term("r(f(c))").unwrap(),
            Term::compound("r", vec![Term::compound("f", vec![c("c")])])
        );
        assert_eq!(parse_term("X").unwrap(), Term::variable("X"));
        assert_eq!(parse_term("42").unwrap(), c("42"));
    }

    #[test]
    fn preference_atoms_parse_in_bodies() {
        let p = parse_program("ok :- a < b, q.").unwrap();
        assert_eq!(
            p.rules[0].body,
            vec![
                BodyElement::pref(c("a"), c("b")),
                BodyElement::pos(Literal::prop("q")),
            ]
        );
    }

    #[test]
    fn rejects_missing_dot() {
        let err = parse_program("p :- q").unwrap_err();
        assert!(err.message.contains("`.`"), "{err}");
    }

    #[test]
    fn rejects_duplicate_rule_names() {
        let err = parse_program("p :- name(1). q :- name(1).").unwrap_err();
        assert!(err.message.contains("duplicate rule name"), "{err}");
        assert_eq!(err.line, 1);
    }

    #[test]
    fn rejects_duplicate_set_names() {
        let err =
            parse_program("p :- name(a). m : [a]. m : [a].").unwrap_err();
        assert!(err.message.contains("duplicate set name"), "{err}");
    }

    #[test]
    fn rejects_set_members_naming_no_rule() {
        let err = parse_program("p :- name(a). m : [b].").unwrap_err();
        assert!(err.message.contains("names no rule"), "{err}");
    }

    #[test]
    fn rejects_a_symbol_naming_both_a_rule_and_a_set() {
        let err = parse_program("p :- name(a). q :- name(m). m : [a].").unwrap_err();
        assert!(err.message.contains("both"), "{err}");
    }

    #[test]
    fn rejects_two_name_atoms_in_one_rule() {
        let err = parse_program("p :- name(1), q, name(2).").unwrap_err();
        assert!(err.message.contains("at most one name"), "{err}");
    }

    #[test]
    fn rejects_neg_before_not() {
        let err = parse_program("p :- neg not q.").unwrap_err();
        assert!(err.message.contains("binds tighter"), "{err}");
    }

    #[test]
    fn rejects_variables_as_atoms() {
        assert!(parse_program("p :- X.").is_err());
        assert!(parse_program("X :- p.").is_err());
    }

    #[test]
    fn rejects_integer_predicates() {
        let err = parse_program("1 :- p.").unwrap_err();
        assert!(err.message.contains("identifiers"), "{err}");
    }

    #[test]
    fn rejects_constraints_in_ordered_programs() {
        assert!(parse_program(":- p.").is_err());
        let p = parse_regular_program(":- p, not q.").unwrap();
        assert!(p.rules[0].is_constraint());
    }

    #[test]
    fn regular_mode_keeps_name_atoms_in_place() {
        let p = parse_regular_program("ok(1) :- name(1), oko(1, 1), oko(1, 2).").unwrap();
        assert_eq!(p.rules[0].name, None);
        assert_eq!(p.rules[0].body.len(), 3);
    }

    #[test]
    fn whitespace_and_comments_are_insignificant() {
        let a = parse_program("p(a) :- q(a). % trailing\n").unwrap();
        let b = parse_program("  p( a )\n :-\n\tq(a) . % x").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_program("p.\n q :- &.").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
    }
}
