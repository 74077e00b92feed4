//! Surface syntax of the supported ASP fragment: terms, atoms, literals,
//! rules, programs and instance families, together with the lexer, parser,
//! printer and grounder.

mod ground;
mod lexer;
mod parser;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use ground::{
    ground, ground_with_domain, AtomEntry, AtomId, AtomTable, CardinalityGuard, ChoiceElement,
    GroundAtom, GroundHead, GroundProgram, GroundRule, GrounderConfig, RuleOrigin, Value,
    DEFAULT_GROUND_CAP,
};
pub use lexer::{Lexer, Token, TokenKind};
pub use parser::{parse_ground_atom, parse_instances, parse_program, Parser};

/// Maximum nesting depth of function terms accepted by the parser.
pub const MAX_TERM_DEPTH: usize = 3;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Source range of a rule, from its first token to its terminating `.`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Constant(String),
    Int(i64),
    Variable(String),
    Compound(String, Vec<Term>),
    Arith(Box<Term>, ArithOp, Box<Term>),
}

impl Term {
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) | Term::Int(_) => true,
            Term::Variable(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
            Term::Arith(l, _, r) => l.is_ground() && r.is_ground(),
        }
    }

    pub fn has_arith(&self) -> bool {
        match self {
            Term::Arith(..) => true,
            Term::Compound(_, args) => args.iter().any(Term::has_arith),
            _ => false,
        }
    }

    /// Collects variables into `out`. `in_arith` receives variables that
    /// occur inside an arithmetic expression, `plain` the others.
    pub(crate) fn collect_vars<'a>(
        &'a self,
        inside_arith: bool,
        plain: &mut Vec<&'a str>,
        in_arith: &mut Vec<&'a str>,
    ) {
        match self {
            Term::Variable(v) => {
                if inside_arith {
                    in_arith.push(v);
                } else {
                    plain.push(v);
                }
            }
            Term::Compound(_, args) => {
                for a in args {
                    a.collect_vars(inside_arith, plain, in_arith);
                }
            }
            Term::Arith(l, _, r) => {
                l.collect_vars(true, plain, in_arith);
                r.collect_vars(true, plain, in_arith);
            }
            Term::Constant(_) | Term::Int(_) => {}
        }
    }

    pub(crate) fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            Term::Arith(l, _, r) => l.depth().max(r.depth()),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    /// Classical negation, written `-a`.
    pub strong_neg: bool,
    /// Default negation, written `not a`. Only meaningful in bodies.
    pub default_neg: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal { atom, strong_neg: false, default_neg: false }
    }

    pub fn negated(atom: Atom) -> Self {
        Literal { atom, strong_neg: false, default_neg: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceElementSyntax {
    pub atom: Atom,
    pub strong_neg: bool,
    pub condition: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleHead {
    Atom(Literal),
    Falsum,
    Choice {
        lower: Option<u32>,
        upper: Option<u32>,
        elements: Vec<ChoiceElementSyntax>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: RuleHead,
    pub body: Vec<Literal>,
    pub span: Span,
}

impl Rule {
    pub fn is_ground(&self) -> bool {
        let head_ground = match &self.head {
            RuleHead::Atom(l) => l.atom.is_ground(),
            RuleHead::Falsum => true,
            RuleHead::Choice { elements, .. } => elements
                .iter()
                .all(|e| e.atom.is_ground() && e.condition.iter().all(|l| l.atom.is_ground())),
        };
        head_ground && self.body.iter().all(|l| l.atom.is_ground())
    }
}

/// A parsed program. Ground rules with an empty body and an atom head are
/// stored as facts; every other rule keeps its source order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub facts: Vec<GroundAtom>,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.facts.is_empty()
    }
}

/// Named problem instances (sets of ground facts), in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceFamily {
    instances: Vec<(String, BTreeSet<GroundAtom>)>,
}

impl InstanceFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an instance; returns `false` if the name is already taken.
    pub fn insert(&mut self, name: impl Into<String>, facts: BTreeSet<GroundAtom>) -> bool {
        let name = name.into();
        if self.get(&name).is_some() {
            return false;
        }
        self.instances.push((name, facts));
        true
    }

    pub fn get(&self, name: &str) -> Option<&BTreeSet<GroundAtom>> {
        self.instances.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<GroundAtom>)> {
        self.instances.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.instances.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Union of all instance facts.
    pub fn all_atoms(&self) -> BTreeSet<GroundAtom> {
        self.instances.iter().flat_map(|(_, f)| f.iter().cloned()).collect()
    }

    /// Atoms present in every instance. Empty for an empty family.
    pub fn common_atoms(&self) -> BTreeSet<GroundAtom> {
        let mut iter = self.instances.iter();
        let Some((_, first)) = iter.next() else {
            return BTreeSet::new();
        };
        let mut common = first.clone();
        for (_, facts) in iter {
            common.retain(|a| facts.contains(a));
        }
        common
    }

    /// A family restricted to one instance.
    pub fn single(&self, name: &str) -> Option<InstanceFamily> {
        self.get(name).map(|facts| {
            let mut fam = InstanceFamily::new();
            fam.insert(name, facts.clone());
            fam
        })
    }
}
