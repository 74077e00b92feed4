//! Naive Herbrand instantiation.
//!
//! The grounder first computes an over-approximation of the derivable atoms
//! (every rule fires as if default negation were always satisfied), then
//! instantiates each rule by joining its positive body against that set.
//! Instantiations whose positive body mentions an underivable atom are never
//! produced. Variable-free rules are emitted verbatim, so a propositional
//! program grounds to itself.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::GroundError;

use super::{ArithOp, Atom, Literal, Program, RuleHead, Span, Term};

/// Default cap on the number of ground rules.
pub const DEFAULT_GROUND_CAP: usize = 200_000;

/// A variable-free term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Sym(String),
    Int(i64),
    Func(String, Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Sym(s) => f.write_str(s),
            Value::Int(i) => write!(f, "{i}"),
            Value::Func(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// A ground classical atom; `neg` marks strong negation (`-p`).
///
/// Ordering is by printed name so that canonical answer-set listings sort
/// the way they read.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub neg: bool,
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        GroundAtom { neg: false, predicate: predicate.into(), args }
    }

    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// The atom with the strong-negation flag flipped.
    pub fn complement(&self) -> GroundAtom {
        GroundAtom { neg: !self.neg, ..self.clone() }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.neg {
            f.write_str("-")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_list(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Ord for GroundAtom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_string()
            .cmp(&other.to_string())
            .then_with(|| format!("{self:?}").cmp(&format!("{other:?}")))
    }
}

impl PartialOrd for GroundAtom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) type Subst = HashMap<String, Value>;

pub(crate) fn eval_term(term: &Term, subst: &Subst) -> Result<Value, GroundError> {
    match term {
        Term::Constant(c) => Ok(Value::Sym(c.clone())),
        Term::Int(i) => Ok(Value::Int(*i)),
        Term::Variable(v) => subst
            .get(v)
            .cloned()
            .ok_or_else(|| GroundError::Unbound { line: 0, var: v.clone() }),
        Term::Compound(f, args) => Ok(Value::Func(
            f.clone(),
            args.iter().map(|a| eval_term(a, subst)).collect::<Result<_, _>>()?,
        )),
        Term::Arith(l, op, r) => {
            let lv = eval_term(l, subst)?;
            let rv = eval_term(r, subst)?;
            match (&lv, &rv) {
                (Value::Int(a), Value::Int(b)) => {
                    let res = match op {
                        ArithOp::Add => a.checked_add(*b),
                        ArithOp::Sub => a.checked_sub(*b),
                    };
                    res.map(Value::Int).ok_or_else(|| GroundError::Overflow(format!("{term}")))
                }
                (Value::Int(_), bad) | (bad, _) => Err(GroundError::NonIntegerArithmetic(bad.to_string())),
            }
        }
    }
}

pub(crate) fn eval_atom(atom: &Atom, neg: bool, subst: &Subst) -> Result<GroundAtom, GroundError> {
    Ok(GroundAtom {
        neg,
        predicate: atom.predicate.clone(),
        args: atom.args.iter().map(|t| eval_term(t, subst)).collect::<Result<_, _>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomEntry {
    User(GroundAtom),
    /// Solver-internal atom, hidden from every user-facing output.
    Aux(String),
}

/// Bijection between ground atoms and dense ids.
#[derive(Debug, Clone, Default)]
pub struct AtomTable {
    entries: Vec<AtomEntry>,
    index: HashMap<GroundAtom, AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = AtomId(self.entries.len() as u32);
        self.entries.push(AtomEntry::User(atom.clone()));
        self.index.insert(atom, id);
        id
    }

    pub fn add_aux(&mut self, label: String) -> AtomId {
        let id = AtomId(self.entries.len() as u32);
        self.entries.push(AtomEntry::Aux(label));
        id
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    pub fn entry(&self, id: AtomId) -> &AtomEntry {
        &self.entries[id.index()]
    }

    /// The user atom behind `id`, or `None` for auxiliary atoms.
    pub fn atom(&self, id: AtomId) -> Option<&GroundAtom> {
        match self.entries.get(id.index()) {
            Some(AtomEntry::User(a)) => Some(a),
            _ => None,
        }
    }

    pub fn is_aux(&self, id: AtomId) -> bool {
        matches!(self.entries[id.index()], AtomEntry::Aux(_))
    }

    pub fn name(&self, id: AtomId) -> String {
        match &self.entries[id.index()] {
            AtomEntry::User(a) => a.to_string(),
            AtomEntry::Aux(label) => format!("_{label}"),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> {
        (0..self.entries.len() as u32).map(AtomId)
    }

    pub fn user_atoms(&self) -> impl Iterator<Item = (AtomId, &GroundAtom)> {
        self.entries.iter().enumerate().filter_map(|(i, e)| match e {
            AtomEntry::User(a) => Some((AtomId(i as u32), a)),
            AtomEntry::Aux(_) => None,
        })
    }

    pub fn user_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, AtomEntry::User(_))).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceElement {
    pub atom: AtomId,
    /// Positive part of the element condition.
    pub pos: Vec<AtomId>,
    /// Default-negated part of the element condition.
    pub neg: Vec<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundHead {
    Atom(AtomId),
    Falsum,
    Choice {
        lower: Option<u32>,
        upper: Option<u32>,
        elements: Vec<ChoiceElement>,
    },
}

/// Where a ground rule came from. `rule` indexes `Program::rules`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleOrigin {
    Source { rule: usize, span: Span },
    /// `:- a, -a.` added for a strongly negated atom.
    Coherence,
    /// `a :- B, not a'.` produced by choice compilation.
    ChoiceSupport { rule: usize, span: Span },
    /// `a' :- B, not a.` produced by choice compilation.
    ChoiceComplement { rule: usize, span: Span },
}

impl RuleOrigin {
    pub fn line(&self) -> Option<usize> {
        match self {
            RuleOrigin::Source { span, .. }
            | RuleOrigin::ChoiceSupport { span, .. }
            | RuleOrigin::ChoiceComplement { span, .. } => Some(span.start.line),
            RuleOrigin::Coherence => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRule {
    pub head: GroundHead,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub origin: RuleOrigin,
}

impl GroundRule {
    pub fn is_constraint(&self) -> bool {
        matches!(self.head, GroundHead::Falsum)
    }
}

/// Cardinality bounds of a compiled choice rule, checked on total
/// interpretations: when the body holds, the number of true elements (with
/// true condition) must lie within `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityGuard {
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub elements: Vec<ChoiceElement>,
    pub lower: u32,
    pub upper: Option<u32>,
}

#[derive(Debug, Clone, Default)]
pub struct GroundProgram {
    pub atoms: AtomTable,
    pub facts: Vec<AtomId>,
    pub rules: Vec<GroundRule>,
    /// Non-empty only after choice compilation.
    pub guards: Vec<CardinalityGuard>,
}

impl GroundProgram {
    pub fn has_choices(&self) -> bool {
        self.rules.iter().any(|r| matches!(r.head, GroundHead::Choice { .. }))
    }

    /// Renumbers user atoms in name order (auxiliary atoms last), so that
    /// comparing sorted id sequences agrees with comparing sorted names.
    pub fn canonicalize(self) -> GroundProgram {
        let GroundProgram { atoms, facts, rules, guards } = self;
        let mut order: Vec<AtomId> = atoms.ids().collect();
        order.sort_by(|&a, &b| match (atoms.entry(a), atoms.entry(b)) {
            (AtomEntry::User(x), AtomEntry::User(y)) => x.cmp(y),
            (AtomEntry::User(_), AtomEntry::Aux(_)) => std::cmp::Ordering::Less,
            (AtomEntry::Aux(_), AtomEntry::User(_)) => std::cmp::Ordering::Greater,
            (AtomEntry::Aux(_), AtomEntry::Aux(_)) => a.cmp(&b),
        });
        let mut remap = vec![AtomId(0); atoms.len()];
        let mut table = AtomTable::new();
        for old in order {
            let new = match atoms.entry(old) {
                AtomEntry::User(a) => table.intern(a.clone()),
                AtomEntry::Aux(label) => table.add_aux(label.clone()),
            };
            remap[old.index()] = new;
        }
        let map = |ids: &[AtomId]| ids.iter().map(|i| remap[i.index()]).collect::<Vec<_>>();
        let map_el = |els: &[ChoiceElement]| {
            els.iter()
                .map(|e| ChoiceElement { atom: remap[e.atom.index()], pos: map(&e.pos), neg: map(&e.neg) })
                .collect::<Vec<_>>()
        };
        let rules = rules
            .into_iter()
            .map(|r| GroundRule {
                head: match r.head {
                    GroundHead::Atom(a) => GroundHead::Atom(remap[a.index()]),
                    GroundHead::Falsum => GroundHead::Falsum,
                    GroundHead::Choice { lower, upper, elements } => {
                        GroundHead::Choice { lower, upper, elements: map_el(&elements) }
                    }
                },
                pos: map(&r.pos),
                neg: map(&r.neg),
                origin: r.origin,
            })
            .collect();
        let guards = guards
            .into_iter()
            .map(|g| CardinalityGuard {
                pos: map(&g.pos),
                neg: map(&g.neg),
                elements: map_el(&g.elements),
                lower: g.lower,
                upper: g.upper,
            })
            .collect();
        let mut facts = map(&facts);
        facts.sort();
        facts.dedup();
        GroundProgram { atoms: table, facts, rules, guards }
    }

    fn fmt_body(&self, f: &mut fmt::Formatter<'_>, pos: &[AtomId], neg: &[AtomId]) -> fmt::Result {
        let lits = pos
            .iter()
            .map(|&a| self.atoms.name(a))
            .chain(neg.iter().map(|&a| format!("not {}", self.atoms.name(a))));
        for (i, l) in lits.enumerate() {
            f.write_str(if i == 0 { "" } else { ", " })?;
            f.write_str(&l)?;
        }
        Ok(())
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &fact in &self.facts {
            writeln!(f, "{}.", self.atoms.name(fact))?;
        }
        for rule in &self.rules {
            match &rule.head {
                GroundHead::Atom(a) => f.write_str(&self.atoms.name(*a))?,
                GroundHead::Falsum => {}
                GroundHead::Choice { lower, upper, elements } => {
                    if let Some(l) = lower {
                        write!(f, "{l} ")?;
                    }
                    f.write_str("{ ")?;
                    for (i, el) in elements.iter().enumerate() {
                        if i > 0 {
                            f.write_str("; ")?;
                        }
                        f.write_str(&self.atoms.name(el.atom))?;
                        if !el.pos.is_empty() || !el.neg.is_empty() {
                            f.write_str(" : ")?;
                            self.fmt_body(f, &el.pos, &el.neg)?;
                        }
                    }
                    f.write_str(" }")?;
                    if let Some(u) = upper {
                        write!(f, " {u}")?;
                    }
                }
            }
            if rule.pos.is_empty() && rule.neg.is_empty() {
                if rule.is_constraint() {
                    f.write_str(":-")?;
                }
            } else {
                f.write_str(if rule.is_constraint() { ":- " } else { " :- " })?;
                self.fmt_body(f, &rule.pos, &rule.neg)?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrounderConfig {
    /// Maximum number of ground rules (and of possible atoms).
    pub rule_cap: usize,
}

impl Default for GrounderConfig {
    fn default() -> Self {
        GrounderConfig { rule_cap: DEFAULT_GROUND_CAP }
    }
}

type PredKey = (bool, String, usize);

/// Atoms that may become true, indexed by predicate signature.
#[derive(Default)]
struct Possible {
    set: HashSet<GroundAtom>,
    by_key: HashMap<PredKey, Vec<GroundAtom>>,
}

impl Possible {
    fn insert(&mut self, atom: GroundAtom) -> bool {
        if self.set.contains(&atom) {
            return false;
        }
        self.by_key
            .entry((atom.neg, atom.predicate.clone(), atom.arity()))
            .or_default()
            .push(atom.clone());
        self.set.insert(atom);
        true
    }

    fn candidates(&self, lit: &Literal) -> &[GroundAtom] {
        self.by_key
            .get(&(lit.strong_neg, lit.atom.predicate.clone(), lit.atom.arity()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn arith_vars(atom: &Atom) -> Vec<&str> {
    let mut plain = Vec::new();
    let mut arith = Vec::new();
    for t in &atom.args {
        t.collect_vars(false, &mut plain, &mut arith);
    }
    arith
}

/// Matches `term` against `value`, binding variables. Arithmetic whose
/// variables are still unbound is deferred to `pending`.
fn match_term(
    term: &Term,
    value: &Value,
    subst: &mut Subst,
    pending: &mut Vec<(Term, Value)>,
) -> Result<bool, GroundError> {
    match (term, value) {
        (Term::Constant(c), Value::Sym(s)) => Ok(c == s),
        (Term::Int(i), Value::Int(j)) => Ok(i == j),
        (Term::Variable(v), _) => match subst.get(v) {
            Some(bound) => Ok(bound == value),
            None => {
                subst.insert(v.clone(), value.clone());
                Ok(true)
            }
        },
        (Term::Compound(f, args), Value::Func(g, vals)) => {
            if f != g || args.len() != vals.len() {
                return Ok(false);
            }
            for (a, v) in args.iter().zip(vals) {
                if !match_term(a, v, subst, pending)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Term::Arith(..), _) => {
            let mut plain = Vec::new();
            let mut arith = Vec::new();
            term.collect_vars(true, &mut plain, &mut arith);
            if arith.iter().all(|v| subst.contains_key(*v)) {
                Ok(eval_term(term, subst)? == *value)
            } else {
                pending.push((term.clone(), value.clone()));
                Ok(true)
            }
        }
        _ => Ok(false),
    }
}

struct Joiner<'a> {
    possible: &'a Possible,
    cap: usize,
    produced: usize,
}

impl Joiner<'_> {
    /// All substitutions extending `base` under which every literal in
    /// `lits` is in the possible set.
    fn join(&mut self, lits: &[&Literal], base: Subst) -> Result<Vec<Subst>, GroundError> {
        let mut out = Vec::new();
        let remaining: Vec<usize> = (0..lits.len()).collect();
        self.step(lits, remaining, base, Vec::new(), &mut out)?;
        Ok(out)
    }

    fn step(
        &mut self,
        lits: &[&Literal],
        remaining: Vec<usize>,
        subst: Subst,
        pending: Vec<(Term, Value)>,
        out: &mut Vec<Subst>,
    ) -> Result<(), GroundError> {
        if remaining.is_empty() {
            for (term, value) in &pending {
                if eval_term(term, &subst)? != *value {
                    return Ok(());
                }
            }
            self.produced += 1;
            if self.produced > self.cap {
                return Err(GroundError::CapExceeded { cap: self.cap });
            }
            out.push(subst);
            return Ok(());
        }
        // Prefer a literal whose arithmetic is already evaluable.
        let pick = remaining
            .iter()
            .position(|&i| arith_vars(&lits[i].atom).iter().all(|v| subst.contains_key(*v)))
            .unwrap_or(0);
        let lit = lits[remaining[pick]];
        let mut rest = remaining;
        rest.remove(pick);
        for cand in self.possible.candidates(lit) {
            let mut s = subst.clone();
            let mut p = pending.clone();
            let mut ok = true;
            for (t, v) in lit.atom.args.iter().zip(&cand.args) {
                if !match_term(t, v, &mut s, &mut p)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.step(lits, rest.clone(), s, p, out)?;
            }
        }
        Ok(())
    }
}

fn positives(lits: &[Literal]) -> Vec<&Literal> {
    lits.iter().filter(|l| !l.default_neg).collect()
}

/// Grounds `program` together with `extra_facts` under the default cap.
pub fn ground(program: &Program, extra_facts: &BTreeSet<GroundAtom>) -> Result<GroundProgram, GroundError> {
    ground_with_domain(program, extra_facts, &BTreeSet::new(), GrounderConfig::default())
}

/// Like [`ground`], additionally treating `domain` atoms as possibly true
/// when instantiating rules (without asserting them). Grounding every
/// instance of a family with the family's union as domain yields ground
/// programs that differ only in their facts.
pub fn ground_with_domain(
    program: &Program,
    extra_facts: &BTreeSet<GroundAtom>,
    domain: &BTreeSet<GroundAtom>,
    config: GrounderConfig,
) -> Result<GroundProgram, GroundError> {
    let cap = config.rule_cap;
    let mut possible = Possible::default();
    let mut table = AtomTable::new();
    let mut facts = Vec::new();
    for atom in program.facts.iter().chain(extra_facts.iter()) {
        facts.push(table.intern(atom.clone()));
        possible.insert(atom.clone());
    }
    for atom in domain {
        possible.insert(atom.clone());
    }

    // Over-approximate the derivable atoms.
    loop {
        let mut new_atoms = Vec::new();
        {
            let mut joiner = Joiner { possible: &possible, cap, produced: 0 };
            for rule in &program.rules {
                let substs = joiner.join(&positives(&rule.body), Subst::new())?;
                for s in substs {
                    match &rule.head {
                        RuleHead::Atom(lit) => new_atoms.push(eval_atom(&lit.atom, lit.strong_neg, &s)?),
                        RuleHead::Falsum => {}
                        RuleHead::Choice { elements, .. } => {
                            for el in elements {
                                for s2 in joiner.join(&positives(&el.condition), s.clone())? {
                                    new_atoms.push(eval_atom(&el.atom, el.strong_neg, &s2)?);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for atom in new_atoms {
            changed |= possible.insert(atom);
        }
        if possible.set.len() > cap {
            return Err(GroundError::CapExceeded { cap });
        }
        if !changed {
            break;
        }
    }

    let mut rules = Vec::new();
    let mut joiner = Joiner { possible: &possible, cap, produced: 0 };
    for (index, rule) in program.rules.iter().enumerate() {
        let line = rule.span.start.line;
        let with_line = |e: GroundError| match e {
            GroundError::Unbound { var, .. } => GroundError::Unbound { line, var },
            other => other,
        };
        let ground_rule = rule.is_ground();
        let substs = if ground_rule {
            vec![Subst::new()]
        } else {
            joiner.join(&positives(&rule.body), Subst::new()).map_err(with_line)?
        };
        for s in substs {
            let lits = |lits: &[Literal], s: &Subst, table: &mut AtomTable| {
                let mut pos = Vec::new();
                let mut neg = Vec::new();
                for l in lits {
                    let id = table.intern(eval_atom(&l.atom, l.strong_neg, s)?);
                    if l.default_neg {
                        neg.push(id)
                    } else {
                        pos.push(id)
                    }
                }
                Ok::<_, GroundError>((pos, neg))
            };
            let head = match &rule.head {
                RuleHead::Atom(lit) => {
                    GroundHead::Atom(table.intern(eval_atom(&lit.atom, lit.strong_neg, &s).map_err(with_line)?))
                }
                RuleHead::Falsum => GroundHead::Falsum,
                RuleHead::Choice { lower, upper, elements } => {
                    let mut out = Vec::new();
                    for el in elements {
                        let cond_substs = if ground_rule {
                            vec![s.clone()]
                        } else {
                            joiner.join(&positives(&el.condition), s.clone()).map_err(with_line)?
                        };
                        for s2 in cond_substs {
                            let atom = table.intern(eval_atom(&el.atom, el.strong_neg, &s2).map_err(with_line)?);
                            let (pos, neg) = lits(&el.condition, &s2, &mut table).map_err(with_line)?;
                            let element = ChoiceElement { atom, pos, neg };
                            if !out.contains(&element) {
                                out.push(element);
                            }
                        }
                    }
                    GroundHead::Choice { lower: *lower, upper: *upper, elements: out }
                }
            };
            let (pos, neg) = lits(&rule.body, &s, &mut table).map_err(with_line)?;
            rules.push(GroundRule { head, pos, neg, origin: RuleOrigin::Source { rule: index, span: rule.span } });
            if rules.len() > cap {
                return Err(GroundError::CapExceeded { cap });
            }
        }
    }

    // Coherence of strong negation, only where both sides can be derived.
    let mut derivable: HashSet<AtomId> = facts.iter().copied().collect();
    for r in &rules {
        match &r.head {
            GroundHead::Atom(h) => {
                derivable.insert(*h);
            }
            GroundHead::Choice { elements, .. } => derivable.extend(elements.iter().map(|e| e.atom)),
            GroundHead::Falsum => {}
        }
    }
    let negated: Vec<(AtomId, GroundAtom)> = table
        .user_atoms()
        .filter(|(id, a)| a.neg && derivable.contains(id))
        .map(|(id, a)| (id, a.clone()))
        .collect();
    for (neg_id, atom) in negated {
        if let Some(pos_id) = table.get(&atom.complement()).filter(|id| derivable.contains(id)) {
            rules.push(GroundRule {
                head: GroundHead::Falsum,
                pos: vec![pos_id, neg_id],
                neg: Vec::new(),
                origin: RuleOrigin::Coherence,
            });
        }
    }

    Ok(GroundProgram { atoms: table, facts, rules, guards: Vec::new() }.canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_instances, parse_program};

    fn facts(names: &[&str]) -> BTreeSet<GroundAtom> {
        names.iter().map(|n| crate::syntax::parse_ground_atom(n).unwrap()).collect()
    }

    const FLOWER: &str = "needsWater :- habitatWater.\nneedsWater :- habitatMud.\nscent :- spiky, needsWater, headLargerLeaf.\n";

    #[test]
    fn propositional_program_grounds_to_itself() {
        let p = parse_program(FLOWER).unwrap();
        let gp = ground(&p, &facts(&["spiky", "habitatWater", "headLargerLeaf"])).unwrap();
        assert_eq!(gp.rules.len(), 3);
        assert_eq!(gp.facts.len(), 3);
        // habitatMud is underivable but the rule is kept
        assert!(gp.atoms.get(&GroundAtom::prop("habitatMud")).is_some());
    }

    #[test]
    fn frame_axiom_instantiates_next_step() {
        let p = parse_program(
            "holds(F,T+1) :- holds(F,T), not -holds(F,T+1), step(T).\nstep(1).\nholds(on(a,b),1).\nholds(on(b,table),1).",
        )
        .unwrap();
        let gp = ground(&p, &BTreeSet::new()).unwrap();
        let text = gp.to_string();
        assert!(text.contains("holds(on(a,b),2) :- holds(on(a,b),1), step(1), not -holds(on(a,b),2)."), "{text}");
        assert!(text.contains("holds(on(b,table),2) :- holds(on(b,table),1), step(1), not -holds(on(b,table),2)."));
        assert_eq!(gp.rules.len(), 2);
    }

    #[test]
    fn arithmetic_in_a_guard_literal() {
        let p = parse_program("p(X) :- q(X), r(X+1).\nq(1). q(2). r(3).").unwrap();
        let gp = ground(&p, &BTreeSet::new()).unwrap();
        assert_eq!(gp.rules.len(), 1);
        assert!(gp.to_string().contains("p(2) :- q(2), r(3)."));
    }

    #[test]
    fn non_integer_arithmetic_is_an_error() {
        let p = parse_program("p(X+1) :- q(X).\nq(a).").unwrap();
        assert!(matches!(ground(&p, &BTreeSet::new()), Err(GroundError::NonIntegerArithmetic(_))));
    }

    #[test]
    fn runaway_recursion_hits_the_cap() {
        let p = parse_program("p(X+1) :- p(X).\np(0).").unwrap();
        let err = ground_with_domain(&p, &BTreeSet::new(), &BTreeSet::new(), GrounderConfig { rule_cap: 500 })
            .unwrap_err();
        assert_eq!(err, GroundError::CapExceeded { cap: 500 });
    }

    #[test]
    fn choice_elements_expand_per_substitution() {
        let p = parse_program(
            "1 { occurs(A,T) : action(A) } 1 :- step(T).\naction(move(a,b)). action(move(b,a)). step(1). step(2).",
        )
        .unwrap();
        let gp = ground(&p, &BTreeSet::new()).unwrap();
        assert_eq!(gp.rules.len(), 2);
        for r in &gp.rules {
            match &r.head {
                GroundHead::Choice { elements, .. } => assert_eq!(elements.len(), 2),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn strong_negation_adds_coherence_constraint() {
        let p = parse_program("-a :- b.\na :- c.\nb. c.").unwrap();
        let gp = ground(&p, &BTreeSet::new()).unwrap();
        let coherence: Vec<_> = gp.rules.iter().filter(|r| r.origin == RuleOrigin::Coherence).collect();
        assert_eq!(coherence.len(), 1);
        assert!(gp.to_string().contains(":- a, -a."));
    }

    #[test]
    fn underivable_instantiations_are_pruned() {
        let p = parse_program("p(X) :- q(X), r(X).\nq(1). q(2). r(2).").unwrap();
        let gp = ground(&p, &BTreeSet::new()).unwrap();
        assert_eq!(gp.rules.len(), 1);
        // with a domain hint the other instantiation appears too
        let hint = facts(&["r(1)"]);
        let gp = ground_with_domain(&p, &BTreeSet::new(), &hint, GrounderConfig::default()).unwrap();
        assert_eq!(gp.rules.len(), 2);
        assert!(gp.facts.iter().all(|&f| gp.atoms.atom(f).unwrap().to_string() != "r(1)"));
    }

    #[test]
    fn atom_ids_follow_name_order() {
        let p = parse_program("zeta :- alpha.\nalpha.").unwrap();
        let gp = ground(&p, &facts(&["mid"])).unwrap();
        let names: Vec<String> = gp.atoms.ids().map(|i| gp.atoms.name(i)).collect();
        assert_eq!(names, ["alpha", "mid", "zeta"]);
    }

    #[test]
    fn instances_ground_with_program() {
        let fam = parse_instances("#instance f1. spiky. habitatWater. headLargerLeaf.").unwrap();
        let p = parse_program(FLOWER).unwrap();
        let gp = ground(&p, fam.get("f1").unwrap()).unwrap();
        assert_eq!(gp.atoms.user_count(), 6);
    }
}
