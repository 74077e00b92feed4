//! Stable-model computation over ground programs.
//!
//! Two independent routes are provided. [`solve`] compiles choice rules into
//! even loops over auxiliary atoms plus cardinality guards and runs a
//! propagating backtracking search; [`brute_force_answer_sets`] enumerates
//! every subset of the user atoms and checks it against the direct
//! definition of stability for choice rules. They must agree exactly.

mod brute;
mod search;
mod semantics;

use std::collections::BTreeSet;

use serde_json::json;

use crate::syntax::{AtomId, AtomTable, GroundAtom, GroundProgram};

pub use brute::{brute_force_answer_sets, BRUTE_FORCE_ATOM_CAP};
pub use search::solve;
pub use semantics::{compile_choices, is_stable, least_model, reduct};

/// Default search node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of search nodes before giving up with an error.
    pub node_budget: u64,
    /// Stop after this many answer sets.
    pub limit: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { node_budget: DEFAULT_NODE_BUDGET, limit: None }
    }
}

impl SolverConfig {
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }
}

/// A set of true atoms; every other atom is false.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Interpretation(BTreeSet<AtomId>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, id: AtomId) -> bool {
        self.0.contains(&id)
    }

    pub fn insert(&mut self, id: AtomId) -> bool {
        self.0.insert(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Drops auxiliary atoms.
    pub fn visible(&self, table: &AtomTable) -> Interpretation {
        self.iter().filter(|&a| !table.is_aux(a)).collect()
    }

    pub fn atoms(&self, table: &AtomTable) -> Vec<GroundAtom> {
        let mut out: Vec<GroundAtom> = self.iter().filter_map(|a| table.atom(a).cloned()).collect();
        out.sort();
        out
    }

    pub fn names(&self, table: &AtomTable) -> Vec<String> {
        self.atoms(table).iter().map(ToString::to_string).collect()
    }

    /// Looks up every atom of `atoms` in `table`; `None` if one is missing.
    pub fn from_atoms<'a>(table: &AtomTable, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Option<Self> {
        atoms.into_iter().map(|a| table.get(a)).collect()
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

/// Answer sets in canonical order (lexicographic on sorted atom names).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnswerSetCollection {
    pub sets: Vec<Interpretation>,
}

impl AnswerSetCollection {
    /// Sorts and deduplicates. Ids of a canonicalized program follow name
    /// order, so id order is name order.
    pub fn from_unsorted(sets: impl IntoIterator<Item = Interpretation>) -> Self {
        let sets: BTreeSet<Interpretation> = sets.into_iter().collect();
        AnswerSetCollection { sets: sets.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interpretation> {
        self.sets.iter()
    }

    pub fn atom_sets(&self, table: &AtomTable) -> Vec<Vec<GroundAtom>> {
        self.sets.iter().map(|s| s.atoms(table)).collect()
    }

    pub fn render(&self, gp: &GroundProgram) -> Vec<Vec<String>> {
        self.sets.iter().map(|s| s.names(&gp.atoms)).collect()
    }

    /// One answer set per line, atoms separated by single spaces.
    pub fn to_text(&self, gp: &GroundProgram) -> String {
        let mut out = String::new();
        for set in self.render(gp) {
            out.push_str(&set.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, gp: &GroundProgram) -> serde_json::Value {
        json!(self.render(gp))
    }
}
