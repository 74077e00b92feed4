use std::collections::{BTreeSet, HashSet};

use crate::solver::Interpretation;
use crate::syntax::{AtomEntry, AtomId, AtomTable, ChoiceElement, GroundAtom, GroundHead, GroundProgram, GroundRule};

use super::{AbstractionMapping, Image};

/// `{m(a) : a ∈ atoms, m(a) ≠ ⊤}`.
pub fn apply_to_atoms<'a>(m: &AbstractionMapping, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> BTreeSet<GroundAtom> {
    atoms
        .into_iter()
        .filter_map(|a| match m.apply_to_atom(a) {
            Image::Top => None,
            Image::Atom(b) => Some(b),
        })
        .collect()
}

impl AbstractionMapping {
    /// Image of an interpretation over `table`, as a set of atoms (the ids
    /// of the abstract program differ from the concrete ones).
    pub fn apply_to_interpretation(&self, table: &AtomTable, i: &Interpretation) -> BTreeSet<GroundAtom> {
        apply_to_atoms(self, i.iter().filter_map(|a| table.atom(a)))
    }
}

fn dedup(ids: impl IntoIterator<Item = AtomId>) -> Vec<AtomId> {
    let mut seen = HashSet::new();
    ids.into_iter().filter(|a| seen.insert(*a)).collect()
}

/// Maps a body; `None` when a default-negated literal became `not ⊤`.
fn map_body(remap: &[Option<AtomId>], pos: &[AtomId], neg: &[AtomId]) -> Option<(Vec<AtomId>, Vec<AtomId>)> {
    let mut new_neg = Vec::with_capacity(neg.len());
    for a in neg {
        new_neg.push(remap[a.index()]?);
    }
    let new_pos = pos.iter().filter_map(|a| remap[a.index()]);
    Some((dedup(new_pos), dedup(new_neg)))
}

/// `m(P)`: every atom replaced by its image. Positive ⊤ body literals are
/// dropped, rules with `not ⊤` or a ⊤ head are dropped, and duplicate rules
/// are merged. A ⊤ choice element counts as always chosen: it is dropped and
/// both bounds shrink by one.
pub fn apply_to_program(m: &AbstractionMapping, gp: &GroundProgram) -> GroundProgram {
    let mut table = AtomTable::new();
    let remap: Vec<Option<AtomId>> = gp
        .atoms
        .ids()
        .map(|id| match gp.atoms.entry(id) {
            AtomEntry::Aux(label) => Some(table.add_aux(label.clone())),
            AtomEntry::User(a) => match m.apply_to_atom(a) {
                Image::Top => None,
                Image::Atom(b) => Some(table.intern(b)),
            },
        })
        .collect();

    let facts = dedup(gp.facts.iter().filter_map(|f| remap[f.index()]));
    let mut rules: Vec<GroundRule> = Vec::new();
    let mut seen: HashSet<(GroundHead, Vec<AtomId>, Vec<AtomId>)> = HashSet::new();
    for rule in &gp.rules {
        let head = match &rule.head {
            GroundHead::Falsum => GroundHead::Falsum,
            GroundHead::Atom(h) => match remap[h.index()] {
                Some(h) => GroundHead::Atom(h),
                None => continue,
            },
            GroundHead::Choice { lower, upper, elements } => {
                let mut kept: Vec<ChoiceElement> = Vec::new();
                let mut top = 0u32;
                for el in elements {
                    let Some((pos, neg)) = map_body(&remap, &el.pos, &el.neg) else {
                        continue;
                    };
                    match remap[el.atom.index()] {
                        None => top += 1,
                        Some(atom) => {
                            let el = ChoiceElement { atom, pos, neg };
                            if !kept.contains(&el) {
                                kept.push(el);
                            }
                        }
                    }
                }
                let lower = lower.map(|l| l.saturating_sub(top)).filter(|&l| l > 0);
                let upper = upper.map(|u| u.saturating_sub(top));
                if kept.is_empty() && lower.is_none() {
                    continue;
                }
                GroundHead::Choice { lower, upper, elements: kept }
            }
        };
        let Some((pos, neg)) = map_body(&remap, &rule.pos, &rule.neg) else {
            continue;
        };
        if seen.insert((head.clone(), pos.clone(), neg.clone())) {
            rules.push(GroundRule { head, pos, neg, origin: rule.origin });
        }
    }
    GroundProgram { atoms: table, facts, rules, guards: Vec::new() }.canonicalize()
}
