//! Justification trees in the style of xclingo: why an atom belongs to an
//! answer set, traced through the positive bodies of supporting rules.

mod compare;
mod tree;

use std::collections::BTreeSet;

use crate::abstraction::{apply_to_program, AbstractionMapping, Image, Limits, Verifier};
use crate::error::{ExplainError, Result};
use crate::solver::{solve, AnswerSetCollection, Interpretation};
use crate::syntax::{ground_with_domain, AtomId, GroundAtom, GroundHead, GroundProgram, InstanceFamily, Program};

pub use compare::{compare, stats_csv, stats_json, StatsRow};
pub use tree::{ExplanationTree, Support, TreeStats};

const UNREACHED: usize = usize::MAX;

fn body_holds(pos: &[AtomId], neg: &[AtomId], i: &Interpretation) -> bool {
    pos.iter().all(|&a| i.contains(a)) && neg.iter().all(|&a| !i.contains(a))
}

/// Derivation level of every atom of `i` (facts are 0), and for each atom
/// the support chosen: lowest level, facts first, then rule order.
fn supports(gp: &GroundProgram, i: &Interpretation) -> (Vec<usize>, Vec<Option<Support>>) {
    let n = gp.atoms.len();
    let mut level = vec![UNREACHED; n];
    for &f in &gp.facts {
        level[f.index()] = 0;
    }
    // (head, positive atoms used for the level, support)
    let mut firing: Vec<(usize, Vec<AtomId>, Support)> = Vec::new();
    for (idx, rule) in gp.rules.iter().enumerate() {
        if !body_holds(&rule.pos, &rule.neg, i) {
            continue;
        }
        let line = rule.origin.line();
        match &rule.head {
            GroundHead::Atom(h) if i.contains(*h) => {
                firing.push((h.index(), rule.pos.clone(), Support::Rule { index: idx, line }));
            }
            GroundHead::Choice { elements, .. } => {
                for el in elements {
                    if i.contains(el.atom) && body_holds(&el.pos, &el.neg, i) {
                        let mut pos = rule.pos.clone();
                        pos.extend(&el.pos);
                        firing.push((el.atom.index(), pos, Support::Choice { index: idx, line }));
                    }
                }
            }
            _ => {}
        }
    }
    let candidate = |pos: &[AtomId], level: &[usize]| {
        pos.iter().map(|a| level[a.index()]).try_fold(0usize, |acc, l| (l != UNREACHED).then(|| acc.max(l))).map(|m| m + 1)
    };
    let mut changed = true;
    while changed {
        changed = false;
        for (head, pos, _) in &firing {
            if let Some(c) = candidate(pos, &level) {
                if c < level[*head] {
                    level[*head] = c;
                    changed = true;
                }
            }
        }
    }
    let mut chosen: Vec<Option<Support>> = vec![None; n];
    for &f in &gp.facts {
        chosen[f.index()] = Some(Support::Fact);
    }
    for (head, pos, support) in &firing {
        if chosen[*head].is_none() && candidate(pos, &level) == Some(level[*head]) {
            chosen[*head] = Some(support.clone());
        }
    }
    (level, chosen)
}

/// Justification tree for `query` in `answer_set`, which should be a stable
/// model of `gp`.
///
/// Each derived atom is justified by a rule whose head it is and whose body
/// holds in the answer set; its children are the rule's positive body atoms,
/// listed by derivation level and then body position. Default-negated
/// literals produce no children. Facts and atoms obtained from a choice rule
/// are leaves.
pub fn explain(gp: &GroundProgram, answer_set: &Interpretation, query: &GroundAtom) -> Result<ExplanationTree, ExplainError> {
    let root = gp.atoms.get(query).ok_or_else(|| ExplainError::UnknownAtom(query.to_string()))?;
    if !answer_set.contains(root) {
        return Err(ExplainError::NotInAnswerSet(query.to_string()));
    }
    let (level, chosen) = supports(gp, answer_set);

    fn build(
        gp: &GroundProgram,
        level: &[usize],
        chosen: &[Option<Support>],
        id: AtomId,
    ) -> Result<ExplanationTree, ExplainError> {
        let atom = gp.atoms.atom(id).cloned().unwrap_or_else(|| GroundAtom::prop(gp.atoms.name(id)));
        let support = chosen[id.index()].clone().ok_or_else(|| ExplainError::Unsupported(atom.to_string()))?;
        let mut children = Vec::new();
        if let Support::Rule { index, .. } = support {
            let mut body: Vec<(usize, usize, AtomId)> = Vec::new();
            for (pos, &a) in gp.rules[index].pos.iter().enumerate() {
                if !body.iter().any(|&(_, _, b)| b == a) {
                    body.push((level[a.index()], pos, a));
                }
            }
            body.sort();
            for (_, _, a) in body {
                children.push(build(gp, level, chosen, a)?);
            }
        }
        Ok(ExplanationTree { atom, support, children })
    }

    build(gp, &level, &chosen, root)
}

/// Picks answer set `index`, or the only one when `index` is `None`.
pub fn select_model(sets: &AnswerSetCollection, index: Option<usize>) -> Result<&Interpretation, ExplainError> {
    if sets.is_empty() {
        return Err(ExplainError::NoAnswerSet);
    }
    match index {
        None if sets.len() == 1 => Ok(&sets.sets[0]),
        None => Err(ExplainError::AmbiguousModel { count: sets.len() }),
        Some(k) => sets.sets.get(k).ok_or(ExplainError::ModelIndex { index: k, count: sets.len() }),
    }
}

/// The abstracted side of an explanation pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractSide {
    Tree(ExplanationTree),
    /// The query itself is mapped to ⊤.
    Removed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationPair {
    pub default: ExplanationTree,
    pub abstracted: AbstractSide,
}

/// Default tree from `P ∪ F` and abstracted tree for `m(query)` from
/// `m(P) ∪ m(F)`, using the abstract answer set that is the image of the
/// chosen concrete one. Refuses mappings that do not verify on `F`. Source
/// atoms of `m` that never occur with `F` are allowed.
pub fn explain_abstract(
    program: &Program,
    facts: &BTreeSet<GroundAtom>,
    m: &AbstractionMapping,
    query: &GroundAtom,
    model: Option<usize>,
    limits: Limits,
) -> Result<ExplanationPair> {
    let mut chi = InstanceFamily::new();
    chi.insert("instance", facts.clone());
    let mut verifier = Verifier::new(program, &chi, limits)?;
    verifier.widen_universe(m.source_atoms().cloned());
    if !verifier.accepts(m)? {
        return Err(ExplainError::Unverified.into());
    }
    let gp = ground_with_domain(program, facts, &BTreeSet::new(), limits.grounder())?;
    let sets = solve(&gp, &limits.solver())?;
    let chosen = select_model(&sets, model)?;
    let default = explain(&gp, chosen, query)?;
    let abstracted = match m.apply_to_atom(query) {
        Image::Top => AbstractSide::Removed,
        Image::Atom(q) => {
            let image = m.apply_to_interpretation(&gp.atoms, chosen);
            let abs = apply_to_program(m, &gp);
            let abs_sets = solve(&abs, &limits.solver())?;
            let target = abs_sets
                .iter()
                .find(|s| s.atoms(&abs.atoms).into_iter().collect::<BTreeSet<_>>() == image)
                .ok_or(ExplainError::Unverified)?;
            AbstractSide::Tree(explain(&abs, target, &q)?)
        }
    };
    Ok(ExplanationPair { default, abstracted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverConfig;
    use crate::syntax::{ground, parse_ground_atom, parse_program};

    fn a(s: &str) -> GroundAtom {
        parse_ground_atom(s).unwrap()
    }

    const FLOWER: &str = "needsWater :- habitatWater.\nneedsWater :- habitatMud.\nscent :- spiky, needsWater, headLargerLeaf.\n";

    fn f1() -> BTreeSet<GroundAtom> {
        ["spiky", "habitatWater", "headLargerLeaf"].iter().map(|s| a(s)).collect()
    }

    fn only_model(gp: &GroundProgram) -> Interpretation {
        let sets = solve(gp, &SolverConfig::default()).unwrap();
        select_model(&sets, None).unwrap().clone()
    }

    #[test]
    fn default_tree_for_scent() {
        let gp = ground(&parse_program(FLOWER).unwrap(), &f1()).unwrap();
        let tree = explain(&gp, &only_model(&gp), &a("scent")).unwrap();
        assert_eq!(
            tree.render_text(),
            "|__scent\n| |__spiky\n| |__headLargerLeaf\n| |__needsWater\n| | |__habitatWater\n"
        );
        assert_eq!(tree.stats(), TreeStats { node_count: 5, depth: 2, leaf_count: 3 });
    }

    #[test]
    fn single_fact_is_a_leaf() {
        let gp = ground(&parse_program("p.").unwrap(), &BTreeSet::new()).unwrap();
        let tree = explain(&gp, &only_model(&gp), &a("p")).unwrap();
        assert_eq!(tree.render_text(), "|__p\n");
        assert_eq!(tree.stats(), TreeStats { node_count: 1, depth: 0, leaf_count: 1 });
        assert_eq!(tree.support, Support::Fact);
    }

    #[test]
    fn errors_for_absent_atoms() {
        let gp = ground(&parse_program(FLOWER).unwrap(), &f1()).unwrap();
        let i = only_model(&gp);
        assert_eq!(explain(&gp, &i, &a("habitatMud")), Err(ExplainError::NotInAnswerSet("habitatMud".into())));
        assert_eq!(explain(&gp, &i, &a("unknown")), Err(ExplainError::UnknownAtom("unknown".into())));
    }

    #[test]
    fn choice_atoms_are_leaves_and_negation_adds_nothing() {
        let gp = ground(&parse_program("1 { a; b } 1.\nc :- a, not d.").unwrap(), &BTreeSet::new()).unwrap();
        let sets = solve(&gp, &SolverConfig::default()).unwrap();
        let with_a = sets.iter().find(|s| s.names(&gp.atoms).contains(&"a".to_string())).unwrap();
        let tree = explain(&gp, with_a, &a("c")).unwrap();
        assert_eq!(tree.render_text(), "|__c\n| |__a\n");
        assert!(matches!(tree.children[0].support, Support::Choice { .. }));
    }

    #[test]
    fn lowest_level_support_wins() {
        // q has a long and a short derivation; the short one is chosen
        let gp = ground(&parse_program("r.\ns :- r.\nq :- s.\nq :- r.").unwrap(), &BTreeSet::new()).unwrap();
        let tree = explain(&gp, &only_model(&gp), &a("q")).unwrap();
        assert_eq!(tree.render_text(), "|__q\n| |__r\n");
    }

    #[test]
    fn pair_for_flower() {
        let m = AbstractionMapping::identity()
            .remove(a("spiky"))
            .cluster(vec![a("habitatWater"), a("habitatMud")], a("habitatWaterOrMud"));
        let p = parse_program(FLOWER).unwrap();
        let pair = explain_abstract(&p, &f1(), &m, &a("scent"), None, Limits::default()).unwrap();
        let AbstractSide::Tree(abs) = pair.abstracted else { panic!("removed") };
        assert_eq!(abs.render_text(), "|__scent\n| |__headLargerLeaf\n| |__needsWater\n| | |__habitatWaterOrMud\n");
        assert_eq!(abs.stats(), TreeStats { node_count: 4, depth: 2, leaf_count: 2 });
        assert_eq!(pair.default.stats().node_count, 5);
    }

    #[test]
    fn pair_refuses_unverified_and_marks_removed() {
        let p = parse_program(FLOWER).unwrap();
        let f3: BTreeSet<GroundAtom> = ["spiky", "habitatSand", "headLargerLeaf"].iter().map(|s| a(s)).collect();
        let bad = AbstractionMapping::identity().cluster(vec![a("habitatWater"), a("habitatSand")], a("habitatWaterOrSand"));
        let err = explain_abstract(&p, &f3, &bad, &a("spiky"), None, Limits::default()).unwrap_err();
        assert!(matches!(err, crate::Error::Explain(ExplainError::Unverified)));
        let rm = AbstractionMapping::identity().remove(a("spiky"));
        let pair = explain_abstract(&p, &f1(), &rm, &a("spiky"), None, Limits::default()).unwrap();
        assert_eq!(pair.abstracted, AbstractSide::Removed);
    }

    #[test]
    fn identity_pair_is_structurally_equal() {
        let p = parse_program(FLOWER).unwrap();
        let pair = explain_abstract(&p, &f1(), &AbstractionMapping::identity(), &a("scent"), None, Limits::default()).unwrap();
        assert_eq!(pair.abstracted, AbstractSide::Tree(pair.default.clone()));
    }
}
