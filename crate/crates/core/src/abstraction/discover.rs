use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Result;
use crate::syntax::{AtomId, GroundAtom, GroundHead, InstanceFamily, Program, RuleOrigin, Value};

use super::{AbstractionMapping, Cluster, Limits, Verifier};

/// Atoms that may be clustered together: same strong-negation flag and, for
/// non-propositional atoms, same predicate and arity. All propositional
/// atoms of one polarity form a single family.
type Family = (bool, String, usize);

fn family(a: &GroundAtom) -> Family {
    if a.args.is_empty() {
        (a.neg, String::new(), 0)
    } else {
        (a.neg, a.predicate.clone(), a.arity())
    }
}

fn camel_words(s: &str) -> Vec<&str> {
    let mut words = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if i > 0 && c.is_ascii_uppercase() {
            words.push(&s[start..i]);
            start = i;
        }
    }
    words.push(&s[start..]);
    words
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// `habitatWater, habitatMud` -> `habitatWaterOrMud`: the shared leading
/// camel-case words are written once.
fn merge_names(names: &[String]) -> String {
    let words: Vec<Vec<&str>> = names.iter().map(|n| camel_words(n)).collect();
    let shortest = words.iter().map(Vec::len).min().unwrap_or(0);
    let mut k = 0;
    while k + 1 < shortest && words.iter().all(|w| w[k] == words[0][k]) {
        k += 1;
    }
    let mut out: String = words[0][..k].concat();
    for (i, w) in words.iter().enumerate() {
        let rest = w[k..].concat();
        if i == 0 {
            out.push_str(&rest);
        } else {
            out.push_str("Or");
            out.push_str(&capitalize(&rest));
        }
    }
    out
}

fn value_name(v: &Value) -> String {
    match v {
        Value::Sym(s) => s.clone(),
        Value::Int(i) if *i < 0 => format!("m{}", i.unsigned_abs()),
        Value::Int(i) => format!("n{i}"),
        Value::Func(..) => v.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect(),
    }
}

/// Target atom for a cluster, before collision handling. Propositional
/// members merge their names; otherwise every argument position where the
/// members differ gets a merged constant.
pub fn cluster_target_name(members: &[GroundAtom]) -> GroundAtom {
    let first = &members[0];
    if first.args.is_empty() {
        let names: Vec<String> = members.iter().map(|m| m.predicate.clone()).collect();
        return GroundAtom { neg: first.neg, predicate: merge_names(&names), args: Vec::new() };
    }
    let args = (0..first.arity())
        .map(|i| {
            if members.iter().all(|m| m.args[i] == first.args[i]) {
                first.args[i].clone()
            } else {
                let names: Vec<String> = members.iter().map(|m| value_name(&m.args[i])).collect();
                Value::Sym(merge_names(&names))
            }
        })
        .collect();
    GroundAtom { neg: first.neg, predicate: first.predicate.clone(), args }
}

fn with_suffix(atom: &GroundAtom, base: &GroundAtom, k: usize) -> GroundAtom {
    let mut out = atom.clone();
    if out.args.is_empty() {
        out.predicate = format!("{}{k}", out.predicate);
        return out;
    }
    if let Some(i) = (0..out.arity()).rev().find(|&i| out.args[i] != base.args[i]) {
        if let Value::Sym(s) = &out.args[i] {
            out.args[i] = Value::Sym(format!("{s}{k}"));
        }
    } else {
        out.predicate = format!("{}{k}", out.predicate);
    }
    out
}

/// Greedy search for removals and clusters, driven by a [`Verifier`].
///
/// Candidates are the atoms occurring in some rule body of the program
/// grounded over the instance domain (strong-negation coherence constraints
/// excluded). Atoms that only occur as instance facts or only as rule heads
/// never influence which rules fire and are left alone.
///
/// Removal order: atoms present in every instance first, then by atom.
/// Cluster pairs: same [`Family`], co-deriving some head (each in a body of
/// a different rule for that head that does not mention the other), ordered
/// by the number of co-derived heads (descending), then by atom.
pub struct Discovery<'a> {
    verifier: &'a Verifier,
    candidates: Vec<GroundAtom>,
    common: BTreeSet<GroundAtom>,
    first_seen: HashMap<GroundAtom, usize>,
    /// Per head: positive body and full body of every rule for it.
    heads: Vec<Vec<(HashSet<AtomId>, HashSet<AtomId>)>>,
}

impl<'a> Discovery<'a> {
    pub fn new(verifier: &'a Verifier, chi: &InstanceFamily) -> Self {
        let base = verifier.base();
        let mut body_atoms: BTreeSet<GroundAtom> = BTreeSet::new();
        let mut first_seen: HashMap<GroundAtom, usize> = HashMap::new();
        let mut by_head: HashMap<AtomId, Vec<(HashSet<AtomId>, HashSet<AtomId>)>> = HashMap::new();
        let note = |id: AtomId, first_seen: &mut HashMap<GroundAtom, usize>| {
            if let Some(a) = base.atoms.atom(id) {
                let n = first_seen.len();
                first_seen.entry(a.clone()).or_insert(n);
            }
        };
        for rule in &base.rules {
            if rule.origin == RuleOrigin::Coherence {
                continue;
            }
            let mut body: Vec<AtomId> = rule.pos.iter().chain(&rule.neg).copied().collect();
            match &rule.head {
                GroundHead::Atom(h) => {
                    note(*h, &mut first_seen);
                    by_head
                        .entry(*h)
                        .or_default()
                        .push((rule.pos.iter().copied().collect(), rule.pos.iter().chain(&rule.neg).copied().collect()));
                }
                GroundHead::Choice { elements, .. } => {
                    for el in elements {
                        note(el.atom, &mut first_seen);
                        body.extend(el.pos.iter().chain(&el.neg));
                    }
                }
                GroundHead::Falsum => {}
            }
            for &id in &body {
                note(id, &mut first_seen);
                if let Some(a) = base.atoms.atom(id) {
                    body_atoms.insert(a.clone());
                }
            }
        }
        for (_, facts) in chi.iter() {
            for a in facts {
                let n = first_seen.len();
                first_seen.entry(a.clone()).or_insert(n);
            }
        }
        let mut heads: Vec<_> = by_head.into_iter().collect();
        heads.sort_by_key(|(h, _)| *h);
        let heads = heads.into_iter().map(|(_, rules)| rules).filter(|r| r.len() > 1).collect();
        Discovery { verifier, candidates: body_atoms.into_iter().collect(), common: chi.common_atoms(), first_seen, heads }
    }

    pub fn candidates(&self) -> &[GroundAtom] {
        &self.candidates
    }

    fn id(&self, a: &GroundAtom) -> Option<AtomId> {
        self.verifier.base().atoms.get(a)
    }

    /// Number of heads `a` and `b` derive through different rules.
    pub fn coderivation(&self, a: &GroundAtom, b: &GroundAtom) -> usize {
        let (Some(a), Some(b)) = (self.id(a), self.id(b)) else {
            return 0;
        };
        self.heads
            .iter()
            .filter(|rules| {
                rules.iter().enumerate().any(|(i, (pos1, body1))| {
                    pos1.contains(&a)
                        && !body1.contains(&b)
                        && rules
                            .iter()
                            .enumerate()
                            .any(|(j, (pos2, body2))| i != j && pos2.contains(&b) && !body2.contains(&a))
                })
            })
            .count()
    }

    pub fn find_removals(&self, base: AbstractionMapping) -> Result<AbstractionMapping> {
        let mut order: Vec<&GroundAtom> = self.candidates.iter().collect();
        order.sort_by_key(|a| (!self.common.contains(*a), *a));
        let mut m = base;
        for atom in order {
            if m.maps(atom) || m.is_target(atom) {
                continue;
            }
            let trial = m.clone().remove(atom.clone());
            if self.verifier.accepts(&trial)? {
                log::debug!("removal accepted: {atom}");
                m = trial;
            }
        }
        Ok(m)
    }

    fn fresh_target(&self, m: &AbstractionMapping, members: &[GroundAtom], skip: Option<usize>) -> GroundAtom {
        let base = cluster_target_name(members);
        let taken = |t: &GroundAtom| {
            self.verifier.universe().contains(t)
                || m.clusters.iter().enumerate().any(|(i, c)| Some(i) != skip && &c.target == t)
        };
        let mut target = base.clone();
        let mut k = 2;
        while taken(&target) {
            target = with_suffix(&base, &members[0], k);
            k += 1;
        }
        target
    }

    fn by_occurrence(&self, members: &mut [GroundAtom]) {
        members.sort_by_key(|a| (self.first_seen.get(a).copied().unwrap_or(usize::MAX), a.clone()));
    }

    pub fn find_clusters(&self, base: AbstractionMapping) -> Result<AbstractionMapping> {
        let free: Vec<&GroundAtom> = self.candidates.iter().filter(|a| !base.maps(a) && !base.is_target(a)).collect();
        let mut pairs: Vec<(usize, &GroundAtom, &GroundAtom)> = Vec::new();
        for (i, a) in free.iter().enumerate() {
            for b in &free[i + 1..] {
                if family(a) != family(b) {
                    continue;
                }
                let score = self.coderivation(a, b);
                if score > 0 {
                    pairs.push((score, a, b));
                }
            }
        }
        pairs.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(y.1)).then_with(|| x.2.cmp(y.2)));

        let mut m = base;
        for (_, a, b) in pairs {
            if m.maps(a) || m.maps(b) {
                continue;
            }
            let mut members = vec![a.clone(), b.clone()];
            self.by_occurrence(&mut members);
            let target = self.fresh_target(&m, &members, None);
            let trial = m.clone().cluster(members, target);
            if self.verifier.accepts(&trial)? {
                log::debug!("cluster accepted: {a}, {b}");
                m = trial;
            }
        }

        // Grow accepted clusters by further co-deriving atoms.
        let mut changed = true;
        while changed {
            changed = false;
            for idx in 0..m.clusters.len() {
                for c in &free {
                    let cluster = &m.clusters[idx];
                    if m.maps(c) || family(c) != family(&cluster.sources[0]) {
                        continue;
                    }
                    if !cluster.sources.iter().any(|s| self.coderivation(s, c) > 0) {
                        continue;
                    }
                    let mut members = cluster.sources.clone();
                    members.push((*c).clone());
                    self.by_occurrence(&mut members);
                    let target = self.fresh_target(&m, &members, Some(idx));
                    let mut trial = m.clone();
                    trial.clusters[idx] = Cluster { sources: members, target };
                    if self.verifier.accepts(&trial)? {
                        log::debug!("cluster extended by {c}");
                        m = trial;
                        changed = true;
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Greedy removals of χ-irrelevant atoms. See [`Discovery`] for the
/// candidate order.
pub fn find_removals(program: &Program, chi: &InstanceFamily) -> Result<AbstractionMapping> {
    let v = Verifier::new(program, chi, Limits::default())?;
    let m = Discovery::new(&v, chi).find_removals(AbstractionMapping::identity())?;
    Ok(m.with_universe(v.universe().clone()))
}

/// Greedy clusters on top of `base`; the result contains `base`.
pub fn find_clusters(program: &Program, chi: &InstanceFamily, base: AbstractionMapping) -> Result<AbstractionMapping> {
    let v = Verifier::new(program, chi, Limits::default())?;
    let m = Discovery::new(&v, chi).find_clusters(base)?;
    Ok(m.with_universe(v.universe().clone()))
}
