use std::collections::HashSet;

use crate::syntax::{AtomId, CardinalityGuard, GroundHead, GroundProgram, GroundRule, RuleOrigin};

use super::Interpretation;

/// Gelfond-Lifschitz reduct: rules blocked by `i` are deleted and the
/// remaining default-negated literals are stripped. Choice rules must have
/// been compiled away; any left over are dropped.
pub fn reduct(gp: &GroundProgram, i: &Interpretation) -> GroundProgram {
    debug_assert!(!gp.has_choices(), "reduct expects a choice-compiled program");
    let rules = gp
        .rules
        .iter()
        .filter(|r| !matches!(r.head, GroundHead::Choice { .. }))
        .filter(|r| r.neg.iter().all(|&a| !i.contains(a)))
        .map(|r| GroundRule { head: r.head.clone(), pos: r.pos.clone(), neg: Vec::new(), origin: r.origin })
        .collect();
    GroundProgram { atoms: gp.atoms.clone(), facts: gp.facts.clone(), rules, guards: gp.guards.clone() }
}

/// Least fixpoint of forward chaining. Default-negated literals, choice
/// heads and constraints are ignored.
pub fn least_model(positive: &GroundProgram) -> Interpretation {
    let n = positive.atoms.len();
    let mut truth = vec![false; n];
    let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(positive.rules.len());
    let mut queue: Vec<AtomId> = Vec::new();

    let set = |a: AtomId, truth: &mut Vec<bool>, queue: &mut Vec<AtomId>| {
        if !truth[a.index()] {
            truth[a.index()] = true;
            queue.push(a);
        }
    };
    for &f in &positive.facts {
        set(f, &mut truth, &mut queue);
    }
    for (idx, rule) in positive.rules.iter().enumerate() {
        let distinct: HashSet<AtomId> = rule.pos.iter().copied().collect();
        missing.push(distinct.len());
        for &a in &distinct {
            waiting[a.index()].push(idx);
        }
        if distinct.is_empty() {
            if let GroundHead::Atom(h) = rule.head {
                set(h, &mut truth, &mut queue);
            }
        }
    }
    while let Some(a) = queue.pop() {
        for &idx in &waiting[a.index()] {
            missing[idx] -= 1;
            if missing[idx] == 0 {
                if let GroundHead::Atom(h) = positive.rules[idx].head {
                    set(h, &mut truth, &mut queue);
                }
            }
        }
    }
    truth.iter().enumerate().filter(|(_, &t)| t).map(|(i, _)| AtomId(i as u32)).collect()
}

/// Replaces each choice rule `L { a1; ...; ak } U :- B.` by, per element,
/// `aj :- B, cond, not aj'.` and `aj' :- B, cond, not aj.` with a fresh
/// auxiliary `aj'`, and records the bounds as a [`CardinalityGuard`].
pub fn compile_choices(gp: &GroundProgram) -> GroundProgram {
    if !gp.has_choices() {
        return gp.clone();
    }
    let mut atoms = gp.atoms.clone();
    let mut rules = Vec::with_capacity(gp.rules.len());
    let mut guards = gp.guards.clone();
    for (r_idx, rule) in gp.rules.iter().enumerate() {
        let GroundHead::Choice { lower, upper, elements } = &rule.head else {
            rules.push(rule.clone());
            continue;
        };
        let (src, span) = match rule.origin {
            RuleOrigin::Source { rule, span } => (rule, span),
            _ => (r_idx, Default::default()),
        };
        for (e_idx, el) in elements.iter().enumerate() {
            let aux = atoms.add_aux(format!("choice{r_idx}_{e_idx}"));
            let mut pos = rule.pos.clone();
            pos.extend(&el.pos);
            let mut neg = rule.neg.clone();
            neg.extend(&el.neg);
            let mut support_neg = neg.clone();
            support_neg.push(aux);
            rules.push(GroundRule {
                head: GroundHead::Atom(el.atom),
                pos: pos.clone(),
                neg: support_neg,
                origin: RuleOrigin::ChoiceSupport { rule: src, span },
            });
            neg.push(el.atom);
            rules.push(GroundRule {
                head: GroundHead::Atom(aux),
                pos,
                neg,
                origin: RuleOrigin::ChoiceComplement { rule: src, span },
            });
        }
        if lower.unwrap_or(0) > 0 || upper.is_some() {
            guards.push(CardinalityGuard {
                pos: rule.pos.clone(),
                neg: rule.neg.clone(),
                elements: elements.clone(),
                lower: lower.unwrap_or(0),
                upper: *upper,
            });
        }
    }
    GroundProgram { atoms, facts: gp.facts.clone(), rules, guards }
}

pub(crate) fn body_holds(pos: &[AtomId], neg: &[AtomId], i: &Interpretation) -> bool {
    pos.iter().all(|&a| i.contains(a)) && neg.iter().all(|&a| !i.contains(a))
}

pub(crate) fn guard_holds(g: &CardinalityGuard, i: &Interpretation) -> bool {
    if !body_holds(&g.pos, &g.neg, i) {
        return true;
    }
    let count = g
        .elements
        .iter()
        .filter(|e| i.contains(e.atom) && body_holds(&e.pos, &e.neg, i))
        .count() as u64;
    count >= u64::from(g.lower) && g.upper.is_none_or(|u| count <= u64::from(u))
}

/// Stability of a total interpretation of a choice-compiled program,
/// auxiliary atoms included.
pub(crate) fn is_stable_total(gp: &GroundProgram, full: &Interpretation) -> bool {
    if full.iter().any(|a| a.index() >= gp.atoms.len()) {
        return false;
    }
    if gp.rules.iter().any(|r| r.is_constraint() && body_holds(&r.pos, &r.neg, full)) {
        return false;
    }
    if !gp.guards.iter().all(|g| guard_holds(g, full)) {
        return false;
    }
    least_model(&reduct(gp, full)) == *full
}

/// Adds the auxiliary atoms a stable model containing the user atoms `i`
/// would have: an auxiliary choice atom holds exactly when its defining
/// rule's body holds (its body never mentions auxiliary atoms).
pub(crate) fn complete_auxiliary(compiled: &GroundProgram, i: &Interpretation) -> Interpretation {
    let mut full = i.clone();
    for r in &compiled.rules {
        if let (RuleOrigin::ChoiceComplement { .. }, GroundHead::Atom(aux)) = (r.origin, &r.head) {
            if body_holds(&r.pos, &r.neg, i) {
                full.insert(*aux);
            }
        }
    }
    full
}

/// Whether `i` (user atoms only) is the visible part of a stable model.
/// Accepts compiled and uncompiled programs; auxiliary atoms of choice
/// compilation are reconstructed before the stability test. An
/// interpretation that already mentions auxiliary atoms is tested as is.
pub fn is_stable(gp: &GroundProgram, i: &Interpretation) -> bool {
    let compiled = compile_choices(gp);
    if i.iter().any(|a| a.index() >= compiled.atoms.len()) {
        return false;
    }
    let full = if i.iter().any(|a| compiled.atoms.is_aux(a)) { i.clone() } else { complete_auxiliary(&compiled, i) };
    is_stable_total(&compiled, &full)
}
