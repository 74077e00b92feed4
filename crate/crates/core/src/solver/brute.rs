use crate::error::SolveError;
use crate::syntax::{AtomId, GroundHead, GroundProgram};

use super::semantics::{complete_auxiliary, is_stable_total};
use super::{AnswerSetCollection, Interpretation};

/// Largest number of user atoms the exhaustive oracle accepts.
pub const BRUTE_FORCE_ATOM_CAP: usize = 24;

type Mask = u32;

fn holds(pos: &[AtomId], neg: &[AtomId], s: Mask) -> bool {
    pos.iter().all(|a| s >> a.0 & 1 == 1) && neg.iter().all(|a| s >> a.0 & 1 == 0)
}

/// Direct stability test for programs with choice rules, independent of
/// choice compilation: the reduct of `{a1; ...} :- B` w.r.t. `s` contains
/// `aj :- B+` for every element `aj` in `s` whose negative parts are
/// satisfied, and the bounds are checked on `s` itself.
fn stable(gp: &GroundProgram, s: Mask) -> bool {
    let mut positive: Vec<(AtomId, Vec<AtomId>)> = Vec::new();
    for r in &gp.rules {
        match &r.head {
            GroundHead::Falsum => {
                if holds(&r.pos, &r.neg, s) {
                    return false;
                }
            }
            GroundHead::Atom(h) => {
                if holds(&[], &r.neg, s) {
                    positive.push((*h, r.pos.clone()));
                }
            }
            GroundHead::Choice { lower, upper, elements } => {
                if holds(&r.pos, &r.neg, s) {
                    let count = elements.iter().filter(|e| s >> e.atom.0 & 1 == 1 && holds(&e.pos, &e.neg, s)).count();
                    if count < lower.unwrap_or(0) as usize || upper.is_some_and(|u| count > u as usize) {
                        return false;
                    }
                }
                if holds(&[], &r.neg, s) {
                    for e in elements {
                        if s >> e.atom.0 & 1 == 1 && holds(&[], &e.neg, s) {
                            let mut body = r.pos.clone();
                            body.extend(&e.pos);
                            positive.push((e.atom, body));
                        }
                    }
                }
            }
        }
    }
    let mut model: Mask = 0;
    for f in &gp.facts {
        model |= 1 << f.0;
    }
    loop {
        let before = model;
        for (head, body) in &positive {
            if body.iter().all(|a| model >> a.0 & 1 == 1) {
                model |= 1 << head.0;
            }
        }
        if model == before {
            break;
        }
    }
    model == s
}

/// Enumerates all 2^n subsets of the user atoms and keeps the stable ones.
pub fn brute_force_answer_sets(gp: &GroundProgram) -> Result<AnswerSetCollection, SolveError> {
    let n = gp.atoms.user_count();
    if n > BRUTE_FORCE_ATOM_CAP {
        return Err(SolveError::TooManyAtoms { atoms: n, cap: BRUTE_FORCE_ATOM_CAP });
    }
    let user: Vec<AtomId> = gp.atoms.user_atoms().map(|(id, _)| id).collect();
    // Canonical programs number user atoms 0..n; anything else (e.g. a
    // hand-built table) goes through the generic check.
    let dense = user.iter().enumerate().all(|(i, id)| id.index() == i) && gp.atoms.len() == n;
    let compiled = if dense { None } else { Some(super::compile_choices(gp)) };
    let mut found = Vec::new();
    for mask in 0..(1u64 << n) {
        let mask = mask as Mask;
        let ok = match &compiled {
            None => stable(gp, mask),
            Some(c) => {
                let s: Interpretation = user.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
                is_stable_total(c, &complete_auxiliary(c, &s))
            }
        };
        if ok {
            found.push(user.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect());
        }
    }
    Ok(AnswerSetCollection::from_unsorted(found))
}
