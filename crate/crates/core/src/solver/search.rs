use crate::error::SolveError;
use crate::syntax::{AtomId, GroundHead, GroundProgram, RuleOrigin};

use super::semantics::{compile_choices, is_stable_total};
use super::{AnswerSetCollection, Interpretation, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Undef,
    True,
    False,
}

#[derive(Debug, Clone, Copy)]
enum Lit {
    Pos(AtomId),
    Neg(AtomId),
}

impl Lit {
    fn value(self, a: &[Val]) -> Val {
        match self {
            Lit::Pos(x) => a[x.index()],
            Lit::Neg(x) => match a[x.index()] {
                Val::True => Val::False,
                Val::False => Val::True,
                Val::Undef => Val::Undef,
            },
        }
    }

    /// Makes the literal take `want`; `false` on conflict.
    fn force(self, want: bool, a: &mut [Val], changed: &mut bool) -> bool {
        let (atom, truth) = match self {
            Lit::Pos(x) => (x, want),
            Lit::Neg(x) => (x, !want),
        };
        let target = if truth { Val::True } else { Val::False };
        match a[atom.index()] {
            Val::Undef => {
                a[atom.index()] = target;
                *changed = true;
                true
            }
            v => v == target,
        }
    }
}

struct BodyState {
    any_false: bool,
    undef: usize,
    last_undef: Option<Lit>,
}

fn body_state(lits: &[Lit], a: &[Val]) -> BodyState {
    let mut st = BodyState { any_false: false, undef: 0, last_undef: None };
    for &l in lits {
        match l.value(a) {
            Val::False => {
                st.any_false = true;
                return st;
            }
            Val::Undef => {
                st.undef += 1;
                st.last_undef = Some(l);
            }
            Val::True => {}
        }
    }
    st
}

struct Rule {
    head: Option<AtomId>,
    body: Vec<Lit>,
}

struct Guard {
    body: Vec<Lit>,
    elements: Vec<(AtomId, Vec<Lit>)>,
    lower: usize,
    upper: Option<usize>,
}

fn lits(pos: &[AtomId], neg: &[AtomId]) -> Vec<Lit> {
    pos.iter().map(|&a| Lit::Pos(a)).chain(neg.iter().map(|&a| Lit::Neg(a))).collect()
}

/// Backtracking search with completion-style propagation: forward and
/// backward inference on rule bodies, unsupported atoms become false, the
/// only remaining support of a true atom must fire, and cardinality guards
/// prune partial assignments. Every total assignment reaching a leaf is
/// checked with the exact stability test.
struct Search<'a> {
    program: &'a GroundProgram,
    rules: Vec<Rule>,
    supports: Vec<Vec<usize>>,
    guards: Vec<Guard>,
    order: Vec<AtomId>,
    initial: Vec<Val>,
    nodes: u64,
    budget: u64,
    limit: Option<usize>,
    found: Vec<Interpretation>,
}

impl<'a> Search<'a> {
    fn new(program: &'a GroundProgram, config: &SolverConfig) -> Self {
        let n = program.atoms.len();
        let mut rules = Vec::with_capacity(program.rules.len());
        let mut supports = vec![Vec::new(); n];
        for (idx, r) in program.rules.iter().enumerate() {
            let head = match r.head {
                GroundHead::Atom(h) => {
                    supports[h.index()].push(idx);
                    Some(h)
                }
                _ => None,
            };
            rules.push(Rule { head, body: lits(&r.pos, &r.neg) });
        }
        let guards = program
            .guards
            .iter()
            .map(|g| Guard {
                body: lits(&g.pos, &g.neg),
                elements: g.elements.iter().map(|e| (e.atom, lits(&e.pos, &e.neg))).collect(),
                lower: g.lower as usize,
                upper: g.upper.map(|u| u as usize),
            })
            .collect();
        let mut initial = vec![Val::Undef; n];
        for &f in &program.facts {
            initial[f.index()] = Val::True;
        }
        // Decide choice atoms first; the rest mostly follows by propagation.
        let mut order: Vec<AtomId> = Vec::new();
        let mut seen = vec![false; n];
        for r in &program.rules {
            if let (RuleOrigin::ChoiceSupport { .. }, GroundHead::Atom(h)) = (r.origin, &r.head) {
                if !seen[h.index()] {
                    seen[h.index()] = true;
                    order.push(*h);
                }
            }
        }
        order.extend(program.atoms.ids().filter(|a| !seen[a.index()]));
        Search {
            program,
            rules,
            supports,
            guards,
            order,
            initial,
            nodes: 0,
            budget: config.node_budget,
            limit: config.limit,
            found: Vec::new(),
        }
    }

    fn propagate(&self, a: &mut [Val]) -> bool {
        loop {
            let mut changed = false;
            for rule in &self.rules {
                let st = body_state(&rule.body, a);
                if st.any_false {
                    continue;
                }
                let head_val = rule.head.map(|h| a[h.index()]);
                match (st.undef, head_val) {
                    (0, None) => return false,
                    (0, Some(_)) => {
                        if !Lit::Pos(rule.head.unwrap()).force(true, a, &mut changed) {
                            return false;
                        }
                    }
                    (1, None) | (1, Some(Val::False)) => {
                        if !st.last_undef.unwrap().force(false, a, &mut changed) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            for atom in 0..a.len() {
                if a[atom] == Val::False || self.initial[atom] == Val::True {
                    continue;
                }
                let mut live = self.supports[atom]
                    .iter()
                    .filter(|&&r| !body_state(&self.rules[r].body, a).any_false);
                match (live.next(), live.next()) {
                    (None, _) => {
                        if !Lit::Pos(AtomId(atom as u32)).force(false, a, &mut changed) {
                            return false;
                        }
                    }
                    (Some(&only), None) if a[atom] == Val::True => {
                        for &l in &self.rules[only].body {
                            if !l.force(true, a, &mut changed) {
                                return false;
                            }
                        }
                    }
                    _ => {}
                }
            }
            for g in &self.guards {
                let st = body_state(&g.body, a);
                if st.any_false {
                    continue;
                }
                let mut true_count = 0;
                let mut possible = 0;
                for (atom, cond) in &g.elements {
                    let c = body_state(cond, a);
                    let av = a[atom.index()];
                    if !c.any_false && av != Val::False {
                        possible += 1;
                        if c.undef == 0 && av == Val::True {
                            true_count += 1;
                        }
                    }
                }
                let violated = possible < g.lower || g.upper.is_some_and(|u| true_count > u);
                if st.undef > 0 {
                    if violated && st.undef == 1 && !st.last_undef.unwrap().force(false, a, &mut changed) {
                        return false;
                    }
                    continue;
                }
                if violated {
                    return false;
                }
                for (atom, cond) in &g.elements {
                    let c = body_state(cond, a);
                    if c.any_false || c.undef > 0 || a[atom.index()] != Val::Undef {
                        continue;
                    }
                    if g.upper == Some(true_count) {
                        Lit::Pos(*atom).force(false, a, &mut changed);
                    } else if possible == g.lower {
                        Lit::Pos(*atom).force(true, a, &mut changed);
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn run(&mut self, mut a: Vec<Val>) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::BudgetExceeded { budget: self.budget });
        }
        if !self.propagate(&mut a) {
            return Ok(());
        }
        match self.order.iter().find(|x| a[x.index()] == Val::Undef) {
            Some(&x) => {
                for v in [Val::True, Val::False] {
                    let mut next = a.clone();
                    next[x.index()] = v;
                    self.run(next)?;
                    if self.done() {
                        break;
                    }
                }
            }
            None => {
                let model: Interpretation =
                    a.iter().enumerate().filter(|(_, &v)| v == Val::True).map(|(i, _)| AtomId(i as u32)).collect();
                if is_stable_total(self.program, &model) {
                    self.found.push(model);
                }
            }
        }
        Ok(())
    }
}

/// Computes the answer sets of `gp` (auxiliary atoms projected away), in
/// canonical order, stopping after `config.limit` answer sets if given.
pub fn solve(gp: &GroundProgram, config: &SolverConfig) -> Result<AnswerSetCollection, SolveError> {
    let compiled = compile_choices(gp);
    let mut search = Search::new(&compiled, config);
    if config.limit == Some(0) {
        return Ok(AnswerSetCollection::default());
    }
    let start = search.initial.clone();
    search.run(start)?;
    debug_assert!(
        search.found.iter().all(|m| search.found.iter().all(|o| o == m || !o.is_subset(m))),
        "stable models of the compiled program must form an antichain"
    );
    Ok(AnswerSetCollection::from_unsorted(search.found.iter().map(|m| m.visible(&compiled.atoms))))
}
