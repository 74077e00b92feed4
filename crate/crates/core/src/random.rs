//! Seeded generator of small propositional programs, used to compare the
//! search solver against brute-force enumeration.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    pub allow_choices: bool,
    pub allow_constraints: bool,
    pub allow_strong_negation: bool,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_atoms: 12,
            max_rules: 20,
            max_body: 3,
            allow_choices: true,
            allow_constraints: true,
            allow_strong_negation: false,
        }
    }
}

/// Program text over atoms `p0 .. pN`; the same seed gives the same text.
pub fn random_program(seed: u64, config: &RandomConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=config.max_atoms.max(1));
    let atoms: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let rules = rng.gen_range(0..=config.max_rules);
    let mut out = String::new();
    for _ in 0..rules {
        let kind = rng.gen_range(0..10);
        let body = random_body(&mut rng, &atoms, config.max_body);
        let head = |rng: &mut ChaCha8Rng| -> String {
            let a = atoms.choose(rng).unwrap().clone();
            if config.allow_strong_negation && rng.gen_bool(0.15) {
                format!("-{a}")
            } else {
                a
            }
        };
        match kind {
            0 if config.allow_constraints => {
                if body.is_empty() {
                    continue;
                }
                let _ = writeln!(out, ":- {body}.");
            }
            1 | 2 if config.allow_choices => {
                let k = rng.gen_range(1..=3.min(n));
                let elems: Vec<String> = atoms.choose_multiple(&mut rng, k).cloned().collect();
                let lower = rng.gen_bool(0.3).then(|| rng.gen_range(0..=k));
                let upper = rng.gen_bool(0.3).then(|| rng.gen_range(lower.unwrap_or(0)..=k));
                let lo = lower.map(|l| format!("{l} ")).unwrap_or_default();
                let hi = upper.map(|u| format!(" {u}")).unwrap_or_default();
                let sep = if body.is_empty() { "" } else { " :- " };
                let _ = writeln!(out, "{lo}{{ {} }}{hi}{sep}{body}.", elems.join("; "));
            }
            _ => {
                let h = head(&mut rng);
                if body.is_empty() {
                    let _ = writeln!(out, "{h}.");
                } else {
                    let _ = writeln!(out, "{h} :- {body}.");
                }
            }
        }
    }
    out
}

fn random_body(rng: &mut ChaCha8Rng, atoms: &[String], max_body: usize) -> String {
    let len = rng.gen_range(0..=max_body);
    let lits: Vec<String> = (0..len)
        .map(|_| {
            let a = atoms.choose(rng).unwrap();
            if rng.gen_bool(0.4) {
                format!("not {a}")
            } else {
                a.clone()
            }
        })
        .collect();
    lits.join(", ")
}
