#![no_main]

use std::collections::BTreeSet;

use aspirrel::solver::{brute_force_answer_sets, solve, SolverConfig};
use aspirrel::syntax::{ground_with_domain, parse_program, GrounderConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(program) = parse_program(text) else { return };
    let config = GrounderConfig { rule_cap: 2_000 };
    let Ok(gp) = ground_with_domain(&program, &BTreeSet::new(), &BTreeSet::new(), config) else { return };
    let Ok(fast) = solve(&gp, &SolverConfig { node_budget: 100_000, limit: None }) else { return };
    if let Ok(slow) = brute_force_answer_sets(&gp) {
        assert_eq!(fast.render(&gp), slow.render(&gp));
    }
});
