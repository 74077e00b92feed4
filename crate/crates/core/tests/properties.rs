use std::collections::BTreeSet;

use aspirrel::abstraction::{verify, AbstractionMapping};
use aspirrel::explain::{explain, Support};
use aspirrel::random::{random_program, RandomConfig};
use aspirrel::solver::{brute_force_answer_sets, is_stable, least_model, solve, SolverConfig};
use aspirrel::syntax::{ground, parse_ground_atom, parse_program, GroundAtom, InstanceFamily};
use proptest::prelude::*;

fn solved(text: &str) -> (aspirrel::syntax::GroundProgram, Vec<Vec<String>>) {
    let gp = ground(&parse_program(text).unwrap(), &BTreeSet::new()).unwrap();
    let sets = solve(&gp, &SolverConfig::default()).unwrap();
    let r = sets.render(&gp);
    (gp, r)
}

#[test]
fn search_agrees_with_brute_force_on_random_programs() {
    let config = RandomConfig { allow_strong_negation: true, ..RandomConfig::default() };
    for seed in 0..300 {
        let text = random_program(seed, &config);
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let fast = solve(&gp, &SolverConfig::default()).unwrap();
        let slow = brute_force_answer_sets(&gp).unwrap();
        assert_eq!(fast.render(&gp), slow.render(&gp), "seed {seed}\n{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn answer_sets_are_stable(seed in any::<u64>()) {
        let text = random_program(seed, &RandomConfig::default());
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        for a in solve(&gp, &SolverConfig::default()).unwrap().iter() {
            prop_assert!(is_stable(&gp, a), "{}", text);
        }
    }

    /// Choice rules allow nested answer sets, so only normal programs.
    #[test]
    fn normal_answer_sets_form_an_antichain(seed in any::<u64>()) {
        let config = RandomConfig { allow_choices: false, ..RandomConfig::default() };
        let text = random_program(seed, &config);
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let sets = solve(&gp, &SolverConfig::default()).unwrap();
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                prop_assert!(i == j || !a.is_subset(b), "{}", text);
            }
        }
    }

    #[test]
    fn positive_programs_have_their_least_model(seed in any::<u64>()) {
        let config = RandomConfig { allow_choices: false, allow_constraints: false, ..RandomConfig::default() };
        let text = random_program(seed, &config).replace("not ", "");
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let sets = solve(&gp, &SolverConfig::default()).unwrap();
        prop_assert_eq!(sets.len(), 1);
        prop_assert_eq!(sets.sets[0].atoms(&gp.atoms), least_model(&gp).atoms(&gp.atoms));
    }

    #[test]
    fn constraints_only_remove_answer_sets(seed in any::<u64>(), extra in 0usize..12, neg in any::<bool>()) {
        let text = random_program(seed, &RandomConfig::default());
        let (_, before) = solved(&text);
        let lit = if neg { format!("not p{extra}") } else { format!("p{extra}") };
        let (_, after) = solved(&format!("{text}:- {lit}.\n"));
        let before: BTreeSet<_> = before.into_iter().collect();
        prop_assert!(after.iter().all(|s| before.contains(s)));
    }

    #[test]
    fn identity_mapping_always_verifies(seed in any::<u64>(), masks in prop::collection::vec(0u8..16, 1..4)) {
        let text = random_program(seed, &RandomConfig::default());
        let program = parse_program(&text).unwrap();
        let mut chi = InstanceFamily::new();
        for (k, mask) in masks.iter().enumerate() {
            let facts: BTreeSet<GroundAtom> = (0..4).filter(|b| mask & (1 << b) != 0).map(|b| GroundAtom::prop(format!("p{b}"))).collect();
            chi.insert(format!("i{k}"), facts);
        }
        prop_assert!(verify(&program, &chi, &AbstractionMapping::identity()).unwrap().verified);
    }

    #[test]
    fn explanation_trees_are_well_founded(seed in any::<u64>()) {
        let text = random_program(seed, &RandomConfig::default());
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let sets = solve(&gp, &SolverConfig::default()).unwrap();
        for s in sets.iter() {
            let members: BTreeSet<GroundAtom> = s.atoms(&gp.atoms).into_iter().collect();
            for atom in &members {
                let tree = explain(&gp, s, atom).unwrap();
                let mut ok = true;
                tree.walk(0, &mut |node, _| {
                    ok &= members.contains(&node.atom);
                    if let Support::Rule { index, .. } = node.support {
                        let rule = &gp.rules[index];
                        ok &= rule.pos.iter().collect::<BTreeSet<_>>().len() == node.children.len();
                        ok &= rule.neg.iter().all(|n| !s.contains(*n));
                    }
                });
                prop_assert!(ok, "{} in\n{}", atom, text);
            }
        }
    }

    #[test]
    fn printing_then_parsing_is_stable(seed in any::<u64>()) {
        let config = RandomConfig { allow_strong_negation: true, ..RandomConfig::default() };
        let program = parse_program(&random_program(seed, &config)).unwrap();
        let printed = program.to_string();
        let reparsed = parse_program(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed);
        prop_assert_eq!(reparsed.rules.len(), program.rules.len());
    }

    #[test]
    fn solving_is_deterministic(seed in any::<u64>()) {
        let text = random_program(seed, &RandomConfig::default());
        prop_assert_eq!(solved(&text).1, solved(&text).1);
    }

    #[test]
    fn ground_atoms_round_trip(name in "[a-z][a-zA-Z0-9_]{0,6}", args in prop::collection::vec(0i64..100, 0..3)) {
        let text = if args.is_empty() {
            name.clone()
        } else {
            format!("{name}({})", args.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        };
        let atom = parse_ground_atom(&text);
        prop_assume!(!matches!(name.as_str(), "not"));
        prop_assert_eq!(atom.unwrap().to_string(), text);
    }
}
