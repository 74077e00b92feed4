//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use aspirrel::abstraction::{verify, AbstractionMapping};
use aspirrel::corpus::DOMAINS;
use aspirrel::explain::{explain, Support};
use aspirrel::random::{random_program, RandomConfig};
use aspirrel::solver::{brute_force_answer_sets, least_model, solve, SolverConfig};
use aspirrel::syntax::{ground, parse_program, GroundAtom, GroundProgram, InstanceFamily};

const ABSTRACT_TIME_LIMIT: Duration = Duration::from_secs(1);
const VERIFY_TIME_LIMIT: Duration = Duration::from_secs(1);
const BLOCKSWORLD_TIME_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_PROGRAMS: u64 = 200;
const ORACLE_MIN_PROGRAMS: u64 = 100;
const SUITE_PROGRAMS: u64 = 200;

const DEFAULT_TREE: &str = "|__scent\n| |__spiky\n| |__headLargerLeaf\n| |__needsWater\n| | |__habitatWater\n";
const ABSTRACT_TREE: &str = "|__scent\n| |__headLargerLeaf\n| |__needsWater\n| | |__habitatWaterOrMud\n";

type Outcome = Result<String, String>;

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_aspirrel")).args(args).output().expect("binary runs");
    (out, start.elapsed())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Rules as (head, sorted body) so body order does not matter.
fn rule_shapes(text: &str) -> BTreeSet<(String, Vec<String>)> {
    text.lines()
        .map(|l| {
            let l = l.trim_end_matches('.');
            let (head, body) = l.split_once(" :- ").unwrap_or((l, ""));
            let mut body: Vec<String> = body.split(", ").filter(|s| !s.is_empty()).map(str::to_string).collect();
            body.sort();
            (head.to_string(), body)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let (out, t) = run(&["abstract", "--domain", "flower-ex3"]);
    check(out.status.code() == Some(0), format!("abstract exit {:?}", out.status.code()))?;
    let text = stdout(&out);
    let mapping: Vec<&str> = text.lines().filter(|l| !l.starts_with('%')).collect();
    check(
        mapping == ["remove spiky.", "cluster habitatWater, habitatMud => habitatWaterOrMud."],
        format!("mapping was {mapping:?}"),
    )?;
    check(t < ABSTRACT_TIME_LIMIT, format!("abstract took {t:?}"))?;
    let (out, t2) = run(&["apply", "--domain", "flower-ex3", "--mapping", "reference.map"]);
    let expected = rule_shapes("needsWater :- habitatWaterOrMud.\nscent :- needsWater, headLargerLeaf.\n");
    check(rule_shapes(&stdout(&out)) == expected, format!("m(P) was {:?}", stdout(&out)))?;
    check(t2 < ABSTRACT_TIME_LIMIT, format!("apply took {t2:?}"))?;
    Ok(format!("mapping and 2-rule m(P) reproduced in {t:?}"))
}

fn criterion_2() -> Outcome {
    let (good, t1) = run(&["verify", "--domain", "flower-ex3", "--mapping", "reference.map"]);
    check(good.status.code() == Some(0), format!("reference exit {:?}", good.status.code()))?;
    let text = stdout(&good);
    check(["f1: equal", "f2: equal", "f3: equal"].iter().all(|l| text.contains(l)), text.clone())?;
    let (bad, t2) = run(&["verify", "--domain", "flower-ex3", "--mapping", "bad-sand-cluster.map", "--format", "json"]);
    check(bad.status.code() == Some(1), format!("mutant exit {:?}", bad.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).map_err(|e| e.to_string())?;
    let failing: Vec<&str> = v["per_instance"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["equal"] == false)
        .map(|c| c["instance"].as_str().unwrap())
        .collect();
    check(failing == ["f3"], format!("failing instances {failing:?}"))?;
    check(t1 < VERIFY_TIME_LIMIT && t2 < VERIFY_TIME_LIMIT, format!("verify took {t1:?} / {t2:?}"))?;
    Ok(format!("reference verifies, mutant fails on f3 only ({t1:?}, {t2:?})"))
}

fn criterion_3() -> Outcome {
    let fig_a = std::fs::read_to_string(fixtures_dir().join("flower-ex3/tree_default.txt")).map_err(|e| e.to_string())?;
    let fig_b = std::fs::read_to_string(fixtures_dir().join("flower-ex3/tree_abstract.txt")).map_err(|e| e.to_string())?;
    check(fig_a == DEFAULT_TREE && fig_b == ABSTRACT_TREE, "stored fixtures differ from the expected trees")?;
    let (out, _) = run(&["explain", "--domain", "flower-ex3", "--instance", "f1", "--query", "scent"]);
    check(stdout(&out) == fig_a, format!("default tree:\n{}", stdout(&out)))?;
    let (out, _) = run(&["explain", "--domain", "flower-ex3", "--instance", "f1", "--query", "scent", "--mapping", "reference.map"]);
    let text = stdout(&out);
    let expected = format!("% default\n{fig_a}% abstracted\n{fig_b}");
    check(text.starts_with(&expected), format!("pair:\n{text}"))?;
    check(text.contains("% default: 5 nodes") && text.contains("% abstracted: 4 nodes"), format!("stats:\n{text}"))?;
    Ok("trees match bit-exactly (5 and 4 nodes)".into())
}

fn criterion_4() -> Outcome {
    let (out, t) = run(&["solve", "--domain", "blocksworld", "--format", "json"]);
    check(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let plan = ["occurs(move(a,table),1)", "occurs(move(b,c),2)", "occurs(move(a,b),3)"];
    let found = v["answer_sets"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| plan.iter().all(|p| s.as_array().unwrap().iter().any(|a| a == p)));
    check(found, "no answer set contains the plan")?;
    check(t < BLOCKSWORLD_TIME_LIMIT, format!("took {t:?}"))?;
    Ok(format!("plan found in {t:?}"))
}

fn criterion_5() -> Outcome {
    let config = RandomConfig::default();
    check(config.max_atoms <= 12 && config.max_rules <= 20, "generator bounds too large")?;
    let (mut mismatches, mut with_neg, mut with_constraint, mut with_choice) = (0, 0, 0, 0);
    for seed in 0..ORACLE_PROGRAMS {
        let text = random_program(seed, &config);
        with_neg += text.contains("not ") as u32;
        with_constraint += text.lines().any(|l| l.starts_with(":-")) as u32;
        with_choice += text.contains('{') as u32;
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let fast = solve(&gp, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let slow = brute_force_answer_sets(&gp).map_err(|e| e.to_string())?;
        mismatches += (fast.render(&gp) != slow.render(&gp)) as u32;
    }
    check(ORACLE_PROGRAMS >= ORACLE_MIN_PROGRAMS, "too few programs")?;
    check(with_neg > 0 && with_constraint > 0 && with_choice > 0, "sample does not mix all constructs")?;
    check(mismatches == 0, format!("{mismatches} mismatches"))?;
    Ok(format!("{ORACLE_PROGRAMS} programs, 0 mismatches"))
}

fn support_sound(gp: &GroundProgram) -> Result<(), String> {
    let sets = solve(gp, &SolverConfig::default()).map_err(|e| e.to_string())?;
    for s in sets.iter() {
        let members: BTreeSet<GroundAtom> = s.atoms(&gp.atoms).into_iter().collect();
        for atom in &members {
            let tree = explain(gp, s, atom).map_err(|e| e.to_string())?;
            let mut ok = true;
            tree.walk(0, &mut |node, _| {
                ok &= members.contains(&node.atom);
                if let Support::Rule { index, .. } = node.support {
                    let rule = &gp.rules[index];
                    ok &= rule.neg.iter().all(|n| !s.contains(*n));
                    ok &= node.children.iter().all(|c| gp.atoms.get(&c.atom).is_some_and(|id| rule.pos.contains(&id)));
                }
            });
            check(ok, format!("unsound tree for {atom}"))?;
        }
    }
    Ok(())
}

fn antichain(gp: &GroundProgram) -> bool {
    let sets = solve(gp, &SolverConfig::default()).unwrap();
    let ok = sets.iter().all(|a| sets.iter().all(|b| a == b || !a.is_subset(b)));
    ok
}

fn criterion_6() -> Outcome {
    let plain = RandomConfig::default();
    let normal = RandomConfig { allow_choices: false, ..plain };
    let positive = RandomConfig { allow_choices: false, allow_constraints: false, ..plain };
    for seed in 0..SUITE_PROGRAMS {
        let text = random_program(seed, &positive).replace("not ", "");
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        let sets = solve(&gp, &SolverConfig::default()).unwrap();
        check(sets.len() == 1 && sets.sets[0] == least_model(&gp), format!("least model, seed {seed}"))?;

        let text = random_program(seed, &normal);
        let gp = ground(&parse_program(&text).unwrap(), &BTreeSet::new()).unwrap();
        check(antichain(&gp), format!("antichain, seed {seed}"))?;

        let text = random_program(seed, &plain);
        let program = parse_program(&text).unwrap();
        let gp = ground(&program, &BTreeSet::new()).unwrap();
        let before: BTreeSet<Vec<String>> = solve(&gp, &SolverConfig::default()).unwrap().render(&gp).into_iter().collect();
        let narrowed = ground(&parse_program(&format!("{text}:- p{}.\n", seed % 12)).unwrap(), &BTreeSet::new()).unwrap();
        let after = solve(&narrowed, &SolverConfig::default()).unwrap().render(&narrowed);
        check(after.iter().all(|s| before.contains(s)), format!("constraint monotonicity, seed {seed}"))?;
        let mut chi = InstanceFamily::new();
        chi.insert("i", (0..(seed % 4) as usize).map(|k| GroundAtom::prop(format!("p{k}"))).collect());
        check(verify(&program, &chi, &AbstractionMapping::identity()).unwrap().verified, format!("identity, seed {seed}"))?;
        support_sound(&gp).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    for d in DOMAINS {
        let program = d.parse_program().unwrap();
        let chi = d.parse_instances().unwrap();
        check(verify(&program, &chi, &AbstractionMapping::identity()).unwrap().verified, format!("identity on {}", d.name))?;
        let has_choice = d.program.contains('{');
        for (name, facts) in chi.iter() {
            let gp = ground(&program, facts).unwrap();
            support_sound(&gp).map_err(|e| format!("{}/{name}: {e}", d.name))?;
            check(has_choice || antichain(&gp), format!("antichain on {}/{name}", d.name))?;
        }
    }
    Ok(format!("{SUITE_PROGRAMS} random programs per property and {} corpus domains", DOMAINS.len()))
}

fn criterion_7() -> Outcome {
    let (out, _) = run(&["abstract", "--domain", "cactus"]);
    check(out.status.code() == Some(0), "abstract failed")?;
    let mapping = stdout(&out);
    check(mapping.lines().any(|l| !l.starts_with('%')), "empty mapping")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("cactus.map");
    std::fs::write(&path, &mapping).map_err(|e| e.to_string())?;
    let (out, _) = run(&["verify", "--domain", "cactus", "--mapping", path.to_str().unwrap()]);
    check(out.status.code() == Some(0), format!("discovered mapping does not verify:\n{}", stdout(&out)))?;
    let (out, _) = run(&["stats", "--domain", "cactus", "--mapping", path.to_str().unwrap()]);
    let text = stdout(&out);
    let table: String = text.lines().filter(|l| !l.starts_with('%')).map(|l| format!("{l}\n")).collect();
    let fixture = std::fs::read_to_string(fixtures_dir().join("cactus/stats.csv")).map_err(|e| e.to_string())?;
    check(table == fixture, format!("stats differ from fixture:\n{table}"))?;
    for row in table.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        let (d, a): (i64, i64) = (cols[1].parse().unwrap(), cols[2].parse().unwrap());
        check(a <= d, format!("row {row}: abstracted larger than default"))?;
    }
    let total = table.lines().last().unwrap();
    Ok(format!("verified nonempty mapping; {total}"))
}

fn criterion_8() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (oa, _) = run(&["fixtures", "--out", a.path().to_str().unwrap()]);
    let (ob, _) = run(&["fixtures", "--out", b.path().to_str().unwrap()]);
    check(oa.status.success() && ob.status.success(), "fixture regeneration failed")?;
    check(oa.stdout == ob.stdout, "different file lists")?;
    let files: Vec<String> = stdout(&oa).lines().map(str::to_string).collect();
    for rel in &files {
        let x = std::fs::read(a.path().join(rel)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.path().join(rel)).map_err(|e| e.to_string())?;
        check(x == y, format!("{rel} differs between runs"))?;
        let stored = std::fs::read(fixtures_dir().join(rel)).map_err(|e| format!("{rel}: {e}"))?;
        check(x == stored, format!("{rel} differs from the checked-in fixture"))?;
    }
    Ok(format!("{} files byte-identical", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 example abstraction", criterion_1),
        ("2 verification", criterion_2),
        ("3 explanation trees", criterion_3),
        ("4 blocksworld plan", criterion_4),
        ("5 oracle equivalence", criterion_5),
        ("6 semantics properties", criterion_6),
        ("7 cactus pipeline", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
