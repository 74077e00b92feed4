use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use aspirrel::abstraction::{apply_to_program, AbstractionMapping, Discovery, VerificationReport, Verifier};
use aspirrel::corpus::{load_domain, regenerate_fixtures, DOMAINS};
use aspirrel::error::{ExplainError, GroundError};
use aspirrel::explain::{compare, explain as explain_tree, explain_abstract, select_model, stats_csv, stats_json, AbstractSide, ExplanationTree, TreeStats};
use aspirrel::solver::AnswerSetCollection;
use aspirrel::syntax::{ground_with_domain, GroundAtom, GroundProgram, RuleOrigin};
use aspirrel::{Error, SCHEMA_VERSION};
use serde_json::{json, Value};

use crate::input::{load, usage, Loaded, UsageError};
use crate::{Format, InputArgs, MappingArg};

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    let Some(mut err) = e.downcast_ref::<Error>() else { return 2 };
    if err.is_resource_limit() {
        return 3;
    }
    while let Error::Instance { source, .. } | Error::Domain { source, .. } = err {
        err = source;
    }
    match err {
        Error::Explain(ExplainError::AmbiguousModel { .. } | ExplainError::ModelIndex { .. }) => 2,
        Error::Explain(_) => 1,
        Error::Solve(_) | Error::Ground(GroundError::CapExceeded { .. }) => 3,
        _ => 2,
    }
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
}

fn versioned(mut v: Value) -> Value {
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

/// Facts and non-coherence rules.
fn rule_count(gp: &GroundProgram) -> usize {
    gp.facts.len() + gp.rules.iter().filter(|r| r.origin != RuleOrigin::Coherence).count()
}

pub fn solve(input: &InputArgs) -> Result<u8> {
    let loaded = load(input)?;
    let (instance, facts) = loaded.selected(input.instance.as_deref())?;
    let gp = ground_with_domain(&loaded.program, &facts, &BTreeSet::new(), loaded.limits.grounder()).map_err(Error::from)?;
    let sets = solve_gp(&gp, &loaded)?;
    match input.format {
        Format::Text => print!("{}", sets.to_text(&gp)),
        Format::Json => print_json(versioned(json!({"instance": instance, "answer_sets": sets.to_json(&gp)}))),
    }
    if sets.is_empty() {
        eprintln!("no answer set");
        return Ok(1);
    }
    Ok(0)
}

fn solve_gp(gp: &GroundProgram, loaded: &Loaded) -> Result<AnswerSetCollection> {
    Ok(aspirrel::solver::solve(gp, &loaded.limits.solver()).map_err(Error::from)?)
}

fn braces(sets: &[Vec<GroundAtom>]) -> String {
    let parts: Vec<String> = sets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    if parts.is_empty() {
        "(none)".to_string()
    } else {
        parts.join(" ")
    }
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &r.per_instance {
        let _ = writeln!(out, "{}: {}", c.instance, if c.equal { "equal" } else { "differ" });
        if !c.equal {
            let _ = writeln!(out, "  mapped concrete: {}", braces(&c.concrete_mapped));
            let _ = writeln!(out, "  abstract:        {}", braces(&c.abstract_sets));
        }
    }
    match r.first_failure() {
        None => out.push_str("verified\n"),
        Some(f) => {
            let _ = writeln!(out, "not verified; first counterexample: {f}");
        }
    }
    out
}

pub fn verify(input: &InputArgs, mapping: &MappingArg) -> Result<u8> {
    let loaded = load(input)?;
    let m = loaded.required_mapping(mapping)?;
    let verifier = Verifier::new(&loaded.program, loaded.family()?, loaded.limits)?;
    let report = verifier.check(&m)?;
    match input.format {
        Format::Text => print!("{}", report_text(&report)),
        Format::Json => print_json(versioned(serde_json::to_value(&report)?)),
    }
    Ok(if report.verified { 0 } else { 1 })
}

pub fn abstract_(input: &InputArgs) -> Result<u8> {
    let loaded = load(input)?;
    let family = loaded.family()?;
    let verifier = Verifier::new(&loaded.program, family, loaded.limits)?;
    let discovery = Discovery::new(&verifier, family);
    let m = discovery.find_removals(AbstractionMapping::identity())?;
    let m = discovery.find_clusters(m)?;
    let before = rule_count(verifier.base());
    let after = rule_count(&apply_to_program(&m, verifier.base()));
    match input.format {
        Format::Text => {
            print!("{m}");
            println!(
                "% {} removed, {} clusters, rules {before} -> {after}",
                m.removals.len(),
                m.clusters.len()
            );
        }
        Format::Json => {
            let clusters: Vec<Value> = m.clusters.iter().map(|c| json!({"sources": c.sources, "target": c.target})).collect();
            print_json(versioned(json!({
                "mapping": m.to_string(),
                "removals": m.removals,
                "clusters": clusters,
                "rules_before": before,
                "rules_after": after,
            })));
        }
    }
    Ok(0)
}

pub fn apply(input: &InputArgs, mapping: &MappingArg) -> Result<u8> {
    let loaded = load(input)?;
    let m = loaded.required_mapping(mapping)?;
    let domain = loaded.family.as_ref().map(|f| f.all_atoms()).unwrap_or_default();
    let base = ground_with_domain(&loaded.program, &BTreeSet::new(), &domain, loaded.limits.grounder()).map_err(Error::from)?;
    let abs = apply_to_program(&m, &base);
    match input.format {
        Format::Text => print!("{abs}"),
        Format::Json => {
            let rules: Vec<String> = abs.to_string().lines().map(str::to_string).collect();
            print_json(versioned(json!({"rules": rules})));
        }
    }
    Ok(0)
}

fn stats_json_of(s: &TreeStats) -> Value {
    serde_json::to_value(s).expect("stats serialize")
}

fn stats_line(label: &str, s: &TreeStats) -> String {
    format!("% {label}: {} nodes, depth {}, {} leaves\n", s.node_count, s.depth, s.leaf_count)
}

fn not_in_answer_set(e: Error, query: &GroundAtom) -> Error {
    match e {
        Error::Explain(ExplainError::UnknownAtom(_)) => Error::Explain(ExplainError::NotInAnswerSet(query.to_string())),
        other => other,
    }
}

pub fn explain(input: &InputArgs, mapping: &MappingArg, query: Option<&str>, model: Option<usize>) -> Result<u8> {
    let loaded = load(input)?;
    let query = loaded.query(query)?;
    let (_, facts) = loaded.selected(input.instance.as_deref())?;
    let Some(m) = loaded.mapping(mapping)? else {
        let gp = ground_with_domain(&loaded.program, &facts, &BTreeSet::new(), loaded.limits.grounder()).map_err(Error::from)?;
        let sets = solve_gp(&gp, &loaded)?;
        let chosen = select_model(&sets, model).map_err(Error::from)?;
        let tree = explain_tree(&gp, chosen, &query).map_err(|e| not_in_answer_set(e.into(), &query))?;
        match input.format {
            Format::Text => print!("{}", tree.render_text()),
            Format::Json => print_json(versioned(json!({
                "query": query,
                "default": {"tree": tree.to_json(), "stats": stats_json_of(&tree.stats())},
            }))),
        }
        return Ok(0);
    };
    let pair = explain_abstract(&loaded.program, &facts, &m, &query, model, loaded.limits).map_err(|e| not_in_answer_set(e, &query))?;
    let empty = TreeStats { node_count: 0, depth: 0, leaf_count: 0 };
    let (abs_tree, abs_stats) = match &pair.abstracted {
        AbstractSide::Tree(t) => (Some(t), t.stats()),
        AbstractSide::Removed => (None, empty),
    };
    match input.format {
        Format::Text => {
            let mut out = String::from("% default\n");
            out.push_str(&pair.default.render_text());
            out.push_str("% abstracted\n");
            match abs_tree {
                Some(t) => out.push_str(&t.render_text()),
                None => out.push_str("% query removed by the mapping\n"),
            }
            out.push_str(&stats_line("default", &pair.default.stats()));
            out.push_str(&stats_line("abstracted", &abs_stats));
            print!("{out}");
        }
        Format::Json => print_json(versioned(json!({
            "query": query,
            "default": {"tree": pair.default.to_json(), "stats": stats_json_of(&pair.default.stats())},
            "abstracted": {"tree": abs_tree.map(ExplanationTree::to_json), "stats": stats_json_of(&abs_stats)},
        }))),
    }
    Ok(0)
}

pub fn stats(input: &InputArgs, mapping: &MappingArg, query: Option<&str>) -> Result<u8> {
    let loaded = load(input)?;
    let query = loaded.query(query)?;
    let m = loaded.mapping(mapping)?.unwrap_or_else(AbstractionMapping::identity);
    let family = loaded.family()?;
    let verifier = Verifier::new(&loaded.program, family, loaded.limits)?;
    if !verifier.accepts(&m)? {
        return Err(Error::Explain(ExplainError::Unverified).into());
    }
    let before = rule_count(verifier.base());
    let after = rule_count(&apply_to_program(&m, verifier.base()));
    let rows = compare(&loaded.program, family, &m, &query, loaded.limits)?;
    match input.format {
        Format::Text => {
            print!("{}", stats_csv(&rows));
            println!("% program rules: {before} -> {after}");
        }
        Format::Json => {
            let mut v = stats_json(&rows);
            v["program_rules"] = json!({"before": before, "after": after, "reduction": before as i64 - after as i64});
            print_json(versioned(v));
        }
    }
    Ok(0)
}

pub fn corpus_list() -> Result<u8> {
    for d in DOMAINS {
        let files: Vec<String> = d.files().iter().map(|(f, _)| format!("{f} ({})", d.provenance_of(f).expect("provenance"))).collect();
        println!("{}: {}", d.name, files.join(", "));
    }
    Ok(0)
}

pub fn corpus_extract(name: &str, out: &Path) -> Result<u8> {
    let d = load_domain(name)?;
    let dir = out.join(d.name);
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    for (file, text) in d.files() {
        std::fs::write(dir.join(file), text).map_err(Error::from)?;
        println!("{}", dir.join(file).display());
    }
    Ok(0)
}

pub fn fixtures(out: &Path) -> Result<u8> {
    if out.is_file() {
        return usage(format!("{} is a file", out.display()));
    }
    for rel in regenerate_fixtures(out)? {
        println!("{rel}");
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspirrel::error::{MappingError, SolveError};

    fn code_of(e: Error) -> u8 {
        exit_code(&anyhow::Error::from(e))
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(code_of(Error::Explain(ExplainError::NotInAnswerSet("q".into()))), 1);
        assert_eq!(code_of(Error::Explain(ExplainError::Unverified)), 1);
        assert_eq!(code_of(Error::Explain(ExplainError::AmbiguousModel { count: 2 })), 2);
        assert_eq!(code_of(Error::Mapping(MappingError::Overlap("a".into()))), 2);
        assert_eq!(code_of(Error::Solve(SolveError::BudgetExceeded { budget: 1 }).in_instance("f1")), 3);
        assert_eq!(code_of(Error::Ground(GroundError::CapExceeded { cap: 1 })), 3);
        assert_eq!(exit_code(&UsageError("x".into()).into()), 2);
    }
}
