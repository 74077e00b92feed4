use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use serde_json::json;

use crate::abstraction::{find_clusters, find_removals, parse_mapping, AbstractionMapping, Limits, Verifier};
use crate::error::Result;
use crate::explain::{compare, explain, explain_abstract, stats_csv, AbstractSide};
use crate::solver::solve;
use crate::syntax::{ground_with_domain, InstanceFamily, Program};
use crate::SCHEMA_VERSION;

use super::{DomainBundle, DOMAINS};

/// Every fixture file as (relative path, content), in a fixed order.
pub fn render_fixtures() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for d in DOMAINS {
        render_domain(&d, &mut out).map_err(|e| crate::Error::Domain { domain: d.name.to_string(), source: Box::new(e) })?;
    }
    Ok(out)
}

/// Writes [`render_fixtures`] under `dir`, creating one directory per domain.
pub fn regenerate_fixtures(dir: &Path) -> Result<Vec<String>> {
    let files = render_fixtures()?;
    let mut written = Vec::new();
    for (rel, content) in files {
        let path = dir.join(&rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, content)?;
        written.push(rel);
    }
    Ok(written)
}

fn render_domain(d: &DomainBundle, out: &mut Vec<(String, String)>) -> Result<()> {
    let program = d.parse_program()?;
    let chi = d.parse_instances()?;
    let limits = Limits::default();
    let file = |out: &mut Vec<(String, String)>, name: &str, content: String| {
        out.push((format!("{}/{name}", d.name), content));
    };

    file(out, "answer_sets.txt", answer_sets_text(&program, &chi, limits)?);

    let verifier = Verifier::new(&program, &chi, limits)?;
    let report = |m: &AbstractionMapping| -> Result<String> {
        let r = verifier.check(m)?;
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["schema_version"] = json!(SCHEMA_VERSION);
        Ok(serde_json::to_string_pretty(&v).expect("json") + "\n")
    };
    file(out, "verify_identity.json", report(&AbstractionMapping::identity())?);

    let reference = d.reference()?;
    if let Some(m) = &reference {
        file(out, "verify_reference.json", report(m)?);
        let base = find_removals(&program, &chi)?;
        let discovered = find_clusters(&program, &chi, base)?;
        file(out, "discovered.map", discovered.to_string());
        file(out, "stats.csv", stats_csv(&compare(&program, &chi, m, &d.query_atom(), limits)?));
    }
    for (name, text) in d.extra_mappings {
        let m = parse_mapping(text)?;
        let stem = name.trim_end_matches(".map");
        file(out, &format!("verify_{stem}.json"), report(&m)?);
    }
    file(out, "trees.txt", trees_text(d, &program, &chi, reference.as_ref(), limits)?);

    if d.name == "flower-ex3" {
        let m = reference.as_ref().expect("flower-ex3 has a reference mapping");
        let facts = chi.get("f1").expect("instance f1");
        let pair = explain_abstract(&program, facts, m, &d.query_atom(), None, limits)?;
        file(out, "tree_default.txt", pair.default.render_text());
        if let AbstractSide::Tree(t) = pair.abstracted {
            file(out, "tree_abstract.txt", t.render_text());
        }
    }
    Ok(())
}

fn answer_sets_text(program: &Program, chi: &InstanceFamily, limits: Limits) -> Result<String> {
    let mut text = String::new();
    for (name, facts) in chi.iter() {
        let gp = ground_with_domain(program, facts, &BTreeSet::new(), limits.grounder()).map_err(|e| crate::Error::from(e).in_instance(name))?;
        let sets = solve(&gp, &limits.solver()).map_err(|e| crate::Error::from(e).in_instance(name))?;
        let _ = writeln!(text, "% {name}: {} answer set(s)", sets.len());
        text.push_str(&sets.to_text(&gp));
    }
    Ok(text)
}

fn trees_text(
    d: &DomainBundle,
    program: &Program,
    chi: &InstanceFamily,
    m: Option<&AbstractionMapping>,
    limits: Limits,
) -> Result<String> {
    let query = d.query_atom();
    let mut text = String::new();
    for (name, facts) in chi.iter() {
        let gp = ground_with_domain(program, facts, &BTreeSet::new(), limits.grounder())?;
        let sets = solve(&gp, &limits.solver())?;
        let k = gp.atoms.get(&query).and_then(|id| sets.iter().position(|s| s.contains(id)));
        let Some(k) = k else {
            let _ = writeln!(text, "% {name}: {query} does not hold");
            continue;
        };
        let _ = writeln!(text, "% {name}: default");
        match m {
            Some(m) => {
                let pair = explain_abstract(program, facts, m, &query, Some(k), limits).map_err(|e| e.in_instance(name))?;
                text.push_str(&pair.default.render_text());
                let _ = writeln!(text, "% {name}: abstracted");
                match pair.abstracted {
                    AbstractSide::Tree(t) => text.push_str(&t.render_text()),
                    AbstractSide::Removed => text.push_str("(removed)\n"),
                }
            }
            None => text.push_str(&explain(&gp, &sets.sets[k], &query)?.render_text()),
        }
    }
    Ok(text)
}
