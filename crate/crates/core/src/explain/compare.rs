use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::abstraction::{AbstractionMapping, Limits};
use crate::error::Result;
use crate::solver::solve;
use crate::syntax::{ground_with_domain, GroundAtom, InstanceFamily, Program};

use super::{explain_abstract, AbstractSide, TreeStats};

/// Tree sizes for one instance. A query mapped to ⊤ has an empty
/// abstracted tree (all counts zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub instance: String,
    pub default: TreeStats,
    pub abstracted: TreeStats,
}

impl StatsRow {
    pub fn node_reduction(&self) -> i64 {
        self.default.node_count as i64 - self.abstracted.node_count as i64
    }

    pub fn depth_reduction(&self) -> i64 {
        self.default.depth as i64 - self.abstracted.depth as i64
    }
}

/// Default and abstracted tree sizes for `query` on every instance where it
/// holds (in the first answer set containing it). Instances where the query
/// is false have no tree and no row.
pub fn compare(
    program: &Program,
    chi: &InstanceFamily,
    m: &AbstractionMapping,
    query: &GroundAtom,
    limits: Limits,
) -> Result<Vec<StatsRow>> {
    let mut rows = Vec::new();
    for (name, facts) in chi.iter() {
        let row = || -> Result<Option<StatsRow>> {
            let gp = ground_with_domain(program, facts, &BTreeSet::new(), limits.grounder())?;
            let sets = solve(&gp, &limits.solver())?;
            let Some(id) = gp.atoms.get(query) else {
                return Ok(None);
            };
            let Some(k) = sets.iter().position(|s| s.contains(id)) else {
                return Ok(None);
            };
            let pair = explain_abstract(program, facts, m, query, Some(k), limits)?;
            let abstracted = match &pair.abstracted {
                AbstractSide::Tree(t) => t.stats(),
                AbstractSide::Removed => TreeStats { node_count: 0, depth: 0, leaf_count: 0 },
            };
            Ok(Some(StatsRow { instance: name.to_string(), default: pair.default.stats(), abstracted }))
        };
        if let Some(r) = row().map_err(|e| e.in_instance(name))? {
            rows.push(r);
        }
    }
    Ok(rows)
}

const HEADER: &str = "instance,default_nodes,abstract_nodes,node_reduction,default_depth,abstract_depth,depth_reduction";

/// One row per instance plus a `total` row of sums.
pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    let (mut dn, mut an, mut dd, mut ad) = (0, 0, 0, 0);
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.instance,
            r.default.node_count,
            r.abstracted.node_count,
            r.node_reduction(),
            r.default.depth,
            r.abstracted.depth,
            r.depth_reduction()
        );
        dn += r.default.node_count as i64;
        an += r.abstracted.node_count as i64;
        dd += r.default.depth as i64;
        ad += r.abstracted.depth as i64;
    }
    let _ = writeln!(out, "total,{dn},{an},{},{dd},{ad},{}", dn - an, dd - ad);
    out
}

pub fn stats_json(rows: &[StatsRow]) -> Value {
    let node_reduction: i64 = rows.iter().map(StatsRow::node_reduction).sum();
    let depth_reduction: i64 = rows.iter().map(StatsRow::depth_reduction).sum();
    json!({
        "rows": rows,
        "total": {"node_reduction": node_reduction, "depth_reduction": depth_reduction},
    })
}
