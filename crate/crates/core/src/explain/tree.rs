use serde::Serialize;
use serde_json::{json, Value};

use crate::syntax::GroundAtom;

/// Why a node holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    Fact,
    /// Chosen by the choice rule at `index` in the ground program.
    Choice { index: usize, line: Option<usize> },
    /// Derived by the rule at `index` in the ground program.
    Rule { index: usize, line: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationTree {
    pub atom: GroundAtom,
    pub support: Support,
    pub children: Vec<ExplanationTree>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub node_count: usize,
    pub depth: usize,
    pub leaf_count: usize,
}

impl ExplanationTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// One line per node: `|__atom` under one `| ` per level of nesting.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"| ".repeat(depth));
        out.push_str("|__");
        out.push_str(&self.atom.to_string());
        out.push('\n');
        for child in &self.children {
            child.render_into(depth + 1, out);
        }
    }

    pub fn stats(&self) -> TreeStats {
        let mut stats = TreeStats { node_count: 0, depth: 0, leaf_count: 0 };
        self.walk(0, &mut |node, depth| {
            stats.node_count += 1;
            stats.depth = stats.depth.max(depth);
            if node.is_leaf() {
                stats.leaf_count += 1;
            }
        });
        stats
    }

    /// Pre-order traversal with depth.
    pub fn walk<F: FnMut(&ExplanationTree, usize)>(&self, depth: usize, f: &mut F) {
        f(self, depth);
        for child in &self.children {
            child.walk(depth + 1, f);
        }
    }

    /// `{atom, rule, children}`; `rule` is the source line of the justifying
    /// rule, or `"fact"`/`"choice"` for leaves, which also carry `leaf`.
    pub fn to_json(&self) -> Value {
        let children: Vec<Value> = self.children.iter().map(ExplanationTree::to_json).collect();
        match &self.support {
            Support::Fact => json!({"atom": self.atom, "rule": "fact", "leaf": "fact", "children": children}),
            Support::Choice { line, .. } => {
                json!({"atom": self.atom, "rule": "choice", "leaf": "choice", "line": line, "children": children})
            }
            Support::Rule { line, .. } => json!({"atom": self.atom, "rule": line, "children": children}),
        }
    }
}
