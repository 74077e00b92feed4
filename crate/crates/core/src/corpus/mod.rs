//! Embedded example domains: programs (`.lp`), instance families (`.chi`)
//! and reference mappings (`.map`), plus the fixture generator built on
//! them.

mod fixtures;

use std::fmt;

use crate::abstraction::{parse_mapping, AbstractionMapping};
use crate::error::{Error, Result};
use crate::syntax::{parse_ground_atom, parse_instances, parse_program, GroundAtom, InstanceFamily, Program};

pub use fixtures::{regenerate_fixtures, render_fixtures};

/// Where a file's content comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Transcribed as printed, up to concrete syntax.
    Verbatim,
    /// Printed rules plus additions needed to make the domain run; added
    /// rules are marked with a `% completed` comment.
    Completed,
    /// Not printed; built to follow the described design.
    Reconstructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Verbatim => "verbatim",
            Provenance::Completed => "completed",
            Provenance::Reconstructed => "reconstructed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainBundle {
    pub name: &'static str,
    pub program: &'static str,
    pub instances: &'static str,
    pub reference_mapping: Option<&'static str>,
    /// Further mapping files, by file name.
    pub extra_mappings: &'static [(&'static str, &'static str)],
    /// The atom the domain classifies or plans for.
    pub query: &'static str,
    pub provenance: &'static [(&'static str, Provenance)],
}

const FLOWER_EX3: DomainBundle = DomainBundle {
    name: "flower-ex3",
    program: include_str!("../../corpus/flower-ex3/program.lp"),
    instances: include_str!("../../corpus/flower-ex3/instances.chi"),
    reference_mapping: Some(include_str!("../../corpus/flower-ex3/reference.map")),
    extra_mappings: &[("bad-sand-cluster.map", include_str!("../../corpus/flower-ex3/bad-sand-cluster.map"))],
    query: "scent",
    provenance: &[
        ("program.lp", Provenance::Verbatim),
        ("instances.chi", Provenance::Verbatim),
        ("reference.map", Provenance::Verbatim),
        ("bad-sand-cluster.map", Provenance::Completed),
    ],
};

const FLOWER_STUDY: DomainBundle = DomainBundle {
    name: "flower-study",
    program: include_str!("../../corpus/flower-study/program.lp"),
    instances: include_str!("../../corpus/flower-study/instances.chi"),
    reference_mapping: Some(include_str!("../../corpus/flower-study/reference.map")),
    extra_mappings: &[],
    query: "scent",
    provenance: &[
        ("program.lp", Provenance::Completed),
        ("instances.chi", Provenance::Reconstructed),
        ("reference.map", Provenance::Reconstructed),
    ],
};

const CACTUS: DomainBundle = DomainBundle {
    name: "cactus",
    program: include_str!("../../corpus/cactus/program.lp"),
    instances: include_str!("../../corpus/cactus/instances.chi"),
    reference_mapping: Some(include_str!("../../corpus/cactus/reference.map")),
    extra_mappings: &[],
    query: "slowGrowth(c1)",
    provenance: &[
        ("program.lp", Provenance::Completed),
        ("instances.chi", Provenance::Reconstructed),
        ("reference.map", Provenance::Reconstructed),
    ],
};

const MUSHROOM: DomainBundle = DomainBundle {
    name: "mushroom",
    program: include_str!("../../corpus/mushroom/program.lp"),
    instances: include_str!("../../corpus/mushroom/instances.chi"),
    reference_mapping: Some(include_str!("../../corpus/mushroom/reference.map")),
    extra_mappings: &[],
    query: "tolerant(m1)",
    provenance: &[
        ("program.lp", Provenance::Reconstructed),
        ("instances.chi", Provenance::Reconstructed),
        ("reference.map", Provenance::Reconstructed),
    ],
};

const BLOCKSWORLD: DomainBundle = DomainBundle {
    name: "blocksworld",
    program: include_str!("../../corpus/blocksworld/program.lp"),
    instances: include_str!("../../corpus/blocksworld/instances.chi"),
    reference_mapping: None,
    extra_mappings: &[],
    query: "holds(on(a,b),3)",
    provenance: &[("program.lp", Provenance::Completed), ("instances.chi", Provenance::Verbatim)],
};

/// Every bundle, in a fixed order.
pub const DOMAINS: [DomainBundle; 5] = [FLOWER_EX3, FLOWER_STUDY, CACTUS, MUSHROOM, BLOCKSWORLD];

/// `flower` is short for `flower-ex3`.
pub fn load_domain(name: &str) -> Result<DomainBundle> {
    let name = if name == "flower" { "flower-ex3" } else { name };
    DOMAINS.iter().find(|d| d.name == name).cloned().ok_or_else(|| Error::UnknownDomain(name.to_string()))
}

pub fn domain_names() -> impl Iterator<Item = &'static str> {
    DOMAINS.iter().map(|d| d.name)
}

impl DomainBundle {
    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| Error::Domain { domain: self.name.to_string(), source: Box::new(e) })
    }

    pub fn parse_program(&self) -> Result<Program> {
        self.wrap(parse_program(self.program).map_err(Error::from))
    }

    pub fn parse_instances(&self) -> Result<InstanceFamily> {
        self.wrap(parse_instances(self.instances).map_err(Error::from))
    }

    pub fn reference(&self) -> Result<Option<AbstractionMapping>> {
        self.reference_mapping.map(|text| self.wrap(parse_mapping(text).map_err(Error::from))).transpose()
    }

    pub fn query_atom(&self) -> GroundAtom {
        parse_ground_atom(self.query).expect("bundle query parses")
    }

    /// All files of the bundle as (file name, content).
    pub fn files(&self) -> Vec<(&'static str, &'static str)> {
        let mut out = vec![("program.lp", self.program), ("instances.chi", self.instances)];
        if let Some(m) = self.reference_mapping {
            out.push(("reference.map", m));
        }
        out.extend(self.extra_mappings.iter().copied());
        out
    }

    pub fn provenance_of(&self, file: &str) -> Option<Provenance> {
        self.provenance.iter().find(|(f, _)| *f == file).map(|(_, p)| *p)
    }
}
