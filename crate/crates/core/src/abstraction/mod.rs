//! Removal and clustering mappings over ground atoms, their application to
//! ground programs and interpretations, verification against an instance
//! family, and greedy discovery.
//!
//! A mapping `m` sends removed atoms to ⊤, every source atom of a cluster to
//! the cluster's target, and leaves all other atoms alone. `m` is accepted
//! for a program `P` and a family `χ` when for every `F ∈ χ` the image of
//! the answer sets of `P ∪ F` equals the answer sets of `m(P) ∪ m(F)`.

mod apply;
mod discover;
mod format;
mod verify;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::MappingError;
use crate::syntax::GroundAtom;

pub use apply::{apply_to_atoms, apply_to_program};
pub use discover::{cluster_target_name, find_clusters, find_removals, Discovery};
pub use format::parse_mapping;
pub use verify::{verify, InstanceCheck, Limits, VerificationReport, Verifier};

/// Image of an atom under a mapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Image {
    Top,
    Atom(GroundAtom),
}

impl fmt::Display for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Top => f.write_str("⊤"),
            Image::Atom(a) => write!(f, "{a}"),
        }
    }
}

/// Several atoms collapsed into one. Sources keep their given order, which
/// is also the printed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub sources: Vec<GroundAtom>,
    pub target: GroundAtom,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbstractionMapping {
    pub clusters: Vec<Cluster>,
    pub removals: Vec<GroundAtom>,
    /// The universe the mapping was built for; empty when unknown (e.g.
    /// freshly parsed), in which case no universe checks apply.
    pub universe: BTreeSet<GroundAtom>,
}

impl AbstractionMapping {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.clusters.is_empty() && self.removals.is_empty()
    }

    pub fn with_universe(mut self, universe: BTreeSet<GroundAtom>) -> Self {
        self.universe = universe;
        self
    }

    pub fn remove(mut self, atom: GroundAtom) -> Self {
        self.removals.push(atom);
        self
    }

    pub fn cluster(mut self, sources: Vec<GroundAtom>, target: GroundAtom) -> Self {
        self.clusters.push(Cluster { sources, target });
        self
    }

    /// Whether `atom` is removed or a cluster source.
    pub fn maps(&self, atom: &GroundAtom) -> bool {
        self.removals.contains(atom) || self.clusters.iter().any(|c| c.sources.contains(atom))
    }

    pub fn apply_to_atom(&self, atom: &GroundAtom) -> Image {
        if self.removals.contains(atom) {
            return Image::Top;
        }
        if let Some(c) = self.clusters.iter().find(|c| c.sources.contains(atom)) {
            return Image::Atom(c.target.clone());
        }
        if !self.universe.is_empty() && !self.universe.contains(atom) && !self.is_target(atom) {
            log::warn!("atom `{atom}` is outside the mapping universe; mapped to itself");
        }
        Image::Atom(atom.clone())
    }

    pub fn is_target(&self, atom: &GroundAtom) -> bool {
        self.clusters.iter().any(|c| &c.target == atom)
    }

    /// Atoms of the image universe: unmapped universe atoms plus targets.
    pub fn image_universe(&self) -> BTreeSet<GroundAtom> {
        self.universe
            .iter()
            .filter(|a| !self.maps(a))
            .cloned()
            .chain(self.clusters.iter().map(|c| c.target.clone()))
            .collect()
    }

    /// Checks the structural invariants: disjoint sources and removals,
    /// clusters of at least two atoms, distinct fresh targets, and (when a
    /// universe is attached) mapped atoms inside it.
    /// Removed atoms and cluster sources.
    pub fn source_atoms(&self) -> impl Iterator<Item = &GroundAtom> {
        self.removals.iter().chain(self.clusters.iter().flat_map(|c| c.sources.iter()))
    }

    pub fn validate(&self) -> Result<(), MappingError> {
        let mut seen = HashSet::new();
        for atom in self.source_atoms() {
            if !seen.insert(atom) {
                return Err(MappingError::Overlap(atom.to_string()));
            }
            if !self.universe.is_empty() && !self.universe.contains(atom) {
                return Err(MappingError::OutsideUniverse(atom.to_string()));
            }
        }
        let mut targets = HashSet::new();
        for c in &self.clusters {
            if c.sources.len() < 2 {
                return Err(MappingError::SmallCluster(c.target.to_string()));
            }
            if !targets.insert(&c.target) {
                return Err(MappingError::DuplicateTarget(c.target.to_string()));
            }
            if self.universe.contains(&c.target) && !self.maps(&c.target) {
                return Err(MappingError::TargetCollision(c.target.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AbstractionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.removals {
            writeln!(f, "remove {a}.")?;
        }
        for c in &self.clusters {
            let sources: Vec<String> = c.sources.iter().map(ToString::to_string).collect();
            writeln!(f, "cluster {} => {}.", sources.join(", "), c.target)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> GroundAtom {
        crate::syntax::parse_ground_atom(s).unwrap()
    }

    fn flower() -> AbstractionMapping {
        AbstractionMapping::identity()
            .remove(a("spiky"))
            .cluster(vec![a("habitatWater"), a("habitatMud")], a("habitatWaterOrMud"))
    }

    #[test]
    fn atom_images() {
        let m = flower();
        assert_eq!(m.apply_to_atom(&a("spiky")), Image::Top);
        assert_eq!(m.apply_to_atom(&a("habitatWater")), Image::Atom(a("habitatWaterOrMud")));
        assert_eq!(m.apply_to_atom(&a("habitatMud")), Image::Atom(a("habitatWaterOrMud")));
        assert_eq!(AbstractionMapping::identity().apply_to_atom(&a("scent")), Image::Atom(a("scent")));
    }

    #[test]
    fn validation_errors() {
        assert!(flower().validate().is_ok());
        let overlap = flower().remove(a("habitatMud"));
        assert_eq!(overlap.validate(), Err(MappingError::Overlap("habitatMud".into())));
        let small = AbstractionMapping::identity().cluster(vec![a("p")], a("q"));
        assert!(matches!(small.validate(), Err(MappingError::SmallCluster(_))));
        let dup = AbstractionMapping::identity()
            .cluster(vec![a("p"), a("q")], a("t"))
            .cluster(vec![a("r"), a("s")], a("t"));
        assert!(matches!(dup.validate(), Err(MappingError::DuplicateTarget(_))));
        let universe: BTreeSet<_> = ["p", "q", "t"].iter().map(|s| a(s)).collect();
        let clash = AbstractionMapping::identity().cluster(vec![a("p"), a("q")], a("t")).with_universe(universe.clone());
        assert!(matches!(clash.validate(), Err(MappingError::TargetCollision(_))));
        let outside = AbstractionMapping::identity().remove(a("zzz")).with_universe(universe);
        assert!(matches!(outside.validate(), Err(MappingError::OutsideUniverse(_))));
    }

    #[test]
    fn image_universe_is_unmapped_plus_targets() {
        let universe: BTreeSet<_> = ["spiky", "habitatWater", "habitatMud", "scent"].iter().map(|s| a(s)).collect();
        let m = flower().with_universe(universe);
        let img: Vec<String> = m.image_universe().iter().map(ToString::to_string).collect();
        assert_eq!(img, vec!["habitatWaterOrMud", "scent"]);
    }

    #[test]
    fn display_lists_removals_then_clusters() {
        assert_eq!(flower().to_string(), "remove spiky.\ncluster habitatWater, habitatMud => habitatWaterOrMud.\n");
    }
}
