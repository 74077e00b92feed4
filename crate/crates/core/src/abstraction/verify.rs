use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{solve, SolverConfig, DEFAULT_NODE_BUDGET};
use crate::syntax::{ground_with_domain, GroundAtom, GroundProgram, GrounderConfig, InstanceFamily, Program, DEFAULT_GROUND_CAP};

use super::{apply_to_program, AbstractionMapping};

/// Resource caps shared by grounding and solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub ground_cap: usize,
    pub node_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { ground_cap: DEFAULT_GROUND_CAP, node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl Limits {
    pub fn grounder(&self) -> GrounderConfig {
        GrounderConfig { rule_cap: self.ground_cap }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig { node_budget: self.node_budget, limit: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceCheck {
    pub instance: String,
    /// `m(AS(P ∪ F))`, canonical order.
    pub concrete_mapped: Vec<Vec<GroundAtom>>,
    /// `AS(m(P) ∪ m(F))`, canonical order.
    #[serde(rename = "abstract")]
    pub abstract_sets: Vec<Vec<GroundAtom>>,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub per_instance: Vec<InstanceCheck>,
    pub verified: bool,
}

impl VerificationReport {
    /// Name of the first instance where the two sides differ.
    pub fn first_failure(&self) -> Option<&str> {
        self.per_instance.iter().find(|c| !c.equal).map(|c| c.instance.as_str())
    }

    pub fn failing(&self) -> Vec<&str> {
        self.per_instance.iter().filter(|c| !c.equal).map(|c| c.instance.as_str()).collect()
    }
}

struct Concrete {
    name: String,
    gp: GroundProgram,
    answer_sets: Vec<BTreeSet<GroundAtom>>,
}

/// Grounds and solves every instance once, then checks any number of
/// mappings against the cached concrete answer sets.
///
/// Every instance is grounded with the union of all instance facts as the
/// domain, so all ground programs share the same rules.
pub struct Verifier {
    limits: Limits,
    universe: BTreeSet<GroundAtom>,
    base: GroundProgram,
    instances: Vec<Concrete>,
}

fn canonical(sets: impl IntoIterator<Item = BTreeSet<GroundAtom>>) -> Vec<Vec<GroundAtom>> {
    let all: BTreeSet<Vec<GroundAtom>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    all.into_iter().collect()
}

impl Verifier {
    pub fn new(program: &Program, chi: &InstanceFamily, limits: Limits) -> Result<Self> {
        let domain = chi.all_atoms();
        let base = ground_with_domain(program, &BTreeSet::new(), &domain, limits.grounder())?;
        let mut universe: BTreeSet<GroundAtom> = base.atoms.user_atoms().map(|(_, a)| a.clone()).collect();
        universe.extend(domain.iter().cloned());
        let mut instances = Vec::with_capacity(chi.len());
        for (name, facts) in chi.iter() {
            let run = || -> Result<Concrete> {
                let gp = ground_with_domain(program, facts, &domain, limits.grounder())?;
                let sets = solve(&gp, &limits.solver())?;
                let answer_sets = sets.atom_sets(&gp.atoms).into_iter().map(|s| s.into_iter().collect()).collect();
                Ok(Concrete { name: name.to_string(), gp, answer_sets })
            };
            instances.push(run().map_err(|e| e.in_instance(name))?);
        }
        Ok(Verifier { limits, universe, base, instances })
    }

    /// Atoms of the program (grounded over all instances) and of the instances.
    pub fn universe(&self) -> &BTreeSet<GroundAtom> {
        &self.universe
    }

    /// Admits further atoms into the universe, e.g. atoms a mapping names
    /// that occur in other instances than the ones being checked.
    pub fn widen_universe(&mut self, atoms: impl IntoIterator<Item = GroundAtom>) {
        self.universe.extend(atoms);
    }

    /// The program grounded without facts, over the instance domain.
    pub fn base(&self) -> &GroundProgram {
        &self.base
    }

    pub fn instance_programs(&self) -> impl Iterator<Item = (&str, &GroundProgram)> {
        self.instances.iter().map(|c| (c.name.as_str(), &c.gp))
    }

    /// Concrete answer sets of one instance, canonical order.
    pub fn answer_sets(&self, instance: &str) -> Option<Vec<Vec<GroundAtom>>> {
        self.instances.iter().find(|c| c.name == instance).map(|c| canonical(c.answer_sets.iter().cloned()))
    }

    fn attach(&self, m: &AbstractionMapping) -> Result<AbstractionMapping> {
        let m = m.clone().with_universe(self.universe.clone());
        m.validate()?;
        Ok(m)
    }

    fn check_one(&self, m: &AbstractionMapping, c: &Concrete) -> Result<InstanceCheck> {
        let concrete_mapped = canonical(c.answer_sets.iter().map(|s| super::apply_to_atoms(m, s)));
        let abs = apply_to_program(m, &c.gp);
        let sets = solve(&abs, &self.limits.solver()).map_err(|e| Error::from(e).in_instance(&c.name))?;
        let abstract_sets = canonical(sets.atom_sets(&abs.atoms).into_iter().map(|s| s.into_iter().collect()));
        let equal = concrete_mapped == abstract_sets;
        Ok(InstanceCheck { instance: c.name.clone(), concrete_mapped, abstract_sets, equal })
    }

    /// Full report over every instance.
    pub fn check(&self, m: &AbstractionMapping) -> Result<VerificationReport> {
        let m = self.attach(m)?;
        let per_instance = self.instances.iter().map(|c| self.check_one(&m, c)).collect::<Result<Vec<_>>>()?;
        let verified = per_instance.iter().all(|c| c.equal);
        Ok(VerificationReport { per_instance, verified })
    }

    /// Like [`Verifier::check`] but stops at the first failing instance.
    pub fn accepts(&self, m: &AbstractionMapping) -> Result<bool> {
        let m = self.attach(m)?;
        for c in &self.instances {
            if !self.check_one(&m, c)?.equal {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Checks `m(AS(P ∪ F)) = AS(m(P) ∪ m(F))` for every `F ∈ chi`.
pub fn verify(program: &Program, chi: &InstanceFamily, m: &AbstractionMapping) -> Result<VerificationReport> {
    Verifier::new(program, chi, Limits::default())?.check(m)
}
