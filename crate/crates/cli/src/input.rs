use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use anyhow::Result;
use aspirrel::abstraction::{parse_mapping, AbstractionMapping, Limits};
use aspirrel::corpus::{load_domain, DomainBundle};
use aspirrel::syntax::{parse_instances, parse_program, GroundAtom, InstanceFamily, Program};

use crate::{InputArgs, MappingArg};

/// Bad flags or missing inputs; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

pub struct Loaded {
    pub program: Program,
    pub family: Option<InstanceFamily>,
    pub bundle: Option<DomainBundle>,
    pub limits: Limits,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| aspirrel::Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into())
}

pub fn load(input: &InputArgs) -> Result<Loaded> {
    let bundle = input.domain.as_deref().map(load_domain).transpose()?;
    let program = match (&input.program, &bundle) {
        (Some(path), _) => parse_program(&read(path)?).map_err(aspirrel::Error::from)?,
        (None, Some(b)) => b.parse_program()?,
        (None, None) => return usage("give --program or --domain"),
    };
    let family = match (&input.instances, &bundle) {
        (Some(path), _) => Some(parse_instances(&read(path)?).map_err(aspirrel::Error::from)?),
        (None, Some(b)) if input.program.is_none() => Some(b.parse_instances()?),
        _ => None,
    };
    let mut limits = Limits::default();
    if let Some(cap) = input.ground_cap {
        limits.ground_cap = usize::try_from(cap).unwrap_or(usize::MAX);
    }
    if let Some(budget) = input.node_budget {
        limits.node_budget = budget;
    }
    Ok(Loaded { program, family, bundle, limits })
}

impl Loaded {
    pub fn family(&self) -> Result<&InstanceFamily> {
        match &self.family {
            Some(f) => Ok(f),
            None => usage("this command needs --instances or --domain"),
        }
    }

    /// Facts of `--instance`, of the only instance, or none without a family.
    pub fn selected(&self, instance: Option<&str>) -> Result<(Option<String>, BTreeSet<GroundAtom>)> {
        let Some(family) = &self.family else {
            return match instance {
                Some(_) => usage("--instance needs --instances or --domain"),
                None => Ok((None, BTreeSet::new())),
            };
        };
        match instance {
            Some(name) => match family.get(name) {
                Some(facts) => Ok((Some(name.to_string()), facts.clone())),
                None => usage(format!("no instance `{name}`; have {}", family.names().collect::<Vec<_>>().join(", "))),
            },
            None if family.len() == 1 => {
                let (name, facts) = family.iter().next().expect("one instance");
                Ok((Some(name.to_string()), facts.clone()))
            }
            None if family.is_empty() => Ok((None, BTreeSet::new())),
            None => usage(format!("{} instances; choose one with --instance", family.len())),
        }
    }

    pub fn mapping(&self, arg: &MappingArg) -> Result<Option<AbstractionMapping>> {
        let Some(name) = &arg.mapping else { return Ok(None) };
        let path = Path::new(name);
        let text = match &self.bundle {
            Some(b) if !path.exists() => match b.files().into_iter().find(|(f, _)| f == name) {
                Some((_, text)) => text.to_string(),
                None => return usage(format!("no mapping `{name}` in domain {}", b.name)),
            },
            _ => read(path)?,
        };
        Ok(Some(parse_mapping(&text).map_err(aspirrel::Error::from)?))
    }

    pub fn required_mapping(&self, arg: &MappingArg) -> Result<AbstractionMapping> {
        match self.mapping(arg)? {
            Some(m) => Ok(m),
            None => usage("this command needs --mapping"),
        }
    }

    /// `--query`, else the domain's query.
    pub fn query(&self, query: Option<&str>) -> Result<GroundAtom> {
        match (query, &self.bundle) {
            (Some(q), _) => Ok(aspirrel::syntax::parse_ground_atom(q).map_err(aspirrel::Error::from)?),
            (None, Some(b)) => Ok(b.query_atom()),
            (None, None) => usage("give --query"),
        }
    }
}
