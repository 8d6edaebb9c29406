//! Strategies by name.

use thiserror::Error;

use crate::baseline::{AmbushScript, GreedyEvader, GreedyPursuer, RandomCop, RandomEvader, ShadowPursuer, Stationary};
use crate::evasion::HierarchicalRobber;
use crate::hierarchy::HierarchyParams;
use crate::runner::{CopStrategy, RobberStrategy};
use crate::sweep::{LineSweep, Wall};

pub const COP_STRATEGIES: [&str; 6] = ["greedy-pursuer", "shadow-pursuer", "random-cop", "ambush-script", "line-sweep", "wall"];
pub const ROBBER_STRATEGIES: [&str; 4] = ["greedy-evader", "random-evader", "stationary", "hierarchical"];

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown cop strategy {0:?}; known: {list}", list = COP_STRATEGIES.join(", "))]
    UnknownCops(String),
    #[error("unknown robber strategy {0:?}; known: {list}", list = ROBBER_STRATEGIES.join(", "))]
    UnknownRobber(String),
    #[error("{0} needs {1}")]
    Missing(&'static str, &'static str),
    #[error("{0}")]
    Invalid(String),
}

/// Extra inputs some strategies need.
#[derive(Clone, Debug, Default)]
pub struct StrategyOptions {
    pub params: Option<HierarchyParams>,
    pub script: Option<AmbushScript>,
    /// Half-width override for the line sweep.
    pub sweep_l: Option<i64>,
}

pub fn cop_strategy(name: &str, opts: &StrategyOptions) -> Result<Box<dyn CopStrategy + Send>, RegistryError> {
    Ok(match name {
        "greedy-pursuer" => Box::new(GreedyPursuer),
        "shadow-pursuer" => Box::new(ShadowPursuer),
        "random-cop" => Box::new(RandomCop),
        "ambush-script" => Box::new(opts.script.clone().unwrap_or_default()),
        "line-sweep" => Box::new(LineSweep::new(opts.sweep_l)),
        "wall" => Box::new(Wall),
        other => return Err(RegistryError::UnknownCops(other.to_string())),
    })
}

pub fn robber_strategy(name: &str, opts: &StrategyOptions) -> Result<Box<dyn RobberStrategy + Send>, RegistryError> {
    Ok(match name {
        "greedy-evader" => Box::new(GreedyEvader),
        "random-evader" => Box::new(RandomEvader),
        "stationary" => Box::new(Stationary),
        "hierarchical" => {
            let params = opts.params.as_ref().ok_or(RegistryError::Missing("hierarchical", "parameters"))?;
            Box::new(HierarchicalRobber::new(params).map_err(|e| RegistryError::Invalid(e.to_string()))?)
        }
        other => return Err(RegistryError::UnknownRobber(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        let opts = StrategyOptions::default();
        for name in COP_STRATEGIES {
            assert_eq!(cop_strategy(name, &opts).unwrap().name(), name);
        }
        for name in &ROBBER_STRATEGIES[..3] {
            assert_eq!(robber_strategy(name, &opts).unwrap().name(), *name);
        }
        assert!(matches!(robber_strategy("hierarchical", &opts), Err(RegistryError::Missing(..))));
        assert!(matches!(cop_strategy("nope", &opts), Err(RegistryError::UnknownCops(_))));
    }
}
