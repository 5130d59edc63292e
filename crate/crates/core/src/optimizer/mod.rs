//! Association search: the partial-update optimality test, the greedy
//! assignment map, relay selection, the strongest-cell baseline, and an
//! exhaustive oracle.

mod brute;
mod improvement;
mod selection;

pub use brute::{brute_force, BruteForceOutcome, DEFAULT_SEARCH_LIMIT};
pub use improvement::{async_fixed_point, check_improvement, check_improvement_from, g_update, ImprovementVerdict};
pub use selection::{assign, assign_sticky, baseline_association, relay_selection, SelectionOutcome};

use serde::{Deserialize, Serialize};

use crate::coupling::FixedPointConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{NodeId, Scenario};

/// How relay selection picks the update set `t` around the changed nodes `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetPolicy {
    /// `t = l`.
    #[default]
    ExactL,
    /// `t` = every node.
    All,
    /// Start at `t = l` and add every node whose frozen load would be
    /// exceeded, until the check is conclusive.
    Expand,
}

impl std::str::FromStr for SubsetPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact_l" | "exact-l" => Ok(Self::ExactL),
            "all" => Ok(Self::All),
            "expand" => Ok(Self::Expand),
            other => Err(Error::InvalidParams(format!("unknown subset policy {other:?}"))),
        }
    }
}

/// Association every candidate is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferencePolicy {
    /// Always the initial association.
    #[default]
    Fixed,
    /// The most recently accepted association.
    Incumbent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmConfig<T> {
    /// Maximum number of rounds.
    pub eta: usize,
    /// Margin by which the candidate's energy sum must undercut the reference.
    pub eps1: T,
    /// Slack allowed when comparing frozen loads.
    pub eps2: T,
    pub subset_policy: SubsetPolicy,
    pub reference: ReferencePolicy,
    /// Let a node keep its current cell when it ties for the minimum in the
    /// greedy reassignment instead of falling to the lowest id.
    pub keep_on_tie: bool,
    pub fixed_point: FixedPointConfig<T>,
}

impl<T: Scalar> Default for AlgorithmConfig<T> {
    fn default() -> Self {
        Self {
            eta: 50,
            eps1: T::lit(1e-9),
            eps2: T::lit(1e-9),
            subset_policy: SubsetPolicy::default(),
            reference: ReferencePolicy::default(),
            keep_on_tie: false,
            fixed_point: FixedPointConfig::default(),
        }
    }
}

impl<T: Scalar> AlgorithmConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.eta == 0 {
            return Err(Error::InvalidParams("eta must be at least 1".into()));
        }
        if !(self.eps1 >= T::zero() && self.eps2 >= T::zero()) {
            return Err(Error::InvalidParams("tolerances must be non-negative".into()));
        }
        if !(self.fixed_point.tol > T::zero()) || self.fixed_point.max_iter == 0 {
            return Err(Error::InvalidParams("fixed-point tol and max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Subset of nodes (UEs and relays).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSubset {
    members: Vec<bool>,
    len: usize,
}

impl NodeSubset {
    pub fn empty<T: Scalar>(s: &Scenario<T>) -> Self {
        Self { members: vec![false; s.n_nodes()], len: 0 }
    }

    pub fn all<T: Scalar>(s: &Scenario<T>) -> Self {
        Self { members: vec![true; s.n_nodes()], len: s.n_nodes() }
    }

    pub fn from_nodes<T: Scalar>(s: &Scenario<T>, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut t = Self::empty(s);
        for j in nodes {
            t.insert(j);
        }
        t
    }

    pub fn insert(&mut self, j: NodeId) -> bool {
        let fresh = !self.members[j.0];
        if fresh {
            self.members[j.0] = true;
            self.len += 1;
        }
        fresh
    }

    #[inline]
    pub fn contains(&self, j: NodeId) -> bool {
        self.members[j.0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().enumerate().filter(|(_, m)| **m).map(|(j, _)| NodeId(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_parsing() {
        assert_eq!("exact_l".parse::<SubsetPolicy>().unwrap(), SubsetPolicy::ExactL);
        assert_eq!("all".parse::<SubsetPolicy>().unwrap(), SubsetPolicy::All);
        assert_eq!("expand".parse::<SubsetPolicy>().unwrap(), SubsetPolicy::Expand);
        assert!("some".parse::<SubsetPolicy>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(AlgorithmConfig::<f64>::default().validate().is_ok());
        let cfg = AlgorithmConfig::<f64> { eta: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = AlgorithmConfig::<f64> { eps1: -1.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
