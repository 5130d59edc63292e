//! Load coupling: link topology, SINR, per-link load, fixed points and energy.

mod solver;
mod topology;

pub use solver::{
    apply_f, cell_load, energy, fixed_point, fixed_point_on, iterate_masked, load_required, sinr,
    FixedPointConfig, FixedPointResult,
};
pub use topology::{build_topology, LinkTopology};

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{CellId, NodeId, Scenario};

/// Serving cell of every UE and donor macro of every relay, in node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Association {
    serving: Vec<CellId>,
}

impl Association {
    pub fn new<T: Scalar>(s: &Scenario<T>, serving: Vec<CellId>) -> Result<Self> {
        if serving.len() != s.n_nodes() {
            return Err(Error::AssociationLength { expected: s.n_nodes(), got: serving.len() });
        }
        for (j, &c) in serving.iter().enumerate() {
            if !s.is_candidate(NodeId(j), c) {
                return Err(Error::NotCandidate { node: j, cell: c.0 });
            }
        }
        Ok(Self { serving })
    }

    /// Builds an association by asking `pick` for every node's cell.
    pub fn from_fn<T: Scalar>(s: &Scenario<T>, pick: impl FnMut(NodeId) -> CellId) -> Result<Self> {
        Self::new(s, s.nodes().map(pick).collect())
    }

    /// Every node on its lowest-id candidate.
    pub fn first_candidates<T: Scalar>(s: &Scenario<T>) -> Self {
        Self { serving: s.nodes().map(|j| s.candidates(j)[0]).collect() }
    }

    #[inline]
    pub fn get(&self, node: NodeId) -> CellId {
        self.serving[node.0]
    }

    pub fn as_slice(&self) -> &[CellId] {
        &self.serving
    }

    pub fn len(&self) -> usize {
        self.serving.len()
    }

    pub fn is_empty(&self) -> bool {
        self.serving.is_empty()
    }

    /// Nodes whose cell differs between `self` and `other`.
    pub fn differing_nodes(&self, other: &Association) -> Vec<NodeId> {
        self.serving
            .iter()
            .zip(&other.serving)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(j, _)| NodeId(j))
            .collect()
    }

    /// Relay cells serving at least one UE.
    pub fn active_relays<T: Scalar>(&self, s: &Scenario<T>) -> Vec<CellId> {
        let mut active: Vec<CellId> = self.serving[..s.n_ue()]
            .iter()
            .copied()
            .filter(|&c| s.relay_node_of(c).is_some())
            .collect();
        active.sort_unstable();
        active.dedup();
        active
    }
}

/// One load value per candidate link, aligned with [`Scenario::links`].
#[derive(Debug, Clone, PartialEq)]
pub struct LoadVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> LoadVector<T> {
    pub fn zeros(s: &Scenario<T>) -> Self {
        Self::filled(s, T::zero())
    }

    pub fn filled(s: &Scenario<T>, v: T) -> Self {
        Self { values: vec![v; s.n_links()] }
    }

    pub fn from_vec(s: &Scenario<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != s.n_links() {
            return Err(Error::InvalidParams(format!(
                "load vector has {} entries, scenario has {} candidate links",
                values.len(),
                s.n_links()
            )));
        }
        Ok(Self { values })
    }

    pub fn get(&self, s: &Scenario<T>, cell: CellId, node: NodeId) -> Option<T> {
        s.link_index(cell, node).map(|i| self.values[i])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self { values: self.values.iter().map(|&v| v * factor).collect() }
    }

    pub fn sup_distance(&self, other: &Self) -> T {
        crate::scalar::sup_distance(&self.values, &other.values)
    }
}

impl<T> Index<usize> for LoadVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

impl<T> IndexMut<usize> for LoadVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.values[i]
    }
}
