//! Network instances: cells, UEs, gains, powers, demands and candidate sets.
//!
//! Cells (transmitters) are indexed macro cells first, then relay cells.
//! Nodes (receivers, i.e. everything that gets associated) are indexed UEs
//! first, then relay cells. Relay `k` therefore appears twice: as cell
//! `n_mc + k` and as node `n_ue + k`.

mod gadget;
mod hexnet;
mod io;
mod random;

pub use gadget::{mis_gadget, mis_gadget_with, GadgetParams, GraphInstance};
pub use hexnet::{
    generate_hexnet, noise_per_ru_w, path_loss_db, HexNetParams, PathLossModel, MIN_DISTANCE_M,
};
pub use io::{CandidateRecord, CellKindRecord, CellRecord, GainTable, ScenarioFile, UeRecord};
pub use random::{random_instance, RandomInstanceParams};

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Transmitter index: macro cells `0..n_mc`, relay cells `n_mc..n_mc + n_rc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

/// Receiver index: UEs `0..n_ue`, relay cells `n_ue..n_ue + n_rc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell {}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Macro,
    Relay,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Position<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ue<T> {
    pub position: Position<T>,
    /// Downlink demand in bits per second.
    pub demand_bps: T,
}

/// A candidate link `<cell, node>`; one entry of every load vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CandidateLink {
    pub cell: CellId,
    pub node: NodeId,
}

/// Raw material for [`Scenario::new`].
#[derive(Debug, Clone)]
pub struct ScenarioParts<T> {
    pub macro_cells: Vec<Position<T>>,
    pub relay_cells: Vec<Position<T>>,
    pub ues: Vec<Ue<T>>,
    /// Row-major `n_cells x n_nodes` linear power gains.
    pub gain: Vec<T>,
    /// Per-RU transmit power of each cell in watts.
    pub power: Vec<T>,
    /// Noise power per RU in watts.
    pub noise_w: T,
    pub num_ru: u32,
    pub ru_bandwidth_hz: T,
    /// Candidate cells for each node, in node order.
    pub candidates: Vec<Vec<CellId>>,
}

/// Immutable network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    macro_cells: Vec<Position<T>>,
    relay_cells: Vec<Position<T>>,
    ues: Vec<Ue<T>>,
    gain: Vec<T>,
    power: Vec<T>,
    noise_w: T,
    num_ru: u32,
    ru_bandwidth_hz: T,
    candidates: Vec<Vec<CellId>>,
    links: Vec<CandidateLink>,
    link_offsets: Vec<usize>,
}

impl<T: Scalar> Scenario<T> {
    /// Validates `parts` and freezes them. Candidate lists are sorted by cell id.
    pub fn new(parts: ScenarioParts<T>) -> Result<Self> {
        let ScenarioParts {
            macro_cells,
            relay_cells,
            ues,
            gain,
            power,
            noise_w,
            num_ru,
            ru_bandwidth_hz,
            mut candidates,
        } = parts;
        let n_mc = macro_cells.len();
        let n_rc = relay_cells.len();
        let n_ue = ues.len();
        let n_cells = n_mc + n_rc;
        let n_nodes = n_ue + n_rc;
        let bad = |m: String| Err(Error::InvalidScenario(m));

        if n_mc == 0 {
            return bad("at least one macro cell is required".into());
        }
        if gain.len() != n_cells * n_nodes {
            return bad(format!(
                "gain has {} entries, expected {n_cells} x {n_nodes}",
                gain.len()
            ));
        }
        if power.len() != n_cells {
            return bad(format!("power has {} entries, expected {n_cells}", power.len()));
        }
        if candidates.len() != n_nodes {
            return bad(format!(
                "candidates has {} entries, expected {n_nodes}",
                candidates.len()
            ));
        }
        if !(noise_w > T::zero() && noise_w.is_finite()) {
            return bad("noise must be positive".into());
        }
        if num_ru == 0 {
            return bad("at least one RU per cell is required".into());
        }
        if !(ru_bandwidth_hz > T::zero() && ru_bandwidth_hz.is_finite()) {
            return bad("RU bandwidth must be positive".into());
        }
        if let Some(i) = gain.iter().position(|g| !(*g >= T::zero() && g.is_finite())) {
            return bad(format!("gain entry {i} is negative or not finite"));
        }
        if let Some(i) = power.iter().position(|p| !(*p > T::zero() && p.is_finite())) {
            return bad(format!("power of cell {i} must be positive"));
        }
        if let Some(j) = ues
            .iter()
            .position(|u| !(u.demand_bps > T::zero() && u.demand_bps.is_finite()))
        {
            return bad(format!("demand of UE {j} must be positive"));
        }

        let mut links = Vec::new();
        let mut link_offsets = Vec::with_capacity(n_nodes + 1);
        for (j, cands) in candidates.iter_mut().enumerate() {
            cands.sort_unstable();
            cands.dedup();
            if cands.is_empty() {
                return bad(format!("node {j} has no candidate cell"));
            }
            link_offsets.push(links.len());
            for &c in cands.iter() {
                if c.0 >= n_cells {
                    return bad(format!("node {j}: candidate {} is not a cell", c.0));
                }
                if j >= n_ue && c.0 >= n_mc {
                    return bad(format!("relay node {j}: candidate {} is not a macro cell", c.0));
                }
                if j >= n_ue && c.0 == n_mc + (j - n_ue) {
                    return bad(format!("relay node {j} lists itself as candidate"));
                }
                if power[c.0] * gain[c.0 * n_nodes + j] <= T::zero() {
                    return bad(format!("node {j}: candidate {} has zero received power", c.0));
                }
                links.push(CandidateLink { cell: c, node: NodeId(j) });
            }
        }
        link_offsets.push(links.len());

        Ok(Self {
            macro_cells,
            relay_cells,
            ues,
            gain,
            power,
            noise_w,
            num_ru,
            ru_bandwidth_hz,
            candidates,
            links,
            link_offsets,
        })
    }

    /// Returns the parts this scenario was built from (candidate lists sorted).
    pub fn to_parts(&self) -> ScenarioParts<T> {
        ScenarioParts {
            macro_cells: self.macro_cells.clone(),
            relay_cells: self.relay_cells.clone(),
            ues: self.ues.clone(),
            gain: self.gain.clone(),
            power: self.power.clone(),
            noise_w: self.noise_w,
            num_ru: self.num_ru,
            ru_bandwidth_hz: self.ru_bandwidth_hz,
            candidates: self.candidates.clone(),
        }
    }

    /// Copy of this scenario with every UE demand set to `demand_bps`.
    pub fn with_uniform_demand(&self, demand_bps: T) -> Result<Self> {
        self.with_demands(|_, _| demand_bps)
    }

    /// Copy of this scenario with UE demands replaced by `f(ue index, old demand)`.
    pub fn with_demands(&self, mut f: impl FnMut(usize, T) -> T) -> Result<Self> {
        let mut parts = self.to_parts();
        for (j, ue) in parts.ues.iter_mut().enumerate() {
            ue.demand_bps = f(j, ue.demand_bps);
        }
        Self::new(parts)
    }

    /// Converts every quantity to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Result<Scenario<U>> {
        let c = |v: T| U::lit(v.as_f64());
        let pos = |p: &Position<T>| Position::new(c(p.x), c(p.y));
        Scenario::new(ScenarioParts {
            macro_cells: self.macro_cells.iter().map(pos).collect(),
            relay_cells: self.relay_cells.iter().map(pos).collect(),
            ues: self
                .ues
                .iter()
                .map(|u| Ue { position: pos(&u.position), demand_bps: c(u.demand_bps) })
                .collect(),
            gain: self.gain.iter().copied().map(c).collect(),
            power: self.power.iter().copied().map(c).collect(),
            noise_w: c(self.noise_w),
            num_ru: self.num_ru,
            ru_bandwidth_hz: c(self.ru_bandwidth_hz),
            candidates: self.candidates.clone(),
        })
    }

    pub fn n_mc(&self) -> usize {
        self.macro_cells.len()
    }

    pub fn n_rc(&self) -> usize {
        self.relay_cells.len()
    }

    pub fn n_ue(&self) -> usize {
        self.ues.len()
    }

    pub fn n_cells(&self) -> usize {
        self.n_mc() + self.n_rc()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_ue() + self.n_rc()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.n_cells()).map(CellId)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n_nodes()).map(NodeId)
    }

    pub fn cell_kind(&self, cell: CellId) -> CellKind {
        if cell.0 < self.n_mc() {
            CellKind::Macro
        } else {
            CellKind::Relay
        }
    }

    pub fn is_relay_node(&self, node: NodeId) -> bool {
        node.0 >= self.n_ue()
    }

    /// Node index of the relay operating `cell`, if it is a relay cell.
    pub fn relay_node_of(&self, cell: CellId) -> Option<NodeId> {
        (cell.0 >= self.n_mc() && cell.0 < self.n_cells())
            .then(|| NodeId(self.n_ue() + cell.0 - self.n_mc()))
    }

    /// Cell index of the relay at `node`, if the node is a relay.
    pub fn relay_cell_of(&self, node: NodeId) -> Option<CellId> {
        (node.0 >= self.n_ue() && node.0 < self.n_nodes())
            .then(|| CellId(self.n_mc() + node.0 - self.n_ue()))
    }

    pub fn cell_position(&self, cell: CellId) -> Position<T> {
        match self.cell_kind(cell) {
            CellKind::Macro => self.macro_cells[cell.0],
            CellKind::Relay => self.relay_cells[cell.0 - self.n_mc()],
        }
    }

    pub fn node_position(&self, node: NodeId) -> Position<T> {
        match self.relay_cell_of(node) {
            Some(cell) => self.cell_position(cell),
            None => self.ues[node.0].position,
        }
    }

    pub fn macro_cells(&self) -> &[Position<T>] {
        &self.macro_cells
    }

    pub fn relay_cells(&self) -> &[Position<T>] {
        &self.relay_cells
    }

    pub fn ues(&self) -> &[Ue<T>] {
        &self.ues
    }

    /// Linear power gain from `cell` to `node`.
    #[inline]
    pub fn gain(&self, cell: CellId, node: NodeId) -> T {
        self.gain[cell.0 * self.n_nodes() + node.0]
    }

    /// Row-major `n_cells x n_nodes` gain matrix.
    pub fn gain_matrix(&self) -> &[T] {
        &self.gain
    }

    #[inline]
    pub fn power(&self, cell: CellId) -> T {
        self.power[cell.0]
    }

    pub fn powers(&self) -> &[T] {
        &self.power
    }

    pub fn received_power(&self, cell: CellId, node: NodeId) -> T {
        self.power(cell) * self.gain(cell, node)
    }

    pub fn noise_w(&self) -> T {
        self.noise_w
    }

    pub fn num_ru(&self) -> u32 {
        self.num_ru
    }

    pub fn ru_bandwidth_hz(&self) -> T {
        self.ru_bandwidth_hz
    }

    /// `M * B`: bits per second per unit of spectral efficiency at full load.
    pub fn cell_rate_scale(&self) -> T {
        T::lit(f64::from(self.num_ru)) * self.ru_bandwidth_hz
    }

    /// Demand of a UE node; relay nodes have no own demand.
    pub fn demand(&self, node: NodeId) -> Option<T> {
        self.ues.get(node.0).map(|u| u.demand_bps)
    }

    pub fn candidates(&self, node: NodeId) -> &[CellId] {
        &self.candidates[node.0]
    }

    pub fn is_candidate(&self, node: NodeId, cell: CellId) -> bool {
        self.candidates[node.0].binary_search(&cell).is_ok()
    }

    /// All candidate links, grouped by node in node order.
    pub fn links(&self) -> &[CandidateLink] {
        &self.links
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    /// Positions of `node`'s candidate links inside [`Scenario::links`].
    pub fn node_links(&self, node: NodeId) -> Range<usize> {
        self.link_offsets[node.0]..self.link_offsets[node.0 + 1]
    }

    /// Position of link `<cell, node>` inside [`Scenario::links`].
    pub fn link_index(&self, cell: CellId, node: NodeId) -> Option<usize> {
        self.candidates[node.0]
            .binary_search(&cell)
            .ok()
            .map(|k| self.link_offsets[node.0] + k)
    }

    /// Number of associations in the full search space, saturating.
    pub fn search_space_size(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }
}
