//! Maximum-independent-set gadget: a graph becomes a network in which the
//! feasible sets of active relays are exactly the independent sets.
//!
//! Node `i` of the graph owns macro cell `i`, relay cell `n + i` and UE `i`.
//! UE `i` may be served by its macro or its relay, relay `i` is fed by macro
//! `i`, and relay `i` leaks a small gain `eps` onto the UE of every
//! neighbour. Serving UE `i` through relay `i` fills the relay exactly
//! (access 0.5 + backhaul 0.5), so any neighbouring relay makes it
//! infeasible.

use serde::{Deserialize, Serialize};

use super::{CellId, Position, Scenario, ScenarioParts, Ue};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const RELAY_ACCESS_GAIN: f64 = 6.0;
pub const BACKHAUL_GAIN: f64 = 3.0;
pub const MACRO_POWER: f64 = 1.0;
pub const RELAY_POWER: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphInstance {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphInstance {
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self { num_nodes, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn path(num_nodes: usize) -> Result<Self> {
        Self::new(num_nodes, (1..num_nodes).map(|i| (i - 1, i)).collect())
    }

    pub fn complete(num_nodes: usize) -> Result<Self> {
        let edges = (0..num_nodes)
            .flat_map(|a| (a + 1..num_nodes).map(move |b| (a, b)))
            .collect();
        Self::new(num_nodes, edges)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::InvalidGraph("at least two nodes are required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &self.edges {
            if a >= self.num_nodes || b >= self.num_nodes {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) references a missing node")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on node {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(())
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; self.num_nodes]; self.num_nodes];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (u, &e) in adj[v].iter().enumerate() {
                if e && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetParams {
    /// Leakage gain from a relay onto each neighbouring UE.
    pub eps: f64,
    /// Gain from macro `i` to UE `i`.
    ///
    /// At 1.0 a macro-served UE sits at exactly full load, so even `eps`
    /// leakage from a neighbouring relay overloads the macro and only the
    /// all-macro association stays feasible on connected graphs. The default
    /// leaves headroom while keeping relay service cheaper (0.75 < 1/log2(2.25)).
    pub macro_access_gain: f64,
}

impl Default for GadgetParams {
    fn default() -> Self {
        Self { eps: 0.05, macro_access_gain: 1.25 }
    }
}

impl GadgetParams {
    /// The constants exactly as in the textbook reduction (macro gain 1.0).
    pub fn literal(eps: f64) -> Self {
        Self { eps, macro_access_gain: 1.0 }
    }
}

/// Gadget with default parameters and the given leakage `eps`.
pub fn mis_gadget<T: Scalar>(graph: &GraphInstance, eps: f64) -> Result<Scenario<T>> {
    mis_gadget_with(graph, &GadgetParams { eps, ..GadgetParams::default() })
}

pub fn mis_gadget_with<T: Scalar>(graph: &GraphInstance, params: &GadgetParams) -> Result<Scenario<T>> {
    graph.validate()?;
    if !(params.eps > 0.0 && params.eps.is_finite()) {
        return Err(Error::InvalidParams("gadget eps must be positive".into()));
    }
    if !(params.macro_access_gain > 0.0 && params.macro_access_gain.is_finite()) {
        return Err(Error::InvalidParams("macro access gain must be positive".into()));
    }
    let n = graph.num_nodes;
    let n_nodes = 2 * n;
    let t = T::lit;
    let mut gain = vec![T::zero(); 2 * n * n_nodes];
    let mut set = |cell: usize, node: usize, g: f64| gain[cell * n_nodes + node] = t(g);
    for i in 0..n {
        set(i, i, params.macro_access_gain);
        set(n + i, i, RELAY_ACCESS_GAIN);
        set(i, n + i, BACKHAUL_GAIN);
    }
    for &(a, b) in &graph.edges {
        set(n + a, b, params.eps);
        set(n + b, a, params.eps);
    }

    let x = |i: usize| t(100.0 * i as f64);
    let mut candidates: Vec<Vec<CellId>> =
        (0..n).map(|i| vec![CellId(i), CellId(n + i)]).collect();
    candidates.extend((0..n).map(|i| vec![CellId(i)]));

    Scenario::new(ScenarioParts {
        macro_cells: (0..n).map(|i| Position::new(x(i), T::zero())).collect(),
        relay_cells: (0..n).map(|i| Position::new(x(i), t(50.0))).collect(),
        ues: (0..n)
            .map(|i| Ue { position: Position::new(x(i), t(100.0)), demand_bps: T::one() })
            .collect(),
        gain,
        power: std::iter::repeat_n(t(MACRO_POWER), n)
            .chain(std::iter::repeat_n(t(RELAY_POWER), n))
            .collect(),
        noise_w: T::one(),
        num_ru: 1,
        ru_bandwidth_hz: T::one(),
        candidates,
    })
}
