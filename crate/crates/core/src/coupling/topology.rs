use std::marker::PhantomData;

use super::Association;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::scenario::{CellId, CellKind, NodeId, Scenario};

/// Which active links a given link does *not* hear, in a form cheap to apply
/// against per-cell transmit loads.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct InterferenceMask {
    /// Cells whose every active link is orthogonal to this one.
    pub excluded: Vec<CellId>,
    /// Orthogonal active links belonging to cells that are not excluded.
    pub partial: Vec<usize>,
}

/// Active links, served sets, link demands and orthogonality sets for one
/// association. Link ids are positions in [`Scenario::links`].
#[derive(Debug, Clone)]
pub struct LinkTopology<T> {
    association: Association,
    active: Vec<bool>,
    active_links: Vec<usize>,
    served: Vec<Vec<NodeId>>,
    relays: Vec<Vec<NodeId>>,
    demand: Vec<T>,
    ortho: Vec<Vec<usize>>,
    pub(crate) masks: Vec<InterferenceMask>,
    /// Active links transmitted by each cell.
    pub(crate) tx_links: Vec<Vec<usize>>,
    /// Active links counted in each cell's resource budget.
    pub(crate) budget_links: Vec<Vec<usize>>,
    _scalar: PhantomData<T>,
}

impl<T: Scalar> LinkTopology<T> {
    pub fn association(&self) -> &Association {
        &self.association
    }

    pub fn is_active(&self, link: usize) -> bool {
        self.active[link]
    }

    pub fn active_links(&self) -> &[usize] {
        &self.active_links
    }

    /// UEs served by `cell`.
    pub fn served(&self, cell: CellId) -> &[NodeId] {
        &self.served[cell.0]
    }

    /// Relays with an active backhaul from `cell` (empty for relay cells).
    pub fn relays(&self, cell: CellId) -> &[NodeId] {
        &self.relays[cell.0]
    }

    /// Bit-rate requirement of a link; hypothetical links carry what they
    /// would carry if activated.
    pub fn demand(&self, link: usize) -> T {
        self.demand[link]
    }

    /// Sorted link ids orthogonal to `link` (including itself).
    pub fn ortho(&self, link: usize) -> &[usize] {
        &self.ortho[link]
    }

    pub fn is_orthogonal(&self, link: usize, other: usize) -> bool {
        self.ortho[link].binary_search(&other).is_ok()
    }
}

/// Derives the link topology of `a` on `s`.
///
/// Relays serving no UE get no backhaul. A candidate link that is not active
/// gets the orthogonality set it would have if activated, plus the node's
/// current link, which activation would replace.
pub fn build_topology<T: Scalar>(s: &Scenario<T>, a: &Association) -> Result<LinkTopology<T>> {
    // Re-validate: callers may hold an association built for another scenario.
    let a = Association::new(s, a.as_slice().to_vec())?;
    let n_cells = s.n_cells();
    let links = s.links();

    let mut served = vec![Vec::new(); n_cells];
    for j in (0..s.n_ue()).map(NodeId) {
        served[a.get(j).0].push(j);
    }
    let relay_active = |node: NodeId| -> bool {
        s.relay_cell_of(node).is_some_and(|c| !served[c.0].is_empty())
    };
    let mut relays = vec![Vec::new(); n_cells];
    for k in (s.n_ue()..s.n_nodes()).map(NodeId) {
        if relay_active(k) {
            relays[a.get(k).0].push(k);
        }
    }

    let mut active = vec![false; links.len()];
    let mut active_links = Vec::new();
    let serving_link = |j: NodeId| s.link_index(a.get(j), j).expect("validated association");
    for j in s.nodes() {
        if !s.is_relay_node(j) || relay_active(j) {
            let l = serving_link(j);
            active[l] = true;
            active_links.push(l);
        }
    }
    active_links.sort_unstable();

    let mut tx_links = vec![Vec::new(); n_cells];
    let mut budget_links = vec![Vec::new(); n_cells];
    for &l in &active_links {
        let link = links[l];
        tx_links[link.cell.0].push(l);
        budget_links[link.cell.0].push(l);
        if let Some(relay) = s.relay_cell_of(link.node) {
            budget_links[relay.0].push(l);
        }
    }

    let backhaul_demand = |relay: CellId| -> T {
        served[relay.0]
            .iter()
            .map(|&u| s.demand(u).expect("served nodes are UEs"))
            .fold(T::zero(), |acc, d| acc + d)
    };
    let demand: Vec<T> = links
        .iter()
        .map(|l| match s.relay_cell_of(l.node) {
            Some(relay) => backhaul_demand(relay),
            None => s.demand(l.node).expect("UE node"),
        })
        .collect();

    let mut ortho = Vec::with_capacity(links.len());
    for (l, link) in links.iter().enumerate() {
        let mut set: Vec<usize> = vec![l];
        set.extend_from_slice(&tx_links[link.cell.0]);
        match s.relay_cell_of(link.node) {
            // backhaul <i,k>: links of i and links of k
            Some(relay) => set.extend_from_slice(&tx_links[relay.0]),
            None => {
                // access from relay k also avoids k's own backhaul
                if s.cell_kind(link.cell) == CellKind::Relay {
                    let k_node = s.relay_node_of(link.cell).expect("relay cell");
                    set.push(serving_link(k_node));
                }
            }
        }
        if !active[l] {
            set.push(serving_link(link.node));
        }
        set.sort_unstable();
        set.dedup();
        ortho.push(set);
    }

    let masks = ortho
        .iter()
        .map(|set| {
            let mut members_per_cell: Vec<(CellId, usize)> = Vec::new();
            for &m in set.iter().filter(|&&m| active[m]) {
                let c = links[m].cell;
                match members_per_cell.iter_mut().find(|(cc, _)| *cc == c) {
                    Some(e) => e.1 += 1,
                    None => members_per_cell.push((c, 1)),
                }
            }
            let excluded: Vec<CellId> = members_per_cell
                .iter()
                .filter(|(c, n)| *n == tx_links[c.0].len())
                .map(|(c, _)| *c)
                .collect();
            let partial = set
                .iter()
                .copied()
                .filter(|&m| active[m] && !excluded.contains(&links[m].cell))
                .collect();
            InterferenceMask { excluded, partial }
        })
        .collect();

    Ok(LinkTopology {
        association: a,
        active,
        active_links,
        served,
        relays,
        demand,
        ortho,
        masks,
        tx_links,
        budget_links,
        _scalar: PhantomData,
    })
}
