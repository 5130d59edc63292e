use super::{build_topology, Association, LinkTopology, LoadVector};
use crate::error::Result;
use crate::scalar::{sup_distance, Scalar};
use crate::scenario::{NodeId, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig<T> {
    /// Sup-norm residual at which the iteration is considered converged.
    pub tol: T,
    pub max_iter: usize,
    /// Any active load above this marks the iteration as divergent.
    pub x_max: T,
}

impl<T: Scalar> Default for FixedPointConfig<T> {
    fn default() -> Self {
        Self { tol: T::lit(T::DEFAULT_TOL), max_iter: 10_000, x_max: T::lit(10.0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult<T> {
    pub loads: LoadVector<T>,
    /// Sweeps that moved the iterate by more than the tolerance.
    pub iterations: usize,
    pub converged: bool,
    /// Converged and no cell above full load.
    pub feasible: bool,
    pub residual: T,
    /// Resource share of every cell: transmitted links plus, for relays, the
    /// incoming backhaul.
    pub cell_load: Vec<T>,
    /// `M * sum p x` over active links.
    pub energy: T,
}

/// Fraction of time each cell transmits: sum of its active link loads.
fn tx_load<T: Scalar>(topo: &LinkTopology<T>, x: &[T]) -> Vec<T> {
    topo.tx_links
        .iter()
        .map(|ls| ls.iter().fold(T::zero(), |acc, &l| acc + x[l]))
        .collect()
}

fn interference<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    x: &[T],
    tx: &[T],
    link: usize,
) -> T {
    let node = s.links()[link].node;
    let mask = &topo.masks[link];
    let mut acc = T::zero();
    for cell in s.cells() {
        let mut share = tx[cell.0];
        if share <= T::zero() || mask.excluded.contains(&cell) {
            continue;
        }
        for &p in &mask.partial {
            if s.links()[p].cell == cell {
                share = share - x[p];
            }
        }
        if share > T::zero() {
            acc = acc + s.received_power(cell, node) * share;
        }
    }
    acc
}

fn sinr_with<T: Scalar>(s: &Scenario<T>, topo: &LinkTopology<T>, x: &[T], tx: &[T], link: usize) -> T {
    let l = s.links()[link];
    s.received_power(l.cell, l.node) / (interference(s, topo, x, tx, link) + s.noise_w())
}

fn load_with<T: Scalar>(s: &Scenario<T>, topo: &LinkTopology<T>, x: &[T], tx: &[T], link: usize) -> T {
    let r = topo.demand(link);
    if r <= T::zero() {
        return T::zero();
    }
    let gamma = sinr_with(s, topo, x, tx, link);
    r / (s.cell_rate_scale() * (T::one() + gamma).log2())
}

/// SINR of `link` when active links transmit with loads `x`.
pub fn sinr<T: Scalar>(s: &Scenario<T>, topo: &LinkTopology<T>, x: &LoadVector<T>, link: usize) -> T {
    let tx = tx_load(topo, x.as_slice());
    sinr_with(s, topo, x.as_slice(), &tx, link)
}

/// Share of RUs `link` needs to carry its demand under loads `x`.
pub fn load_required<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    x: &LoadVector<T>,
    link: usize,
) -> T {
    let tx = tx_load(topo, x.as_slice());
    load_with(s, topo, x.as_slice(), &tx, link)
}

/// One synchronous application of the load map to every candidate link.
pub fn apply_f<T: Scalar>(s: &Scenario<T>, topo: &LinkTopology<T>, x: &LoadVector<T>) -> LoadVector<T> {
    let tx = tx_load(topo, x.as_slice());
    let values = (0..s.n_links()).map(|l| load_with(s, topo, x.as_slice(), &tx, l)).collect();
    LoadVector::from_vec(s, values).expect("length matches")
}

/// Resource share of every cell under loads `x`.
pub fn cell_load<T: Scalar>(topo: &LinkTopology<T>, x: &LoadVector<T>) -> Vec<T> {
    topo.budget_links
        .iter()
        .map(|ls| ls.iter().fold(T::zero(), |acc, &l| acc + x[l]))
        .collect()
}

/// `M * sum_j p_{a_j} x_{a_j j}` over active links of `a`.
pub fn energy<T: Scalar>(s: &Scenario<T>, a: &Association, x: &LoadVector<T>) -> T {
    let mut relay_busy = vec![false; s.n_rc()];
    for j in (0..s.n_ue()).map(NodeId) {
        if let Some(node) = s.relay_node_of(a.get(j)) {
            relay_busy[node.0 - s.n_ue()] = true;
        }
    }
    let sum = s
        .nodes()
        .filter(|j| !s.is_relay_node(*j) || relay_busy[j.0 - s.n_ue()])
        .map(|j| {
            let c = a.get(j);
            let l = s.link_index(c, j).expect("association within candidates");
            s.power(c) * x[l]
        })
        .fold(T::zero(), |acc, v| acc + v);
    T::lit(f64::from(s.num_ru())) * sum
}

/// Picard iteration of the load map under `a`, starting from `x0`.
pub fn fixed_point<T: Scalar>(
    s: &Scenario<T>,
    a: &Association,
    x0: &LoadVector<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointResult<T>> {
    let topo = build_topology(s, a)?;
    Ok(fixed_point_on(s, &topo, x0, cfg))
}

pub fn fixed_point_on<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    x0: &LoadVector<T>,
    cfg: &FixedPointConfig<T>,
) -> FixedPointResult<T> {
    iterate_masked(s, topo, x0, None, cfg)
}

/// Picard iteration in which only links with `update[l] == true` move;
/// the others keep their `x0` value bit for bit. `None` updates every link.
pub fn iterate_masked<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    x0: &LoadVector<T>,
    update: Option<&[bool]>,
    cfg: &FixedPointConfig<T>,
) -> FixedPointResult<T> {
    let n = s.n_links();
    assert_eq!(x0.len(), n, "load vector does not match scenario");
    let moving = |l: usize| update.is_none_or(|u| u[l]);

    let mut x = x0.as_slice().to_vec();
    let mut next = x.clone();
    let mut iterations = 0;
    let mut converged = false;
    let mut residual = T::infinity();
    for _ in 0..cfg.max_iter {
        let tx = tx_load(topo, &x);
        for (l, v) in next.iter_mut().enumerate() {
            if moving(l) {
                *v = load_with(s, topo, &x, &tx, l);
            }
        }
        residual = sup_distance(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if residual.is_nan() {
            break;
        }
        let blown = topo
            .active_links()
            .iter()
            .any(|&l| !(x[l] <= cfg.x_max));
        if blown {
            break;
        }
        if residual <= cfg.tol {
            converged = true;
            break;
        }
        iterations += 1;
    }

    let loads = LoadVector::from_vec(s, x).expect("length matches");
    let cell_load = cell_load(topo, &loads);
    let feasible = converged && cell_load.iter().all(|&c| c <= T::one());
    let energy = energy(s, topo.association(), &loads);
    FixedPointResult { loads, iterations, converged, feasible, residual, cell_load, energy }
}
