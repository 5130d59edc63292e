//! Partial (asynchronous) fixed-point updates and the improvement test built
//! on them.
//!
//! `G(x, a, t)` recomputes the load of every candidate link of a node in
//! `t` and leaves every other entry alone. Iterating `G` from the reference
//! loads gives `x^t`. A candidate association `â` beats the reference `ǎ`
//! when, for some `t` containing every changed node,
//!
//! 1. the energy sum over `t` at `x^t` is below the reference's sum over `t`;
//! 2. no frozen node would need more than its reference load at `x^t`.

use super::{AlgorithmConfig, NodeSubset};
use crate::coupling::{
    build_topology, iterate_masked, load_required, Association, FixedPointConfig,
    FixedPointResult, LinkTopology, LoadVector,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{NodeId, Scenario};

/// One entry of `G(x, a, t)`: the load map if the link's node is in `t`,
/// otherwise `x` unchanged.
pub fn g_update<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    x: &LoadVector<T>,
    t: &NodeSubset,
    link: usize,
) -> Result<T> {
    if t.is_empty() {
        return Err(Error::EmptySubset);
    }
    if t.contains(s.links()[link].node) {
        Ok(load_required(s, topo, x, link))
    } else {
        Ok(x[link])
    }
}

/// Fixed point of `G(·, a_hat, t)` from `x_start`. Entries of nodes outside
/// `t` stay bit-equal to `x_start`.
pub fn async_fixed_point<T: Scalar>(
    s: &Scenario<T>,
    a_hat: &Association,
    t: &NodeSubset,
    x_start: &LoadVector<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointResult<T>> {
    let topo = build_topology(s, a_hat)?;
    async_on(s, &topo, t, x_start, cfg)
}

pub(crate) fn async_on<T: Scalar>(
    s: &Scenario<T>,
    topo: &LinkTopology<T>,
    t: &NodeSubset,
    x_start: &LoadVector<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointResult<T>> {
    if t.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mask: Vec<bool> = s.links().iter().map(|l| t.contains(l.node)).collect();
    Ok(iterate_masked(s, topo, x_start, Some(&mask), cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementVerdict<T> {
    pub improved: bool,
    /// Condition 1: the candidate's sum over `t` undercuts the reference by more than `eps1`.
    pub subset_energy_lower: bool,
    /// Condition 2: every frozen node fits in its reference load (+`eps2`).
    pub frozen_loads_hold: bool,
    /// `sum_{j in t} p x^t` for the candidate.
    pub candidate_subset_sum: T,
    /// `sum_{j in t} p x̌` for the reference.
    pub reference_subset_sum: T,
    /// `M * sum_j p x^t`: an upper bound on the candidate's energy when
    /// condition 2 holds.
    pub candidate_energy_bound: T,
    /// `M * sum_j p x̌`.
    pub reference_energy: T,
    /// Frozen nodes violating condition 2.
    pub violations: Vec<NodeId>,
    pub x_t: FixedPointResult<T>,
}

/// Improvement test of `a_hat` against `a_check`, whose fixed
/// point is `x_check`. `t` must contain every node on which they differ.
pub fn check_improvement<T: Scalar>(
    s: &Scenario<T>,
    a_hat: &Association,
    a_check: &Association,
    x_check: &LoadVector<T>,
    t: &NodeSubset,
    cfg: &AlgorithmConfig<T>,
) -> Result<ImprovementVerdict<T>> {
    let topo = build_topology(s, a_hat)?;
    check_improvement_from(s, &topo, a_check, x_check, t, x_check, cfg)
}

/// As [`check_improvement`], with the partial iteration started from
/// `x_start`. Entries outside `t` are taken from `x_check` regardless.
pub fn check_improvement_from<T: Scalar>(
    s: &Scenario<T>,
    topo_hat: &LinkTopology<T>,
    a_check: &Association,
    x_check: &LoadVector<T>,
    t: &NodeSubset,
    x_start: &LoadVector<T>,
    cfg: &AlgorithmConfig<T>,
) -> Result<ImprovementVerdict<T>> {
    if t.is_empty() {
        return Err(Error::EmptySubset);
    }
    let a_hat = topo_hat.association();
    if let Some(j) = a_hat.differing_nodes(a_check).into_iter().find(|&j| !t.contains(j)) {
        return Err(Error::SubsetMissesChange(j.0));
    }

    let mut start = x_start.clone();
    for (l, link) in s.links().iter().enumerate() {
        if !t.contains(link.node) {
            start[l] = x_check[l];
        }
    }
    let x_t = async_on(s, topo_hat, t, &start, &cfg.fixed_point)?;

    let weighted = |a: &Association, x: &LoadVector<T>, j: NodeId| -> T {
        let c = a.get(j);
        s.power(c) * x[s.link_index(c, j).expect("association within candidates")]
    };
    let mut cand_t = T::zero();
    let mut ref_t = T::zero();
    let mut cand_all = T::zero();
    let mut ref_all = T::zero();
    let mut violations = Vec::new();
    for j in s.nodes() {
        let c = weighted(a_hat, &x_t.loads, j);
        let r = weighted(a_check, x_check, j);
        cand_all = cand_all + c;
        ref_all = ref_all + r;
        if t.contains(j) {
            cand_t = cand_t + c;
            ref_t = ref_t + r;
        } else {
            let link = s.link_index(a_hat.get(j), j).expect("association within candidates");
            let needed = load_required(s, topo_hat, &x_t.loads, link);
            if !(needed <= x_check[link] + cfg.eps2) {
                violations.push(j);
            }
        }
    }

    let subset_energy_lower = x_t.converged && cand_t + cfg.eps1 < ref_t;
    let frozen_loads_hold = x_t.converged && violations.is_empty();
    let m = T::lit(f64::from(s.num_ru()));
    Ok(ImprovementVerdict {
        improved: subset_energy_lower && frozen_loads_hold,
        subset_energy_lower,
        frozen_loads_hold,
        candidate_subset_sum: cand_t,
        reference_subset_sum: ref_t,
        candidate_energy_bound: m * cand_all,
        reference_energy: m * ref_all,
        violations,
        x_t,
    })
}
