use super::improvement::check_improvement_from;
use super::{AlgorithmConfig, NodeSubset, ReferencePolicy, SubsetPolicy};
use crate::coupling::{apply_f, build_topology, fixed_point_on, Association, LoadVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{CellId, Scenario};

/// Candidate with the smallest `p_i * x_ij` for every node; ties go to the
/// lower cell id and non-finite loads are skipped.
pub fn assign<T: Scalar>(s: &Scenario<T>, x: &LoadVector<T>) -> Result<Association> {
    assign_inner(s, x, None)
}

/// As [`assign`], but a node whose current cell ties for the minimum keeps it.
///
/// Idle relays have zero load on every donor candidate, so without this
/// their donor would collapse onto the lowest-id macro.
pub fn assign_sticky<T: Scalar>(
    s: &Scenario<T>,
    x: &LoadVector<T>,
    current: &Association,
) -> Result<Association> {
    assign_inner(s, x, Some(current))
}

fn assign_inner<T: Scalar>(
    s: &Scenario<T>,
    x: &LoadVector<T>,
    current: Option<&Association>,
) -> Result<Association> {
    let mut serving = Vec::with_capacity(s.n_nodes());
    for j in s.nodes() {
        let mut best: Option<(CellId, T)> = None;
        for (l, &c) in s.node_links(j).zip(s.candidates(j)) {
            let cost = s.power(c) * x[l];
            if !cost.is_finite() {
                continue;
            }
            let wins = match best {
                None => true,
                Some((_, b)) => cost < b || (cost == b && current.is_some_and(|a| a.get(j) == c)),
            };
            if wins {
                best = Some((c, cost));
            }
        }
        let (c, _) = best.ok_or(Error::NoFiniteCandidate(j.0))?;
        serving.push(c);
    }
    Association::new(s, serving)
}

/// Strongest received power `p_i * g_ij` for every node, ties to the lower id.
pub fn baseline_association<T: Scalar>(s: &Scenario<T>) -> Association {
    let serving = s
        .nodes()
        .map(|j| {
            let mut best = s.candidates(j)[0];
            for &c in &s.candidates(j)[1..] {
                if s.received_power(c, j) > s.received_power(best, j) {
                    best = c;
                }
            }
            best
        })
        .collect();
    Association::new(s, serving).expect("candidates are valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome<T> {
    pub association: Association,
    /// Rounds executed, including the one that detected a stationary assignment.
    pub rounds: usize,
    /// Rounds whose candidate was accepted.
    pub accepted: usize,
    /// Energy of the initial association.
    pub initial_energy: T,
}

/// Iterative relay selection starting from a feasible `a_init`.
///
/// Each round reassigns every node greedily from the current loads, takes
/// one load-map step, and accepts the new association when the partial
/// improvement test against the reference passes and the partial fixed point
/// certifies every cell within full load.
pub fn relay_selection<T: Scalar>(
    s: &Scenario<T>,
    a_init: &Association,
    cfg: &AlgorithmConfig<T>,
) -> Result<SelectionOutcome<T>> {
    cfg.validate()?;
    let topo0 = build_topology(s, a_init)?;
    let init = fixed_point_on(s, &topo0, &LoadVector::zeros(s), &cfg.fixed_point);
    if !init.feasible {
        return Err(Error::InfeasibleInitial);
    }

    let mut a_ref = a_init.clone();
    let mut x_ref = init.loads.clone();
    let mut a_hat = a_init.clone();
    let mut a_prev = a_init.clone();
    let mut x_prev = init.loads.clone();
    let mut rounds = 0;
    let mut accepted = 0;

    for _ in 0..cfg.eta {
        rounds += 1;
        let a_k = assign_inner(s, &x_prev, cfg.keep_on_tie.then_some(&a_prev))?;
        if a_k == a_prev {
            break;
        }
        let topo_k = build_topology(s, &a_k)?;
        let x_k = apply_f(s, &topo_k, &x_prev);
        let changed = a_k.differing_nodes(&a_ref);
        if !changed.is_empty() {
            let mut t = match cfg.subset_policy {
                SubsetPolicy::All => NodeSubset::all(s),
                SubsetPolicy::ExactL | SubsetPolicy::Expand => {
                    NodeSubset::from_nodes(s, changed.iter().copied())
                }
            };
            let verdict = loop {
                let v = check_improvement_from(s, &topo_k, &a_ref, &x_ref, &t, &x_k, cfg)?;
                let grow = cfg.subset_policy == SubsetPolicy::Expand
                    && v.subset_energy_lower
                    && !v.violations.is_empty();
                if !grow {
                    break v;
                }
                for &j in &v.violations {
                    t.insert(j);
                }
            };
            if verdict.improved && verdict.x_t.feasible {
                a_hat = a_k.clone();
                accepted += 1;
                if cfg.reference == ReferencePolicy::Incumbent {
                    let settled = fixed_point_on(s, &topo_k, &verdict.x_t.loads, &cfg.fixed_point);
                    if settled.feasible {
                        a_ref = a_k.clone();
                        x_ref = settled.loads;
                    }
                }
            }
        }
        a_prev = a_k;
        x_prev = x_k;
    }

    Ok(SelectionOutcome { association: a_hat, rounds, accepted, initial_energy: init.energy })
}
