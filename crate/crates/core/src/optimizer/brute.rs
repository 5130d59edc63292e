use crate::coupling::{build_topology, fixed_point_on, Association, FixedPointConfig, LoadVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::{CellId, Scenario};

pub const DEFAULT_SEARCH_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceOutcome<T> {
    pub association: Association,
    pub energy: T,
    pub evaluated: usize,
    pub feasible: usize,
}

/// Minimum-energy feasible association by exhaustive enumeration.
///
/// Associations are visited in lexicographic order of candidate positions
/// (last node fastest); among equal energies the first visited wins.
pub fn brute_force<T: Scalar>(
    s: &Scenario<T>,
    cfg: &FixedPointConfig<T>,
    limit: u128,
) -> Result<BruteForceOutcome<T>> {
    let size = s.search_space_size();
    if size > limit {
        return Err(Error::SearchSpaceTooLarge(size, limit));
    }
    let n = s.n_nodes();
    let mut digits = vec![0usize; n];
    let zeros = LoadVector::zeros(s);
    let mut best: Option<(Association, T)> = None;
    let mut evaluated = 0;
    let mut feasible = 0;
    loop {
        let serving: Vec<CellId> =
            s.nodes().zip(&digits).map(|(j, &d)| s.candidates(j)[d]).collect();
        let a = Association::new(s, serving)?;
        let topo = build_topology(s, &a)?;
        let r = fixed_point_on(s, &topo, &zeros, cfg);
        evaluated += 1;
        if r.feasible {
            feasible += 1;
            if best.as_ref().is_none_or(|(_, e)| r.energy < *e) {
                best = Some((a, r.energy));
            }
        }

        // odometer step
        let mut pos = n;
        loop {
            if pos == 0 {
                let (association, energy) = best.ok_or(Error::NoFeasibleAssociation)?;
                return Ok(BruteForceOutcome { association, energy, evaluated, feasible });
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < s.candidates(crate::scenario::NodeId(pos)).len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}
