//! Small abstract instances with log-uniform gains, for property checks and
//! exhaustive comparisons.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CellId, Position, Scenario, ScenarioParts, Ue};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstanceParams {
    pub max_mc: usize,
    pub max_rc: usize,
    pub max_ue: usize,
    /// Gains are `10^u` with `u` uniform in this range.
    pub log10_gain_range: (f64, f64),
    pub demand_range: (f64, f64),
    pub max_candidates: usize,
    pub macro_power: f64,
    pub relay_power: f64,
    pub num_ru: u32,
    pub seed: u64,
}

impl Default for RandomInstanceParams {
    fn default() -> Self {
        Self {
            max_mc: 3,
            max_rc: 2,
            max_ue: 6,
            log10_gain_range: (-1.5, 1.0),
            demand_range: (0.2, 1.0),
            max_candidates: 3,
            macro_power: 1.0,
            relay_power: 0.3,
            num_ru: 10,
            seed: 0,
        }
    }
}

/// Draws an instance with `1..=max_mc` macros, `0..=max_rc` relays and
/// `1..=max_ue` UEs. Noise and RU bandwidth are 1.
pub fn random_instance<T: Scalar>(p: &RandomInstanceParams) -> Result<Scenario<T>> {
    if p.max_mc == 0 || p.max_ue == 0 || p.max_candidates == 0 {
        return Err(Error::InvalidParams("need at least one macro, UE and candidate".into()));
    }
    let (glo, ghi) = p.log10_gain_range;
    let (dlo, dhi) = p.demand_range;
    if !(glo <= ghi && dlo > 0.0 && dlo <= dhi) {
        return Err(Error::InvalidParams("empty gain or demand range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n_mc = rng.random_range(1..=p.max_mc);
    let n_rc = rng.random_range(0..=p.max_rc);
    let n_ue = rng.random_range(1..=p.max_ue);
    let n_cells = n_mc + n_rc;
    let n_nodes = n_ue + n_rc;

    let mut gain = Vec::with_capacity(n_cells * n_nodes);
    for c in 0..n_cells {
        for j in 0..n_nodes {
            let g = 10f64.powf(rng.random_range(glo..=ghi));
            let own_relay = c >= n_mc && j >= n_ue && c - n_mc == j - n_ue;
            gain.push(if own_relay { 0.0 } else { g });
        }
    }
    let mut candidates = Vec::with_capacity(n_nodes);
    for _ in 0..n_ue {
        let k = rng.random_range(1..=p.max_candidates.min(n_cells));
        candidates.push(sample(&mut rng, n_cells, k).into_iter().map(CellId).collect());
    }
    for _ in 0..n_rc {
        let k = rng.random_range(1..=p.max_candidates.min(n_mc));
        candidates.push(sample(&mut rng, n_mc, k).into_iter().map(CellId).collect());
    }
    let ues = (0..n_ue)
        .map(|_| Ue {
            position: Position::new(T::zero(), T::zero()),
            demand_bps: T::lit(rng.random_range(dlo..=dhi)),
        })
        .collect();

    let t = T::lit;
    Scenario::new(ScenarioParts {
        macro_cells: (0..n_mc).map(|i| Position::new(t(i as f64), T::zero())).collect(),
        relay_cells: (0..n_rc).map(|k| Position::new(t(k as f64), T::one())).collect(),
        ues,
        gain: gain.into_iter().map(t).collect(),
        power: std::iter::repeat_n(t(p.macro_power), n_mc)
            .chain(std::iter::repeat_n(t(p.relay_power), n_rc))
            .collect(),
        noise_w: T::one(),
        num_ru: p.num_ru,
        ru_bandwidth_hz: T::one(),
        candidates,
    })
}
