//! Randomised hexagonal HetNet drops.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{CellId, NodeId, Position, Scenario, ScenarioParts, Ue};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distances below this are clamped before evaluating path loss.
pub const MIN_DISTANCE_M: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathLossModel {
    /// Urban macro, 2 GHz.
    Macro,
    /// Urban micro, 2 GHz.
    Micro,
}

/// Path loss in dB at `distance_m` meters.
///
/// Macro: `128.1 + 37.6 log10(d/km)`, micro: `140.7 + 36.7 log10(d/km)`.
pub fn path_loss_db(model: PathLossModel, distance_m: f64) -> f64 {
    let km = distance_m.max(MIN_DISTANCE_M) / 1000.0;
    match model {
        PathLossModel::Macro => 128.1 + 37.6 * km.log10(),
        PathLossModel::Micro => 140.7 + 36.7 * km.log10(),
    }
}

/// Thermal noise of one RU in watts.
pub fn noise_per_ru_w(noise_dbm_per_hz: f64, ru_bandwidth_hz: f64) -> f64 {
    10f64.powf((noise_dbm_per_hz - 30.0) / 10.0) * ru_bandwidth_hz
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HexNetParams {
    /// Macro sites: the centre site plus up to six first-ring neighbours.
    pub num_mc_sites: usize,
    pub inter_site_distance_m: f64,
    pub rcs_per_region: usize,
    pub ues_per_region: usize,
    /// Informational; the path-loss formulas are the 2 GHz variants.
    pub carrier_hz: f64,
    pub ru_bandwidth_hz: f64,
    pub cell_bandwidth_hz: f64,
    pub num_ru: u32,
    pub noise_dbm_per_hz: f64,
    pub mc_power_mw_per_ru: f64,
    pub rc_power_mw_per_ru: f64,
    pub shadowing_std_db_mc: f64,
    pub shadowing_std_db_rc: f64,
    pub candidate_set_size: usize,
    pub ue_demand_bps: f64,
    pub rng_seed: u64,
}

impl Default for HexNetParams {
    fn default() -> Self {
        Self {
            num_mc_sites: 7,
            inter_site_distance_m: 500.0,
            rcs_per_region: 2,
            ues_per_region: 20,
            carrier_hz: 2e9,
            ru_bandwidth_hz: 180e3,
            cell_bandwidth_hz: 20e6,
            num_ru: 100,
            noise_dbm_per_hz: -174.0,
            mc_power_mw_per_ru: 800.0,
            rc_power_mw_per_ru: 50.0,
            shadowing_std_db_mc: 6.0,
            shadowing_std_db_rc: 3.0,
            candidate_set_size: 4,
            ue_demand_bps: 1e6,
            rng_seed: 0,
        }
    }
}

impl HexNetParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        let positive = [
            self.inter_site_distance_m,
            self.carrier_hz,
            self.ru_bandwidth_hz,
            self.cell_bandwidth_hz,
            self.mc_power_mw_per_ru,
            self.rc_power_mw_per_ru,
            self.ue_demand_bps,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return bad("distances, frequencies, powers and demand must be positive");
        }
        if !self.noise_dbm_per_hz.is_finite() {
            return bad("noise density must be finite");
        }
        if !(self.shadowing_std_db_mc >= 0.0 && self.shadowing_std_db_rc >= 0.0) {
            return bad("shadowing deviations must be non-negative");
        }
        if !(1..=7).contains(&self.num_mc_sites) {
            return bad("num_mc_sites must be within 1..=7");
        }
        if !(1..=8).contains(&self.rcs_per_region) {
            return bad("rcs_per_region must be within 1..=8");
        }
        if self.ues_per_region == 0 {
            return bad("ues_per_region must be positive");
        }
        if self.candidate_set_size < 2 {
            return bad("candidate_set_size must be at least 2");
        }
        if self.num_ru == 0
            || f64::from(self.num_ru) * self.ru_bandwidth_hz > self.cell_bandwidth_hz
        {
            return bad("num_ru RUs must fit in the cell bandwidth");
        }
        Ok(())
    }

    fn site_centres(&self) -> Vec<(f64, f64)> {
        let d = self.inter_site_distance_m;
        std::iter::once((0.0, 0.0))
            .chain((0..6).map(|k| {
                let a = (k as f64 * 60.0).to_radians();
                (d * a.cos(), d * a.sin())
            }))
            .take(self.num_mc_sites)
            .collect()
    }
}

/// Whether `(dx, dy)` (relative to a site) lies in that site's hexagonal region.
///
/// The hexagon has its flat sides facing the six neighbouring sites.
pub(crate) fn in_hex_region(dx: f64, dy: f64, inter_site_distance_m: f64) -> bool {
    let half = inter_site_distance_m / 2.0;
    (0..3).all(|k| {
        let a = (k as f64 * 60.0).to_radians();
        (dx * a.cos() + dy * a.sin()).abs() <= half
    })
}

fn sample_in_hex(rng: &mut impl Rng, centre: (f64, f64), isd: f64) -> (f64, f64) {
    let half = isd / 2.0;
    let circum = isd / 3f64.sqrt();
    loop {
        let dx = rng.random_range(-half..=half);
        let dy = rng.random_range(-circum..=circum);
        if in_hex_region(dx, dy, isd) {
            return (centre.0 + dx, centre.1 + dy);
        }
    }
}

/// Indices of the `k` largest values, ties broken by lower index.
fn strongest(values: &[(usize, f64)], k: usize) -> Vec<usize> {
    let mut order = values.to_vec();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.into_iter().take(k).map(|(i, _)| i).collect()
}

/// Draws one hexagonal HetNet. Deterministic in `params` (seed included).
pub fn generate_hexnet<T: Scalar>(params: &HexNetParams) -> Result<Scenario<T>> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let isd = params.inter_site_distance_m;
    let centres = params.site_centres();

    let mut relays = Vec::new();
    let mut ues = Vec::new();
    for &c in &centres {
        for _ in 0..params.rcs_per_region {
            relays.push(sample_in_hex(&mut rng, c, isd));
        }
        for _ in 0..params.ues_per_region {
            ues.push(sample_in_hex(&mut rng, c, isd));
        }
    }

    let n_mc = centres.len();
    let n_rc = relays.len();
    let n_ue = ues.len();
    let n_nodes = n_ue + n_rc;
    let cell_pos: Vec<(f64, f64)> = centres.iter().chain(&relays).copied().collect();
    let node_pos: Vec<(f64, f64)> = ues.iter().chain(&relays).copied().collect();

    let shadow_mc = Normal::new(0.0, params.shadowing_std_db_mc)
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let shadow_rc = Normal::new(0.0, params.shadowing_std_db_rc)
        .map_err(|e| Error::InvalidParams(e.to_string()))?;

    let mut gain = vec![0.0f64; cell_pos.len() * n_nodes];
    for (c, &(cx, cy)) in cell_pos.iter().enumerate() {
        let is_macro = c < n_mc;
        let (model, shadow) = if is_macro {
            (PathLossModel::Macro, &shadow_mc)
        } else {
            (PathLossModel::Micro, &shadow_rc)
        };
        for (j, &(nx, ny)) in node_pos.iter().enumerate() {
            let s: f64 = shadow.sample(&mut rng);
            if !is_macro && j >= n_ue && j - n_ue == c - n_mc {
                continue;
            }
            let pl = path_loss_db(model, (cx - nx).hypot(cy - ny));
            gain[c * n_nodes + j] = 10f64.powf(-(pl + s) / 10.0);
        }
    }

    let power: Vec<f64> = (0..cell_pos.len())
        .map(|c| {
            let mw = if c < n_mc { params.mc_power_mw_per_ru } else { params.rc_power_mw_per_ru };
            mw * 1e-3
        })
        .collect();

    let k = params.candidate_set_size;
    let mut candidates = Vec::with_capacity(n_nodes);
    for j in 0..n_nodes {
        let pool: Vec<(usize, f64)> = if j < n_ue {
            (0..cell_pos.len()).map(|c| (c, power[c] * gain[c * n_nodes + j])).collect()
        } else {
            (0..n_mc).map(|c| (c, power[c] * gain[c * n_nodes + j])).collect()
        };
        candidates.push(strongest(&pool, k).into_iter().map(CellId).collect());
    }

    let t = T::lit;
    let pos = |&(x, y): &(f64, f64)| Position::new(t(x), t(y));
    Scenario::new(ScenarioParts {
        macro_cells: centres.iter().map(pos).collect(),
        relay_cells: relays.iter().map(pos).collect(),
        ues: ues
            .iter()
            .map(|p| Ue { position: pos(p), demand_bps: t(params.ue_demand_bps) })
            .collect(),
        gain: gain.into_iter().map(t).collect(),
        power: power.into_iter().map(t).collect(),
        noise_w: t(noise_per_ru_w(params.noise_dbm_per_hz, params.ru_bandwidth_hz)),
        num_ru: params.num_ru,
        ru_bandwidth_hz: t(params.ru_bandwidth_hz),
        candidates,
    })
}

impl<T: Scalar> Scenario<T> {
    /// Macro cell geometrically closest to `node`, ties to the lower id.
    pub fn nearest_macro(&self, node: NodeId) -> CellId {
        let p = self.node_position(node);
        let mut best = CellId(0);
        let mut best_d = T::infinity();
        for (i, m) in self.macro_cells().iter().enumerate() {
            let d = m.distance(&p);
            if d < best_d {
                best_d = d;
                best = CellId(i);
            }
        }
        best
    }
}
