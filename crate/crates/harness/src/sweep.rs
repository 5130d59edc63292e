//! Demand sweeps comparing relay selection against the strongest-cell baseline.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use relaynet_core::coupling::{fixed_point, FixedPointConfig};
use relaynet_core::optimizer::{baseline_association, relay_selection};
use relaynet_core::scenario::{generate_hexnet, HexNetParams};
use relaynet_core::{AlgorithmConfig, LoadVector, ReferencePolicy, Scenario, SubsetPolicy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CSV_HEADER: [&str; 5] =
    ["demand_bps", "trials_ok", "baseline_energy_mean", "algo_energy_mean", "improvement_pct"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSource {
    /// Fresh hexagonal drop per trial; the trial seed replaces `rng_seed`.
    Generated(HexNetParams),
    /// One fixed scenario file; every trial is identical.
    File(PathBuf),
}

impl Default for ScenarioSource {
    fn default() -> Self {
        Self::Generated(HexNetParams::default())
    }
}

/// Serialisable form of [`AlgorithmConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub eta: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub subset_policy: SubsetPolicy,
    pub reference: ReferencePolicy,
    pub keep_on_tie: bool,
    pub tol: f64,
    pub max_iter: usize,
    pub x_max: f64,
}

impl Default for AlgorithmSpec {
    fn default() -> Self {
        Self::from(&AlgorithmConfig::<f64>::default())
    }
}

impl From<&AlgorithmConfig<f64>> for AlgorithmSpec {
    fn from(c: &AlgorithmConfig<f64>) -> Self {
        Self {
            eta: c.eta,
            eps1: c.eps1,
            eps2: c.eps2,
            subset_policy: c.subset_policy,
            reference: c.reference,
            keep_on_tie: c.keep_on_tie,
            tol: c.fixed_point.tol,
            max_iter: c.fixed_point.max_iter,
            x_max: c.fixed_point.x_max,
        }
    }
}

impl AlgorithmSpec {
    pub fn to_config(&self) -> AlgorithmConfig<f64> {
        AlgorithmConfig {
            eta: self.eta,
            eps1: self.eps1,
            eps2: self.eps2,
            subset_policy: self.subset_policy,
            reference: self.reference,
            keep_on_tie: self.keep_on_tie,
            fixed_point: FixedPointConfig { tol: self.tol, max_iter: self.max_iter, x_max: self.x_max },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub scenario: ScenarioSource,
    /// Per-UE demand points in bits per second.
    pub demands_bps: Vec<f64>,
    pub trials: usize,
    pub seed_base: u64,
    pub algorithm: AlgorithmSpec,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            scenario: ScenarioSource::default(),
            demands_bps: (1..=6).map(|k| 0.5e6 * k as f64).collect(),
            trials: 20,
            seed_base: 0,
            algorithm: AlgorithmSpec::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if self.demands_bps.is_empty() {
            bail!("demand grid is empty");
        }
        if self.demands_bps.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            bail!("demands must be positive");
        }
        if self.demands_bps.windows(2).any(|w| w[1] <= w[0]) {
            bail!("demand grid must be strictly increasing");
        }
        self.algorithm.to_config().validate()?;
        if let ScenarioSource::Generated(p) = &self.scenario {
            p.validate()?;
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serialises");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub demand_bps: f64,
    pub trial: usize,
    pub seed: u64,
    /// `None` when the baseline association is infeasible.
    pub baseline_energy: Option<f64>,
    pub algo_energy: Option<f64>,
    pub rounds: usize,
    pub accepted: usize,
}

impl TrialRecord {
    pub fn paired(&self) -> Option<(f64, f64)> {
        self.baseline_energy.zip(self.algo_energy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub demand_bps: f64,
    pub trials: usize,
    pub trials_ok: usize,
    pub infeasible: usize,
    pub baseline_energy_mean: Option<f64>,
    pub algo_energy_mean: Option<f64>,
    pub improvement_pct: Option<f64>,
}

impl SweepPoint {
    /// No trial had both arms feasible.
    pub fn flagged(&self) -> bool {
        self.trials_ok == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    pub records: Vec<TrialRecord>,
    pub seed_base: u64,
    pub config_hash: String,
}

fn load_source(source: &ScenarioSource) -> Result<Option<Scenario<f64>>> {
    match source {
        ScenarioSource::Generated(_) => Ok(None),
        ScenarioSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading scenario {}", path.display()))?;
            Ok(Some(Scenario::from_json(&text)?))
        }
    }
}

pub fn run_trial(
    source: &ScenarioSource,
    fixed: Option<&Scenario<f64>>,
    demand_bps: f64,
    trial: usize,
    seed: u64,
    cfg: &AlgorithmConfig<f64>,
) -> Result<TrialRecord> {
    let s = match (source, fixed) {
        (_, Some(s)) => s.with_uniform_demand(demand_bps)?,
        (ScenarioSource::Generated(p), None) => generate_hexnet(&HexNetParams {
            rng_seed: seed,
            ue_demand_bps: demand_bps,
            ..p.clone()
        })?,
        (ScenarioSource::File(_), None) => bail!("scenario file not loaded"),
    };
    let mut record = TrialRecord {
        demand_bps,
        trial,
        seed,
        baseline_energy: None,
        algo_energy: None,
        rounds: 0,
        accepted: 0,
    };
    let zeros = LoadVector::zeros(&s);
    let base = baseline_association(&s);
    let base_fp = fixed_point(&s, &base, &zeros, &cfg.fixed_point)?;
    if !base_fp.feasible {
        return Ok(record);
    }
    record.baseline_energy = Some(base_fp.energy);
    let out = relay_selection(&s, &base, cfg)?;
    record.rounds = out.rounds;
    record.accepted = out.accepted;
    let algo_fp = fixed_point(&s, &out.association, &zeros, &cfg.fixed_point)?;
    if algo_fp.feasible {
        record.algo_energy = Some(algo_fp.energy);
    }
    Ok(record)
}

fn summarise(demand_bps: f64, records: &[TrialRecord]) -> SweepPoint {
    let pairs: Vec<(f64, f64)> = records.iter().filter_map(TrialRecord::paired).collect();
    let n = pairs.len();
    let mean = |f: fn(&(f64, f64)) -> f64| (n > 0).then(|| pairs.iter().map(f).sum::<f64>() / n as f64);
    let baseline = mean(|p| p.0);
    let algo = mean(|p| p.1);
    let improvement = match (baseline, algo) {
        (Some(b), Some(a)) if b > 0.0 => Some(100.0 * (b - a) / b),
        _ => None,
    };
    SweepPoint {
        demand_bps,
        trials: records.len(),
        trials_ok: n,
        infeasible: records.len() - n,
        baseline_energy_mean: baseline,
        algo_energy_mean: algo,
        improvement_pct: improvement,
    }
}

/// Runs every (demand, trial) pair; trial `k` uses seed `seed_base + k` at
/// every demand point, so points share their drops.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let cfg = spec.algorithm.to_config();
    let fixed = load_source(&spec.scenario)?;
    let jobs: Vec<(usize, usize)> = (0..spec.demands_bps.len())
        .flat_map(|d| (0..spec.trials).map(move |t| (d, t)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(d, t)| {
            let seed = spec.seed_base.wrapping_add(t as u64);
            run_trial(&spec.scenario, fixed.as_ref(), spec.demands_bps[d], t, seed, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let points = spec
        .demands_bps
        .iter()
        .zip(records.chunks(spec.trials))
        .map(|(&d, rs)| summarise(d, rs))
        .collect();
    Ok(SweepReport { points, records, seed_base: spec.seed_base, config_hash: spec.config_hash() })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per demand point; undefined means are left empty.
pub fn write_csv<W: Write>(report: &SweepReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in &report.points {
        w.write_record([
            p.demand_bps.to_string(),
            p.trials_ok.to_string(),
            opt(p.baseline_energy_mean),
            opt(p.algo_energy_mean),
            opt(p.improvement_pct),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            scenario: ScenarioSource::Generated(HexNetParams {
                num_mc_sites: 3,
                ues_per_region: 4,
                ..Default::default()
            }),
            demands_bps: vec![0.5e6, 1e6],
            trials: 2,
            seed_base: 11,
            algorithm: AlgorithmSpec::default(),
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let mut s = small_spec();
        s.demands_bps = vec![1e6, 1e6];
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.demands_bps = vec![-1.0];
        assert!(s.validate().is_err());
        let mut s = small_spec();
        s.trials = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn summary_counts_and_percentages() {
        let rec = |b: Option<f64>, a: Option<f64>| TrialRecord {
            demand_bps: 1.0,
            trial: 0,
            seed: 0,
            baseline_energy: b,
            algo_energy: a,
            rounds: 0,
            accepted: 0,
        };
        let p = summarise(1.0, &[rec(Some(10.0), Some(5.0)), rec(None, None), rec(Some(20.0), Some(15.0))]);
        assert_eq!((p.trials, p.trials_ok, p.infeasible), (3, 2, 1));
        assert_eq!(p.baseline_energy_mean, Some(15.0));
        assert_eq!(p.algo_energy_mean, Some(10.0));
        let pct = p.improvement_pct.unwrap();
        assert!((pct - 100.0 * 5.0 / 15.0).abs() < 1e-12);

        let p = summarise(1.0, &[rec(None, None)]);
        assert!(p.flagged());
        assert_eq!(p.improvement_pct, None);
    }

    #[test]
    fn spec_json_round_trip_and_hash() {
        let s = small_spec();
        let text = serde_json::to_string(&s).unwrap();
        let back: SweepSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.config_hash(), s.config_hash());
        let mut other = s.clone();
        other.seed_base += 1;
        assert_ne!(other.config_hash(), s.config_hash());
    }

    #[test]
    fn sweep_is_reproducible() {
        let spec = small_spec();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a, b);
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        write_csv(&a, &mut ca).unwrap();
        write_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert_eq!(text.lines().count(), 1 + spec.demands_bps.len());
        assert!(text.starts_with("demand_bps,trials_ok,baseline_energy_mean,algo_energy_mean,improvement_pct\n"));
    }
}
