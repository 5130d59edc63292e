#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use relaynet_core::coupling::fixed_point;
use relaynet_core::optimizer::{baseline_association, brute_force, relay_selection, DEFAULT_SEARCH_LIMIT};
use relaynet_core::scenario::{generate_hexnet, mis_gadget_with, GadgetParams, HexNetParams};
use relaynet_core::{AlgorithmConfig, Association, LoadVector, Scenario, SubsetPolicy};
use relaynet_harness::files::{
    read_graph, read_sweep_spec, read_text, write_text, AssociationFile, LoadedScenario, SolveReport,
};
use relaynet_harness::{run_sweep, write_csv};

#[derive(Parser)]
#[command(name = "relaynet", version, about = "Energy-aware relay selection for relay-assisted cellular networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hexagonal network scenario.
    Gen {
        /// JSON file with generator parameters; defaults are used for missing keys.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-UE demand in bits per second.
        #[arg(long)]
        demand: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the load coupling for one association.
    Solve {
        scenario: PathBuf,
        /// `baseline`, `algo`, or an association file.
        #[arg(long, default_value = "baseline")]
        assoc: String,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a demand sweep and write one CSV row per demand point.
    Sweep {
        spec: PathBuf,
        /// Overrides the spec's seed base.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the independent-set gadget scenario for a graph file.
    Gadget {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Use a macro access gain of exactly 1.
        #[arg(long)]
        literal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive minimum-energy association.
    Oracle {
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u128,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    eta: Option<usize>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    /// `exact_l`, `all` or `expand`.
    #[arg(long)]
    subset_policy: Option<SubsetPolicy>,
}

impl AlgoArgs {
    fn apply(&self, mut cfg: AlgorithmConfig<f64>) -> AlgorithmConfig<f64> {
        if let Some(v) = self.tol {
            cfg.fixed_point.tol = v;
        }
        if let Some(v) = self.eta {
            cfg.eta = v;
        }
        if let Some(v) = self.eps1 {
            cfg.eps1 = v;
        }
        if let Some(v) = self.eps2 {
            cfg.eps2 = v;
        }
        if let Some(v) = self.subset_policy {
            cfg.subset_policy = v;
        }
        cfg
    }
}

/// The baseline, or every node on its first candidate when the baseline
/// overloads a cell.
fn algo_start(s: &Scenario<f64>, cfg: &AlgorithmConfig<f64>) -> Result<Association> {
    let base = baseline_association(s);
    if fixed_point(s, &base, &LoadVector::zeros(s), &cfg.fixed_point)?.feasible {
        return Ok(base);
    }
    Ok(Association::first_candidates(s))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { params, seed, demand, out } => {
            let mut p: HexNetParams = match params {
                Some(path) => serde_json::from_str(&read_text(&path)?)?,
                None => HexNetParams::default(),
            };
            if let Some(s) = seed {
                p.rng_seed = s;
            }
            if let Some(d) = demand {
                p.ue_demand_bps = d;
            }
            let s = generate_hexnet::<f64>(&p)?;
            write_text(out.as_deref(), &s.to_json()?)
        }
        Command::Solve { scenario, assoc, algo, out } => {
            let loaded = LoadedScenario::read(&scenario)?;
            let s = &loaded.scenario;
            let cfg = algo.apply(AlgorithmConfig::default());
            cfg.validate()?;
            let a = match assoc.as_str() {
                "baseline" => baseline_association(s),
                "algo" => relay_selection(s, &algo_start(s, &cfg)?, &cfg)?.association,
                path => AssociationFile::read(Path::new(path))?.to_association(&loaded)?,
            };
            let r = fixed_point(s, &a, &LoadVector::zeros(s), &cfg.fixed_point)?;
            write_text(out.as_deref(), &json(&SolveReport::new(&loaded, &a, &r))?)
        }
        Command::Sweep { spec, seed, algo, out } => {
            let mut spec = read_sweep_spec(&spec)?;
            if let Some(s) = seed {
                spec.seed_base = s;
            }
            spec.algorithm = (&algo.apply(spec.algorithm.to_config())).into();
            let report = run_sweep(&spec)?;
            let mut buf = Vec::new();
            write_csv(&report, &mut buf)?;
            write_text(out.as_deref(), &String::from_utf8(buf)?)
        }
        Command::Gadget { graph, eps, literal, out } => {
            let g = read_graph(&graph)?;
            let params = if literal { GadgetParams::literal(eps) } else { GadgetParams { eps, ..Default::default() } };
            let s = mis_gadget_with::<f64>(&g, &params)?;
            write_text(out.as_deref(), &s.to_json()?)
        }
        Command::Oracle { scenario, limit, tol, out } => {
            let loaded = LoadedScenario::read(&scenario)?;
            let s = &loaded.scenario;
            let mut cfg = AlgorithmConfig::<f64>::default().fixed_point;
            if let Some(t) = tol {
                if !(t > 0.0) {
                    bail!("tol must be positive");
                }
                cfg.tol = t;
            }
            let best = brute_force(s, &cfg, limit)?;
            let r = fixed_point(s, &best.association, &LoadVector::zeros(s), &cfg)?;
            write_text(out.as_deref(), &json(&SolveReport::new(&loaded, &best.association, &r))?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("relaynet: {msg}");
            ExitCode::FAILURE
        }
    }
}
