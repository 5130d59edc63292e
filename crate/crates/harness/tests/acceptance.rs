//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILING` still run at full strength and print
//! FAIL, but do not fail the process unless `ACCEPTANCE_STRICT=1` is set.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaynet_core::coupling::{apply_f, build_topology, fixed_point};
use relaynet_core::optimizer::{
    baseline_association, brute_force, check_improvement, relay_selection, NodeSubset,
    DEFAULT_SEARCH_LIMIT,
};
use relaynet_core::scenario::{
    generate_hexnet, mis_gadget, random_instance, GraphInstance, HexNetParams, Position,
    RandomInstanceParams, ScenarioParts, Ue,
};
use relaynet_core::{AlgorithmConfig, Association, CellId, FixedPointConfig, LoadVector, Scenario};
use relaynet_harness::{run_sweep, AlgorithmSpec, ScenarioSource, SweepReport, SweepSpec};

const KNOWN_FAILING: &[u32] = &[6];

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.detail = format!("{} ({:.2?})", o.detail, took);
    if let Some(limit) = limit {
        if took > limit {
            o.pass = false;
            o.detail.push_str(&format!(" exceeds {limit:?}"));
        }
    }
    o
}

fn random_association(s: &Scenario<f64>, rng: &mut ChaCha8Rng) -> Association {
    Association::from_fn(s, |j| *s.candidates(j).choose(rng).unwrap()).unwrap()
}

/// A random association whose fixed point is feasible, if one turns up.
fn feasible_association(
    s: &Scenario<f64>,
    rng: &mut ChaCha8Rng,
    cfg: &FixedPointConfig<f64>,
) -> Option<(Association, LoadVector<f64>)> {
    for _ in 0..50 {
        let a = random_association(s, rng);
        let r = fixed_point(s, &a, &LoadVector::zeros(s), cfg).unwrap();
        if r.feasible {
            return Some((a, r.loads));
        }
    }
    None
}

fn criterion_1() -> Outcome {
    let cfg = FixedPointConfig::default();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut seed = 0;
    while checked < 100 {
        let s: Scenario<f64> = random_instance(&RandomInstanceParams { seed, ..Default::default() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let Some((a, _)) = feasible_association(&s, &mut rng, &cfg) else { continue };
        let lo = fixed_point(&s, &a, &LoadVector::zeros(&s), &cfg).unwrap();
        let hi = fixed_point(&s, &a, &LoadVector::filled(&s, 1.0), &cfg).unwrap();
        if !(lo.converged && hi.converged) {
            return outcome(false, format!("seed {}: a start failed to converge", seed - 1));
        }
        worst = worst.max(lo.loads.sup_distance(&hi.loads));
        checked += 1;
    }
    outcome(worst <= 1e-6, format!("100 instances, max sup-distance {worst:.3e}"))
}

fn single_link(p: f64, g: f64, noise: f64, m: u32, b: f64, r: f64) -> Scenario<f64> {
    Scenario::new(ScenarioParts {
        macro_cells: vec![Position::new(0.0, 0.0)],
        relay_cells: vec![],
        ues: vec![Ue { position: Position::new(1.0, 0.0), demand_bps: r }],
        gain: vec![g],
        power: vec![p],
        noise_w: noise,
        num_ru: m,
        ru_bandwidth_hz: b,
        candidates: vec![vec![CellId(0)]],
    })
    .unwrap()
}

fn criterion_2() -> Outcome {
    let cases = [
        (1.0, 1.0, 1.0, 1, 1.0, 0.5),
        (0.8, 3.2e-12, 7.166e-16, 100, 180e3, 1e6),
        (0.05, 1e-9, 7.166e-16, 100, 180e3, 2.5e6),
        (2.0, 0.3, 0.1, 10, 1.0, 4.0),
    ];
    let mut worst = 0.0f64;
    for (p, g, n, m, b, r) in cases {
        let s = single_link(p, g, n, m, b, r);
        let a = Association::first_candidates(&s);
        let x = fixed_point(&s, &a, &LoadVector::zeros(&s), &FixedPointConfig::default()).unwrap().loads[0];
        let closed = r / (f64::from(m) * b * (1.0 + p * g / n).log2());
        worst = worst.max(((x - closed) / closed).abs());
    }
    outcome(worst <= 1e-12, format!("{} links, max relative error {worst:.3e}", cases.len()))
}

fn criterion_3() -> Outcome {
    let cfg = AlgorithmConfig::<f64>::default();
    let mut agree = 0;
    let mut triples = 0;
    let mut partial_improved = 0;
    let mut false_positives = 0;
    let mut seed = 0;
    while triples < 50 {
        let s: Scenario<f64> = random_instance(&RandomInstanceParams { seed, ..Default::default() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        seed += 1;
        let Some((a_check, x_check)) = feasible_association(&s, &mut rng, &cfg.fixed_point) else { continue };
        let Some((a_hat, _)) = feasible_association(&s, &mut rng, &cfg.fixed_point) else { continue };
        if a_hat == a_check {
            continue;
        }
        triples += 1;
        let zeros = LoadVector::zeros(&s);
        let e_hat = fixed_point(&s, &a_hat, &zeros, &cfg.fixed_point).unwrap().energy;
        let e_check = fixed_point(&s, &a_check, &zeros, &cfg.fixed_point).unwrap().energy;
        let m = f64::from(s.num_ru());

        let full = check_improvement(&s, &a_hat, &a_check, &x_check, &NodeSubset::all(&s), &cfg).unwrap();
        if full.improved == (e_hat / m + cfg.eps1 < e_check / m) {
            agree += 1;
        }
        let l = NodeSubset::from_nodes(&s, a_hat.differing_nodes(&a_check));
        let part = check_improvement(&s, &a_hat, &a_check, &x_check, &l, &cfg).unwrap();
        if part.improved {
            partial_improved += 1;
            if !(e_hat < e_check) {
                false_positives += 1;
            }
        }
    }
    outcome(
        agree == triples && false_positives == 0,
        format!(
            "full subset agrees {agree}/{triples}; t=l improved {partial_improved}, false positives {false_positives}"
        ),
    )
}

/// Labeled connected graphs on `n` nodes, one per edge subset.
fn connected_graphs(n: usize) -> Vec<GraphInstance> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &e)| e).collect();
            let g = GraphInstance::new(n, edges).unwrap();
            g.is_connected().then_some(g)
        })
        .collect()
}

fn random_connected(n: usize, rng: &mut ChaCha8Rng) -> GraphInstance {
    loop {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(0.4))
            .collect();
        let g = GraphInstance::new(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// Maximum independent set size by subset enumeration.
fn mis_size(g: &GraphInstance) -> u32 {
    (0u32..1 << g.num_nodes)
        .filter(|&set| g.edges.iter().all(|&(u, v)| set & (1 << u) == 0 || set & (1 << v) == 0))
        .map(u32::count_ones)
        .max()
        .unwrap()
}

fn criterion_4() -> Outcome {
    let mut graphs: Vec<GraphInstance> = (2..=4).flat_map(connected_graphs).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    graphs.extend((0..20).map(|_| random_connected(5, &mut rng)));
    let cfg = FixedPointConfig::default();
    let mut bad = Vec::new();
    for (idx, g) in graphs.iter().enumerate() {
        let s: Scenario<f64> = mis_gadget(g, 0.05).unwrap();
        let best = brute_force(&s, &cfg, DEFAULT_SEARCH_LIMIT).unwrap();
        let n = g.num_nodes;
        let set: u32 = best
            .association
            .active_relays(&s)
            .iter()
            .map(|c| 1u32 << (c.0 - n))
            .sum();
        let independent = g.edges.iter().all(|&(u, v)| set & (1 << u) == 0 || set & (1 << v) == 0);
        if !independent || set.count_ones() != mis_size(g) {
            bad.push(idx);
        }
    }
    outcome(bad.is_empty(), format!("{} graphs, mismatches {:?}", graphs.len(), bad))
}

fn criterion_5() -> Outcome {
    let configs = [
        ("default", AlgorithmConfig::<f64>::default()),
        (
            "all/incumbent",
            AlgorithmConfig {
                subset_policy: relaynet_core::SubsetPolicy::All,
                reference: relaynet_core::ReferencePolicy::Incumbent,
                ..Default::default()
            },
        ),
    ];
    let demands = [0.5e6, 1.0e6, 1.5e6];
    let mut details = Vec::new();
    let mut pass = true;
    for (name, cfg) in &configs {
        let mut checked = 0;
        let mut accepted = 0;
        let mut violations = 0;
        let mut seed = 0u64;
        while checked < 100 {
            let params = HexNetParams { rng_seed: seed, ue_demand_bps: demands[seed as usize % 3], ..Default::default() };
            seed += 1;
            let s: Scenario<f64> = generate_hexnet(&params).unwrap();
            let zeros = LoadVector::zeros(&s);
            let base = baseline_association(&s);
            let e_base = fixed_point(&s, &base, &zeros, &cfg.fixed_point).unwrap();
            if !e_base.feasible {
                continue;
            }
            checked += 1;
            let out = relay_selection(&s, &base, cfg).unwrap();
            accepted += out.accepted;
            let e_out = fixed_point(&s, &out.association, &zeros, &cfg.fixed_point).unwrap();
            let bound = e_base.energy + s.n_nodes() as f64 * cfg.eps1;
            if !(e_out.feasible && e_out.energy <= bound) {
                violations += 1;
            }
        }
        pass &= violations == 0;
        details.push(format!("{name}: {checked} drops, {accepted} accepted rounds, {violations} violations"));
    }
    outcome(pass, details.join("; "))
}

fn fig2_spec(rcs: usize) -> SweepSpec {
    SweepSpec {
        scenario: ScenarioSource::Generated(HexNetParams { rcs_per_region: rcs, ..Default::default() }),
        trials: 20,
        seed_base: 0,
        algorithm: AlgorithmSpec::default(),
        ..Default::default()
    }
}

fn improvements(r: &SweepReport) -> Vec<(f64, f64)> {
    r.points.iter().filter_map(|p| p.improvement_pct.map(|i| (p.demand_bps, i))).collect()
}

fn criterion_6() -> Outcome {
    let two = run_sweep(&fig2_spec(2)).unwrap();
    let four = run_sweep(&fig2_spec(4)).unwrap();
    let (i2, i4) = (improvements(&two), improvements(&four));
    if i2.is_empty() || i4.is_empty() {
        return outcome(false, "no feasible demand point");
    }
    let a = i2.iter().chain(&i4).all(|&(_, i)| i > 0.0);
    let inversions = |v: &[(f64, f64)]| v.windows(2).filter(|w| w[1].1 < w[0].1).count();
    let b = inversions(&i2) <= 1 && inversions(&i4) <= 1;
    let top_common = i2.iter().map(|p| p.0).filter(|d| i4.iter().any(|q| q.0 == *d)).fold(f64::NAN, f64::max);
    let at = |v: &[(f64, f64)], d: f64| v.iter().find(|p| p.0 == d).map(|p| p.1).unwrap_or(f64::NAN);
    let (top2, top4) = (at(&i2, top_common), at(&i4, top_common));
    let c = top4 >= top2;
    let band = |x: f64| (20.0..=60.0).contains(&x);
    let d = band(top2) && band(top4);
    let fmt = |v: &[(f64, f64)]| {
        v.iter().map(|(d, i)| format!("{:.1}M:{i:.2}%", d / 1e6)).collect::<Vec<_>>().join(" ")
    };
    outcome(
        a && b && c && d,
        format!(
            "(a) {a} (b) {b} (c) {c} (d) {d}; 2RC [{}]; 4RC [{}]; top common {:.1} Mbps",
            fmt(&i2),
            fmt(&i4),
            top_common / 1e6
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let close = |a: f64, b: f64| a <= b + 1e-12 * b.abs().max(1e-300);
    let mut mono_bad = 0;
    let mut scale_bad = 0;
    for seed in 0..50 {
        let s: Scenario<f64> = random_instance(&RandomInstanceParams { seed, ..Default::default() }).unwrap();
        let topo = build_topology(&s, &random_association(&s, &mut rng)).unwrap();
        let x: Vec<f64> = (0..s.n_links()).map(|_| rng.random_range(0.0..1.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| v + rng.random_range(0.0..0.5)).collect();
        let alpha = rng.random_range(1.0..=4.0);
        let x = LoadVector::from_vec(&s, x).unwrap();
        let y = LoadVector::from_vec(&s, y).unwrap();
        let (fx, fy, fax) = (apply_f(&s, &topo, &x), apply_f(&s, &topo, &y), apply_f(&s, &topo, &x.scaled(alpha)));
        for l in 0..s.n_links() {
            mono_bad += usize::from(!close(fx[l], fy[l]));
            scale_bad += usize::from(!close(fax[l], alpha * fx[l]));
        }
    }
    let cfg = FixedPointConfig::default();
    let mut demand_bad = 0;
    let mut demand_checked = 0;
    let mut seed = 100;
    while demand_checked < 20 {
        let s: Scenario<f64> = random_instance(&RandomInstanceParams { seed, ..Default::default() }).unwrap();
        seed += 1;
        let Some((a, x)) = feasible_association(&s, &mut rng, &cfg) else { continue };
        let lambda = rng.random_range(1.05..2.0);
        let scaled = s.with_demands(|_, d| d * lambda).unwrap();
        let r = fixed_point(&scaled, &a, &LoadVector::zeros(&scaled), &cfg).unwrap();
        if !r.converged {
            continue;
        }
        demand_checked += 1;
        demand_bad += (0..s.n_links()).filter(|&l| r.loads[l] < x[l] - 10.0 * cfg.tol).count();
    }
    outcome(
        mono_bad == 0 && scale_bad == 0 && demand_bad == 0,
        format!(
            "50 pairs: monotonicity violations {mono_bad}, scalability violations {scale_bad}; \
             {demand_checked} demand scalings: decreases {demand_bad}"
        ),
    )
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [Criterion; 7] = [
        (1, "fixed-point uniqueness", Some(Duration::from_secs(10)), criterion_1),
        (2, "single-link closed form", None, criterion_2),
        (3, "improvement test equivalence and sufficiency", None, criterion_3),
        (4, "independent-set gadget corpus", Some(Duration::from_secs(60)), criterion_4),
        (5, "relay selection soundness", None, criterion_5),
        (6, "demand sweep qualitative shape", Some(Duration::from_secs(600)), criterion_6),
        (7, "monotonicity and scalability", None, criterion_7),
    ];
    let mut failed = false;
    for (id, name, limit, f) in criteria {
        let o = timed(limit, f);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let known = !o.pass && KNOWN_FAILING.contains(&id);
        println!("criterion {id} {tag}: {name}: {}{}", o.detail, if known { " [known]" } else { "" });
        failed |= !o.pass && (strict || !known);
    }
    if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS }
}
