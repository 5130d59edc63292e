//! JSON files read and written by the CLI: associations, graphs, sweep
//! specs and solve reports. Cells and nodes are referred to by the ids used
//! in the scenario file.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use relaynet_core::coupling::FixedPointResult;
use relaynet_core::scenario::{GraphInstance, ScenarioFile};
use relaynet_core::{Association, CellId, Scenario};
use serde::{Deserialize, Serialize};

use crate::sweep::SweepSpec;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", text.trim_end())?;
            Ok(out.flush()?)
        }
    }
}

/// A scenario together with the labels of its file.
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub scenario: Scenario<f64>,
}

impl LoadedScenario {
    pub fn read(path: &Path) -> Result<Self> {
        let file = ScenarioFile::from_json(&read_text(path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        let scenario = file.to_scenario()?;
        Ok(Self { file, scenario })
    }

    pub fn from_scenario(scenario: Scenario<f64>) -> Self {
        Self { file: ScenarioFile::from_scenario(&scenario), scenario }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServingRecord {
    pub node: String,
    pub cell: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssociationFile {
    pub serving: Vec<ServingRecord>,
}

impl AssociationFile {
    pub fn from_association(loaded: &LoadedScenario, a: &Association) -> Self {
        let cells = loaded.file.cell_labels();
        let nodes = loaded.file.node_labels();
        let serving = nodes
            .into_iter()
            .zip(a.as_slice())
            .map(|(node, c)| ServingRecord { node, cell: cells[c.0].clone() })
            .collect();
        Self { serving }
    }

    /// Every node must appear exactly once.
    pub fn to_association(&self, loaded: &LoadedScenario) -> Result<Association> {
        let cells: HashMap<String, usize> =
            loaded.file.cell_labels().into_iter().enumerate().map(|(i, l)| (l, i)).collect();
        let nodes: HashMap<String, usize> =
            loaded.file.node_labels().into_iter().enumerate().map(|(j, l)| (l, j)).collect();
        let mut serving: Vec<Option<CellId>> = vec![None; nodes.len()];
        for r in &self.serving {
            let j = *nodes.get(&r.node).ok_or_else(|| anyhow!("unknown node {:?}", r.node))?;
            let i = *cells.get(&r.cell).ok_or_else(|| anyhow!("unknown cell {:?}", r.cell))?;
            if serving[j].replace(CellId(i)).is_some() {
                bail!("node {:?} assigned twice", r.node);
            }
        }
        let serving = serving
            .into_iter()
            .zip(loaded.file.node_labels())
            .map(|(c, l)| c.ok_or_else(|| anyhow!("node {l:?} has no serving cell")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Association::new(&loaded.scenario, serving)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn read_graph(path: &Path) -> Result<GraphInstance> {
    let g: GraphInstance =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    g.validate()?;
    Ok(g)
}

pub fn read_sweep_spec(path: &Path) -> Result<SweepSpec> {
    let spec: SweepSpec =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkLoad {
    pub cell: String,
    pub node: String,
    pub load: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellLoad {
    pub cell: String,
    pub load: f64,
}

/// Output of `solve` and `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub energy: f64,
    pub feasible: bool,
    pub converged: bool,
    pub iterations: usize,
    pub association: AssociationFile,
    /// Serving links only.
    pub link_loads: Vec<LinkLoad>,
    pub cell_loads: Vec<CellLoad>,
}

impl SolveReport {
    pub fn new(loaded: &LoadedScenario, a: &Association, r: &FixedPointResult<f64>) -> Self {
        let s = &loaded.scenario;
        let cells = loaded.file.cell_labels();
        let nodes = loaded.file.node_labels();
        let link_loads = s
            .nodes()
            .map(|j| {
                let c = a.get(j);
                let l = s.link_index(c, j).expect("association within candidates");
                LinkLoad { cell: cells[c.0].clone(), node: nodes[j.0].clone(), load: r.loads[l] }
            })
            .collect();
        let cell_loads = cells
            .iter()
            .zip(&r.cell_load)
            .map(|(c, &load)| CellLoad { cell: c.clone(), load })
            .collect();
        Self {
            energy: r.energy,
            feasible: r.feasible,
            converged: r.converged,
            iterations: r.iterations,
            association: AssociationFile::from_association(loaded, a),
            link_loads,
            cell_loads,
        }
    }
}
