//! JSON scenario files.
//!
//! ```json
//! {
//!   "cells": [{"id": "mc0", "kind": "macro", "x": 0.0, "y": 0.0}, ...],
//!   "ues": [{"id": "ue0", "x": 10.0, "y": 5.0, "demand_bps": 1e6}, ...],
//!   "gain": {"rows": ["mc0", ...], "cols": ["ue0", ..., "rc0", ...], "data": [...]},
//!   "power": [0.8, ...],
//!   "noise_w": 7.2e-16,
//!   "num_ru": 100,
//!   "ru_bandwidth_hz": 180000.0,
//!   "candidates": [{"node": "ue0", "cells": ["mc0", "rc3"]}, ...]
//! }
//! ```
//!
//! `power` follows the order of `cells`. Gain rows are cells, columns are
//! receivers (UEs and relays, a relay using its cell id), row-major.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CellId, Position, Scenario, ScenarioParts, Ue};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKindRecord {
    Macro,
    Relay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRecord {
    pub id: String,
    pub kind: CellKindRecord,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UeRecord {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub demand_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateRecord {
    pub node: String,
    pub cells: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub cells: Vec<CellRecord>,
    pub ues: Vec<UeRecord>,
    pub gain: GainTable,
    pub power: Vec<f64>,
    pub noise_w: f64,
    pub num_ru: u32,
    pub ru_bandwidth_hz: f64,
    pub candidates: Vec<CandidateRecord>,
}

fn fmt_err(m: impl Into<String>) -> Error {
    Error::Format(m.into())
}

impl ScenarioFile {
    pub fn from_scenario<T: Scalar>(s: &Scenario<T>) -> Self {
        let cell_ids = canonical_cell_ids(s.n_mc(), s.n_rc());
        let node_ids = canonical_node_ids(s.n_ue(), s.n_rc());
        let cells = s
            .cells()
            .map(|c| {
                let p = s.cell_position(c);
                CellRecord {
                    id: cell_ids[c.0].clone(),
                    kind: if c.0 < s.n_mc() { CellKindRecord::Macro } else { CellKindRecord::Relay },
                    x: p.x.as_f64(),
                    y: p.y.as_f64(),
                }
            })
            .collect();
        let ues = s
            .ues()
            .iter()
            .enumerate()
            .map(|(j, u)| UeRecord {
                id: node_ids[j].clone(),
                x: u.position.x.as_f64(),
                y: u.position.y.as_f64(),
                demand_bps: u.demand_bps.as_f64(),
            })
            .collect();
        let candidates = s
            .nodes()
            .map(|j| CandidateRecord {
                node: node_ids[j.0].clone(),
                cells: s.candidates(j).iter().map(|c| cell_ids[c.0].clone()).collect(),
            })
            .collect();
        Self {
            cells,
            ues,
            gain: GainTable {
                rows: cell_ids,
                cols: node_ids,
                data: s.gain_matrix().iter().map(|g| g.as_f64()).collect(),
            },
            power: s.powers().iter().map(|p| p.as_f64()).collect(),
            noise_w: s.noise_w().as_f64(),
            num_ru: s.num_ru(),
            ru_bandwidth_hz: s.ru_bandwidth_hz().as_f64(),
            candidates,
        }
    }

    /// Cell ids in scenario index order (macros first, then relays).
    pub fn cell_labels(&self) -> Vec<String> {
        let macros = self.cells.iter().filter(|c| c.kind == CellKindRecord::Macro);
        let relays = self.cells.iter().filter(|c| c.kind == CellKindRecord::Relay);
        macros.chain(relays).map(|c| c.id.clone()).collect()
    }

    /// Node ids in scenario index order (UEs first, then relays).
    pub fn node_labels(&self) -> Vec<String> {
        let relays = self.cells.iter().filter(|c| c.kind == CellKindRecord::Relay);
        self.ues.iter().map(|u| u.id.clone()).chain(relays.map(|c| c.id.clone())).collect()
    }

    pub fn to_scenario<T: Scalar>(&self) -> Result<Scenario<T>> {
        let cell_labels = self.cell_labels();
        let node_labels = self.node_labels();
        let n_mc = self.cells.iter().filter(|c| c.kind == CellKindRecord::Macro).count();
        let n_cells = cell_labels.len();
        let n_nodes = node_labels.len();

        let index = |labels: &[String], what: &str| -> Result<HashMap<String, usize>> {
            let mut m = HashMap::with_capacity(labels.len());
            for (i, l) in labels.iter().enumerate() {
                if m.insert(l.clone(), i).is_some() {
                    return Err(fmt_err(format!("duplicate {what} id {l:?}")));
                }
            }
            Ok(m)
        };
        let cell_ix = index(&cell_labels, "cell")?;
        let node_ix = index(&node_labels, "node")?;

        // file order -> scenario order for per-cell arrays
        let file_to_cell: Vec<usize> = self.cells.iter().map(|c| cell_ix[&c.id]).collect();
        if self.power.len() != self.cells.len() {
            return Err(fmt_err(format!(
                "power has {} entries for {} cells",
                self.power.len(),
                self.cells.len()
            )));
        }
        let mut power = vec![0.0; n_cells];
        let mut positions = vec![(0.0, 0.0); n_cells];
        for (f, c) in self.cells.iter().enumerate() {
            power[file_to_cell[f]] = self.power[f];
            positions[file_to_cell[f]] = (c.x, c.y);
        }

        let g = &self.gain;
        if g.rows.len() != n_cells || g.cols.len() != n_nodes {
            return Err(fmt_err(format!(
                "gain table is {} x {}, expected {n_cells} x {n_nodes}",
                g.rows.len(),
                g.cols.len()
            )));
        }
        if g.data.len() != n_cells * n_nodes {
            return Err(fmt_err(format!(
                "gain data has {} entries, expected {}",
                g.data.len(),
                n_cells * n_nodes
            )));
        }
        let lookup = |m: &HashMap<String, usize>, id: &str, what: &str| {
            m.get(id).copied().ok_or_else(|| fmt_err(format!("unknown {what} id {id:?}")))
        };
        let rows = g.rows.iter().map(|r| lookup(&cell_ix, r, "cell")).collect::<Result<Vec<_>>>()?;
        let cols = g.cols.iter().map(|c| lookup(&node_ix, c, "node")).collect::<Result<Vec<_>>>()?;
        let mut gain = vec![f64::NAN; n_cells * n_nodes];
        for (r, &ri) in rows.iter().enumerate() {
            for (c, &ci) in cols.iter().enumerate() {
                gain[ri * n_nodes + ci] = g.data[r * g.cols.len() + c];
            }
        }
        if gain.iter().any(|v| v.is_nan()) {
            return Err(fmt_err("gain rows/cols do not cover every cell and node"));
        }

        let mut candidates: Vec<Option<Vec<CellId>>> = vec![None; n_nodes];
        for rec in &self.candidates {
            let j = lookup(&node_ix, &rec.node, "node")?;
            let cells = rec
                .cells
                .iter()
                .map(|c| lookup(&cell_ix, c, "cell").map(CellId))
                .collect::<Result<Vec<_>>>()?;
            if candidates[j].replace(cells).is_some() {
                return Err(fmt_err(format!("candidates listed twice for {:?}", rec.node)));
            }
        }
        let candidates = candidates
            .into_iter()
            .enumerate()
            .map(|(j, c)| c.ok_or_else(|| fmt_err(format!("no candidates for {:?}", node_labels[j]))))
            .collect::<Result<Vec<_>>>()?;

        let t = T::lit;
        let pos = |(x, y): (f64, f64)| Position::new(t(x), t(y));
        Scenario::new(ScenarioParts {
            macro_cells: positions[..n_mc].iter().copied().map(pos).collect(),
            relay_cells: positions[n_mc..].iter().copied().map(pos).collect(),
            ues: self
                .ues
                .iter()
                .map(|u| Ue { position: pos((u.x, u.y)), demand_bps: t(u.demand_bps) })
                .collect(),
            gain: gain.into_iter().map(t).collect(),
            power: power.into_iter().map(t).collect(),
            noise_w: t(self.noise_w),
            num_ru: self.num_ru,
            ru_bandwidth_hz: t(self.ru_bandwidth_hz),
            candidates,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn canonical_cell_ids(n_mc: usize, n_rc: usize) -> Vec<String> {
    (0..n_mc).map(|i| format!("mc{i}")).chain((0..n_rc).map(|k| format!("rc{k}"))).collect()
}

fn canonical_node_ids(n_ue: usize, n_rc: usize) -> Vec<String> {
    (0..n_ue).map(|j| format!("ue{j}")).chain((0..n_rc).map(|k| format!("rc{k}"))).collect()
}

impl<T: Scalar> Scenario<T> {
    pub fn to_json(&self) -> Result<String> {
        ScenarioFile::from_scenario(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        ScenarioFile::from_json(text)?.to_scenario()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::tests::one_relay_parts;

    #[test]
    fn json_round_trip_is_exact() {
        let s = Scenario::new(one_relay_parts()).unwrap();
        let text = s.to_json().unwrap();
        let back: Scenario<f64> = Scenario::from_json(&text).unwrap();
        assert_eq!(back, s);
        for key in ["cells", "ues", "gain", "power", "noise_w", "num_ru", "ru_bandwidth_hz", "candidates"] {
            assert!(text.contains(&format!("\"{key}\"")), "missing key {key}");
        }
    }

    #[test]
    fn accepts_reordered_cells_and_gain_axes() {
        let s = Scenario::new(one_relay_parts()).unwrap();
        let mut f = ScenarioFile::from_scenario(&s);
        f.cells.reverse();
        f.power.reverse();
        // transpose-free reorder: reverse rows
        let cols = f.gain.cols.len();
        let mut data = Vec::new();
        for r in (0..f.gain.rows.len()).rev() {
            data.extend_from_slice(&f.gain.data[r * cols..(r + 1) * cols]);
        }
        f.gain.rows.reverse();
        f.gain.data = data;
        let back: Scenario<f64> = f.to_scenario().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn reports_unknown_ids() {
        let s = Scenario::new(one_relay_parts()).unwrap();
        let mut f = ScenarioFile::from_scenario(&s);
        f.candidates[0].cells.push("mc9".into());
        assert!(matches!(f.to_scenario::<f64>(), Err(Error::Format(_))));
    }

    #[test]
    fn reports_missing_candidates() {
        let s = Scenario::new(one_relay_parts()).unwrap();
        let mut f = ScenarioFile::from_scenario(&s);
        f.candidates.pop();
        assert!(f.to_scenario::<f64>().is_err());
    }
}
