use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{classify, AnalyticError, PlacementClass, PlacementFamily, PlacementPolicy};
use crate::config::Tier;
use crate::workload::WorkloadProfile;

/// Sampling of the (generation rate, processing time) plane.
///
/// Both axes run from 0 to their maximum inclusive. The processing-time
/// axis is measured on `reference_tier`; the other tiers' processing times
/// are scaled by the same factor relative to the base profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapSpec {
    pub rate_max: f64,
    pub proc_time_max: f64,
    pub rate_steps: usize,
    pub proc_time_steps: usize,
    pub reference_tier: Tier,
}

impl Default for HeatmapSpec {
    /// 0..20 Hz in 0.5 Hz steps by 0..0.44 s in 11 ms steps on the
    /// endpoint tier, which puts the worked examples on grid points.
    fn default() -> Self {
        Self {
            rate_max: 20.0,
            proc_time_max: 0.44,
            rate_steps: 41,
            proc_time_steps: 41,
            reference_tier: Tier::Endpoint,
        }
    }
}

/// A labelled point to locate on the heatmap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub label: String,
    pub rate: f64,
    /// Processing time on the reference tier.
    pub proc_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkerResult {
    pub label: String,
    pub rate: f64,
    pub proc_time: f64,
    /// Class at the exact coordinates.
    pub class: PlacementClass,
    /// Nearest grid cell, as (row = proc-time index, column = rate index).
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub reference_tier: Tier,
    /// Column coordinates, Hz.
    pub rates: Vec<f64>,
    /// Row coordinates, seconds.
    pub proc_times: Vec<f64>,
    /// `cells[row][col]`, rows by processing time, columns by rate.
    pub cells: Vec<Vec<PlacementClass>>,
    pub markers: Vec<MarkerResult>,
}

/// The two worked examples: the overloaded endpoint (A) and the edge
/// offload of two endpoints (B). They share the workload, so on a
/// single-profile heatmap they sit at the same coordinates.
pub fn reference_markers(base: &WorkloadProfile, reference_tier: Tier) -> Result<Vec<Marker>, AnalyticError> {
    let t = base.proc_time_for(reference_tier)?;
    Ok(vec![
        Marker { label: "A".into(), rate: base.rate, proc_time: t },
        Marker { label: "B".into(), rate: base.rate, proc_time: t },
    ])
}

fn axis(max: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps).map(|i| max * i as f64 / last).collect()
}

fn nearest(axis: &[f64], v: f64) -> usize {
    axis.iter().enumerate().min_by(|a, b| (a.1 - v).abs().total_cmp(&(b.1 - v).abs())).map(|(i, _)| i).unwrap_or(0)
}

/// Classifies every cell of the grid. Element size and preprocessing time
/// come from `base` unchanged; the data rate follows the cell's rate.
pub fn heatmap(
    spec: &HeatmapSpec,
    base: &WorkloadProfile,
    family: &PlacementFamily,
    policy: &PlacementPolicy,
    markers: &[Marker],
) -> Result<HeatmapGrid, AnalyticError> {
    if !(spec.rate_max > 0.0 && spec.rate_max.is_finite()) {
        return Err(AnalyticError::InvalidGrid(format!("rate maximum must be > 0, got {}", spec.rate_max)));
    }
    if !(spec.proc_time_max > 0.0 && spec.proc_time_max.is_finite()) {
        return Err(AnalyticError::InvalidGrid(format!(
            "processing-time maximum must be > 0, got {}",
            spec.proc_time_max
        )));
    }
    if spec.rate_steps < 2 || spec.proc_time_steps < 2 {
        return Err(AnalyticError::InvalidGrid("resolution must be at least 2".into()));
    }
    let base_t = base.proc_time_for(spec.reference_tier)?;
    if base_t <= 0.0 {
        return Err(AnalyticError::InvalidGrid(format!(
            "base processing time on the {} tier must be > 0 to scale from",
            spec.reference_tier
        )));
    }

    let at = |rate: f64, t: f64| {
        let w = base.clone().with_rate(rate).with_proc_scale(t / base_t);
        classify(&w, family, policy)
    };

    let rates = axis(spec.rate_max, spec.rate_steps);
    let proc_times = axis(spec.proc_time_max, spec.proc_time_steps);
    let cells = proc_times
        .iter()
        .map(|t| rates.iter().map(|r| at(*r, *t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;

    let markers = markers
        .iter()
        .map(|m| {
            Ok(MarkerResult {
                label: m.label.clone(),
                rate: m.rate,
                proc_time: m.proc_time,
                class: at(m.rate, m.proc_time)?,
                row: nearest(&proc_times, m.proc_time),
                col: nearest(&rates, m.rate),
            })
        })
        .collect::<Result<Vec<_>, AnalyticError>>()?;

    Ok(HeatmapGrid { reference_tier: spec.reference_tier, rates, proc_times, cells, markers })
}

impl HeatmapGrid {
    pub fn class_at(&self, row: usize, col: usize) -> PlacementClass {
        self.cells[row][col]
    }

    pub fn contains(&self, class: PlacementClass) -> bool {
        self.cells.iter().flatten().any(|c| *c == class)
    }

    /// Header row of rates, then one row per processing time with its
    /// value in the first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("proc_time\\rate");
        for r in &self.rates {
            let _ = write!(out, ",{r}");
        }
        out.push('\n');
        for (t, row) in self.proc_times.iter().zip(&self.cells) {
            let _ = write!(out, "{t}");
            for c in row {
                let _ = write!(out, ",{}", c.label());
            }
            out.push('\n');
        }
        out
    }

    pub fn markers_csv(&self) -> String {
        let mut out = String::from("label,rate,proc_time,class,row,col\n");
        for m in &self.markers {
            let _ = writeln!(out, "{},{},{},{},{},{}", m.label, m.rate, m.proc_time, m.class.label(), m.row, m.col);
        }
        out
    }
}
