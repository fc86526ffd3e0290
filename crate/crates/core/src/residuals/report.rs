use serde::Serialize;

use crate::calculus::{ChartGrid, ScalarFieldSample};
use crate::exec::pairwise_sum;

/// A signed nodewise residual together with the magnitude of the equation's
/// largest term at each node.
#[derive(Debug, Clone)]
pub struct ResidualField {
    pub name: String,
    pub value: ScalarFieldSample,
    pub scale: ScalarFieldSample,
}

impl ResidualField {
    pub fn new(name: impl Into<String>, value: ScalarFieldSample, scale: ScalarFieldSample) -> Self {
        Self { name: name.into(), value, scale }
    }

    /// Residual whose natural scale is 1 (normalised quantities).
    pub fn unscaled(name: impl Into<String>, value: ScalarFieldSample) -> Self {
        let scale = value.map(|_| 1.0);
        Self::new(name, value, scale)
    }

    /// Aggregates over reportable nodes where the residual is defined.
    pub fn summarize(&self, grid: &ChartGrid, mask: &[bool]) -> Entry {
        let mut abs2 = Vec::new();
        let mut max_abs = 0.0f64;
        let mut max_rel = 0.0f64;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut worst = None;
        let mut scale_used = 1.0f64;
        for (n, &ok) in mask.iter().enumerate() {
            let v = self.value[n];
            if !ok || !v.is_finite() {
                continue;
            }
            let s = self.scale[n].abs();
            let s = if s.is_finite() { s.max(1.0) } else { 1.0 };
            abs2.push(v * v);
            min = min.min(v);
            max = max.max(v);
            max_rel = max_rel.max(v.abs() / s);
            scale_used = scale_used.max(s);
            if worst.is_none() || v.abs() > max_abs {
                max_abs = v.abs();
                worst = Some(n);
            }
        }
        let nodes = abs2.len();
        Entry {
            name: self.name.clone(),
            max_abs,
            max_rel,
            l2_mean: if nodes == 0 { 0.0 } else { (pairwise_sum(&abs2) / nodes as f64).sqrt() },
            min: if nodes == 0 { 0.0 } else { min },
            max: if nodes == 0 { 0.0 } else { max },
            worst_node: worst.map(|n| grid.coords(n)).unwrap_or_default(),
            scale: scale_used,
            nodes,
        }
    }
}

/// Aggregate statistics of one residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub l2_mean: f64,
    /// Smallest and largest signed value.
    pub min: f64,
    pub max: f64,
    /// Chart coordinates of the node with the largest `|value|`.
    pub worst_node: Vec<f64>,
    pub scale: f64,
    /// Number of nodes that entered the statistics.
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Which statistic of an entry a claim looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    MaxAbs,
    MaxRel,
    Min,
    Max,
}

impl Measure {
    pub fn of(self, e: &Entry) -> f64 {
        match self {
            Measure::MaxAbs => e.max_abs,
            Measure::MaxRel => e.max_rel,
            Measure::Min => e.min,
            Measure::Max => e.max,
        }
    }
}

/// `Below`: the measure must be `< tolerance`; `Above`: `> tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Below,
    Above,
}

/// Where an expected fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Stated in the literature for this example.
    Published,
    /// Computed from the closed form of the example.
    Derived,
    /// Holds by definition or trivially.
    Definitional,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub entry: Option<String>,
    pub status: Status,
    pub measure: Measure,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub value: Option<f64>,
    pub basis: Basis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Grid summary written into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub axes: Vec<crate::calculus::Axis>,
    pub margin: usize,
    pub nodes: usize,
    pub reported_nodes: usize,
    pub excluded_nodes: usize,
    pub stencil_order: u32,
    pub richardson: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub schema: &'static str,
    pub surface: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub grid: GridSummary,
    pub entries: Vec<Entry>,
    pub verdicts: Vec<Verdict>,
    /// Free-form notes (conventions chosen, rejected operations).
    pub notes: Vec<String>,
}

impl ResidualReport {
    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn verdict(&self, claim: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.claim == claim)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failed().next().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
