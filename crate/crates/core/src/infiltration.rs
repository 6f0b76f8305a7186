//! Firm-level analysis: the infiltration index and the test that an
//! infiltrated firm holds the highest degree of its sub-network.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::{ser3, ser3_opt};
use crate::network::{EconomicNetwork, NodeId};
use crate::ranking::{dense_rank_ascending, FirmCountThresholds};
use crate::table::{DegreeSource, NodeTable};

/// Share of all degree endpoints that belong to infiltrated nodes.
///
/// An edge between two infiltrated nodes counts once for each endpoint, so
/// the index is exactly 1 when every node is infiltrated.
pub fn infiltration_index(net: &EconomicNetwork) -> Result<f64> {
    infiltration_index_of(&NodeTable::from_network(net)?)
}

pub fn infiltration_index_of(table: &NodeTable) -> Result<f64> {
    let masses = TieMass::of(table)?;
    Ok(masses.infiltrated as f64 / masses.total as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TieMass {
    pub infiltrated: usize,
    pub total: usize,
}

impl TieMass {
    pub fn of(table: &NodeTable) -> Result<Self> {
        let mut total = 0;
        let mut infiltrated = 0;
        for r in table.records() {
            let d = r.degree.ok_or_else(|| Error::MissingDegree(r.id.clone()))?;
            total += d;
            if r.infiltrated {
                infiltrated += d;
            }
        }
        if total == 0 {
            return Err(Error::IndexUndefined);
        }
        Ok(TieMass { infiltrated, total })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H2Verdict {
    pub rejected: bool,
    #[serde(serialize_with = "ser3")]
    pub max_centrality: f64,
    /// Every node sharing the maximal centrality, sorted by id.
    pub top_nodes: Vec<NodeId>,
    pub best_infiltrated: NodeId,
    #[serde(serialize_with = "ser3")]
    pub best_infiltrated_centrality: f64,
    /// `best_infiltrated_centrality - max_centrality`; zero when not rejected.
    #[serde(serialize_with = "ser3")]
    pub margin: f64,
}

/// Ties at the top count in favour: the hypothesis needs at least one
/// infiltrated node among the maximally central ones.
pub fn test_h2(table: &NodeTable) -> Result<H2Verdict> {
    if table.len() < 2 {
        return Err(Error::DegenerateNetwork(table.len()));
    }
    let best = table
        .infiltrated()
        .max_by(|a, b| a.centrality.total_cmp(&b.centrality).then_with(|| b.id.cmp(&a.id)))
        .ok_or(Error::NothingToTest)?;
    let max_centrality = table.records().iter().map(|r| r.centrality).fold(f64::NEG_INFINITY, f64::max);
    let mut top_nodes: Vec<NodeId> =
        table.records().iter().filter(|r| r.centrality == max_centrality).map(|r| r.id.clone()).collect();
    top_nodes.sort();
    Ok(H2Verdict {
        rejected: best.centrality < max_centrality,
        max_centrality,
        top_nodes,
        best_infiltrated: best.id.clone(),
        best_infiltrated_centrality: best.centrality,
        margin: best.centrality - max_centrality,
    })
}

pub fn test_h2_network(net: &EconomicNetwork) -> Result<H2Verdict> {
    test_h2(&NodeTable::from_network(net)?)
}

/// Per-node computed record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMetrics {
    pub id: NodeId,
    pub label: String,
    pub raw_degree: Option<usize>,
    #[serde(serialize_with = "ser3")]
    pub degree_centrality: f64,
    pub rank_degree: usize,
    pub firm_count_bin: Option<u8>,
    pub icc: Option<usize>,
    pub infiltrated: bool,
}

/// Metrics for every node, sorted by id. Bins and ICC are filled in only
/// when every node carries a firm count.
pub fn node_metrics(table: &NodeTable, thresholds: &FirmCountThresholds) -> Result<Vec<NodeMetrics>> {
    let centralities: Vec<f64> = table.records().iter().map(|r| r.centrality).collect();
    let ranks = dense_rank_ascending(&centralities)?;
    let have_counts = table.records().iter().all(|r| r.firm_count.is_some());
    let mut out: Vec<NodeMetrics> = table
        .records()
        .iter()
        .zip(ranks)
        .map(|(r, rank_degree)| {
            let bin = if have_counts { r.firm_count.map(|c| thresholds.bin(c)) } else { None };
            NodeMetrics {
                id: r.id.clone(),
                label: r.label.clone(),
                raw_degree: r.degree,
                degree_centrality: r.centrality,
                rank_degree,
                firm_count_bin: bin,
                icc: bin.map(|b| rank_degree + b as usize),
                infiltrated: r.infiltrated,
            }
        })
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfiltrationReport {
    #[serde(serialize_with = "ser3_opt")]
    pub infiltration_index: Option<f64>,
    pub tie_mass: Option<TieMass>,
    pub degree_source: DegreeSource,
    pub infiltrated_nodes: Vec<NodeId>,
    pub h2: H2Verdict,
    pub top_node: NodeId,
    pub per_node_metrics: Vec<NodeMetrics>,
}

/// Runs the firm-level analysis. The index is absent when the table carries
/// no integer degrees (centralities that do not invert cleanly).
pub fn analyze_firms(table: &NodeTable, thresholds: &FirmCountThresholds) -> Result<InfiltrationReport> {
    let h2 = test_h2(table)?;
    let tie_mass = match table.source() {
        DegreeSource::CentralityOnly => None,
        _ => Some(TieMass::of(table)?),
    };
    let mut infiltrated_nodes: Vec<NodeId> = table.infiltrated().map(|r| r.id.clone()).collect();
    infiltrated_nodes.sort();
    Ok(InfiltrationReport {
        infiltration_index: tie_mass.map(|m| m.infiltrated as f64 / m.total as f64),
        tie_mass,
        degree_source: table.source(),
        infiltrated_nodes,
        top_node: h2.top_nodes[0].clone(),
        h2,
        per_node_metrics: node_metrics(table, thresholds)?,
    })
}
