//! Per-node view shared by the ranking and infiltration analyses.
//!
//! A [`NodeTable`] is built either from an [`EconomicNetwork`] (degrees are
//! counted, centralities exact) or from published metrics rows (centralities
//! given, degrees recovered by inversion when the rounding allows it).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{invert_centrality, NodeMetricsRow};
use crate::network::{EconomicNetwork, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSource {
    /// Degrees counted on an edge list.
    Edges,
    /// Degrees recovered from published, rounded centralities.
    InvertedCentrality,
    /// Centralities only; no integer degrees available.
    CentralityOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub label: String,
    pub degree: Option<usize>,
    pub centrality: f64,
    pub firm_count: Option<u64>,
    pub infiltrated: bool,
}

#[derive(Debug, Clone)]
pub struct NodeTable {
    records: Vec<NodeRecord>,
    source: DegreeSource,
}

impl NodeTable {
    pub fn from_network(net: &EconomicNetwork) -> Result<Self> {
        let g = net.node_count();
        if g < 2 {
            return Err(Error::DegenerateNetwork(g));
        }
        let records = net
            .nodes()
            .map(|(id, attrs)| {
                let c = net.degree_centrality(id)?;
                Ok(NodeRecord {
                    id: id.clone(),
                    label: attrs.label.clone(),
                    degree: Some(c.degree),
                    centrality: c.value(),
                    firm_count: attrs.firm_count,
                    infiltrated: attrs.infiltrated,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NodeTable { records, source: DegreeSource::Edges })
    }

    /// Builds a table from metrics rows. Every row must carry a centrality.
    /// Degrees are filled in only if every centrality inverts cleanly.
    pub fn from_metrics(rows: &[NodeMetricsRow]) -> Result<Self> {
        let g = rows.len();
        if g < 2 {
            return Err(Error::DegenerateNetwork(g));
        }
        let mut records = Vec::with_capacity(g);
        for row in rows {
            let centrality = row.degree_centrality.ok_or_else(|| Error::MissingDegree(row.id.clone()))?;
            records.push(NodeRecord {
                id: row.id.clone(),
                label: row.label.clone(),
                degree: invert_centrality(centrality, g - 1).map(|inv| inv.degree),
                centrality,
                firm_count: row.firm_count,
                infiltrated: row.infiltrated,
            });
        }
        let source = if records.iter().all(|r| r.degree.is_some()) {
            DegreeSource::InvertedCentrality
        } else {
            for r in &mut records {
                r.degree = None;
            }
            DegreeSource::CentralityOnly
        };
        Ok(NodeTable { records, source })
    }

    pub fn records(&self) -> &[NodeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn source(&self) -> DegreeSource {
        self.source
    }

    pub fn infiltrated(&self) -> impl Iterator<Item = &NodeRecord> {
        self.records.iter().filter(|r| r.infiltrated)
    }

    /// Copy with infiltration flags set exactly on `ids`.
    pub fn with_infiltrated<'a, I>(&self, ids: I) -> Result<NodeTable>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut table = self.clone();
        for r in &mut table.records {
            r.infiltrated = false;
        }
        for id in ids {
            let r = table
                .records
                .iter_mut()
                .find(|r| &r.id == id)
                .ok_or_else(|| Error::UnknownNode(id.clone()))?;
            r.infiltrated = true;
        }
        Ok(table)
    }
}
