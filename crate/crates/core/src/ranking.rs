//! Centrality ranks, firm-count bins and the Index of Centrality and
//! Concentration (ICC), plus the above-average ICC test for infiltrated
//! sectors.
//!
//! The ICC of a sector is its dense ascending degree rank plus its firm-count
//! bin. Bins run from 5 (very few firms, monopoly-prone) down to 1 (very many
//! firms), so a high ICC marks a sector that is both central and
//! concentrated.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::ser3;
use crate::network::{EconomicNetwork, NodeId};
use crate::table::NodeTable;

/// Dense ascending ranks: the smallest value gets 1, ties share a rank and the
/// next distinct value gets the next integer. Output order follows input order.
pub fn dense_rank_ascending(values: &[f64]) -> Result<Vec<usize>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("dense_rank_ascending needs at least one value"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Numerical("cannot rank NaN".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));

    let mut ranks = vec![0; values.len()];
    let mut rank = 0;
    let mut prev: Option<f64> = None;
    for i in order {
        if prev != Some(values[i]) {
            rank += 1;
            prev = Some(values[i]);
        }
        ranks[i] = rank;
    }
    Ok(ranks)
}

/// Upper bounds of the firm-count bins 5, 4, 3 and 2; counts above the last
/// threshold fall in bin 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FirmCountThresholds([u64; 4]);

impl FirmCountThresholds {
    pub const CASE_STUDY: FirmCountThresholds = FirmCountThresholds([3, 20, 60, 100]);

    pub fn new(thresholds: [u64; 4]) -> Result<Self> {
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ThresholdsNotAscending(thresholds));
        }
        Ok(FirmCountThresholds(thresholds))
    }

    pub fn values(&self) -> [u64; 4] {
        self.0
    }

    pub fn bin(&self, count: u64) -> u8 {
        let above = self.0.iter().filter(|&&t| count > t).count() as u8;
        5 - above
    }
}

impl Default for FirmCountThresholds {
    fn default() -> Self {
        Self::CASE_STUDY
    }
}

impl fmt::Display for FirmCountThresholds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl std::str::FromStr for FirmCountThresholds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Usage(format!("thresholds must be four comma-separated integers, got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut out = [0u64; 4];
        for (slot, p) in out.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        FirmCountThresholds::new(out)
    }
}

pub fn bin_firm_counts(counts: &[u64], thresholds: &FirmCountThresholds) -> Vec<u8> {
    counts.iter().map(|&c| thresholds.bin(c)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSector {
    pub id: NodeId,
    pub label: String,
    #[serde(serialize_with = "ser3")]
    pub degree_centrality: f64,
    pub firm_count: u64,
    pub rank_degree: usize,
    pub rank_firms: u8,
    pub icc: usize,
    pub infiltrated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IccTable {
    pub thresholds: FirmCountThresholds,
    /// Rows in input order.
    pub sectors: Vec<RankedSector>,
    #[serde(serialize_with = "ser3")]
    pub mean_icc: f64,
    pub icc_sum: usize,
}

impl IccTable {
    pub fn get(&self, id: &NodeId) -> Option<&RankedSector> {
        self.sectors.iter().find(|s| &s.id == id)
    }

    /// Rows sorted by node id.
    pub fn sorted(&self) -> Vec<&RankedSector> {
        let mut rows: Vec<&RankedSector> = self.sectors.iter().collect();
        rows.sort_by(|a, b| a.id.cmp(&b.id));
        rows
    }
}

pub fn compute_icc(table: &NodeTable, thresholds: &FirmCountThresholds) -> Result<IccTable> {
    let records = table.records();
    if records.len() < 2 {
        return Err(Error::DegenerateNetwork(records.len()));
    }
    let counts = records
        .iter()
        .map(|r| r.firm_count.ok_or_else(|| Error::MissingFirmCount(r.id.clone())))
        .collect::<Result<Vec<u64>>>()?;
    let centralities: Vec<f64> = records.iter().map(|r| r.centrality).collect();
    let ranks = dense_rank_ascending(&centralities)?;
    let bins = bin_firm_counts(&counts, thresholds);

    let sectors: Vec<RankedSector> = records
        .iter()
        .zip(ranks.iter().zip(&bins))
        .zip(&counts)
        .map(|((r, (&rank_degree, &rank_firms)), &firm_count)| RankedSector {
            id: r.id.clone(),
            label: r.label.clone(),
            degree_centrality: r.centrality,
            firm_count,
            rank_degree,
            rank_firms,
            icc: rank_degree + rank_firms as usize,
            infiltrated: r.infiltrated,
        })
        .collect();
    let icc_sum: usize = sectors.iter().map(|s| s.icc).sum();
    let mean_icc = icc_sum as f64 / sectors.len() as f64;
    Ok(IccTable { thresholds: *thresholds, sectors, mean_icc, icc_sum })
}

pub fn compute_icc_network(net: &EconomicNetwork, thresholds: &FirmCountThresholds) -> Result<IccTable> {
    compute_icc(&NodeTable::from_network(net)?, thresholds)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorCheck {
    pub id: NodeId,
    pub icc: usize,
    #[serde(serialize_with = "ser3")]
    pub margin: f64,
    pub above_mean: bool,
}

/// Outcome of testing whether infiltrated sectors have above-average ICC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H1Verdict {
    /// ICC of the infiltrated sector closest to (or furthest below) the mean.
    pub infiltrated_sector_icc: usize,
    #[serde(serialize_with = "ser3")]
    pub mean_icc: f64,
    pub rejected: bool,
    /// Smallest `icc - mean_icc` over infiltrated sectors.
    #[serde(serialize_with = "ser3")]
    pub margin: f64,
    pub sectors: Vec<SectorCheck>,
}

/// The hypothesis holds only if every infiltrated sector is strictly above
/// the mean ICC.
pub fn test_h1(icc: &IccTable) -> Result<H1Verdict> {
    let mut infiltrated: Vec<&RankedSector> = icc.sectors.iter().filter(|s| s.infiltrated).collect();
    if infiltrated.is_empty() {
        return Err(Error::NothingToTest);
    }
    infiltrated.sort_by(|a, b| a.id.cmp(&b.id));
    let sectors: Vec<SectorCheck> = infiltrated
        .iter()
        .map(|s| {
            let margin = s.icc as f64 - icc.mean_icc;
            SectorCheck { id: s.id.clone(), icc: s.icc, margin, above_mean: margin > 0.0 }
        })
        .collect();
    let worst = infiltrated.iter().min_by_key(|s| s.icc).expect("non-empty");
    let margin = worst.icc as f64 - icc.mean_icc;
    Ok(H1Verdict {
        infiltrated_sector_icc: worst.icc,
        mean_icc: icc.mean_icc,
        rejected: !sectors.iter().all(|s| s.above_mean),
        margin,
        sectors,
    })
}
