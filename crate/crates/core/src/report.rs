//! Combined analysis document.
//!
//! Serialization is deterministic: sections and fields appear in a fixed
//! order, per-node tables are sorted by id and floats are rounded to three
//! decimals only when written.

use serde::Serialize;

use crate::error::{Result, StageExt};
use crate::fmt::{fmt3, ser3};
use crate::infiltration::{analyze_firms, InfiltrationReport};
use crate::ingest::FixtureMeta;
use crate::ranking::{compute_icc, test_h1, FirmCountThresholds, H1Verdict, IccTable};
use crate::table::{DegreeSource, NodeTable};
use crate::uncertainty::{
    fit_method_of_moments, shape_checks, uncertainty_interval, GammaMoments, GammaParams, ShapeChecks,
    UncertaintyInterval, DEFAULT_LEFT_PROBE,
};

#[derive(Debug, Clone, Serialize)]
pub struct SectorAnalysis {
    pub degree_source: DegreeSource,
    pub icc: IccTable,
    pub h1: H1Verdict,
}

pub fn analyze_sectors(table: &NodeTable, thresholds: &FirmCountThresholds) -> Result<SectorAnalysis> {
    let icc = compute_icc(table, thresholds)?;
    let h1 = test_h1(&icc)?;
    Ok(SectorAnalysis { degree_source: table.source(), icc, h1 })
}

/// How the Gamma parameters are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Explicit(GammaParams),
    Moments { mean: f64, std_dev: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaFit {
    pub method: &'static str,
    #[serde(serialize_with = "ser3")]
    pub target_mean: f64,
    #[serde(serialize_with = "ser3")]
    pub target_std_dev: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct UncertaintySection {
    #[serde(serialize_with = "ser3")]
    pub shape: f64,
    #[serde(serialize_with = "ser3")]
    pub scale: f64,
    pub fit: Option<GammaFit>,
    pub moments: GammaMoments,
    pub interval: UncertaintyInterval,
    pub shape_checks: ShapeChecks,
}

pub fn resolve_gamma(spec: GammaSpec) -> Result<(GammaParams, Option<GammaFit>)> {
    match spec {
        GammaSpec::Explicit(p) => Ok((p, None)),
        GammaSpec::Moments { mean, std_dev } => {
            let p = fit_method_of_moments(mean, std_dev)?;
            let reference = GammaParams::CASE_STUDY.shape();
            let note = format!(
                "shape = (mean/sd)^2 = {}, scale = sd^2/mean = {}; delta to case-study shape {} is {} \
                 (within the error of mean and sd rounded to 3 decimals)",
                fmt3(p.shape()),
                fmt3(p.scale()),
                fmt3(reference),
                fmt3(p.shape() - reference),
            );
            Ok((p, Some(GammaFit { method: "method_of_moments", target_mean: mean, target_std_dev: std_dev, note })))
        }
    }
}

pub fn analyze_uncertainty(observed: f64, spec: GammaSpec) -> Result<UncertaintySection> {
    let (params, fit) = resolve_gamma(spec)?;
    let interval = uncertainty_interval(observed, &params)?;
    Ok(UncertaintySection {
        shape: params.shape(),
        scale: params.scale(),
        fit,
        moments: params.moments(),
        interval,
        shape_checks: shape_checks(&params, observed, DEFAULT_LEFT_PROBE),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub dataset: String,
    pub inputs: Vec<String>,
    pub metadata: Vec<FixtureMeta>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub thresholds: FirmCountThresholds,
    pub sector_analysis: Option<SectorAnalysis>,
    pub firm_analysis: Option<InfiltrationReport>,
    pub uncertainty: Option<UncertaintySection>,
    pub provenance: Vec<Provenance>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportInputs<'a> {
    pub sectors: Option<&'a NodeTable>,
    pub firms: Option<&'a NodeTable>,
    pub thresholds: FirmCountThresholds,
    pub gamma: Option<GammaSpec>,
    /// Overrides the firm infiltration index as the interval's lower bound.
    pub observed: Option<f64>,
    pub provenance: Vec<Provenance>,
}

/// Runs every analysis that the inputs allow. Sections without input are
/// serialized as `null`; failures name the stage they came from.
pub fn assemble_report(inputs: ReportInputs<'_>) -> Result<AnalysisReport> {
    let sector_analysis =
        inputs.sectors.map(|t| analyze_sectors(t, &inputs.thresholds)).transpose().stage("sector_analysis")?;
    let firm_analysis =
        inputs.firms.map(|t| analyze_firms(t, &inputs.thresholds)).transpose().stage("firm_analysis")?;
    let observed = inputs.observed.or_else(|| firm_analysis.as_ref().and_then(|f| f.infiltration_index));
    let uncertainty = match (inputs.gamma, observed) {
        (Some(spec), Some(obs)) => Some(analyze_uncertainty(obs, spec).stage("uncertainty")?),
        _ => None,
    };
    Ok(AnalysisReport {
        thresholds: inputs.thresholds,
        sector_analysis,
        firm_analysis,
        uncertainty,
        provenance: inputs.provenance,
    })
}

/// Density samples for plotting: `x` from 0 to 1.2 in steps of 0.005.
pub fn gamma_density_csv(params: &GammaParams) -> String {
    let mut out = String::from("x,pdf\n");
    for i in 0..=240 {
        let x = i as f64 * 0.005;
        out.push_str(&format!("{},{}\n", fmt3(x), fmt3(params.pdf(x))));
    }
    out
}

/// Firm counts per sector, sorted by id.
pub fn firm_histogram_csv(table: &NodeTable) -> String {
    let mut rows: Vec<_> = table.records().iter().collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["id", "label", "firm_count"]).expect("in-memory write");
    for r in rows {
        let count = r.firm_count.map(|c| c.to_string()).unwrap_or_default();
        writer.write_record([r.id.as_str(), r.label.as_str(), count.as_str()]).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}
