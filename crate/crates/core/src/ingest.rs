//! CSV ingestion, degree-sequence synthesis and the bundled case-study data.
//!
//! Three CSV layouts are understood:
//!
//! * edges: `source,target`, one undirected tie per row
//! * nodes: `id,label,firm_count,infiltrated`
//! * metrics: `id,label,degree_centrality,firm_count,infiltrated`
//!
//! `firm_count` and `degree_centrality` may be empty; `infiltrated` is `0`
//! or `1`. Parsing errors carry the line number and, for typed fields, the
//! column name.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{EconomicNetwork, NetworkBuilder, NodeAttributes, NodeId};

pub const EDGES_HEADER: [&str; 2] = ["source", "target"];
pub const NODES_HEADER: [&str; 4] = ["id", "label", "firm_count", "infiltrated"];
pub const METRICS_HEADER: [&str; 5] = ["id", "label", "degree_centrality", "firm_count", "infiltrated"];

/// One row of a metrics file.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMetricsRow {
    pub id: NodeId,
    pub label: String,
    pub degree_centrality: Option<f64>,
    pub firm_count: Option<u64>,
    pub infiltrated: bool,
}

impl NodeMetricsRow {
    pub fn attributes(&self) -> NodeAttributes {
        NodeAttributes { label: self.label.clone(), firm_count: self.firm_count, infiltrated: self.infiltrated }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

struct Table {
    columns: Vec<usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn field<'r>(&self, record: &'r csv::StringRecord, col: usize) -> &'r str {
        record.get(self.columns[col]).unwrap_or("")
    }
}

fn read_table(text: &str, source: &str, header: &[&str]) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { path: source.into(), line: 1, message: e.to_string() })?
        .clone();
    let columns = header
        .iter()
        .map(|name| {
            headers.iter().position(|h| h == *name).ok_or_else(|| Error::Parse {
                path: source.into(),
                line: 1,
                message: format!("missing column {name:?} (expected header {})", header.join(",")),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: source.into(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != headers.len() {
            return Err(Error::Parse {
                path: source.into(),
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        rows.push((line, record));
    }
    Ok(Table { columns, rows })
}

fn field_error(source: &str, line: u64, column: &str, message: String) -> Error {
    Error::ParseField { path: source.into(), line, column: column.into(), message }
}

fn parse_id(source: &str, line: u64, column: &str, raw: &str) -> Result<NodeId> {
    NodeId::new(raw).map_err(|_| field_error(source, line, column, "empty node id".into()))
}

fn parse_flag(source: &str, line: u64, raw: &str) -> Result<bool> {
    match raw {
        "0" | "" => Ok(false),
        "1" => Ok(true),
        other => Err(field_error(source, line, "infiltrated", format!("expected 0 or 1, found {other:?}"))),
    }
}

fn parse_count(source: &str, line: u64, raw: &str) -> Result<Option<u64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse()
        .map(Some)
        .map_err(|_| field_error(source, line, "firm_count", format!("expected a non-negative integer, found {raw:?}")))
}

fn parse_centrality(source: &str, line: u64, raw: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    let bad = || field_error(source, line, "degree_centrality", format!("expected a number in [0, 1], found {raw:?}"));
    let v: f64 = raw.parse().map_err(|_| bad())?;
    if !(0.0..=1.0).contains(&v) {
        return Err(bad());
    }
    Ok(Some(v))
}

/// Parses a nodes CSV into `(id, attributes)` pairs in file order.
pub fn parse_nodes_str(text: &str, source: &str) -> Result<Vec<(NodeId, NodeAttributes)>> {
    let table = read_table(text, source, &NODES_HEADER)?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let id = parse_id(source, *line, "id", table.field(rec, 0))?;
        if !seen.insert(id.clone()) {
            return Err(Error::Parse { path: source.into(), line: *line, message: format!("duplicate node {id}") });
        }
        let attrs = NodeAttributes {
            label: table.field(rec, 1).to_string(),
            firm_count: parse_count(source, *line, table.field(rec, 2))?,
            infiltrated: parse_flag(source, *line, table.field(rec, 3))?,
        };
        out.push((id, attrs));
    }
    Ok(out)
}

/// Builds a network from edge-list text, merging node attributes when a
/// nodes table is given. Nodes listed in the nodes table come first, in file
/// order, followed by endpoints that only appear in the edge list.
pub fn parse_edge_list_str(
    edges: &str,
    edges_source: &str,
    nodes: Option<(&str, &str)>,
) -> Result<EconomicNetwork> {
    let mut builder = NetworkBuilder::default();
    if let Some((text, source)) = nodes {
        for (id, attrs) in parse_nodes_str(text, source)? {
            builder.add_node(id, attrs)?;
        }
    }
    let table = read_table(edges, edges_source, &EDGES_HEADER)?;
    for (line, rec) in &table.rows {
        let a = parse_id(edges_source, *line, "source", table.field(rec, 0))?;
        let b = parse_id(edges_source, *line, "target", table.field(rec, 1))?;
        if a == b {
            return Err(Error::Parse { path: edges_source.into(), line: *line, message: format!("self-loop on node {a}") });
        }
        for id in [&a, &b] {
            if !builder.contains(id) {
                builder.add_node(id.clone(), NodeAttributes::labelled(id.as_str()))?;
            }
        }
        builder.add_edge(&a, &b)?;
    }
    Ok(builder.build())
}

pub fn parse_edge_list(edges: &Path, nodes: Option<&Path>) -> Result<EconomicNetwork> {
    let edge_text = read_file(edges)?;
    let node_text = nodes.map(read_file).transpose()?;
    let node_source = nodes.map(|p| p.display().to_string());
    parse_edge_list_str(
        &edge_text,
        &edges.display().to_string(),
        node_text.as_deref().zip(node_source.as_deref()),
    )
}

pub fn parse_node_metrics_str(text: &str, source: &str) -> Result<Vec<NodeMetricsRow>> {
    let table = read_table(text, source, &METRICS_HEADER)?;
    let mut seen = HashSet::new();
    let mut rows = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let id = parse_id(source, *line, "id", table.field(rec, 0))?;
        if !seen.insert(id.clone()) {
            return Err(Error::Parse { path: source.into(), line: *line, message: format!("duplicate node {id}") });
        }
        rows.push(NodeMetricsRow {
            id,
            label: table.field(rec, 1).to_string(),
            degree_centrality: parse_centrality(source, *line, table.field(rec, 2))?,
            firm_count: parse_count(source, *line, table.field(rec, 3))?,
            infiltrated: parse_flag(source, *line, table.field(rec, 4))?,
        });
    }
    Ok(rows)
}

pub fn parse_node_metrics(path: &Path) -> Result<Vec<NodeMetricsRow>> {
    parse_node_metrics_str(&read_file(path)?, &path.display().to_string())
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Canonical edges CSV: each tie once, sorted.
pub fn edges_csv(net: &EconomicNetwork) -> String {
    csv_text(&EDGES_HEADER, net.edges().into_iter().map(|(a, b)| vec![a.to_string(), b.to_string()]))
}

/// Canonical nodes CSV in insertion order.
pub fn nodes_csv(net: &EconomicNetwork) -> String {
    csv_text(
        &NODES_HEADER,
        net.nodes().map(|(id, a)| {
            vec![
                id.to_string(),
                a.label.clone(),
                a.firm_count.map(|c| c.to_string()).unwrap_or_default(),
                (a.infiltrated as u8).to_string(),
            ]
        }),
    )
}

pub fn metrics_csv(rows: &[NodeMetricsRow]) -> String {
    csv_text(
        &METRICS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.id.to_string(),
                r.label.clone(),
                r.degree_centrality.map(|c| c.to_string()).unwrap_or_default(),
                r.firm_count.map(|c| c.to_string()).unwrap_or_default(),
                (r.infiltrated as u8).to_string(),
            ]
        }),
    )
}

pub fn write_edge_list(net: &EconomicNetwork, edges: &Path, nodes: Option<&Path>) -> Result<()> {
    write_file(edges, &edges_csv(net))?;
    if let Some(path) = nodes {
        write_file(path, &nodes_csv(net))?;
    }
    Ok(())
}

/// Half a unit in the third decimal: the widest gap between a published
/// centrality and the exact ratio it was rounded from.
pub const PUBLISHED_HALF_ULP: f64 = 0.0005;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityInversion {
    pub degree: usize,
    /// `centrality * potential - degree`.
    pub residual: f64,
}

/// Recovers the integer degree behind a rounded centrality: `round(c · (g-1))`,
/// accepted only if that degree renders back to the published value, i.e. its
/// exact centrality lies within half a thousandth of `centrality`.
pub fn invert_centrality(centrality: f64, potential: usize) -> Option<CentralityInversion> {
    if potential == 0 || !(0.0..=1.0).contains(&centrality) {
        return None;
    }
    let scaled = centrality * potential as f64;
    let degree = scaled.round();
    let exact = degree / potential as f64;
    if (exact - centrality).abs() > PUBLISHED_HALF_ULP + 1e-12 {
        return None;
    }
    Some(CentralityInversion { degree: degree as usize, residual: scaled - degree })
}

/// Target degrees in the order given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    entries: Vec<(NodeId, usize)>,
}

impl DegreeSequence {
    pub fn new(entries: Vec<(NodeId, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (id, _) in &entries {
            if !seen.insert(id) {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        Ok(DegreeSequence { entries })
    }

    /// Convenience for anonymous sequences: ids are `"1"`, `"2"`, ...
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let entries = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (NodeId::new((i + 1).to_string()).expect("non-empty"), d))
            .collect();
        DegreeSequence { entries }
    }

    pub fn entries(&self) -> &[(NodeId, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.entries.iter().map(|(_, d)| d).sum()
    }

    pub fn set_degree(&mut self, id: &NodeId, degree: usize) -> Result<()> {
        let slot = self.entries.iter_mut().find(|(i, _)| i == id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
        slot.1 = degree;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let max = self.entries.len().saturating_sub(1);
        for (id, d) in &self.entries {
            if *d > max {
                return Err(Error::DegreeOutOfRange { id: id.clone(), degree: *d, max });
            }
        }
        let sum = self.sum();
        if sum % 2 == 1 {
            return Err(Error::OddDegreeSum(sum));
        }
        Ok(())
    }
}

/// Havel–Hakimi realization: the node with the largest remaining degree is
/// joined to the nodes with the next-largest remaining degrees. Ties at
/// every step go to the smaller node id, so the result is deterministic.
pub fn havel_hakimi(seq: &DegreeSequence) -> Result<Vec<(NodeId, NodeId)>> {
    seq.validate()?;
    let ids: Vec<&NodeId> = seq.entries.iter().map(|(id, _)| id).collect();
    let mut remaining: Vec<usize> = seq.entries.iter().map(|(_, d)| *d).collect();
    let mut active: Vec<usize> = (0..ids.len()).collect();
    let mut edges = Vec::with_capacity(seq.sum() / 2);

    while !active.is_empty() {
        active.sort_by(|&a, &b| remaining[b].cmp(&remaining[a]).then_with(|| ids[a].cmp(ids[b])));
        let head = active.remove(0);
        let need = remaining[head];
        if need == 0 {
            break;
        }
        if need > active.len() || remaining[active[need - 1]] == 0 {
            return Err(Error::NonGraphical(format!(
                "node {} needs {need} more partner(s) but only {} remain available",
                ids[head],
                active.iter().filter(|&&i| remaining[i] > 0).count()
            )));
        }
        for &other in &active[..need] {
            remaining[other] -= 1;
            let (a, b) = if ids[head] <= ids[other] { (ids[head], ids[other]) } else { (ids[other], ids[head]) };
            edges.push((a.clone(), b.clone()));
        }
        remaining[head] = 0;
    }
    edges.sort();
    Ok(edges)
}

/// Simple graph realizing `seq` exactly, with default node attributes.
pub fn synthesize_from_degree_sequence(seq: &DegreeSequence) -> Result<EconomicNetwork> {
    let edges = havel_hakimi(seq)?;
    let mut builder = NetworkBuilder::default();
    for (id, _) in &seq.entries {
        builder.add_node(id.clone(), NodeAttributes::labelled(id.as_str()))?;
    }
    for (a, b) in &edges {
        builder.add_edge(a, b)?;
    }
    Ok(builder.build())
}

/// Degrees and residuals recovered from a metrics table.
pub fn invert_metrics(rows: &[NodeMetricsRow]) -> Result<(DegreeSequence, Vec<CentralityInversion>)> {
    let potential = rows.len().saturating_sub(1);
    if rows.len() < 2 {
        return Err(Error::DegenerateNetwork(rows.len()));
    }
    let mut entries = Vec::with_capacity(rows.len());
    let mut inversions = Vec::with_capacity(rows.len());
    for r in rows {
        let c = r.degree_centrality.ok_or_else(|| Error::MissingDegree(r.id.clone()))?;
        let inv = invert_centrality(c, potential).ok_or_else(|| Error::NonInvertibleCentrality {
            id: r.id.clone(),
            centrality: c,
            potential,
        })?;
        entries.push((r.id.clone(), inv.degree));
        inversions.push(inv);
    }
    Ok((DegreeSequence::new(entries)?, inversions))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityAdjustment {
    pub node: NodeId,
    pub published_centrality: f64,
    pub from_degree: usize,
    pub to_degree: usize,
    pub reason: String,
}

/// Picks the single-degree decrement that repairs an odd degree sum while
/// leaving every dense centrality rank unchanged.
///
/// Only a node that is the sole holder of its degree can move without merging
/// into or splitting off a rank, and it must not land on the next lower degree
/// in use. Among eligible nodes the one whose published centrality sits
/// furthest above its recovered degree (largest positive residual) wins, ties
/// to the smaller id.
pub fn choose_parity_adjustment(
    seq: &DegreeSequence,
    rows: &[NodeMetricsRow],
    inversions: &[CentralityInversion],
) -> Option<ParityAdjustment> {
    let degrees: Vec<usize> = seq.entries.iter().map(|(_, d)| *d).collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, &d) in degrees.iter().enumerate() {
        if d == 0 || degrees.iter().filter(|&&x| x == d).count() != 1 {
            continue;
        }
        if degrees.contains(&(d - 1)) {
            continue;
        }
        let residual = inversions[i].residual;
        let better = match best {
            None => true,
            Some((j, r)) => residual > r || (residual == r && seq.entries[i].0 < seq.entries[j].0),
        };
        if better {
            best = Some((i, residual));
        }
    }
    best.map(|(i, residual)| ParityAdjustment {
        node: seq.entries[i].0.clone(),
        published_centrality: rows[i].degree_centrality.unwrap_or_default(),
        from_degree: degrees[i],
        to_degree: degrees[i] - 1,
        reason: format!(
            "odd degree sum {}; sole holder of degree {} with inversion residual {:+.4} decremented, dense ranks preserved",
            seq.sum(),
            degrees[i],
            residual
        ),
    })
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub network: EconomicNetwork,
    pub sequence: DegreeSequence,
    pub max_abs_residual: f64,
    pub parity_adjustment: Option<ParityAdjustment>,
}

/// Realizes a metrics table as an edge list. With `repair_parity`, an odd
/// degree sum is fixed by [`choose_parity_adjustment`]; otherwise it is an
/// error.
pub fn synthesize_from_metrics(rows: &[NodeMetricsRow], repair_parity: bool) -> Result<Synthesis> {
    let (mut sequence, inversions) = invert_metrics(rows)?;
    let max_abs_residual = inversions.iter().map(|i| i.residual.abs()).fold(0.0, f64::max);
    let mut parity_adjustment = None;
    if repair_parity && sequence.sum() % 2 == 1 {
        let adj = choose_parity_adjustment(&sequence, rows, &inversions).ok_or_else(|| {
            Error::NonGraphical(format!("odd sum {} and no rank-preserving adjustment exists", sequence.sum()))
        })?;
        sequence.set_degree(&adj.node, adj.to_degree)?;
        parity_adjustment = Some(adj);
    }
    let edges = havel_hakimi(&sequence)?;
    let mut builder = NetworkBuilder::default();
    for r in rows {
        builder.add_node(r.id.clone(), r.attributes())?;
    }
    for (a, b) in &edges {
        builder.add_edge(a, b)?;
    }
    Ok(Synthesis { network: builder.build(), sequence, max_abs_residual, parity_adjustment })
}

/// Sidecar provenance record shipped next to each fixture file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMeta {
    pub file: String,
    pub kind: String,
    pub reconstructed: bool,
    pub source: String,
    pub node_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_sum: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_inversion_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity_adjustment: Option<ParityAdjustment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl FixtureMeta {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// Case-study datasets compiled into the library.
pub mod fixtures {
    use super::*;

    pub const SECTORS_TABLE3: &str = include_str!("../fixtures/sectors_table3.csv");
    pub const SECTORS_TABLE3_META: &str = include_str!("../fixtures/sectors_table3.meta.json");
    pub const FIRMS_TABLE4: &str = include_str!("../fixtures/firms_table4.csv");
    pub const FIRMS_TABLE4_META: &str = include_str!("../fixtures/firms_table4.meta.json");
    pub const FIRMS_EDGES: &str = include_str!("../fixtures/firms_edges_synth.csv");
    pub const FIRMS_NODES: &str = include_str!("../fixtures/firms_nodes.csv");
    pub const FIRMS_EDGES_META: &str = include_str!("../fixtures/firms_edges_synth.meta.json");
    pub const SECTORS_EDGES: &str = include_str!("../fixtures/sectors_edges_synth.csv");
    pub const SECTORS_NODES: &str = include_str!("../fixtures/sectors_nodes.csv");
    pub const SECTORS_EDGES_META: &str = include_str!("../fixtures/sectors_edges_synth.meta.json");

    pub fn sector_metrics() -> Vec<NodeMetricsRow> {
        parse_node_metrics_str(SECTORS_TABLE3, "fixtures/sectors_table3.csv").expect("bundled fixture parses")
    }

    pub fn firm_metrics() -> Vec<NodeMetricsRow> {
        parse_node_metrics_str(FIRMS_TABLE4, "fixtures/firms_table4.csv").expect("bundled fixture parses")
    }

    pub fn firm_network() -> EconomicNetwork {
        parse_edge_list_str(FIRMS_EDGES, "fixtures/firms_edges_synth.csv", Some((FIRMS_NODES, "fixtures/firms_nodes.csv")))
            .expect("bundled fixture parses")
    }

    pub fn sector_network() -> EconomicNetwork {
        parse_edge_list_str(
            SECTORS_EDGES,
            "fixtures/sectors_edges_synth.csv",
            Some((SECTORS_NODES, "fixtures/sectors_nodes.csv")),
        )
        .expect("bundled fixture parses")
    }

    pub fn meta(text: &str) -> FixtureMeta {
        serde_json::from_str(text).expect("bundled metadata parses")
    }
}
