//! Command-line front end.
//!
//! Exit codes: 0 on success (a rejected hypothesis is a result, not a
//! failure), 2 for usage and input errors, 3 for numerical failures.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::fmt3;
use crate::infiltration::{analyze_firms, test_h2, H2Verdict, InfiltrationReport};
use crate::ingest::{
    self, edges_csv, fixtures, nodes_csv, synthesize_from_degree_sequence, synthesize_from_metrics, DegreeSequence,
    FixtureMeta,
};
use crate::network::{EconomicNetwork, NodeId};
use crate::ranking::{compute_icc, test_h1, FirmCountThresholds, H1Verdict, IccTable};
use crate::report::{
    analyze_uncertainty, assemble_report, firm_histogram_csv, gamma_density_csv, resolve_gamma, GammaSpec,
    Provenance, ReportInputs, UncertaintySection,
};
use crate::table::NodeTable;
use crate::uncertainty::GammaParams;

#[derive(Debug, Parser)]
#[command(name = "crimenet", version, about = "Centrality, concentration and infiltration analysis of economic networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-node degree centrality, most central first
    Centrality(CommonArgs),
    /// Index of Centrality and Concentration table and mean
    Icc(CommonArgs),
    /// Hypothesis tests on infiltrated nodes
    Test(TestArgs),
    /// Infiltration index of a firm network
    Infiltration(CommonArgs),
    /// Gamma uncertainty interval on an observed infiltration index
    Uncertainty(UncertaintyArgs),
    /// Full combined JSON report
    Report(ReportArgs),
    /// Realize a degree sequence as an edge list
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bundled {
    SectorMetrics,
    SectorEdges,
    FirmMetrics,
    FirmEdges,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Edges CSV (`source,target`)
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,
    /// Nodes CSV (`id,label,firm_count,infiltrated`), used with --edges
    #[arg(long, value_name = "PATH", requires = "edges")]
    pub nodes: Option<PathBuf>,
    /// Metrics CSV (`id,label,degree_centrality,firm_count,infiltrated`)
    #[arg(long, value_name = "PATH", conflicts_with_all = ["edges", "bundled"])]
    pub metrics: Option<PathBuf>,
    /// Use a dataset compiled into the binary
    #[arg(long, value_enum, conflicts_with = "edges")]
    pub bundled: Option<Bundled>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Firm-count bin upper bounds for bins 5, 4, 3, 2
    #[arg(long, value_name = "a,b,c,d", default_value = "3,20,60,100")]
    pub thresholds: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Hypothesis {
    /// H1 when every node has a firm count, H2 otherwise
    Auto,
    H1,
    H2,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "auto")]
    pub hypothesis: Hypothesis,
}

#[derive(Debug, Clone, Args)]
pub struct GammaArgs {
    #[arg(long, requires = "scale", conflicts_with_all = ["mean", "sd"])]
    pub shape: Option<f64>,
    #[arg(long, requires = "shape")]
    pub scale: Option<f64>,
    /// Target mean for a method-of-moments fit
    #[arg(long, requires = "sd")]
    pub mean: Option<f64>,
    /// Target standard deviation for a method-of-moments fit
    #[arg(long, requires = "mean")]
    pub sd: Option<f64>,
}

impl GammaArgs {
    fn spec(&self) -> Result<Option<GammaSpec>> {
        match (self.shape, self.scale, self.mean, self.sd) {
            (Some(shape), Some(scale), _, _) => Ok(Some(GammaSpec::Explicit(GammaParams::new(shape, scale)?))),
            (_, _, Some(mean), Some(std_dev)) => Ok(Some(GammaSpec::Moments { mean, std_dev })),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct UncertaintyArgs {
    /// Observed infiltration index (lower bound of the interval)
    #[arg(long)]
    pub observed: f64,
    #[command(flatten)]
    pub gamma: GammaArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Use the bundled sector metrics, firm edge list and case-study Gamma parameters
    /// for every input not given explicitly
    #[arg(long)]
    pub bundled: bool,
    #[arg(long, value_name = "PATH", conflicts_with = "sector_edges")]
    pub sector_metrics: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub sector_edges: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "sector_edges")]
    pub sector_nodes: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "firm_edges")]
    pub firm_metrics: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub firm_edges: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "firm_edges")]
    pub firm_nodes: Option<PathBuf>,
    #[arg(long, value_name = "a,b,c,d", default_value = "3,20,60,100")]
    pub thresholds: String,
    #[command(flatten)]
    pub gamma: GammaArgs,
    /// Lower bound of the uncertainty interval; defaults to the firm infiltration index
    #[arg(long)]
    pub observed: Option<f64>,
    /// Also write firm_histogram.csv and gamma_density.csv next to the report
    #[arg(long)]
    pub plot_data: bool,
    /// Report path; stdout when omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Metrics CSV whose centralities are inverted to degrees
    #[arg(long, value_name = "PATH", conflicts_with = "degrees")]
    pub metrics: Option<PathBuf>,
    /// Comma-separated degrees; nodes are named 1, 2, ...
    #[arg(long, value_name = "d1,d2,...")]
    pub degrees: Option<String>,
    /// Decrement one degree to fix an odd degree sum without changing dense ranks
    #[arg(long)]
    pub repair_parity: bool,
    /// Edges CSV path; stdout when omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write the nodes CSV here
    #[arg(long, value_name = "PATH")]
    pub nodes_out: Option<PathBuf>,
    /// Also write a provenance sidecar here
    #[arg(long, value_name = "PATH")]
    pub meta_out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Usage(_) = e.root() {
                if let Some(help) = usage_for(&e) {
                    eprintln!("\n{help}");
                }
            }
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn usage_for(e: &Error) -> Option<String> {
    match e.root() {
        Error::Usage(msg) if msg.starts_with("report") => {
            let mut cmd = Cli::command();
            cmd.build();
            cmd.find_subcommand_mut("report").map(|c| c.render_usage().to_string())
        }
        _ => None,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Centrality(args) => cmd_centrality(&args),
        Command::Icc(args) => cmd_icc(&args),
        Command::Test(args) => cmd_test(&args),
        Command::Infiltration(args) => cmd_infiltration(&args),
        Command::Uncertainty(args) => cmd_uncertainty(&args),
        Command::Report(args) => cmd_report(&args),
        Command::Synth(args) => cmd_synth(&args),
    }
}

enum Loaded {
    Network { net: EconomicNetwork, inputs: Vec<String>, meta: Vec<FixtureMeta> },
    Metrics { table: NodeTable, inputs: Vec<String>, meta: Vec<FixtureMeta> },
}

impl Loaded {
    fn table(&self) -> Result<NodeTable> {
        match self {
            Loaded::Network { net, .. } => NodeTable::from_network(net),
            Loaded::Metrics { table, .. } => Ok(table.clone()),
        }
    }

    fn provenance(&self, dataset: &str) -> Provenance {
        let (inputs, meta) = match self {
            Loaded::Network { inputs, meta, .. } | Loaded::Metrics { inputs, meta, .. } => (inputs, meta),
        };
        Provenance { dataset: dataset.to_string(), inputs: inputs.clone(), metadata: meta.clone() }
    }
}

/// Sidecar `<stem>.meta.json` next to a data file, if one exists.
fn sidecar(path: &Path) -> Result<Option<FixtureMeta>> {
    let meta_path = path.with_extension("meta.json");
    if !meta_path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&meta_path).map_err(|source| Error::Io { path: meta_path.clone(), source })?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::Parse { path: meta_path.display().to_string(), line: e.line() as u64, message: e.to_string() })
}

fn load_edges(edges: &Path, nodes: Option<&Path>) -> Result<Loaded> {
    let net = ingest::parse_edge_list(edges, nodes)?;
    let mut inputs = vec![edges.display().to_string()];
    inputs.extend(nodes.map(|p| p.display().to_string()));
    let meta = [Some(edges), nodes].into_iter().flatten().map(sidecar).collect::<Result<Vec<_>>>()?;
    Ok(Loaded::Network { net, inputs, meta: meta.into_iter().flatten().collect() })
}

fn load_metrics(path: &Path) -> Result<Loaded> {
    let rows = ingest::parse_node_metrics(path)?;
    let table = NodeTable::from_metrics(&rows)?;
    Ok(Loaded::Metrics {
        table,
        inputs: vec![path.display().to_string()],
        meta: sidecar(path)?.into_iter().collect(),
    })
}

fn load_bundled(which: Bundled) -> Result<Loaded> {
    let tag = |name: &str| format!("bundled:fixtures/{name}");
    Ok(match which {
        Bundled::SectorMetrics => Loaded::Metrics {
            table: NodeTable::from_metrics(&fixtures::sector_metrics())?,
            inputs: vec![tag("sectors_table3.csv")],
            meta: vec![fixtures::meta(fixtures::SECTORS_TABLE3_META)],
        },
        Bundled::FirmMetrics => Loaded::Metrics {
            table: NodeTable::from_metrics(&fixtures::firm_metrics())?,
            inputs: vec![tag("firms_table4.csv")],
            meta: vec![fixtures::meta(fixtures::FIRMS_TABLE4_META)],
        },
        Bundled::SectorEdges => Loaded::Network {
            net: fixtures::sector_network(),
            inputs: vec![tag("sectors_edges_synth.csv"), tag("sectors_nodes.csv")],
            meta: vec![fixtures::meta(fixtures::SECTORS_EDGES_META)],
        },
        Bundled::FirmEdges => Loaded::Network {
            net: fixtures::firm_network(),
            inputs: vec![tag("firms_edges_synth.csv"), tag("firms_nodes.csv")],
            meta: vec![fixtures::meta(fixtures::FIRMS_EDGES_META)],
        },
    })
}

fn load(input: &InputArgs) -> Result<Loaded> {
    match (&input.edges, &input.metrics, input.bundled) {
        (Some(edges), None, None) => load_edges(edges, input.nodes.as_deref()),
        (None, Some(metrics), None) => load_metrics(metrics),
        (None, None, Some(which)) => load_bundled(which),
        (None, None, None) => Err(Error::Usage("no input: pass --edges, --metrics or --bundled".into())),
        _ => Err(Error::Usage("select exactly one input mode: --edges, --metrics or --bundled".into())),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn csv_rows<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Left-aligned text table.
fn plain_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                text.push_str(cell);
            } else {
                let _ = write!(text, "{cell:<w$}  ");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

#[derive(Debug, Serialize)]
struct CentralityRow<'a> {
    id: &'a NodeId,
    label: &'a str,
    raw_degree: usize,
    #[serde(serialize_with = "crate::fmt::ser3")]
    degree_centrality: f64,
}

pub fn cmd_centrality(args: &CommonArgs) -> Result<()> {
    let loaded = load(&args.input)?;
    let net = match &loaded {
        Loaded::Network { net, .. } => net,
        Loaded::Metrics { .. } => return Err(Error::Usage("centrality requires edges (--edges or an edge dataset)".into())),
    };
    let mut rows = net
        .nodes()
        .map(|(id, a)| {
            let c = net.degree_centrality(id)?;
            Ok((id, a.label.as_str(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(b.0)));
    let text = match args.output.format {
        Format::Json => json(
            &rows
                .iter()
                .map(|(id, label, c)| CentralityRow { id, label, raw_degree: c.degree, degree_centrality: c.value() })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_rows(
            ["id", "label", "raw_degree", "degree_centrality"],
            rows.iter().map(|(id, label, c)| [id.to_string(), label.to_string(), c.degree.to_string(), fmt3(c.value())]),
        ),
        Format::Plain => plain_table(
            &["id", "label", "degree", "centrality"],
            &rows
                .iter()
                .map(|(id, label, c)| vec![id.to_string(), label.to_string(), c.degree.to_string(), fmt3(c.value())])
                .collect::<Vec<_>>(),
        ),
    };
    emit(args.output.out.as_deref(), &text)
}

fn icc_text(icc: &IccTable, format: Format) -> String {
    let rows: Vec<[String; 7]> = icc
        .sectors
        .iter()
        .map(|s| {
            [
                s.id.to_string(),
                s.label.clone(),
                fmt3(s.degree_centrality),
                s.firm_count.to_string(),
                s.rank_degree.to_string(),
                s.rank_firms.to_string(),
                s.icc.to_string(),
            ]
        })
        .collect();
    let header = ["id", "label", "degree_centrality", "firm_count", "rank_degree", "rank_firms", "icc"];
    match format {
        Format::Json => json(icc),
        Format::Csv => {
            let mut s = format!("# thresholds={}\n", icc.thresholds);
            s.push_str(&csv_rows(header, rows));
            let _ = writeln!(s, "# mean_icc={}", fmt3(icc.mean_icc));
            s
        }
        Format::Plain => {
            let mut s = format!("# firm-count thresholds: {}\n", icc.thresholds);
            s.push_str(&plain_table(&header, &rows.into_iter().map(Vec::from).collect::<Vec<_>>()));
            let _ = writeln!(s, "mean_icc  {}", fmt3(icc.mean_icc));
            s
        }
    }
}

pub fn cmd_icc(args: &CommonArgs) -> Result<()> {
    let thresholds: FirmCountThresholds = args.thresholds.parse()?;
    let table = load(&args.input)?.table()?;
    let icc = compute_icc(&table, &thresholds)?;
    emit(args.output.out.as_deref(), &icc_text(&icc, args.output.format))
}

#[derive(Debug, Serialize)]
struct TestOutput {
    h1: Option<H1Verdict>,
    h2: Option<H2Verdict>,
}

fn verdict_word(rejected: bool) -> &'static str {
    if rejected { "rejected" } else { "not rejected" }
}

pub fn cmd_test(args: &TestArgs) -> Result<()> {
    let thresholds: FirmCountThresholds = args.common.thresholds.parse()?;
    let table = load(&args.common.input)?.table()?;
    let have_counts = table.records().iter().all(|r| r.firm_count.is_some());
    let (run_h1, run_h2) = match args.hypothesis {
        Hypothesis::Auto => (have_counts, !have_counts),
        Hypothesis::H1 => (true, false),
        Hypothesis::H2 => (false, true),
        Hypothesis::Both => (true, true),
    };
    let h1 = if run_h1 { Some(test_h1(&compute_icc(&table, &thresholds)?)?) } else { None };
    let h2 = if run_h2 { Some(test_h2(&table)?) } else { None };
    let out = TestOutput { h1, h2 };
    let text = match args.common.output.format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut rows = Vec::new();
            if let Some(v) = &out.h1 {
                rows.push([
                    "h1".to_string(),
                    verdict_word(v.rejected).to_string(),
                    v.sectors.iter().map(|s| s.id.to_string()).collect::<Vec<_>>().join(" "),
                    v.infiltrated_sector_icc.to_string(),
                    fmt3(v.mean_icc),
                    fmt3(v.margin),
                ]);
            }
            if let Some(v) = &out.h2 {
                rows.push([
                    "h2".to_string(),
                    verdict_word(v.rejected).to_string(),
                    v.best_infiltrated.to_string(),
                    fmt3(v.best_infiltrated_centrality),
                    fmt3(v.max_centrality),
                    fmt3(v.margin),
                ]);
            }
            csv_rows(["hypothesis", "verdict", "nodes", "value", "reference", "margin"], rows)
        }
        Format::Plain => {
            let mut s = String::new();
            if let Some(v) = &out.h1 {
                let cmp = if v.rejected { "<=" } else { ">" };
                let _ = writeln!(
                    s,
                    "H1: {} (infiltrated ICC {} {cmp} mean {}, margin {})",
                    verdict_word(v.rejected),
                    v.infiltrated_sector_icc,
                    fmt3(v.mean_icc),
                    fmt3(v.margin)
                );
                for c in &v.sectors {
                    let _ = writeln!(s, "  sector {}: ICC {}, margin {}", c.id, c.icc, fmt3(c.margin));
                }
            }
            if let Some(v) = &out.h2 {
                let top: Vec<String> = v.top_nodes.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    s,
                    "H2: {} (most central infiltrated node {} at {}, network maximum {} held by {})",
                    verdict_word(v.rejected),
                    v.best_infiltrated,
                    fmt3(v.best_infiltrated_centrality),
                    fmt3(v.max_centrality),
                    top.join(", ")
                );
            }
            s
        }
    };
    emit(args.common.output.out.as_deref(), &text)
}

fn infiltration_text(r: &InfiltrationReport, format: Format) -> String {
    let index = r.infiltration_index.map(fmt3).unwrap_or_else(|| "undefined".into());
    let (inf_mass, total) = r.tie_mass.map(|m| (m.infiltrated.to_string(), m.total.to_string())).unwrap_or_default();
    let nodes: Vec<String> = r.infiltrated_nodes.iter().map(ToString::to_string).collect();
    match format {
        Format::Json => json(r),
        Format::Csv => csv_rows(
            ["infiltration_index", "infiltrated_tie_mass", "total_tie_mass", "infiltrated_nodes"],
            [[index, inf_mass, total, nodes.join(" ")]],
        ),
        Format::Plain => format!(
            "infiltration_index  {index}\ninfiltrated_ties    {inf_mass}\ntotal_ties          {total}\ninfiltrated_nodes   {}\n",
            nodes.join(", ")
        ),
    }
}

pub fn cmd_infiltration(args: &CommonArgs) -> Result<()> {
    let thresholds: FirmCountThresholds = args.thresholds.parse()?;
    let table = load(&args.input)?.table()?;
    if table.infiltrated().next().is_none() {
        return Err(Error::NothingToTest);
    }
    let report = analyze_firms(&table, &thresholds)?;
    if report.infiltration_index.is_none() {
        return Err(Error::Usage("centralities do not invert to integer degrees; pass --edges instead".into()));
    }
    emit(args.output.out.as_deref(), &infiltration_text(&report, args.output.format))
}

fn uncertainty_text(u: &UncertaintySection, format: Format) -> String {
    let m = &u.moments;
    let iv = &u.interval;
    let rows: Vec<(&str, String)> = vec![
        ("shape", fmt3(u.shape)),
        ("scale", fmt3(u.scale)),
        ("mean", fmt3(m.mean)),
        ("variance", fmt3(m.variance)),
        ("std_dev", fmt3(m.std_dev)),
        ("skewness", fmt3(m.skewness)),
        ("kurtosis", fmt3(m.kurtosis)),
        ("lower", fmt3(iv.lower)),
        ("upper", fmt3(iv.upper)),
        ("cdf_lower", fmt3(iv.cdf_lower)),
        ("cdf_upper", fmt3(iv.cdf_upper)),
        ("coverage_between", fmt3(iv.coverage_between)),
        ("coverage_above_lower", fmt3(iv.coverage_above_lower)),
    ];
    match format {
        Format::Json => json(u),
        Format::Csv => {
            let mut s = csv_rows(["statistic", "value"], rows.into_iter().map(|(k, v)| [k.to_string(), v]));
            if let Some(fit) = &u.fit {
                let _ = writeln!(s, "# {}", fit.note);
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            if let Some(fit) = &u.fit {
                let _ = writeln!(
                    s,
                    "# fitted by {} to mean {} and sd {}: {}",
                    fit.method,
                    fmt3(fit.target_mean),
                    fmt3(fit.target_std_dev),
                    fit.note
                );
            }
            for (k, v) in &rows {
                let _ = writeln!(s, "{k:<22}{v}");
            }
            let _ = writeln!(s, "interval              {} <= M <= {}", fmt3(iv.lower), fmt3(iv.upper));
            let c = &u.shape_checks;
            let _ = writeln!(
                s,
                "shape_checks          short_left_tail={} mean_above_observed={} right_skewed={}",
                c.short_left_tail, c.mean_above_observed, c.right_skewed
            );
            s
        }
    }
}

pub fn cmd_uncertainty(args: &UncertaintyArgs) -> Result<()> {
    let spec = args
        .gamma
        .spec()?
        .ok_or_else(|| Error::Usage("uncertainty needs --shape/--scale or --mean/--sd".into()))?;
    let section = analyze_uncertainty(args.observed, spec)?;
    emit(args.output.out.as_deref(), &uncertainty_text(&section, args.output.format))
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let thresholds: FirmCountThresholds = args.thresholds.parse()?;
    let sector = match (&args.sector_metrics, &args.sector_edges) {
        (Some(p), _) => Some(load_metrics(p)?),
        (None, Some(e)) => Some(load_edges(e, args.sector_nodes.as_deref())?),
        (None, None) if args.bundled => Some(load_bundled(Bundled::SectorMetrics)?),
        _ => None,
    };
    let firm = match (&args.firm_metrics, &args.firm_edges) {
        (Some(p), _) => Some(load_metrics(p)?),
        (None, Some(e)) => Some(load_edges(e, args.firm_nodes.as_deref())?),
        (None, None) if args.bundled => Some(load_bundled(Bundled::FirmEdges)?),
        _ => None,
    };
    if sector.is_none() && firm.is_none() {
        return Err(Error::Usage("report needs sector and/or firm inputs, or --bundled".into()));
    }
    let mut gamma = args.gamma.spec()?;
    if gamma.is_none() && args.bundled {
        gamma = Some(GammaSpec::Explicit(GammaParams::CASE_STUDY));
    }
    let sector_table = sector.as_ref().map(Loaded::table).transpose()?;
    let firm_table = firm.as_ref().map(Loaded::table).transpose()?;
    let mut provenance = Vec::new();
    provenance.extend(sector.as_ref().map(|l| l.provenance("sector")));
    provenance.extend(firm.as_ref().map(|l| l.provenance("firm")));

    let report = assemble_report(ReportInputs {
        sectors: sector_table.as_ref(),
        firms: firm_table.as_ref(),
        thresholds,
        gamma,
        observed: args.observed,
        provenance,
    })?;
    emit(args.out.as_deref(), &report.to_json())?;

    if args.plot_data {
        let dir = args.out.as_deref().and_then(Path::parent).map(Path::to_path_buf).unwrap_or_default();
        let write = |name: &str, text: &str| {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|source| Error::Io { path, source })
        };
        if let Some(t) = &sector_table {
            write("firm_histogram.csv", &firm_histogram_csv(t))?;
        }
        if let Some(spec) = gamma {
            let (params, _) = resolve_gamma(spec)?;
            write("gamma_density.csv", &gamma_density_csv(&params))?;
        }
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let (net, meta) = match (&args.metrics, &args.degrees) {
        (Some(path), None) => {
            let rows = ingest::parse_node_metrics(path)?;
            let synth = synthesize_from_metrics(&rows, args.repair_parity)?;
            let file = args.out.as_deref().and_then(Path::file_name).map(|f| f.to_string_lossy().into_owned());
            let mut notes = vec![
                "edge set reconstructed by Havel-Hakimi from degrees inverted from published centralities; \
                 it reproduces the degree sequence, not the observed ties"
                    .to_string(),
            ];
            if synth.parity_adjustment.is_some() {
                notes.push("one degree adjusted to make the degree sum even; see parity_adjustment".to_string());
            }
            let meta = FixtureMeta {
                file: file.unwrap_or_else(|| "<stdout>".into()),
                kind: "edges".into(),
                reconstructed: true,
                source: path.display().to_string(),
                node_count: synth.network.node_count(),
                edge_count: Some(synth.network.edge_count()),
                degree_sum: Some(synth.sequence.sum()),
                max_inversion_residual: Some(synth.max_abs_residual),
                parity_adjustment: synth.parity_adjustment,
                notes,
            };
            (synth.network, Some(meta))
        }
        (None, Some(list)) => {
            let degrees = list
                .split(',')
                .map(|d| d.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Usage(format!("--degrees must be comma-separated integers, got {list:?}")))?;
            (synthesize_from_degree_sequence(&DegreeSequence::from_degrees(&degrees))?, None)
        }
        _ => return Err(Error::Usage("synth needs exactly one of --metrics or --degrees".into())),
    };
    emit(args.out.as_deref(), &edges_csv(&net))?;
    if let Some(path) = &args.nodes_out {
        fs::write(path, nodes_csv(&net)).map_err(|source| Error::Io { path: path.clone(), source })?;
    }
    if let (Some(path), Some(meta)) = (&args.meta_out, meta) {
        fs::write(path, meta.to_json()).map_err(|source| Error::Io { path: path.clone(), source })?;
    }
    Ok(())
}
