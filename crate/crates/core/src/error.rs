use std::path::PathBuf;

use thiserror::Error;

use crate::network::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate node {0}")]
    DuplicateNode(NodeId),

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("invalid node id: {0}")]
    InvalidNodeId(String),

    #[error("degenerate network: {0} node(s), at least 2 required")]
    DegenerateNetwork(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("thresholds not ascending: {0:?}")]
    ThresholdsNotAscending([u64; 4]),

    #[error("missing firm_count on node {0}")]
    MissingFirmCount(NodeId),

    #[error("missing degree information on node {0}")]
    MissingDegree(NodeId),

    #[error("nothing to test: no infiltrated node")]
    NothingToTest,

    #[error("index undefined: network has no edges")]
    IndexUndefined,

    #[error("invalid gamma parameters: shape {shape}, scale {scale} (both must be positive and finite)")]
    InvalidGammaParams { shape: f64, scale: f64 },

    #[error("invalid moments: mean {mean}, std_dev {std_dev} (both must be positive and finite)")]
    InvalidMoments { mean: f64, std_dev: f64 },

    #[error("invalid observed value {0}: must be finite and non-negative")]
    InvalidObserved(f64),

    #[error("interval inverted: observed {observed} exceeds upper bound {upper}")]
    IntervalInverted { observed: f64, upper: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("non-graphical: odd sum ({0})")]
    OddDegreeSum(usize),

    #[error("non-graphical sequence: {0}")]
    NonGraphical(String),

    #[error("degree {degree} of node {id} outside [0, {max}]")]
    DegreeOutOfRange { id: NodeId, degree: usize, max: usize },

    #[error("centrality {centrality} of node {id} does not invert to an integer degree over {potential} potential ties")]
    NonInvertibleCentrality { id: NodeId, centrality: f64, potential: usize },

    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error("{path}: line {line}, column {column}: {message}")]
    ParseField { path: String, line: u64, column: String, message: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("{stage}: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
}

impl Error {
    /// Attributes an error to a named pipeline stage.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self.root(), Error::Numerical(_))
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(stage))
    }
}
