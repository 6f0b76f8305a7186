//! Detection and characterization of criminal infiltration in economic
//! networks.
//!
//! The pipeline works on one-mode, undirected, binary networks of sectors
//! or firms:
//!
//! * [`network`] builds the graph and computes normalized degree centrality.
//! * [`ranking`] turns centralities and firm counts into the Index of
//!   Centrality and Concentration and tests whether infiltrated sectors sit
//!   above its mean.
//! * [`infiltration`] computes the share of ties held by infiltrated firms
//!   and tests whether one of them is the most central firm.
//! * [`uncertainty`] models the true infiltration share as a Gamma random
//!   variable and derives an uncertainty interval.
//! * [`ingest`] reads CSV inputs, rebuilds edge lists from published degree
//!   data and ships the case-study datasets.
//! * [`report`] and [`cli`] assemble everything into deterministic output.

pub mod cli;
pub mod error;
pub mod fmt;
pub mod infiltration;
pub mod ingest;
pub mod network;
pub mod ranking;
pub mod report;
pub mod table;
pub mod uncertainty;

pub use error::{Error, Result};
pub use network::{DegreeCentrality, EconomicNetwork, NetworkBuilder, NodeAttributes, NodeId};
pub use ranking::{FirmCountThresholds, IccTable, RankedSector};
pub use table::{NodeRecord, NodeTable};
pub use uncertainty::{GammaMoments, GammaParams, UncertaintyInterval};
