//! One-mode, undirected, binary economic networks.
//!
//! Nodes are sectors or firms. An edge records that at least one economic
//! transaction took place between its endpoints; repeated transactions
//! collapse into a single tie. Networks are assembled through
//! [`NetworkBuilder`] and are read-only afterwards.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node identifier.
///
/// Ordering is "natural": identifiers that are plain unsigned integers sort
/// numerically and before any other identifier, the rest sort
/// lexicographically. This keeps `"2"` ahead of `"10"` in every table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidNodeId("empty identifier".into()));
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u128> {
        if self.0.bytes().all(|b| b.is_ascii_digit()) {
            self.0.parse().ok()
        } else {
            None
        }
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for NodeId {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        NodeId::new(value)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeAttributes {
    pub label: String,
    /// Number of firms active in the sector, when the node is a sector.
    pub firm_count: Option<u64>,
    pub infiltrated: bool,
}

impl NodeAttributes {
    pub fn labelled(label: impl Into<String>) -> Self {
        NodeAttributes { label: label.into(), ..Default::default() }
    }

    pub fn with_firm_count(mut self, count: u64) -> Self {
        self.firm_count = Some(count);
        self
    }

    pub fn infiltrated(mut self, flag: bool) -> Self {
        self.infiltrated = flag;
        self
    }
}

/// Normalized degree centrality kept as the exact ratio `degree / potential`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCentrality {
    pub degree: usize,
    /// Number of potential partners, `g - 1`.
    pub potential: usize,
}

impl DegreeCentrality {
    pub fn value(self) -> f64 {
        self.degree as f64 / self.potential as f64
    }
}

impl PartialOrd for DegreeCentrality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeCentrality {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/b vs c/d  <=>  a*d vs c*b
        let lhs = self.degree as u128 * other.potential as u128;
        let rhs = other.degree as u128 * self.potential as u128;
        lhs.cmp(&rhs)
    }
}

#[derive(Debug, Clone, Default)]
pub struct EconomicNetwork {
    ids: Vec<NodeId>,
    attrs: Vec<NodeAttributes>,
    index: HashMap<NodeId, usize>,
    adjacency: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl EconomicNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    /// Reopens the network for modification, leaving `self` untouched.
    pub fn to_builder(&self) -> NetworkBuilder {
        NetworkBuilder { net: self.clone() }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    /// Node ids in insertion order.
    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.ids.iter()
    }

    /// Node ids in natural sort order.
    pub fn sorted_ids(&self) -> Vec<&NodeId> {
        let mut ids: Vec<&NodeId> = self.ids.iter().collect();
        ids.sort();
        ids
    }

    pub fn attributes(&self, id: &NodeId) -> Result<&NodeAttributes> {
        Ok(&self.attrs[self.position(id)?])
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &NodeAttributes)> {
        self.ids.iter().zip(self.attrs.iter())
    }

    /// Every edge once, endpoints ordered so that `a < b` and the list sorted.
    pub fn edges(&self) -> Vec<(&NodeId, &NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs.range(i + 1..) {
                let (a, b) = (&self.ids[i], &self.ids[j]);
                out.push(if a <= b { (a, b) } else { (b, a) });
            }
        }
        out.sort();
        out
    }

    pub fn neighbors(&self, id: &NodeId) -> Result<impl Iterator<Item = &NodeId>> {
        let i = self.position(id)?;
        Ok(self.adjacency[i].iter().map(move |&j| &self.ids[j]))
    }

    pub fn has_edge(&self, a: &NodeId, b: &NodeId) -> Result<bool> {
        let (i, j) = (self.position(a)?, self.position(b)?);
        Ok(self.adjacency[i].contains(&j))
    }

    pub fn raw_degree(&self, id: &NodeId) -> Result<usize> {
        Ok(self.adjacency[self.position(id)?].len())
    }

    pub fn degree_centrality(&self, id: &NodeId) -> Result<DegreeCentrality> {
        let degree = self.raw_degree(id)?;
        let g = self.node_count();
        if g < 2 {
            return Err(Error::DegenerateNetwork(g));
        }
        Ok(DegreeCentrality { degree, potential: g - 1 })
    }

    /// Sum of all raw degrees, i.e. twice the number of edges.
    pub fn total_tie_mass(&self) -> usize {
        2 * self.edge_count
    }

    /// Returns a copy whose infiltration flags are set exactly on `ids`.
    pub fn with_infiltrated<'a, I>(&self, ids: I) -> Result<EconomicNetwork>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut net = self.clone();
        for attrs in &mut net.attrs {
            attrs.infiltrated = false;
        }
        for id in ids {
            let i = net.position(id)?;
            net.attrs[i].infiltrated = true;
        }
        Ok(net)
    }

    fn position(&self, id: &NodeId) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownNode(id.clone()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    net: EconomicNetwork,
}

impl NetworkBuilder {
    pub fn add_node(&mut self, id: NodeId, attrs: NodeAttributes) -> Result<&mut Self> {
        if self.net.index.contains_key(&id) {
            return Err(Error::DuplicateNode(id));
        }
        let i = self.net.ids.len();
        self.net.index.insert(id.clone(), i);
        self.net.ids.push(id);
        self.net.attrs.push(attrs);
        self.net.adjacency.push(BTreeSet::new());
        Ok(self)
    }

    /// Adds the undirected tie `{a, b}`. Re-adding an existing tie is a no-op.
    pub fn add_edge(&mut self, a: &NodeId, b: &NodeId) -> Result<&mut Self> {
        if a == b {
            return Err(Error::SelfLoop(a.clone()));
        }
        let i = self.net.position(a)?;
        let j = self.net.position(b)?;
        if self.net.adjacency[i].insert(j) {
            self.net.adjacency[j].insert(i);
            self.net.edge_count += 1;
        }
        Ok(self)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.net.contains(id)
    }

    pub fn attributes_mut(&mut self, id: &NodeId) -> Result<&mut NodeAttributes> {
        let i = self.net.position(id)?;
        Ok(&mut self.net.attrs[i])
    }

    pub fn build(self) -> EconomicNetwork {
        self.net
    }
}
