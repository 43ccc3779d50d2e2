//! Instance and structure files.
//!
//! Both are JSON documents with every list sorted; [`to_canonical`] and
//! [`structure_to_canonical`] emit the canonical text (two-space indent,
//! trailing newline), which parses back to the same value and re-serializes
//! byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adversary::{normalize, AdversaryStructure};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::topology::{ad_hoc_view, Edge, Graph, NodeId, NodeSet, Subgraph, ViewFunction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewEntry {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ViewsSpec {
    /// `"ad_hoc"` or `"full"`.
    Named(String),
    Explicit(BTreeMap<NodeId, ViewEntry>),
}

/// On-disk form of an [`Instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub adversary_maximal: Vec<Vec<NodeId>>,
    pub views: ViewsSpec,
    pub sender: NodeId,
    pub receiver: NodeId,
}

fn field_err(field: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{field}`: {e}"))
}

fn edge_list(field: &str, pairs: &[(NodeId, NodeId)]) -> Result<BTreeSet<Edge>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            Edge::new(a.clone(), b.clone()).map_err(|e| field_err(&format!("{field}[{i}]"), e))
        })
        .collect()
}

fn sorted_pairs(edges: &BTreeSet<Edge>) -> Vec<(NodeId, NodeId)> {
    edges
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            (a.clone(), b.clone())
        })
        .collect()
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance> {
        let nodes: NodeSet = self.nodes.iter().cloned().collect();
        if nodes.len() != self.nodes.len() {
            return Err(field_err("nodes", "duplicate node id"));
        }
        let edges = edge_list("edges", &self.edges)?;
        let graph = Graph::new(nodes.clone(), edges).map_err(|e| field_err("edges", e))?;
        let family = self
            .adversary_maximal
            .iter()
            .map(|s| s.iter().cloned().collect::<NodeSet>());
        let adversary = normalize(nodes, family).map_err(|e| field_err("adversary_maximal", e))?;
        let gamma = match &self.views {
            ViewsSpec::Named(n) if n == "ad_hoc" => ad_hoc_view(&graph),
            ViewsSpec::Named(n) if n == "full" => ViewFunction::full(&graph),
            ViewsSpec::Named(n) => {
                return Err(field_err(
                    "views",
                    format!("expected \"ad_hoc\", \"full\" or a map, got \"{n}\""),
                ))
            }
            ViewsSpec::Explicit(map) => {
                let mut views = BTreeMap::new();
                for (v, entry) in map {
                    let field = format!("views.{v}");
                    let sub = Subgraph::new(
                        &graph,
                        entry.nodes.iter().cloned().collect(),
                        edge_list(&format!("{field}.edges"), &entry.edges)?,
                    )
                    .map_err(|e| field_err(&field, e))?;
                    views.insert(v.clone(), sub);
                }
                ViewFunction::new(&graph, views).map_err(|e| field_err("views", e))?
            }
        };
        Instance::new(
            graph,
            adversary,
            gamma,
            self.sender.clone(),
            self.receiver.clone(),
        )
        .map_err(|e| field_err("sender/receiver", e))
    }

    /// Canonical file for `inst`; views collapse to `"ad_hoc"` or `"full"`
    /// when they match exactly.
    pub fn from_instance(inst: &Instance) -> Self {
        let g = inst.graph();
        let views = if inst.is_ad_hoc() {
            ViewsSpec::Named("ad_hoc".into())
        } else if *inst.gamma() == ViewFunction::full(g) {
            ViewsSpec::Named("full".into())
        } else {
            ViewsSpec::Explicit(
                inst.gamma()
                    .views()
                    .iter()
                    .map(|(v, sub)| {
                        (
                            v.clone(),
                            ViewEntry {
                                nodes: sub.nodes().iter().cloned().collect(),
                                edges: sorted_pairs(sub.edges()),
                            },
                        )
                    })
                    .collect(),
            )
        };
        InstanceFile {
            nodes: g.nodes().iter().cloned().collect(),
            edges: sorted_pairs(g.edges()),
            adversary_maximal: inst
                .adversary()
                .maximal_sets()
                .iter()
                .map(|m| m.iter().cloned().collect())
                .collect(),
            views,
            sender: inst.sender().clone(),
            receiver: inst.receiver().clone(),
        }
    }
}

fn json_err(origin: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses instance text; `origin` prefixes error locations.
pub fn parse_instance(text: &str, origin: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| json_err(origin, e))?;
    file.to_instance()
        .map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text, &path.display().to_string())
}

pub fn to_canonical(inst: &Instance) -> String {
    pretty(&InstanceFile::from_instance(inst))
}

/// Hex SHA-256 of the canonical serialization.
pub fn digest(inst: &Instance) -> String {
    Sha256::digest(to_canonical(inst).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn parse_structure(text: &str, origin: &str) -> Result<AdversaryStructure> {
    serde_json::from_str(text).map_err(|e| json_err(origin, e))
}

pub fn read_structure(path: &Path) -> Result<AdversaryStructure> {
    let text = std::fs::read_to_string(path)?;
    parse_structure(&text, &path.display().to_string())
}

/// `{"ground": [...], "maximal": [[...], ...]}`, sorted.
pub fn structure_to_canonical(z: &AdversaryStructure) -> String {
    pretty(z)
}
