//! Seeded random instance generation.
//!
//! Nodes are named `S`, `R`, `v1`, `v2`, ... and only the relays `v*` are
//! ever corruptible.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{normalize, AdversaryStructure};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::topology::{ad_hoc_view, Edge, Graph, NodeId, NodeSet, Subgraph, ViewFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversaryFamily {
    /// Between 1 and `max_sets` random relay sets of at most `max_size`
    /// nodes each, reduced to an antichain.
    RandomAntichain { max_sets: usize, max_size: usize },
    /// Every `t`-subset of the relays.
    Threshold { t: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ViewMode {
    AdHoc,
    Full,
    /// The ad hoc view plus each other node with probability `p`, plus each
    /// edge among the chosen nodes with probability `p`.
    RandomSubgraph {
        p: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSpec {
    pub count: usize,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub edge_probability: f64,
    pub adversary: AdversaryFamily,
    pub views: ViewMode,
    /// Never place an edge between sender and receiver.
    pub nonadjacent_endpoints: bool,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            count: 10,
            min_nodes: 4,
            max_nodes: 6,
            edge_probability: 0.5,
            adversary: AdversaryFamily::RandomAntichain {
                max_sets: 3,
                max_size: 2,
            },
            views: ViewMode::AdHoc,
            nonadjacent_endpoints: true,
        }
    }
}

impl GeneratorSpec {
    fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Generator(m.to_owned()));
        if self.min_nodes < 2 {
            return fail("instances need at least two nodes");
        }
        if self.min_nodes > self.max_nodes {
            return fail("min_nodes exceeds max_nodes");
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return fail("edge_probability must lie in [0, 1]");
        }
        if self.nonadjacent_endpoints && self.edge_probability >= 1.0 {
            return fail("a complete graph cannot keep sender and receiver non-adjacent");
        }
        if let ViewMode::RandomSubgraph { p } = self.views {
            if !(0.0..=1.0).contains(&p) {
                return fail("view probability must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

/// `count` instances drawn from one ChaCha stream seeded with `seed`.
pub fn generate_instances(spec: &GeneratorSpec, seed: u64) -> Result<Vec<Instance>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.count)
        .map(|_| generate_one(spec, &mut rng))
        .collect()
}

fn generate_one(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Instance> {
    let n = rng.random_range(spec.min_nodes..=spec.max_nodes);
    let sender = NodeId::from("S");
    let receiver = NodeId::from("R");
    let relays: Vec<NodeId> = (1..n - 1).map(|i| NodeId::new(format!("v{i}"))).collect();
    let mut ordered = vec![sender.clone(), receiver.clone()];
    ordered.extend(relays.iter().cloned());

    let mut edges = Vec::new();
    for (i, a) in ordered.iter().enumerate() {
        for b in &ordered[i + 1..] {
            let endpoints = (a == &sender && b == &receiver) || (a == &receiver && b == &sender);
            if endpoints && spec.nonadjacent_endpoints {
                continue;
            }
            if rng.random_bool(spec.edge_probability) {
                edges.push(Edge::new(a.clone(), b.clone())?);
            }
        }
    }
    let nodes: NodeSet = ordered.iter().cloned().collect();
    let graph = Graph::new(nodes.clone(), edges)?;

    let universe: NodeSet = relays.iter().cloned().collect();
    let adversary = match spec.adversary {
        AdversaryFamily::Threshold { t } => AdversaryStructure::threshold(nodes, &universe, t)?,
        AdversaryFamily::RandomAntichain { max_sets, max_size } => {
            let sets = rng.random_range(1..=max_sets.max(1));
            let family: Vec<NodeSet> = (0..sets)
                .map(|_| {
                    let size = rng.random_range(0..=max_size.min(relays.len()));
                    relays.choose_multiple(rng, size).cloned().collect()
                })
                .collect();
            normalize(nodes, family)?
        }
    };

    let gamma = match spec.views {
        ViewMode::AdHoc => ad_hoc_view(&graph),
        ViewMode::Full => ViewFunction::full(&graph),
        ViewMode::RandomSubgraph { p } => random_views(&graph, p, rng)?,
    };
    Instance::new(graph, adversary, gamma, sender, receiver)
}

fn random_views(g: &Graph, p: f64, rng: &mut ChaCha8Rng) -> Result<ViewFunction> {
    let base = ad_hoc_view(g);
    let mut views = BTreeMap::new();
    for (v, own) in base.views() {
        let mut nodes = own.nodes().clone();
        for u in g.nodes() {
            if !nodes.contains(u) && rng.random_bool(p) {
                nodes.insert(u.clone());
            }
        }
        let mut edges: BTreeSet<Edge> = own.edges().clone();
        for e in g.edges() {
            let (a, b) = e.endpoints();
            if !edges.contains(e) && nodes.contains(a) && nodes.contains(b) && rng.random_bool(p) {
                edges.insert(e.clone());
            }
        }
        views.insert(v.clone(), Subgraph::new(g, nodes, edges)?);
    }
    ViewFunction::new(g, views)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instances() {
        let spec = GeneratorSpec::default();
        assert_eq!(
            generate_instances(&spec, 7).unwrap(),
            generate_instances(&spec, 7).unwrap()
        );
        assert_ne!(
            generate_instances(&spec, 7).unwrap(),
            generate_instances(&spec, 8).unwrap()
        );
    }

    #[test]
    fn ad_hoc_mode_yields_ad_hoc_instances() {
        let spec = GeneratorSpec {
            count: 30,
            ..Default::default()
        };
        for inst in generate_instances(&spec, 1).unwrap() {
            assert!(inst.is_ad_hoc());
            assert!(!inst.graph().has_edge(inst.sender(), inst.receiver()));
            assert!(inst.graph().len() >= 4 && inst.graph().len() <= 6);
            for m in inst.adversary().maximal_sets() {
                assert!(!m.contains(inst.sender()) && !m.contains(inst.receiver()));
            }
        }
    }

    #[test]
    fn threshold_family_on_five_relays() {
        let spec = GeneratorSpec {
            count: 1,
            min_nodes: 7,
            max_nodes: 7,
            adversary: AdversaryFamily::Threshold { t: 1 },
            ..Default::default()
        };
        let inst = &generate_instances(&spec, 3).unwrap()[0];
        let maximal = inst.adversary().maximal_sets();
        assert_eq!(maximal.len(), 5);
        assert!(maximal.iter().all(|m| m.len() == 1));
    }

    #[test]
    fn random_views_are_valid_and_not_ad_hoc() {
        let spec = GeneratorSpec {
            count: 20,
            views: ViewMode::RandomSubgraph { p: 0.5 },
            ..Default::default()
        };
        let insts = generate_instances(&spec, 11).unwrap();
        assert!(insts.iter().any(|i| !i.is_ad_hoc()));
    }

    #[test]
    fn unsatisfiable_specs() {
        let complete = GeneratorSpec {
            edge_probability: 1.0,
            nonadjacent_endpoints: true,
            ..Default::default()
        };
        assert!(matches!(
            generate_instances(&complete, 0),
            Err(Error::Generator(_))
        ));
        let tiny = GeneratorSpec {
            min_nodes: 1,
            ..Default::default()
        };
        assert!(generate_instances(&tiny, 0).is_err());
        let inverted = GeneratorSpec {
            min_nodes: 6,
            max_nodes: 4,
            ..Default::default()
        };
        assert!(generate_instances(&inverted, 0).is_err());
    }

    #[test]
    fn spec_deserializes_with_defaults() {
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"count": 3, "views": {"kind": "full"}}"#).unwrap();
        assert_eq!(spec.count, 3);
        assert_eq!(spec.views, ViewMode::Full);
        assert_eq!(spec.max_nodes, 6);
    }
}
