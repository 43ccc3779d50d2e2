use crate::adversary::{normalize, AdversaryStructure};
use crate::error::{Error, Result};
use crate::topology::{ad_hoc_view, node_set, Graph, NodeId, ViewFunction};

/// One reliable-transmission problem `(G, 𝒵, γ, S, R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    adversary: AdversaryStructure,
    gamma: ViewFunction,
    sender: NodeId,
    receiver: NodeId,
}

impl Instance {
    pub fn new(
        graph: Graph,
        adversary: AdversaryStructure,
        gamma: ViewFunction,
        sender: NodeId,
        receiver: NodeId,
    ) -> Result<Self> {
        if sender == receiver {
            return Err(Error::SameEndpoints(sender));
        }
        for v in [&sender, &receiver] {
            if !graph.contains(v) {
                return Err(Error::UnknownNode(v.clone()));
            }
        }
        if adversary.ground() != graph.nodes() {
            return Err(Error::GroundMismatch);
        }
        // Re-validate so a view function built for another graph is caught.
        let gamma = ViewFunction::new(&graph, gamma.views().clone())?;
        Ok(Instance {
            graph,
            adversary,
            gamma,
            sender,
            receiver,
        })
    }

    /// Instance with ad hoc views.
    pub fn ad_hoc(
        graph: Graph,
        adversary: AdversaryStructure,
        sender: impl Into<NodeId>,
        receiver: impl Into<NodeId>,
    ) -> Result<Self> {
        let gamma = ad_hoc_view(&graph);
        Instance::new(graph, adversary, gamma, sender.into(), receiver.into())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn adversary(&self) -> &AdversaryStructure {
        &self.adversary
    }

    pub fn gamma(&self) -> &ViewFunction {
        &self.gamma
    }

    pub fn sender(&self) -> &NodeId {
        &self.sender
    }

    pub fn receiver(&self) -> &NodeId {
        &self.receiver
    }

    /// True when γ is exactly the ad hoc view of the graph.
    pub fn is_ad_hoc(&self) -> bool {
        self.gamma == ad_hoc_view(&self.graph)
    }

    /// Same instance with a different view function.
    pub fn with_views(&self, gamma: ViewFunction) -> Result<Self> {
        Instance::new(
            self.graph.clone(),
            self.adversary.clone(),
            gamma,
            self.sender.clone(),
            self.receiver.clone(),
        )
    }
}

/// Small hand-built instances used throughout tests and examples.
pub mod named {
    use super::*;

    fn build(pairs: &[(&str, &str)], corruptible: &[&[&str]]) -> Instance {
        let g = Graph::from_pairs(&[], pairs).expect("valid graph");
        let z = normalize(
            g.nodes().clone(),
            corruptible.iter().map(|s| node_set(s.iter().copied())),
        )
        .expect("valid structure");
        Instance::ad_hoc(g, z, "S", "R").expect("valid instance")
    }

    /// `S – u – R`, with `{u}` corruptible.
    pub fn path() -> Instance {
        build(&[("S", "u"), ("u", "R")], &[&["u"]])
    }

    /// Two disjoint paths through `v1` and `v2`; either relay may be corrupt.
    pub fn two_path() -> Instance {
        build(
            &[("S", "v1"), ("v1", "R"), ("S", "v2"), ("v2", "R")],
            &[&["v1"], &["v2"]],
        )
    }

    /// Three disjoint paths through `v1`, `v2`, `v3`; any single relay may be
    /// corrupt.
    pub fn three_path() -> Instance {
        build(
            &[
                ("S", "v1"),
                ("v1", "R"),
                ("S", "v2"),
                ("v2", "R"),
                ("S", "v3"),
                ("v3", "R"),
            ],
            &[&["v1"], &["v2"], &["v3"]],
        )
    }

    /// All named instances with their names.
    pub fn all() -> Vec<(&'static str, Instance)> {
        vec![
            ("path", path()),
            ("two-path", two_path()),
            ("three-path", three_path()),
        ]
    }

    pub fn by_name(name: &str) -> Option<Instance> {
        all().into_iter().find(|(n, _)| *n == name).map(|(_, i)| i)
    }
}
