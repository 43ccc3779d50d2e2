//! Network graphs, per-player topology views and sender/receiver vertex cuts.
//!
//! Everything here is immutable once built. Sets are `BTreeSet`s so iteration
//! and serialization always follow the total order on [`NodeId`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a player. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

pub type NodeSet = BTreeSet<NodeId>;

/// Builds a [`NodeSet`] from anything that converts into node ids.
pub fn node_set<I, T>(items: I) -> NodeSet
where
    I: IntoIterator<Item = T>,
    T: Into<NodeId>,
{
    items.into_iter().map(Into::into).collect()
}

/// Renders a node set as `{a, b, c}`.
pub fn fmt_set(set: &NodeSet) -> String {
    let inner: Vec<&str> = set.iter().map(NodeId::as_str).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Undirected edge, stored with its endpoints in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    /// Fails on self-loops.
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn endpoints(&self) -> (&NodeId, &NodeId) {
        (&self.0, &self.1)
    }

    pub fn touches(&self, v: &NodeId) -> bool {
        &self.0 == v || &self.1 == v
    }

    /// The endpoint opposite `v`, if `v` is an endpoint.
    pub fn other(&self, v: &NodeId) -> Option<&NodeId> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

/// An undirected simple graph of players joined by authenticated channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nodes: NodeSet,
    edges: BTreeSet<Edge>,
    adjacency: BTreeMap<NodeId, NodeSet>,
}

impl Graph {
    /// Validates that every edge endpoint is a node.
    pub fn new(nodes: NodeSet, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let mut adjacency: BTreeMap<NodeId, NodeSet> =
            nodes.iter().map(|v| (v.clone(), NodeSet::new())).collect();
        for Edge(a, b) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                adjacency
                    .get_mut(x)
                    .ok_or_else(|| Error::UnknownNode(x.clone()))?
                    .insert(y.clone());
            }
        }
        Ok(Graph {
            nodes,
            edges,
            adjacency,
        })
    }

    /// Convenience constructor from string pairs; nodes are the given list
    /// plus every edge endpoint.
    pub fn from_pairs(nodes: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        let mut all = node_set(nodes.iter().copied());
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            all.insert(a.into());
            all.insert(b.into());
            edges.push(Edge::new(a, b)?);
        }
        Graph::new(all, edges)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        self.nodes.contains(v)
    }

    pub fn has_edge(&self, a: &NodeId, b: &NodeId) -> bool {
        self.adjacency.get(a).is_some_and(|n| n.contains(b))
    }

    /// N(v): every node sharing an edge with `v`, excluding `v`.
    pub fn neighbors(&self, v: &NodeId) -> Result<&NodeSet> {
        self.adjacency
            .get(v)
            .ok_or_else(|| Error::UnknownNode(v.clone()))
    }

    /// The whole graph viewed as a subgraph of itself.
    pub fn as_subgraph(&self) -> Subgraph {
        Subgraph {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Connected component of `start` in the graph with `removed` deleted.
    /// Empty if `start` itself is removed.
    pub fn component(&self, start: &NodeId, removed: &NodeSet) -> NodeSet {
        let mut seen = NodeSet::new();
        if removed.contains(start) || !self.contains(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(v) = queue.pop_front() {
            for u in &self.adjacency[&v] {
                if !removed.contains(u) && seen.insert(u.clone()) {
                    queue.push_back(u.clone());
                }
            }
        }
        seen
    }

    /// Connected components of the graph with `removed` deleted, in order
    /// of their smallest node.
    pub fn components(&self, removed: &NodeSet) -> Vec<NodeSet> {
        let mut covered = removed.clone();
        let mut out = Vec::new();
        for v in &self.nodes {
            if covered.contains(v) {
                continue;
            }
            let comp = self.component(v, removed);
            covered.extend(comp.iter().cloned());
            out.push(comp);
        }
        out
    }
}

/// A subgraph `(V_v, E_v)` of some parent graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Subgraph {
    nodes: NodeSet,
    edges: BTreeSet<Edge>,
}

impl Subgraph {
    /// Checks `nodes ⊆ V(parent)`, `edges ⊆ E(parent)` and that every edge
    /// endpoint lies in `nodes`.
    pub fn new(parent: &Graph, nodes: NodeSet, edges: BTreeSet<Edge>) -> Result<Self> {
        if let Some(v) = nodes.iter().find(|v| !parent.contains(v)) {
            return Err(Error::UnknownNode(v.clone()));
        }
        for e in &edges {
            let (a, b) = e.endpoints();
            if !parent.edges.contains(e) {
                return Err(Error::UnknownEdge(a.clone(), b.clone()));
            }
            if let Some(v) = [a, b].into_iter().find(|v| !nodes.contains(*v)) {
                return Err(Error::UnknownNode(v.clone()));
            }
        }
        Ok(Subgraph { nodes, edges })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// True if every node and edge of `self` is also in `other`.
    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.nodes.is_subset(&other.nodes) && self.edges.is_subset(&other.edges)
    }

    fn union_with(&mut self, other: &Subgraph) {
        self.nodes.extend(other.nodes.iter().cloned());
        self.edges.extend(other.edges.iter().cloned());
    }
}

/// The view function γ: the subgraph of the topology each player knows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewFunction {
    views: BTreeMap<NodeId, Subgraph>,
}

impl ViewFunction {
    /// Validates that the map is total on `V(g)`, every view contains its
    /// owner, and every view is a subgraph of `g`.
    pub fn new(g: &Graph, views: BTreeMap<NodeId, Subgraph>) -> Result<Self> {
        for v in g.nodes() {
            let view = views.get(v).ok_or_else(|| Error::InvalidView {
                node: v.clone(),
                reason: "missing view".into(),
            })?;
            if !view.nodes.contains(v) {
                return Err(Error::InvalidView {
                    node: v.clone(),
                    reason: "view does not contain its owner".into(),
                });
            }
            Subgraph::new(g, view.nodes.clone(), view.edges.clone()).map_err(|e| {
                Error::InvalidView {
                    node: v.clone(),
                    reason: e.to_string(),
                }
            })?;
        }
        if let Some(extra) = views.keys().find(|v| !g.contains(v)) {
            return Err(Error::UnknownNode(extra.clone()));
        }
        Ok(ViewFunction { views })
    }

    /// Every player knows the whole graph.
    pub fn full(g: &Graph) -> Self {
        let whole = g.as_subgraph();
        ViewFunction {
            views: g
                .nodes()
                .iter()
                .map(|v| (v.clone(), whole.clone()))
                .collect(),
        }
    }

    pub fn view(&self, v: &NodeId) -> Result<&Subgraph> {
        self.views
            .get(v)
            .ok_or_else(|| Error::UnknownNode(v.clone()))
    }

    pub fn views(&self) -> &BTreeMap<NodeId, Subgraph> {
        &self.views
    }

    /// γ(S): union of the node sets and edge sets of every member's view.
    pub fn joint_view(&self, s: &NodeSet) -> Result<Subgraph> {
        if s.is_empty() {
            return Err(Error::EmptySet("joint view"));
        }
        let mut joint = Subgraph::default();
        for v in s {
            joint.union_with(self.view(v)?);
        }
        Ok(joint)
    }
}

/// Ad hoc knowledge: each player sees itself, its neighbors and its own
/// incident edges (no edges between neighbors).
pub fn ad_hoc_view(g: &Graph) -> ViewFunction {
    let views = g
        .nodes()
        .iter()
        .map(|v| {
            let mut nodes = g.adjacency[v].clone();
            nodes.insert(v.clone());
            let edges = g.edges().iter().filter(|e| e.touches(v)).cloned().collect();
            (v.clone(), Subgraph { nodes, edges })
        })
        .collect();
    ViewFunction { views }
}

/// A vertex cut `C` separating `A ∋ S` from `B ∋ R`, optionally split into
/// `C = C1 ∪ C2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    pub cut: NodeSet,
    pub side_a: NodeSet,
    pub side_b: NodeSet,
    pub part1: NodeSet,
    pub part2: NodeSet,
}

impl CutWitness {
    /// Same cut and sides with a new `C1`; `C2` becomes `C ∖ C1`.
    pub fn with_split(&self, part1: NodeSet) -> CutWitness {
        let part2 = self.cut.difference(&part1).cloned().collect();
        CutWitness {
            part1,
            part2,
            ..self.clone()
        }
    }

    /// Checks the partition, separation and split invariants against `g`.
    pub fn validate(&self, g: &Graph, sender: &NodeId, receiver: &NodeId) -> Result<()> {
        let bad = |msg: &str| Err(Error::MalformedWitness(msg.to_owned()));
        if self.side_a.is_empty() || self.side_b.is_empty() {
            return bad("sides A and B must be nonempty");
        }
        if !self.side_a.contains(sender) {
            return bad("sender must lie in side A");
        }
        if !self.side_b.contains(receiver) {
            return bad("receiver must lie in side B");
        }
        let total = self.cut.len() + self.side_a.len() + self.side_b.len();
        let union: NodeSet = self
            .cut
            .iter()
            .chain(&self.side_a)
            .chain(&self.side_b)
            .cloned()
            .collect();
        if union != *g.nodes() || total != g.len() {
            return bad("C, A and B must partition the node set");
        }
        for a in &self.side_a {
            if g.adjacency[a].iter().any(|u| self.side_b.contains(u)) {
                return bad("an edge joins side A and side B");
            }
        }
        if !self.part1.is_disjoint(&self.part2)
            || self.part1.union(&self.part2).cloned().collect::<NodeSet>() != self.cut
        {
            return bad("C1 and C2 must partition C");
        }
        Ok(())
    }
}

/// Every vertex cut `C ⊆ V ∖ {s, r}` whose removal disconnects `s` from `r`.
///
/// `side_b` is the component of `r` in `G − C` and `side_a` the rest; the
/// split parts are left empty. Cuts are yielded in ascending order of the
/// bitmask over the sorted candidate nodes. Exponential in `|V|`.
pub fn enumerate_cuts(g: &Graph, s: &NodeId, r: &NodeId) -> Result<Vec<CutWitness>> {
    if s == r {
        return Err(Error::SameEndpoints(s.clone()));
    }
    for v in [s, r] {
        if !g.contains(v) {
            return Err(Error::UnknownNode(v.clone()));
        }
    }
    if g.has_edge(s, r) {
        return Ok(Vec::new());
    }
    let candidates: Vec<&NodeId> = g.nodes().iter().filter(|v| *v != s && *v != r).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << candidates.len()) {
        let cut: NodeSet = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| (*v).clone())
            .collect();
        let side_b = g.component(r, &cut);
        if side_b.contains(s) {
            continue;
        }
        let side_a = g
            .nodes()
            .iter()
            .filter(|v| !cut.contains(*v) && !side_b.contains(*v))
            .cloned()
            .collect();
        out.push(CutWitness {
            cut,
            side_a,
            side_b,
            part1: NodeSet::new(),
            part2: NodeSet::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> Graph {
        Graph::from_pairs(&[], &[("S", "u"), ("u", "R")]).unwrap()
    }

    fn two_path() -> Graph {
        Graph::from_pairs(&[], &[("S", "v1"), ("v1", "R"), ("S", "v2"), ("v2", "R")]).unwrap()
    }

    #[test]
    fn neighbors_basic() {
        let tri = Graph::from_pairs(&[], &[("S", "a"), ("a", "R"), ("S", "R")]).unwrap();
        assert_eq!(tri.neighbors(&"S".into()).unwrap(), &node_set(["a", "R"]));
        assert_eq!(
            path().neighbors(&"u".into()).unwrap(),
            &node_set(["S", "R"])
        );
        let g = Graph::from_pairs(&["w"], &[("S", "R")]).unwrap();
        assert!(g.neighbors(&"w".into()).unwrap().is_empty());
        assert!(matches!(
            g.neighbors(&"nope".into()),
            Err(Error::UnknownNode(v)) if v.as_str() == "nope"
        ));
    }

    #[test]
    fn rejects_self_loops_and_dangling_edges() {
        assert!(matches!(Edge::new("a", "a"), Err(Error::SelfLoop(_))));
        let err = Graph::new(node_set(["a"]), [Edge::new("a", "b").unwrap()]).unwrap_err();
        assert!(matches!(err, Error::UnknownNode(v) if v.as_str() == "b"));
    }

    #[test]
    fn ad_hoc_views_on_path_and_star() {
        let g = path();
        let gamma = ad_hoc_view(&g);
        let u = gamma.view(&"u".into()).unwrap();
        assert_eq!(u.nodes(), &node_set(["S", "u", "R"]));
        assert_eq!(u.edges().len(), 2);

        let star = Graph::from_pairs(&[], &[("c", "l1"), ("c", "l2"), ("c", "l3")]).unwrap();
        let gamma = ad_hoc_view(&star);
        assert_eq!(gamma.view(&"c".into()).unwrap().nodes(), star.nodes());
        let leaf = gamma.view(&"l1".into()).unwrap();
        assert_eq!(leaf.nodes(), &node_set(["l1", "c"]));
        assert_eq!(
            leaf.edges().iter().cloned().collect::<Vec<_>>(),
            vec![Edge::new("c", "l1").unwrap()]
        );
    }

    #[test]
    fn ad_hoc_view_omits_edges_between_neighbors() {
        let tri = Graph::from_pairs(&[], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let view = ad_hoc_view(&tri).view(&"a".into()).unwrap().clone();
        assert!(!view.edges().contains(&Edge::new("b", "c").unwrap()));
    }

    #[test]
    fn joint_views() {
        let g = path();
        let gamma = ad_hoc_view(&g);
        let single = gamma.joint_view(&node_set(["S"])).unwrap();
        assert_eq!(&single, gamma.view(&"S".into()).unwrap());
        let sr = gamma.joint_view(&node_set(["S", "R"])).unwrap();
        assert_eq!(sr.nodes(), &node_set(["S", "u", "R"]));
        assert_eq!(sr.edges(), g.edges());
        assert!(matches!(
            gamma.joint_view(&NodeSet::new()),
            Err(Error::EmptySet(_))
        ));
    }

    #[test]
    fn joint_view_of_everyone_is_the_graph() {
        let g = two_path();
        let gamma = ad_hoc_view(&g);
        // Independent union over nodes and incident edges.
        let mut nodes = NodeSet::new();
        let mut edges = BTreeSet::new();
        for v in g.nodes() {
            nodes.insert(v.clone());
            for e in g.edges() {
                if e.touches(v) {
                    edges.insert(e.clone());
                    nodes.insert(e.other(v).unwrap().clone());
                }
            }
        }
        let joint = gamma.joint_view(g.nodes()).unwrap();
        assert_eq!(joint.nodes(), &nodes);
        assert_eq!(joint.edges(), &edges);
        assert_eq!(joint, g.as_subgraph());
    }

    #[test]
    fn view_function_validation() {
        let g = path();
        let mut views = ad_hoc_view(&g).views().clone();
        views.insert("u".into(), Subgraph::default());
        assert!(matches!(
            ViewFunction::new(&g, views.clone()),
            Err(Error::InvalidView { .. })
        ));
        views.remove(&NodeId::from("u"));
        assert!(ViewFunction::new(&g, views).is_err());
        let bad_edge = Subgraph::new(
            &g,
            node_set(["S", "R"]),
            [Edge::new("S", "R").unwrap()].into(),
        );
        assert!(matches!(bad_edge, Err(Error::UnknownEdge(..))));
    }

    #[test]
    fn cuts_on_path() {
        let cuts = enumerate_cuts(&path(), &"S".into(), &"R".into()).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].cut, node_set(["u"]));
        assert_eq!(cuts[0].side_a, node_set(["S"]));
        assert_eq!(cuts[0].side_b, node_set(["R"]));
    }

    #[test]
    fn cuts_on_two_paths_with_extra_node() {
        // Extra pendant w attached to S; every cut must contain v1 and v2 and
        // may contain w. Brute force over all 8 subsets of {v1, v2, w}.
        let g = Graph::from_pairs(
            &[],
            &[
                ("S", "v1"),
                ("v1", "R"),
                ("S", "v2"),
                ("v2", "R"),
                ("S", "w"),
            ],
        )
        .unwrap();
        let cuts = enumerate_cuts(&g, &"S".into(), &"R".into()).unwrap();
        let got: BTreeSet<NodeSet> = cuts.iter().map(|c| c.cut.clone()).collect();
        let expected: BTreeSet<NodeSet> =
            [node_set(["v1", "v2"]), node_set(["v1", "v2", "w"])].into();
        assert_eq!(got, expected);
        for c in &cuts {
            c.with_split(NodeSet::new())
                .validate(&g, &"S".into(), &"R".into())
                .unwrap();
        }
    }

    #[test]
    fn adjacent_endpoints_have_no_cuts() {
        let g = Graph::from_pairs(&[], &[("S", "R"), ("S", "a"), ("a", "R")]).unwrap();
        assert!(enumerate_cuts(&g, &"S".into(), &"R".into())
            .unwrap()
            .is_empty());
        assert!(matches!(
            enumerate_cuts(&g, &"S".into(), &"S".into()),
            Err(Error::SameEndpoints(_))
        ));
    }

    #[test]
    fn stray_components_go_to_side_a() {
        let g = Graph::from_pairs(&["z"], &[("S", "u"), ("u", "R")]).unwrap();
        let cuts = enumerate_cuts(&g, &"S".into(), &"R".into()).unwrap();
        let c = cuts.iter().find(|c| c.cut == node_set(["u"])).unwrap();
        assert_eq!(c.side_a, node_set(["S", "z"]));
        assert_eq!(c.side_b, node_set(["R"]));
    }
}
