//! Independent oracles and seeded generators shared by the integration
//! tests. The oracles work on explicit member families and never call the
//! library's join, restriction, membership or cut search.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmt_core::{AdversaryStructure, Instance, NodeId, NodeSet};

pub type Set = BTreeSet<String>;
pub type Family = BTreeSet<Set>;

/// A structure as its ground set plus every member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explicit {
    pub ground: Set,
    pub members: Family,
}

pub fn names(s: &NodeSet) -> Set {
    s.iter().map(|v| v.as_str().to_owned()).collect()
}

pub fn ids(s: &Set) -> NodeSet {
    s.iter().map(|v| NodeId::from(v.as_str())).collect()
}

pub fn subsets(s: &Set) -> Vec<Set> {
    let items: Vec<&String> = s.iter().collect();
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| (*v).clone())
                .collect()
        })
        .collect()
}

/// Downward closure of the maximal sets, by enumeration.
pub fn explicit(z: &AdversaryStructure) -> Explicit {
    let mut members = Family::new();
    for m in z.maximal_sets() {
        members.extend(subsets(&names(m)));
    }
    Explicit {
        ground: names(z.ground()),
        members,
    }
}

impl Explicit {
    pub fn member(&self, x: &Set) -> bool {
        self.members.contains(x)
    }

    pub fn restrict(&self, a: &Set) -> Explicit {
        Explicit {
            ground: self.ground.intersection(a).cloned().collect(),
            members: self
                .members
                .iter()
                .map(|m| m.intersection(a).cloned().collect())
                .collect(),
        }
    }

    /// Every union of a member pair agreeing on the shared ground.
    pub fn join(&self, other: &Explicit) -> Explicit {
        let mut members = Family::new();
        for z1 in &self.members {
            for z2 in &other.members {
                let left: Set = z1.intersection(&other.ground).cloned().collect();
                let right: Set = z2.intersection(&self.ground).cloned().collect();
                if left == right {
                    members.insert(z1.union(z2).cloned().collect());
                }
            }
        }
        Explicit {
            ground: self.ground.union(&other.ground).cloned().collect(),
            members,
        }
    }
}

pub const UNIVERSE: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_subset(rng: &mut ChaCha8Rng, of: &Set, p: f64) -> Set {
    of.iter().filter(|_| rng.random_bool(p)).cloned().collect()
}

/// A structure over a random ground inside `UNIVERSE` with up to three
/// random generating sets. The ground may be empty.
pub fn random_structure(rng: &mut ChaCha8Rng) -> AdversaryStructure {
    let universe: Set = UNIVERSE.iter().map(|s| (*s).to_owned()).collect();
    let ground = random_subset(rng, &universe, 0.6);
    let sets = rng.random_range(0..=3);
    let family: Vec<NodeSet> = (0..sets)
        .map(|_| {
            let p = rng.random_range(0.2..0.8);
            ids(&random_subset(rng, &ground, p))
        })
        .collect();
    AdversaryStructure::new(ids(&ground), family).expect("family inside ground")
}

/// Definitional cut search: every cut, every side for each stray
/// component, every split of the cut.
pub struct CutOracle {
    nodes: Set,
    adj: BTreeMap<String, Set>,
    z: Explicit,
    views: BTreeMap<String, Set>,
    sender: String,
    receiver: String,
}

impl CutOracle {
    pub fn new(inst: &Instance) -> Self {
        let nodes = names(inst.graph().nodes());
        let mut adj: BTreeMap<String, Set> =
            nodes.iter().map(|v| (v.clone(), Set::new())).collect();
        for e in inst.graph().edges() {
            let (a, b) = e.endpoints();
            adj.get_mut(a.as_str())
                .unwrap()
                .insert(b.as_str().to_owned());
            adj.get_mut(b.as_str())
                .unwrap()
                .insert(a.as_str().to_owned());
        }
        let views = inst
            .gamma()
            .views()
            .iter()
            .map(|(v, sub)| (v.as_str().to_owned(), names(sub.nodes())))
            .collect();
        CutOracle {
            nodes,
            adj,
            z: explicit(inst.adversary()),
            views,
            sender: inst.sender().as_str().to_owned(),
            receiver: inst.receiver().as_str().to_owned(),
        }
    }

    fn components(&self, removed: &Set) -> Vec<Set> {
        let mut seen = Set::new();
        let mut out = Vec::new();
        for start in &self.nodes {
            if removed.contains(start) || seen.contains(start) {
                continue;
            }
            let mut comp = Set::new();
            let mut queue = VecDeque::from([start.clone()]);
            seen.insert(start.clone());
            while let Some(v) = queue.pop_front() {
                for u in &self.adj[&v] {
                    if !removed.contains(u) && seen.insert(u.clone()) {
                        queue.push_back(u.clone());
                    }
                }
                comp.insert(v);
            }
            out.push(comp);
        }
        out
    }

    /// Calls `f(C1, C2, B)` for every cut, side assignment and split until
    /// it returns true.
    fn any_candidate(&self, mut f: impl FnMut(&Set, &Set, &Set) -> bool) -> bool {
        let inner: Set = self
            .nodes
            .iter()
            .filter(|v| **v != self.sender && **v != self.receiver)
            .cloned()
            .collect();
        for cut in subsets(&inner) {
            let comps = self.components(&cut);
            let r_comp = comps.iter().find(|c| c.contains(&self.receiver)).unwrap();
            if r_comp.contains(&self.sender) {
                continue;
            }
            let strays: Vec<&Set> = comps
                .iter()
                .filter(|c| !c.contains(&self.sender) && !c.contains(&self.receiver))
                .collect();
            for assign in 0u32..1 << strays.len() {
                let mut b = r_comp.clone();
                for (i, s) in strays.iter().enumerate() {
                    if assign >> i & 1 == 1 {
                        b.extend(s.iter().cloned());
                    }
                }
                for c1 in subsets(&cut) {
                    let c2: Set = cut.difference(&c1).cloned().collect();
                    if f(&c1, &c2, &b) {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn zpp_cut_exists(&self) -> bool {
        self.any_candidate(|c1, c2, b| {
            self.z.member(c1)
                && b.iter().all(|u| {
                    let seen: Set = self.adj[u].intersection(c2).cloned().collect();
                    self.z.restrict(&self.views[u]).member(&seen)
                })
        })
    }

    pub fn rmt_cut_exists(&self) -> bool {
        self.any_candidate(|c1, c2, b| {
            if !self.z.member(c1) {
                return false;
            }
            let mut view = Set::new();
            let mut joint: Option<Explicit> = None;
            for u in b {
                view.extend(self.views[u].iter().cloned());
                let local = self.z.restrict(&self.views[u]);
                joint = Some(match joint {
                    None => local,
                    Some(acc) => acc.join(&local),
                });
            }
            let seen: Set = c2.intersection(&view).cloned().collect();
            joint.expect("B contains the receiver").member(&seen)
        })
    }
}
