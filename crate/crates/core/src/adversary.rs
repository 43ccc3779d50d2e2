//! Monotone adversary structures over a ground set of players.
//!
//! A structure is stored as the antichain of its inclusion-maximal corruption
//! sets; a set is a member iff it fits inside one of them. The empty
//! structure (only `∅` corruptible) is the antichain `{∅}`, never `{}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{fmt_set, NodeId, NodeSet, ViewFunction};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct AdversaryStructure {
    ground: NodeSet,
    // Sorted, antichain, never empty.
    maximal: Vec<NodeSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureRepr {
    ground: NodeSet,
    maximal: Vec<NodeSet>,
}

impl TryFrom<StructureRepr> for AdversaryStructure {
    type Error = Error;

    fn try_from(r: StructureRepr) -> Result<Self> {
        normalize(r.ground, r.maximal)
    }
}

impl From<AdversaryStructure> for StructureRepr {
    fn from(z: AdversaryStructure) -> Self {
        StructureRepr {
            ground: z.ground,
            maximal: z.maximal,
        }
    }
}

/// Reduces `family` to its inclusion-maximal members over `ground`.
pub fn normalize(
    ground: NodeSet,
    family: impl IntoIterator<Item = NodeSet>,
) -> Result<AdversaryStructure> {
    let family: BTreeSet<NodeSet> = family.into_iter().collect();
    for set in &family {
        if let Some(v) = set.iter().find(|v| !ground.contains(*v)) {
            return Err(Error::OutsideGround(v.clone()));
        }
    }
    Ok(AdversaryStructure {
        ground,
        maximal: maximal_of(family),
    })
}

fn maximal_of(family: BTreeSet<NodeSet>) -> Vec<NodeSet> {
    // Larger sets first so each candidate only needs checking against kept ones.
    let mut by_size: Vec<NodeSet> = family.into_iter().collect();
    by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<NodeSet> = Vec::new();
    for set in by_size {
        if !kept.iter().any(|m| set.is_subset(m)) {
            kept.push(set);
        }
    }
    if kept.is_empty() {
        kept.push(NodeSet::new());
    }
    kept.sort();
    kept
}

impl AdversaryStructure {
    /// Normalizing constructor; see [`normalize`].
    pub fn new(ground: NodeSet, family: impl IntoIterator<Item = NodeSet>) -> Result<Self> {
        normalize(ground, family)
    }

    /// Only the empty set is corruptible.
    pub fn empty(ground: NodeSet) -> Self {
        AdversaryStructure {
            ground,
            maximal: vec![NodeSet::new()],
        }
    }

    /// Every subset of `ground` is corruptible.
    pub fn full(ground: NodeSet) -> Self {
        AdversaryStructure {
            maximal: vec![ground.clone()],
            ground,
        }
    }

    /// Threshold adversary: maximal sets are all `t`-subsets of `universe`,
    /// over `ground ⊇ universe`.
    pub fn threshold(ground: NodeSet, universe: &NodeSet, t: usize) -> Result<Self> {
        if let Some(v) = universe.iter().find(|v| !ground.contains(*v)) {
            return Err(Error::OutsideGround(v.clone()));
        }
        let items: Vec<&NodeId> = universe.iter().collect();
        let t = t.min(items.len());
        let mut family = Vec::new();
        k_subsets(&items, t, 0, &mut Vec::new(), &mut family);
        normalize(ground, family)
    }

    pub fn ground(&self) -> &NodeSet {
        &self.ground
    }

    pub fn maximal_sets(&self) -> &[NodeSet] {
        &self.maximal
    }

    /// `candidate ∈ 𝒵`: inside the ground set and below some maximal set.
    pub fn member(&self, candidate: &NodeSet) -> bool {
        candidate.is_subset(&self.ground) && self.maximal.iter().any(|m| candidate.is_subset(m))
    }

    /// `𝒵^A = { Z ∩ A : Z ∈ 𝒵 }`, over ground `ground ∩ A`.
    pub fn restrict(&self, a: &NodeSet) -> AdversaryStructure {
        let ground = self.ground.intersection(a).cloned().collect();
        let family = self
            .maximal
            .iter()
            .map(|m| m.intersection(a).cloned().collect())
            .collect();
        AdversaryStructure {
            ground,
            maximal: maximal_of(family),
        }
    }

    /// The joint operation `ℰ^A ⊕ ℱ^B`: unions `Z1 ∪ Z2` of members that
    /// agree on the overlap `I = A ∩ B` (`Z1 ∩ B = Z2 ∩ A`).
    ///
    /// The member family is downward closed, and for maximal `M1`, `M2` the
    /// largest agreeing union is `(M1 ∖ I) ∪ (M2 ∖ I) ∪ (M1 ∩ M2 ∩ I)`, so
    /// the result's maximal sets come from pairs of maximal sets alone.
    pub fn join(&self, other: &AdversaryStructure) -> AdversaryStructure {
        let overlap: NodeSet = self.ground.intersection(&other.ground).cloned().collect();
        let mut family = BTreeSet::new();
        for m1 in &self.maximal {
            for m2 in &other.maximal {
                let mut set: NodeSet = m1.difference(&overlap).cloned().collect();
                set.extend(m2.difference(&overlap).cloned());
                set.extend(
                    m1.intersection(m2)
                        .filter(|v| overlap.contains(*v))
                        .cloned(),
                );
                family.insert(set);
            }
        }
        AdversaryStructure {
            ground: self.ground.union(&other.ground).cloned().collect(),
            maximal: maximal_of(family),
        }
    }

    /// Join-semilattice order: `self ≽ other` iff `self ⊕ other = self`.
    pub fn geq(&self, other: &AdversaryStructure) -> bool {
        self.join(other) == *self
    }

    /// Every member, i.e. the downward closure of the maximal sets, sorted.
    pub fn members(&self) -> BTreeSet<NodeSet> {
        let mut out = BTreeSet::new();
        for m in &self.maximal {
            let items: Vec<&NodeId> = m.iter().collect();
            for mask in 0u64..(1u64 << items.len()) {
                out.insert(
                    items
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, v)| (*v).clone())
                        .collect(),
                );
            }
        }
        out
    }

    /// Checks the representation invariants.
    pub fn validate(&self) -> Result<()> {
        if self.maximal.is_empty() {
            return Err(Error::Parse("structure has an empty maximal family".into()));
        }
        for (i, m) in self.maximal.iter().enumerate() {
            if let Some(v) = m.iter().find(|v| !self.ground.contains(*v)) {
                return Err(Error::OutsideGround(v.clone()));
            }
            for (j, other) in self.maximal.iter().enumerate() {
                if i != j && m.is_subset(other) {
                    return Err(Error::Parse(format!(
                        "maximal set {} is contained in {}",
                        fmt_set(m),
                        fmt_set(other)
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for AdversaryStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.maximal.iter().map(fmt_set).collect();
        write!(f, "{{{}}} over {}", sets.join(", "), fmt_set(&self.ground))
    }
}

fn k_subsets(
    items: &[&NodeId],
    k: usize,
    start: usize,
    current: &mut Vec<NodeId>,
    out: &mut Vec<NodeSet>,
) {
    if current.len() == k {
        out.push(current.iter().cloned().collect());
        return;
    }
    for i in start..items.len() {
        current.push(items[i].clone());
        k_subsets(items, k, i + 1, current, out);
        current.pop();
    }
}

/// `Z_v = Z^{V(γ(v))}`: what player `v` knows of the adversary.
pub fn local_structure(
    z: &AdversaryStructure,
    gamma: &ViewFunction,
    v: &NodeId,
) -> Result<AdversaryStructure> {
    Ok(z.restrict(gamma.view(v)?.nodes()))
}

/// `Z_B = ⊕_{v ∈ B} Z_v`: the largest structure consistent with the joint
/// knowledge of the players in `b`.
pub fn joint_structure(
    z: &AdversaryStructure,
    gamma: &ViewFunction,
    b: &NodeSet,
) -> Result<AdversaryStructure> {
    let mut iter = b.iter();
    let first = iter.next().ok_or(Error::EmptySet("joint structure"))?;
    let mut acc = local_structure(z, gamma, first)?;
    for v in iter {
        acc = acc.join(&local_structure(z, gamma, v)?);
    }
    Ok(acc)
}
