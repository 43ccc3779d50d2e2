//! Definitional checkers and brute-force search for the two separator notions
//! that rule out safe transmission: Z-pp cuts (ad hoc knowledge) and
//! RMT-cuts (partial knowledge).
//!
//! Search enumerates every cut from [`enumerate_cuts`] with `B` fixed to the
//! receiver's component of `G − C`. Both conditions quantify over `B`, and
//! shrinking `B` only weakens them (for RMT-cuts, any member of `Z_{B'}` with
//! `B ⊆ B'` intersects `V(γ(B))` in a member of `Z_B`), so the canonical
//! choice finds a cut whenever some bipartition would.

use crate::adversary::{joint_structure, local_structure, AdversaryStructure};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::topology::{enumerate_cuts, CutWitness, NodeId, NodeSet};

/// Default cap on `|V|` for exhaustive cut search.
pub const DEFAULT_SIZE_LIMIT: usize = 12;

fn check_size(inst: &Instance, limit: usize) -> Result<()> {
    let nodes = inst.graph().len();
    if nodes > limit {
        return Err(Error::SizeLimit { nodes, limit });
    }
    Ok(())
}

/// `C1 ∈ 𝒵` and `N(u) ∩ C2 ∈ Z_u` for every `u ∈ B`.
pub fn check_zpp_cut(inst: &Instance, w: &CutWitness) -> Result<bool> {
    if !inst.is_ad_hoc() {
        return Err(Error::NotAdHoc);
    }
    w.validate(inst.graph(), inst.sender(), inst.receiver())?;
    if !inst.adversary().member(&w.part1) {
        return Ok(false);
    }
    for u in &w.side_b {
        let local = local_structure(inst.adversary(), inst.gamma(), u)?;
        if !local.member(&neighbors_in(inst, u, &w.part2)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C1 ∈ 𝒵` and `C2 ∩ V(γ(B)) ∈ Z_B`.
pub fn check_rmt_cut(inst: &Instance, w: &CutWitness) -> Result<bool> {
    w.validate(inst.graph(), inst.sender(), inst.receiver())?;
    if !inst.adversary().member(&w.part1) {
        return Ok(false);
    }
    let joint = joint_structure(inst.adversary(), inst.gamma(), &w.side_b)?;
    rmt_condition(inst, &joint, w)
}

fn rmt_condition(inst: &Instance, joint: &AdversaryStructure, w: &CutWitness) -> Result<bool> {
    let seen = inst.gamma().joint_view(&w.side_b)?;
    let visible: NodeSet = w.part2.intersection(seen.nodes()).cloned().collect();
    Ok(joint.member(&visible))
}

fn neighbors_in(inst: &Instance, u: &NodeId, set: &NodeSet) -> Result<NodeSet> {
    Ok(inst
        .graph()
        .neighbors(u)?
        .intersection(set)
        .cloned()
        .collect())
}

/// Subsets of `cut` in ascending bitmask order that are members of `z`.
fn member_splits<'a>(
    z: &'a AdversaryStructure,
    cut: &'a NodeSet,
) -> impl Iterator<Item = NodeSet> + 'a {
    let items: Vec<&NodeId> = cut.iter().collect();
    (0u64..(1u64 << items.len())).filter_map(move |mask| {
        let part1: NodeSet = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| (*v).clone())
            .collect();
        z.member(&part1).then_some(part1)
    })
}

/// First Z-pp cut in canonical order (cuts by bitmask, then `C1` by
/// bitmask), or `None`.
pub fn find_zpp_cut(inst: &Instance, size_limit: usize) -> Result<Option<CutWitness>> {
    if !inst.is_ad_hoc() {
        return Err(Error::NotAdHoc);
    }
    check_size(inst, size_limit)?;
    let z = inst.adversary();
    for cut in enumerate_cuts(inst.graph(), inst.sender(), inst.receiver())? {
        let locals = cut
            .side_b
            .iter()
            .map(|u| Ok((u, local_structure(z, inst.gamma(), u)?)))
            .collect::<Result<Vec<_>>>()?;
        for part1 in member_splits(z, &cut.cut) {
            let w = cut.with_split(part1);
            let mut ok = true;
            for (u, local) in &locals {
                if !local.member(&neighbors_in(inst, u, &w.part2)?) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// First RMT-cut in canonical order, or `None`.
pub fn find_rmt_cut(inst: &Instance, size_limit: usize) -> Result<Option<CutWitness>> {
    check_size(inst, size_limit)?;
    let z = inst.adversary();
    for cut in enumerate_cuts(inst.graph(), inst.sender(), inst.receiver())? {
        let joint = joint_structure(z, inst.gamma(), &cut.side_b)?;
        for part1 in member_splits(z, &cut.cut) {
            let w = cut.with_split(part1);
            if rmt_condition(inst, &joint, &w)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::named;
    use crate::topology::{node_set, ViewFunction};

    fn witness(inst: &Instance, cut: &[&str], part1: &[&str]) -> CutWitness {
        let cut = node_set(cut.iter().copied());
        enumerate_cuts(inst.graph(), inst.sender(), inst.receiver())
            .unwrap()
            .into_iter()
            .find(|w| w.cut == cut)
            .expect("cut exists")
            .with_split(node_set(part1.iter().copied()))
    }

    #[test]
    fn zpp_checks() {
        let p = named::path();
        assert!(check_zpp_cut(&p, &witness(&p, &["u"], &["u"])).unwrap());

        let two = named::two_path();
        assert!(check_zpp_cut(&two, &witness(&two, &["v1", "v2"], &["v1"])).unwrap());

        let three = named::three_path();
        let cut = witness(&three, &["v1", "v2", "v3"], &[]);
        for mask in 0..8u32 {
            let part1 = cut
                .cut
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            assert!(!check_zpp_cut(&three, &cut.with_split(part1)).unwrap());
        }
    }

    #[test]
    fn zpp_requires_ad_hoc() {
        let two = named::two_path();
        let full = two.with_views(ViewFunction::full(two.graph())).unwrap();
        let w = witness(&full, &["v1", "v2"], &["v1"]);
        assert!(matches!(check_zpp_cut(&full, &w), Err(Error::NotAdHoc)));
        assert!(matches!(find_zpp_cut(&full, 12), Err(Error::NotAdHoc)));
    }

    #[test]
    fn malformed_witness_rejected() {
        let p = named::path();
        let mut w = witness(&p, &["u"], &["u"]);
        w.side_b.insert("S".into());
        assert!(matches!(
            check_zpp_cut(&p, &w),
            Err(Error::MalformedWitness(_))
        ));
        let mut w = witness(&p, &["u"], &["u"]);
        w.part2 = node_set(["u"]);
        assert!(matches!(
            check_rmt_cut(&p, &w),
            Err(Error::MalformedWitness(_))
        ));
    }

    #[test]
    fn zpp_search() {
        let w = find_zpp_cut(&named::path(), 12).unwrap().unwrap();
        assert_eq!(w.cut, node_set(["u"]));
        assert!(find_zpp_cut(&named::three_path(), 12).unwrap().is_none());
        let w = find_zpp_cut(&named::two_path(), 12).unwrap().unwrap();
        assert!(check_zpp_cut(&named::two_path(), &w).unwrap());
    }

    #[test]
    fn rmt_checks() {
        let two = named::two_path();
        assert!(check_rmt_cut(&two, &witness(&two, &["v1", "v2"], &["v1"])).unwrap());

        // R knows the whole graph; the real structure still has {v2}.
        let mut views = crate::topology::ad_hoc_view(two.graph()).views().clone();
        views.insert("R".into(), two.graph().as_subgraph());
        let informed = two
            .with_views(ViewFunction::new(two.graph(), views).unwrap())
            .unwrap();
        assert!(check_rmt_cut(&informed, &witness(&informed, &["v1", "v2"], &["v1"])).unwrap());

        let three = named::three_path();
        let cut = witness(&three, &["v1", "v2", "v3"], &[]);
        for part1 in [vec![], vec!["v1"], vec!["v1", "v2"], vec!["v3"]] {
            let w = cut.with_split(node_set(part1));
            assert!(!check_rmt_cut(&three, &w).unwrap());
        }
    }

    #[test]
    fn rmt_search() {
        assert!(find_rmt_cut(&named::two_path(), 12).unwrap().is_some());
        assert!(find_rmt_cut(&named::three_path(), 12).unwrap().is_none());
    }

    #[test]
    fn rmt_search_without_corruption_on_path() {
        // C = {u} is the only cut. C1 must be ∅, so C2 = {u}; B = {R} sees
        // {R, u} and Z_B = {∅}, which does not contain {u}.
        let p = named::path();
        let none = AdversaryStructure::empty(p.graph().nodes().clone());
        let inst = Instance::ad_hoc(p.graph().clone(), none, "S", "R").unwrap();
        let only = witness(&inst, &["u"], &[]);
        assert!(!check_rmt_cut(&inst, &only).unwrap());
        assert!(find_rmt_cut(&inst, 12).unwrap().is_none());
    }

    #[test]
    fn adjacent_endpoints_never_cut() {
        let g =
            crate::topology::Graph::from_pairs(&[], &[("S", "R"), ("S", "a"), ("a", "R")]).unwrap();
        let z = AdversaryStructure::full(g.nodes().clone());
        let inst = Instance::ad_hoc(g, z, "S", "R").unwrap();
        assert!(find_zpp_cut(&inst, 12).unwrap().is_none());
        assert!(find_rmt_cut(&inst, 12).unwrap().is_none());
    }

    #[test]
    fn size_limit_enforced() {
        assert!(matches!(
            find_rmt_cut(&named::three_path(), 3),
            Err(Error::SizeLimit { nodes: 5, limit: 3 })
        ));
    }

    #[test]
    fn search_is_deterministic() {
        let two = named::two_path();
        assert_eq!(
            find_zpp_cut(&two, 12).unwrap(),
            find_zpp_cut(&two, 12).unwrap()
        );
    }
}
