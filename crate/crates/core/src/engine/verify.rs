//! Cross-checks the cut characterization against simulated Z-CPA behavior.
//!
//! On an ad hoc instance without a Z-pp cut, Z-CPA must deliver against
//! every behavior of every maximal corrupted set. With a Z-pp cut
//! `C = C1 ∪ C2`, corrupting `C1` must leave some behavior under which the
//! receiver never decides. No run may ever be unsafe.

use serde::{Deserialize, Serialize};

use super::{exhaustive_search, SearchConfig, SearchSummary};
use crate::adversary::normalize;
use crate::cuts::find_zpp_cut;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocol::MessageValue;
use crate::topology::{CutWitness, NodeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// No Z-pp cut: delivery under every admissible behavior.
    Deliver,
    /// A Z-pp cut exists: some behavior of `C1` blocks delivery.
    Block,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptedSearch {
    pub corrupted: NodeSet,
    pub summary: SearchSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub expectation: Expectation,
    pub zpp_cut: Option<CutWitness>,
    pub searches: Vec<CorruptedSearch>,
    pub passed: bool,
    pub failure: Option<String>,
}

impl InstanceCheck {
    pub fn any_unsafe(&self) -> bool {
        self.searches.iter().any(|s| s.summary.any_unsafe)
    }

    pub fn steps(&self) -> u64 {
        self.searches.iter().map(|s| s.summary.steps).sum()
    }
}

/// Maximal corruptible sets with the sender and receiver removed, as an
/// antichain.
pub fn maximal_corrupted_sets(inst: &Instance) -> Result<Vec<NodeSet>> {
    let endpoints: NodeSet = [inst.sender().clone(), inst.receiver().clone()].into();
    let family = inst
        .adversary()
        .maximal_sets()
        .iter()
        .map(|m| m.difference(&endpoints).cloned().collect::<NodeSet>());
    Ok(normalize(inst.graph().nodes().clone(), family)?
        .maximal_sets()
        .to_vec())
}

/// Checks one ad hoc instance. Budget overruns surface as
/// [`Error::BudgetExceeded`] so callers can count the instance as skipped.
pub fn verify_instance(
    inst: &Instance,
    x: MessageValue,
    search: &SearchConfig,
    size_limit: usize,
) -> Result<InstanceCheck> {
    if !inst.is_ad_hoc() {
        return Err(Error::NotAdHoc);
    }
    let zpp_cut = find_zpp_cut(inst, size_limit)?;
    let (expectation, targets) = match &zpp_cut {
        None => (Expectation::Deliver, maximal_corrupted_sets(inst)?),
        Some(w) => (Expectation::Block, vec![w.part1.clone()]),
    };
    let searches = targets
        .into_iter()
        .map(|corrupted| {
            let summary = exhaustive_search(inst, x, &corrupted, search)?;
            Ok(CorruptedSearch { corrupted, summary })
        })
        .collect::<Result<Vec<_>>>()?;

    let failure = match expectation {
        _ if searches.iter().any(|s| s.summary.any_unsafe) => {
            Some("an admissible behavior made the receiver decide a wrong value".to_owned())
        }
        Expectation::Deliver => searches.iter().find(|s| s.summary.any_undecided).map(|s| {
            format!(
                "no Z-pp cut, yet corrupting {} can block delivery",
                crate::topology::fmt_set(&s.corrupted)
            )
        }),
        Expectation::Block => (!searches.iter().any(|s| s.summary.any_undecided))
            .then(|| "Z-pp cut found, yet every behavior of C1 delivers".to_owned()),
    };
    Ok(InstanceCheck {
        expectation,
        zpp_cut,
        searches,
        passed: failure.is_none(),
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::named;

    #[test]
    fn named_instances_pass() {
        let config = SearchConfig::default();
        let expected = [
            ("path", Expectation::Block),
            ("two-path", Expectation::Block),
            ("three-path", Expectation::Deliver),
        ];
        for (name, want) in expected {
            let inst = named::by_name(name).unwrap();
            let check = verify_instance(&inst, MessageValue(0), &config, 12).unwrap();
            assert_eq!(check.expectation, want, "{name}");
            assert!(check.passed, "{name}: {:?}", check.failure);
        }
    }

    #[test]
    fn endpoints_are_never_corrupted() {
        let g = crate::topology::Graph::from_pairs(&[], &[("S", "a"), ("a", "R")]).unwrap();
        let z = normalize(
            g.nodes().clone(),
            [
                crate::topology::node_set(["S", "a"]),
                crate::topology::node_set(["R"]),
            ],
        )
        .unwrap();
        let inst = Instance::ad_hoc(g, z, "S", "R").unwrap();
        let sets = maximal_corrupted_sets(&inst).unwrap();
        assert_eq!(sets, vec![crate::topology::node_set(["a"])]);
    }
}
