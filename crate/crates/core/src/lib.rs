//! Reliable message transmission under a general Byzantine adversary with
//! partial topology knowledge.
//!
//! The crate provides:
//!
//! - [`topology`]: graphs, view functions, joint views and vertex cuts;
//! - [`adversary`]: monotone adversary structures, restriction and the joint
//!   operation `⊕` with its semilattice order;
//! - [`cuts`]: checkers and exhaustive search for Z-pp cuts and RMT-cuts;
//! - [`protocol`]: the Z-CPA player state machine;
//! - [`engine`]: a synchronous round executor, Byzantine strategies,
//!   exhaustive adversary search and seeded instance generators;
//! - [`cli`]: instance/structure file formats, reports and the `rmt` command.

pub mod adversary;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod instance;
pub mod protocol;
pub mod topology;

pub use adversary::{joint_structure, local_structure, normalize, AdversaryStructure};
pub use cuts::{check_rmt_cut, check_zpp_cut, find_rmt_cut, find_zpp_cut, DEFAULT_SIZE_LIMIT};
pub use error::{Error, Result};
pub use instance::Instance;
pub use protocol::{MessageValue, Network, PlayerState, ProtocolMessage};
pub mod engine;

pub use engine::{run, AdversaryBehavior, ExecutionOutcome, RunConfig, Verdict};
pub use topology::{
    ad_hoc_view, enumerate_cuts, node_set, CutWitness, Graph, NodeId, NodeSet, ViewFunction,
};
