use crate::protocol::MessageValue;
use crate::topology::NodeId;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),

    #[error("self-loop on node `{0}`")]
    SelfLoop(NodeId),

    #[error("edge {{{0}, {1}}} is not an edge of the graph")]
    UnknownEdge(NodeId, NodeId),

    #[error("view of `{node}` is invalid: {reason}")]
    InvalidView { node: NodeId, reason: String },

    #[error("set contains node `{0}` outside the ground set")]
    OutsideGround(NodeId),

    #[error("{0} of an empty node set is undefined")]
    EmptySet(&'static str),

    #[error("sender and receiver must differ (both are `{0}`)")]
    SameEndpoints(NodeId),

    #[error("adversary ground set must equal the node set of the graph")]
    GroundMismatch,

    #[error("instance is not an ad hoc instance; the Z-pp cut condition only applies to the ad hoc model")]
    NotAdHoc,

    #[error("malformed cut witness: {0}")]
    MalformedWitness(String),

    #[error("instance has {nodes} nodes, above the exhaustive-search limit of {limit}; raise it with --size-limit")]
    SizeLimit { nodes: usize, limit: usize },

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("node `{node}` gained non-member support for two values {first} and {second} in one delivery batch")]
    Contradiction {
        node: NodeId,
        first: MessageValue,
        second: MessageValue,
    },

    #[error("corrupted set {0} is not a member of the adversary structure; pass --allow-inadmissible to run it anyway")]
    Inadmissible(String),

    #[error("corrupted set contains the sender or receiver; pass --allow-inadmissible for non-standard runs")]
    NonStandard,

    #[error("search budget of {budget} steps exceeded; restrict to static strategies or lower the horizon")]
    BudgetExceeded { budget: u64 },

    #[error("unsatisfiable generator parameters: {0}")]
    Generator(String),

    #[error("unknown strategy `{0}`; expected silent, constant_lie:<v>, equivocate:<node>=<v>,..., delayed_lie:<round>:<v>")]
    UnknownStrategy(String),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
