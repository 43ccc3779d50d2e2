//! The Z-CPA player state machine.
//!
//! The sender hands its value to every neighbor and stops. A neighbor of the
//! sender decides on whatever the sender gave it. Any other player decides on
//! `x` once the set of neighbors that sent it `x` is not a member of its local
//! adversary structure. A relay then forwards its decision to all neighbors
//! exactly once; the receiver just outputs it. Either way the player halts.
//!
//! Rules run against a [`Network`], an index-based compilation of an
//! [`Instance`] in which node sets are `u64` bitmasks over the sorted node
//! order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adversary::local_structure;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::topology::{NodeId, NodeSet};

/// Largest network the bitmask representation supports.
pub const MAX_NETWORK_NODES: usize = 64;

/// An opaque, ordered message token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MessageValue(pub u32);

impl fmt::Display for MessageValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for MessageValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map(MessageValue)
            .map_err(|_| Error::Parse(format!("invalid message value `{s}`")))
    }
}

/// A value travelling over the channel `from → to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProtocolMessage {
    pub from: NodeId,
    pub to: NodeId,
    pub value: MessageValue,
}

impl ProtocolMessage {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>, value: MessageValue) -> Self {
        ProtocolMessage {
            from: from.into(),
            to: to.into(),
            value,
        }
    }
}

/// Index-based form of a message used inside the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Envelope {
    pub to: usize,
    pub from: usize,
    pub value: MessageValue,
}

#[derive(Clone, Debug)]
struct LocalKnowledge {
    view: u64,
    // Maximal sets of Z_v as masks.
    maximal: Vec<u64>,
}

/// An [`Instance`] compiled to bitmasks for fast rule evaluation.
#[derive(Clone, Debug)]
pub struct Network {
    names: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    adjacency: Vec<u64>,
    sender: usize,
    receiver: usize,
    local: Vec<LocalKnowledge>,
    corruptible: Vec<u64>,
}

impl Network {
    pub fn new(inst: &Instance) -> Result<Self> {
        let g = inst.graph();
        if g.len() > MAX_NETWORK_NODES {
            return Err(Error::SizeLimit {
                nodes: g.len(),
                limit: MAX_NETWORK_NODES,
            });
        }
        let names: Vec<NodeId> = g.nodes().iter().cloned().collect();
        let index: BTreeMap<NodeId, usize> = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let to_mask = |set: &NodeSet| set.iter().fold(0u64, |m, v| m | 1 << index[v]);
        let adjacency = names
            .iter()
            .map(|v| Ok(to_mask(g.neighbors(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let local = names
            .iter()
            .map(|v| {
                let z_v = local_structure(inst.adversary(), inst.gamma(), v)?;
                Ok(LocalKnowledge {
                    view: to_mask(z_v.ground()),
                    maximal: z_v.maximal_sets().iter().map(to_mask).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let corruptible = inst
            .adversary()
            .maximal_sets()
            .iter()
            .map(to_mask)
            .collect();
        Ok(Network {
            sender: index[inst.sender()],
            receiver: index[inst.receiver()],
            names,
            index,
            adjacency,
            local,
            corruptible,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &NodeId {
        &self.names[i]
    }

    pub fn names(&self) -> &[NodeId] {
        &self.names
    }

    pub fn index_of(&self, v: &NodeId) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownNode(v.clone()))
    }

    pub fn sender(&self) -> usize {
        self.sender
    }

    pub fn receiver(&self) -> usize {
        self.receiver
    }

    /// Neighbor bitmask of node `i`.
    pub fn neighbors(&self, i: usize) -> u64 {
        self.adjacency[i]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    pub fn mask_of(&self, set: &NodeSet) -> Result<u64> {
        set.iter()
            .try_fold(0u64, |m, v| Ok(m | 1 << self.index_of(v)?))
    }

    pub fn set_of(&self, mask: u64) -> NodeSet {
        iter_bits(mask).map(|i| self.names[i].clone()).collect()
    }

    /// Membership in the global structure `𝒵`.
    pub fn corruptible(&self, mask: u64) -> bool {
        self.corruptible.iter().any(|m| mask & !m == 0)
    }

    /// Whether `v` must consider every sender in `mask` possibly corrupt,
    /// i.e. `mask ∩ V(γ(v)) ∈ Z_v`. Neighbors outside the view are not
    /// counted towards certification.
    pub fn locally_corruptible(&self, v: usize, mask: u64) -> bool {
        let known = &self.local[v];
        let visible = mask & known.view;
        known.maximal.iter().any(|m| visible & !m == 0)
    }

    pub(crate) fn envelope(&self, msg: &ProtocolMessage) -> Result<Envelope> {
        let env = Envelope {
            from: self.index_of(&msg.from)?,
            to: self.index_of(&msg.to)?,
            value: msg.value,
        };
        if !self.is_edge(env.from, env.to) {
            return Err(Error::ProtocolViolation(format!(
                "message {} → {} travels on a non-edge",
                msg.from, msg.to
            )));
        }
        Ok(env)
    }

    pub(crate) fn message(&self, env: &Envelope) -> ProtocolMessage {
        ProtocolMessage {
            from: self.names[env.from].clone(),
            to: self.names[env.to].clone(),
            value: env.value,
        }
    }

    /// One envelope from `from` to each of its neighbors, in index order.
    pub(crate) fn fan_out(
        &self,
        from: usize,
        value: MessageValue,
    ) -> impl Iterator<Item = Envelope> + '_ {
        iter_bits(self.adjacency[from]).map(move |to| Envelope { to, from, value })
    }
}

pub(crate) fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Sender,
    Receiver,
    Relay,
}

/// State of one honest player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlayerState {
    pub id: usize,
    pub role: Role,
    // (value, mask of neighbors that delivered it), sorted by value.
    support: Vec<(MessageValue, u64)>,
    pub decision: Option<MessageValue>,
    pub relayed: bool,
    pub halted: bool,
}

impl PlayerState {
    /// Fresh, undecided state for node `id`.
    pub fn new(net: &Network, id: usize) -> Self {
        let role = if id == net.sender {
            Role::Sender
        } else if id == net.receiver {
            Role::Receiver
        } else {
            Role::Relay
        };
        PlayerState {
            id,
            role,
            support: Vec::new(),
            decision: None,
            relayed: false,
            halted: false,
        }
    }

    /// Neighbors that delivered `value` so far.
    pub fn support(&self, net: &Network, value: MessageValue) -> NodeSet {
        net.set_of(self.support_mask(value))
    }

    pub fn support_mask(&self, value: MessageValue) -> u64 {
        self.support
            .iter()
            .find(|(v, _)| *v == value)
            .map_or(0, |(_, m)| *m)
    }

    fn record(&mut self, value: MessageValue, from: usize) {
        match self.support.binary_search_by(|(v, _)| v.cmp(&value)) {
            Ok(i) => self.support[i].1 |= 1 << from,
            Err(i) => self.support.insert(i, (value, 1 << from)),
        }
    }

    /// Applies a batch of deliveries and the decision rules. Returns the
    /// value decided during this batch, if any.
    pub(crate) fn deliver(
        &mut self,
        net: &Network,
        batch: &[Envelope],
    ) -> Result<Option<MessageValue>> {
        if self.halted {
            return Err(Error::ProtocolViolation(format!(
                "delivery to halted player {}",
                net.name(self.id)
            )));
        }
        let mut from_sender: Option<MessageValue> = None;
        for env in batch {
            if env.to != self.id {
                return Err(Error::ProtocolViolation(format!(
                    "message for {} delivered to {}",
                    net.name(env.to),
                    net.name(self.id)
                )));
            }
            if !net.is_edge(env.from, env.to) {
                return Err(Error::ProtocolViolation(format!(
                    "message {} → {} travels on a non-edge",
                    net.name(env.from),
                    net.name(env.to)
                )));
            }
            self.record(env.value, env.from);
            if env.from == net.sender {
                match from_sender {
                    Some(prev) if prev != env.value => {
                        return Err(self.contradiction(net, prev, env.value));
                    }
                    _ => from_sender = Some(env.value),
                }
            }
        }
        if self.decision.is_some() {
            return Ok(None);
        }
        let decided = if net.is_edge(self.id, net.sender) {
            from_sender
        } else {
            let mut enabled = self
                .support
                .iter()
                .filter(|(_, mask)| !net.locally_corruptible(self.id, *mask))
                .map(|(v, _)| *v);
            let first = enabled.next();
            if let (Some(a), Some(b)) = (first, enabled.next()) {
                return Err(self.contradiction(net, a, b));
            }
            first
        };
        if let Some(value) = decided {
            self.decision = Some(value);
            self.halted = true;
            self.relayed = self.role == Role::Relay;
        }
        Ok(decided)
    }

    fn contradiction(&self, net: &Network, first: MessageValue, second: MessageValue) -> Error {
        Error::Contradiction {
            node: net.name(self.id).clone(),
            first,
            second,
        }
    }
}

/// The sender's only step: `x` to every neighbor, then halt.
pub fn sender_initiate(net: &Network, x: MessageValue) -> (PlayerState, Vec<ProtocolMessage>) {
    let mut state = PlayerState::new(net, net.sender);
    state.decision = Some(x);
    state.halted = true;
    let msgs = net
        .fan_out(net.sender, x)
        .map(|e| net.message(&e))
        .collect();
    (state, msgs)
}

/// Delivers a single message; see [`receive_batch`].
pub fn player_receive(
    state: &PlayerState,
    net: &Network,
    msg: &ProtocolMessage,
) -> Result<(PlayerState, Vec<ProtocolMessage>)> {
    receive_batch(state, net, std::slice::from_ref(msg))
}

/// Delivers messages that arrive in the same round. Support is recorded for
/// the whole batch before the rules run, so two values becoming certified
/// together is reported as [`Error::Contradiction`]. A relay's first
/// decision yields its forwarding batch.
pub fn receive_batch(
    state: &PlayerState,
    net: &Network,
    msgs: &[ProtocolMessage],
) -> Result<(PlayerState, Vec<ProtocolMessage>)> {
    let batch = msgs
        .iter()
        .map(|m| net.envelope(m))
        .collect::<Result<Vec<_>>>()?;
    let mut next = state.clone();
    let decided = next.deliver(net, &batch)?;
    let out = match decided {
        Some(v) if next.role == Role::Relay => {
            net.fan_out(next.id, v).map(|e| net.message(&e)).collect()
        }
        _ => Vec::new(),
    };
    Ok((next, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::named;
    use crate::topology::node_set;

    const ZERO: MessageValue = MessageValue(0);
    const ONE: MessageValue = MessageValue(1);

    fn state_of(net: &Network, name: &str) -> PlayerState {
        PlayerState::new(net, net.index_of(&name.into()).unwrap())
    }

    #[test]
    fn sender_fans_out() {
        let net = Network::new(&named::three_path()).unwrap();
        let (s, msgs) = sender_initiate(&net, ZERO);
        assert!(s.halted);
        assert_eq!(msgs.len(), 3);
        let targets: NodeSet = msgs.iter().map(|m| m.to.clone()).collect();
        assert_eq!(targets, node_set(["v1", "v2", "v3"]));

        let net = Network::new(&named::path()).unwrap();
        assert_eq!(sender_initiate(&net, ONE).1.len(), 1);
    }

    #[test]
    fn rule_one_for_sender_neighbors() {
        let net = Network::new(&named::three_path()).unwrap();
        let v1 = state_of(&net, "v1");
        let (next, out) =
            player_receive(&v1, &net, &ProtocolMessage::new("S", "v1", ZERO)).unwrap();
        assert_eq!(next.decision, Some(ZERO));
        assert!(next.relayed && next.halted);
        assert_eq!(out.len(), 2);
        assert!(out
            .iter()
            .all(|m| m.value == ZERO && m.from.as_str() == "v1"));
    }

    #[test]
    fn sender_neighbors_ignore_rule_two() {
        // In the triangle S–a–R plus S–R, R is a neighbor of S and only
        // listens to S.
        let g =
            crate::topology::Graph::from_pairs(&[], &[("S", "a"), ("a", "R"), ("S", "R")]).unwrap();
        let z = crate::adversary::AdversaryStructure::empty(g.nodes().clone());
        let inst = Instance::ad_hoc(g, z, "S", "R").unwrap();
        let net = Network::new(&inst).unwrap();
        let r = state_of(&net, "R");
        let (r, out) = player_receive(&r, &net, &ProtocolMessage::new("a", "R", ONE)).unwrap();
        assert_eq!(r.decision, None);
        assert!(out.is_empty());
        let (r, out) = player_receive(&r, &net, &ProtocolMessage::new("S", "R", ZERO)).unwrap();
        assert_eq!(r.decision, Some(ZERO));
        assert!(r.halted && !r.relayed);
        assert!(out.is_empty());
    }

    #[test]
    fn rule_two_three_path() {
        let net = Network::new(&named::three_path()).unwrap();
        let r = state_of(&net, "R");
        let (r, _) = player_receive(&r, &net, &ProtocolMessage::new("v1", "R", ONE)).unwrap();
        assert_eq!(r.decision, None);
        let (r, _) = player_receive(&r, &net, &ProtocolMessage::new("v2", "R", ZERO)).unwrap();
        assert_eq!(r.decision, None);
        let (r, out) = player_receive(&r, &net, &ProtocolMessage::new("v3", "R", ZERO)).unwrap();
        assert_eq!(r.decision, Some(ZERO));
        assert_eq!(r.support(&net, ZERO), node_set(["v2", "v3"]));
        assert!(out.is_empty(), "the receiver outputs instead of relaying");
    }

    #[test]
    fn rule_two_two_path_stays_undecided() {
        let net = Network::new(&named::two_path()).unwrap();
        let r = state_of(&net, "R");
        let batch = [
            ProtocolMessage::new("v1", "R", ONE),
            ProtocolMessage::new("v2", "R", ZERO),
        ];
        let (r, _) = receive_batch(&r, &net, &batch).unwrap();
        assert_eq!(r.decision, None);
        assert!(!r.halted);
    }

    #[test]
    fn contradictory_batch_faults() {
        // Corruption outside the structure: both v1,v2 say 1 and v3 plus a
        // fourth relay say 0 at the same time.
        let g = crate::topology::Graph::from_pairs(
            &[],
            &[
                ("S", "v1"),
                ("S", "v2"),
                ("S", "v3"),
                ("S", "v4"),
                ("v1", "R"),
                ("v2", "R"),
                ("v3", "R"),
                ("v4", "R"),
            ],
        )
        .unwrap();
        let corrupt: Vec<NodeSet> = ["v1", "v2", "v3", "v4"]
            .iter()
            .map(|v| node_set([*v]))
            .collect();
        let z = crate::adversary::normalize(g.nodes().clone(), corrupt).unwrap();
        let inst = Instance::ad_hoc(g, z, "S", "R").unwrap();
        let net = Network::new(&inst).unwrap();
        let r = state_of(&net, "R");
        let batch = [
            ProtocolMessage::new("v1", "R", ONE),
            ProtocolMessage::new("v2", "R", ONE),
            ProtocolMessage::new("v3", "R", ZERO),
            ProtocolMessage::new("v4", "R", ZERO),
        ];
        assert!(matches!(
            receive_batch(&r, &net, &batch),
            Err(Error::Contradiction { .. })
        ));
    }

    #[test]
    fn protocol_violations() {
        let net = Network::new(&named::three_path()).unwrap();
        let r = state_of(&net, "R");
        assert!(matches!(
            player_receive(&r, &net, &ProtocolMessage::new("S", "R", ZERO)),
            Err(Error::ProtocolViolation(_))
        ));
        assert!(matches!(
            player_receive(&r, &net, &ProtocolMessage::new("v1", "v2", ZERO)),
            Err(Error::ProtocolViolation(_))
        ));
        let (done, _) = player_receive(
            &state_of(&net, "v1"),
            &net,
            &ProtocolMessage::new("S", "v1", ZERO),
        )
        .unwrap();
        assert!(matches!(
            player_receive(&done, &net, &ProtocolMessage::new("R", "v1", ZERO)),
            Err(Error::ProtocolViolation(_))
        ));
    }

    #[test]
    fn support_accumulates_across_deliveries() {
        let net = Network::new(&named::three_path()).unwrap();
        let mut r = state_of(&net, "R");
        for from in ["v1", "v1", "v2"] {
            r = player_receive(&r, &net, &ProtocolMessage::new(from, "R", ONE))
                .unwrap()
                .0;
        }
        assert_eq!(r.decision, Some(ONE));
        assert_eq!(r.support(&net, ONE), node_set(["v1", "v2"]));
    }
}
