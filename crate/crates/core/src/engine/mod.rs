//! Synchronous execution of Z-CPA against Byzantine behaviors.
//!
//! Round 0 is the sender's initial fan-out. In round `r ≥ 1` every message
//! sent by honest players in round `r − 1`, together with whatever the
//! adversary emits for round `r`, is delivered at once; honest players
//! process their deliveries in node order and queue their relays for round
//! `r + 1`. Trace entries carry the round in which a message is delivered.
//!
//! Corrupted players never run the state machine: their traffic is whatever
//! their [`Strategy`] emits.

mod generate;
mod search;
mod strategy;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocol::{
    iter_bits, Envelope, MessageValue, Network, PlayerState, ProtocolMessage, Role,
};
use crate::topology::{fmt_set, NodeId, NodeSet};

pub use generate::{generate_instances, AdversaryFamily, GeneratorSpec, ViewMode};
pub use search::{
    exhaustive_search, SearchConfig, SearchMode, SearchSummary, StrategySpace, Witness,
    DEFAULT_BUDGET,
};
pub use strategy::{strategy_library, Schedule, StrategyKind};
pub use verify::{maximal_corrupted_sets, verify_instance, Expectation, InstanceCheck};

/// Outcome of a run, judged at the receiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Verdict {
    Delivered(MessageValue),
    Undecided,
    Unsafe(MessageValue),
}

impl Verdict {
    pub fn is_unsafe(&self) -> bool {
        matches!(self, Verdict::Unsafe(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub round: usize,
    #[serde(flatten)]
    pub message: ProtocolMessage,
}

/// What a strategy may look at when choosing its next messages.
pub struct RoundContext<'a> {
    pub round: usize,
    pub horizon: usize,
    pub network: &'a Network,
    pub corrupted: &'a NodeSet,
    /// Every message delivered before this round.
    pub history: &'a [TraceEntry],
}

/// Byzantine behavior of the corrupted players.
pub trait Strategy: Send + Sync {
    /// Messages from corrupted players to be delivered in `ctx.round`.
    fn emit(&self, ctx: &RoundContext<'_>) -> Vec<ProtocolMessage>;

    /// Whether the strategy may still emit something after `round`, even if
    /// it emitted nothing so far. Runs stop early only when this is false.
    fn active_after(&self, _round: usize, _horizon: usize) -> bool {
        false
    }
}

/// A corrupted set together with the strategy driving it.
pub struct AdversaryBehavior {
    pub corrupted: NodeSet,
    pub strategy: Box<dyn Strategy>,
}

impl AdversaryBehavior {
    pub fn new(corrupted: NodeSet, strategy: impl Strategy + 'static) -> Self {
        AdversaryBehavior {
            corrupted,
            strategy: Box::new(strategy),
        }
    }

    /// No corruption at all.
    pub fn honest() -> Self {
        AdversaryBehavior::new(NodeSet::new(), StrategyKind::Silent)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    /// Round cap; `None` means `|V|`.
    pub horizon: Option<usize>,
    /// Permit corrupted sets outside the structure and corrupted endpoints.
    pub allow_inadmissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionOutcome {
    pub verdict: Verdict,
    pub rounds_used: usize,
    pub receiver_decided_at: Option<usize>,
    pub admissible: bool,
    /// Sender and receiver both honest.
    pub standard: bool,
    pub honest_decisions: BTreeMap<NodeId, Option<MessageValue>>,
    pub trace: Vec<TraceEntry>,
}

/// Admissibility and endpoint checks shared by runs and searches.
/// Returns `(admissible, standard)`.
pub(crate) fn classify_corruption(
    inst: &Instance,
    corrupted: &NodeSet,
    allow_inadmissible: bool,
) -> Result<(bool, bool)> {
    if let Some(v) = corrupted.iter().find(|v| !inst.graph().contains(v)) {
        return Err(Error::UnknownNode(v.clone()));
    }
    let admissible = inst.adversary().member(corrupted);
    let standard = !corrupted.contains(inst.sender()) && !corrupted.contains(inst.receiver());
    if !allow_inadmissible {
        if !admissible {
            return Err(Error::Inadmissible(fmt_set(corrupted)));
        }
        if !standard {
            return Err(Error::NonStandard);
        }
    }
    Ok((admissible, standard))
}

/// Honest player states, indexed by node; `None` for corrupted players.
pub(crate) type Players = Vec<Option<PlayerState>>;

/// Initial states plus the sender's round-0 messages.
pub(crate) fn initial_players(
    net: &Network,
    corrupted: u64,
    x: MessageValue,
) -> (Players, Vec<Envelope>) {
    let mut players: Players = (0..net.len())
        .map(|i| (corrupted >> i & 1 == 0).then(|| PlayerState::new(net, i)))
        .collect();
    let mut pending = Vec::new();
    let s = net.sender();
    if let Some(state) = players[s].as_mut() {
        state.decision = Some(x);
        state.halted = true;
        pending.extend(net.fan_out(s, x));
    }
    (players, pending)
}

/// Delivers one round's batch (sorted by recipient). Returns the honest
/// relays' messages for the next round.
pub(crate) fn deliver_round(
    net: &Network,
    players: &mut Players,
    batch: &[Envelope],
) -> Result<Vec<Envelope>> {
    let mut next = Vec::new();
    for group in batch.chunk_by(|a, b| a.to == b.to) {
        let Some(state) = players[group[0].to].as_mut() else {
            continue;
        };
        if state.halted {
            continue;
        }
        if let Some(v) = state.deliver(net, group)? {
            if state.role == Role::Relay {
                next.extend(net.fan_out(state.id, v));
            }
        }
    }
    Ok(next)
}

pub(crate) fn receiver_verdict(net: &Network, players: &Players, x: MessageValue) -> Verdict {
    match players[net.receiver()].as_ref().and_then(|p| p.decision) {
        Some(v) if v == x => Verdict::Delivered(v),
        Some(v) => Verdict::Unsafe(v),
        None => Verdict::Undecided,
    }
}

/// Runs Z-CPA on `inst` with sender value `x` against `behavior`.
pub fn run(
    inst: &Instance,
    x: MessageValue,
    behavior: &AdversaryBehavior,
    config: RunConfig,
) -> Result<ExecutionOutcome> {
    let (admissible, standard) =
        classify_corruption(inst, &behavior.corrupted, config.allow_inadmissible)?;
    let net = Network::new(inst)?;
    let corrupted = net.mask_of(&behavior.corrupted)?;
    let horizon = config.horizon.unwrap_or(net.len());

    let (mut players, mut pending) = initial_players(&net, corrupted, x);
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut rounds_used = 0;
    let mut receiver_decided_at = None;

    for round in 1..=horizon {
        let emitted = {
            let ctx = RoundContext {
                round,
                horizon,
                network: &net,
                corrupted: &behavior.corrupted,
                history: &trace,
            };
            if corrupted == 0 {
                Vec::new()
            } else {
                behavior.strategy.emit(&ctx)
            }
        };
        if pending.is_empty()
            && emitted.is_empty()
            && !behavior.strategy.active_after(round, horizon)
        {
            break;
        }
        let mut batch = pending;
        for msg in &emitted {
            let env = net.envelope(msg)?;
            if corrupted >> env.from & 1 == 0 {
                return Err(Error::ProtocolViolation(format!(
                    "strategy sent a message from honest player {}",
                    msg.from
                )));
            }
            batch.push(env);
        }
        batch.sort_unstable();
        trace.extend(batch.iter().map(|e| TraceEntry {
            round,
            message: net.message(e),
        }));
        rounds_used = round;
        pending = deliver_round(&net, &mut players, &batch)?;
        if receiver_decided_at.is_none()
            && players[net.receiver()]
                .as_ref()
                .is_some_and(|p| p.decision.is_some())
        {
            receiver_decided_at = Some(round);
        }
    }

    let honest_decisions = iter_bits(!corrupted & mask_below(net.len()))
        .map(|i| {
            (
                net.name(i).clone(),
                players[i].as_ref().and_then(|p| p.decision),
            )
        })
        .collect();
    Ok(ExecutionOutcome {
        verdict: receiver_verdict(&net, &players, x),
        rounds_used,
        receiver_decided_at,
        admissible,
        standard,
        honest_decisions,
        trace,
    })
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
