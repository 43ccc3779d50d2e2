use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{RoundContext, Strategy};
use crate::error::{Error, Result};
use crate::protocol::{iter_bits, MessageValue, ProtocolMessage};
use crate::topology::NodeId;

/// Per-round adversary messages; entry `i` is delivered in round `i + 1`.
pub type Schedule = Vec<Vec<ProtocolMessage>>;

/// The built-in strategy library. Every variant acts on behalf of all
/// corrupted players at once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", content = "params", rename_all = "snake_case")]
pub enum StrategyKind {
    /// Corrupted players send nothing.
    Silent,
    /// Every round, each corrupted player sends the value to all neighbors.
    ConstantLie(MessageValue),
    /// Every round, each corrupted player sends `map[u]` to each neighbor
    /// `u` listed in the map.
    Equivocate(BTreeMap<NodeId, MessageValue>),
    /// Like [`StrategyKind::ConstantLie`], from round `start` on.
    DelayedLie { start: usize, value: MessageValue },
    /// Replays a fixed schedule.
    Scripted(Schedule),
}

impl StrategyKind {
    fn broadcast(
        ctx: &RoundContext<'_>,
        pick: impl Fn(&NodeId) -> Option<MessageValue>,
    ) -> Vec<ProtocolMessage> {
        let net = ctx.network;
        let mut out = Vec::new();
        for a in ctx.corrupted {
            let Ok(i) = net.index_of(a) else { continue };
            for u in iter_bits(net.neighbors(i)) {
                let to = net.name(u);
                if let Some(value) = pick(to) {
                    out.push(ProtocolMessage {
                        from: a.clone(),
                        to: to.clone(),
                        value,
                    });
                }
            }
        }
        out
    }
}

impl Strategy for StrategyKind {
    fn emit(&self, ctx: &RoundContext<'_>) -> Vec<ProtocolMessage> {
        match self {
            StrategyKind::Silent => Vec::new(),
            StrategyKind::ConstantLie(v) => Self::broadcast(ctx, |_| Some(*v)),
            StrategyKind::Equivocate(map) => Self::broadcast(ctx, |to| map.get(to).copied()),
            StrategyKind::DelayedLie { start, value } => {
                if ctx.round >= *start {
                    Self::broadcast(ctx, |_| Some(*value))
                } else {
                    Vec::new()
                }
            }
            StrategyKind::Scripted(schedule) => ctx
                .round
                .checked_sub(1)
                .and_then(|i| schedule.get(i))
                .cloned()
                .unwrap_or_default(),
        }
    }

    fn active_after(&self, round: usize, horizon: usize) -> bool {
        match self {
            StrategyKind::DelayedLie { start, .. } => round < *start && *start <= horizon,
            StrategyKind::Scripted(schedule) => schedule
                .iter()
                .enumerate()
                .any(|(i, msgs)| i + 1 > round && !msgs.is_empty()),
            _ => false,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Silent => write!(f, "silent"),
            StrategyKind::ConstantLie(v) => write!(f, "constant_lie:{v}"),
            StrategyKind::Equivocate(map) => {
                let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "equivocate:{}", parts.join(","))
            }
            StrategyKind::DelayedLie { start, value } => write!(f, "delayed_lie:{start}:{value}"),
            StrategyKind::Scripted(s) => write!(f, "scripted({} rounds)", s.len()),
        }
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    /// `silent`, `constant_lie:<v>`, `equivocate:<node>=<v>,...`,
    /// `delayed_lie:<start>:<v>`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownStrategy(s.to_owned());
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        match name {
            "silent" if params.is_empty() => Ok(StrategyKind::Silent),
            "constant_lie" => Ok(StrategyKind::ConstantLie(params.parse()?)),
            "equivocate" => {
                let map = params
                    .split(',')
                    .filter(|p| !p.is_empty())
                    .map(|pair| {
                        let (node, v) = pair.split_once('=').ok_or_else(unknown)?;
                        Ok((NodeId::from(node.trim()), v.parse()?))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(StrategyKind::Equivocate(map))
            }
            "delayed_lie" => {
                let (start, v) = params.split_once(':').ok_or_else(unknown)?;
                let start = start.trim().parse().map_err(|_| unknown())?;
                Ok(StrategyKind::DelayedLie {
                    start,
                    value: v.parse()?,
                })
            }
            _ => Err(unknown()),
        }
    }
}

/// A spread of named behaviors over `alphabet`: silence, a constant lie and
/// a delayed lie per value, and an equivocation splitting the sender's side
/// from the receiver's.
pub fn strategy_library(
    alphabet: &[MessageValue],
    sender: &NodeId,
    receiver: &NodeId,
) -> Vec<(String, StrategyKind)> {
    let mut out = vec![("silent".to_owned(), StrategyKind::Silent)];
    for &v in alphabet {
        let lie = StrategyKind::ConstantLie(v);
        out.push((lie.to_string(), lie));
        let late = StrategyKind::DelayedLie { start: 2, value: v };
        out.push((late.to_string(), late));
    }
    if let [a, b, ..] = alphabet {
        let eq = StrategyKind::Equivocate(
            [(receiver.clone(), *b), (sender.clone(), *a)]
                .into_iter()
                .collect(),
        );
        out.push((eq.to_string(), eq));
    }
    out
}
