//! Exhaustive search over Byzantine behaviors of a fixed corrupted set.
//!
//! The adaptive space lets every corrupted player send, in every round up to
//! the horizon, one alphabet value or nothing on each of its edges. Two
//! algorithms cover it:
//!
//! - [`SearchMode::Reduced`] explores it round by round as a set of reachable
//!   configurations (honest states plus in-flight honest messages). A verdict
//!   depends only on the configuration, so identical configurations are merged,
//!   and messages that cannot change any honest state (to corrupted or halted
//!   players, or repeating a value already recorded) are folded into "send
//!   nothing".
//! - [`SearchMode::Naive`] runs every schedule through [`run`] one by one.
//!
//! The static space fixes one choice per edge for all rounds.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{
    classify_corruption, deliver_round, initial_players, receiver_verdict, run, AdversaryBehavior,
    Players, RunConfig, Schedule, StrategyKind, Verdict,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocol::{iter_bits, Envelope, MessageValue, Network, ProtocolMessage};
use crate::topology::NodeSet;

/// Default step budget (configuration expansions or simulated runs).
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategySpace {
    #[default]
    Adaptive,
    Static,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    #[default]
    Reduced,
    Naive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub alphabet: Vec<MessageValue>,
    /// `None` means `|V|`.
    pub horizon: Option<usize>,
    pub budget: u64,
    pub space: StrategySpace,
    pub mode: SearchMode,
    pub allow_inadmissible: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            alphabet: vec![MessageValue(0), MessageValue(1)],
            horizon: None,
            budget: DEFAULT_BUDGET,
            space: StrategySpace::Adaptive,
            mode: SearchMode::Reduced,
            allow_inadmissible: false,
        }
    }
}

/// A behavior that produced a given verdict; replay it with
/// [`StrategyKind::Scripted`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub verdict: Verdict,
    pub schedule: Schedule,
}

impl Witness {
    pub fn behavior(&self, corrupted: &NodeSet) -> AdversaryBehavior {
        AdversaryBehavior::new(
            corrupted.clone(),
            StrategyKind::Scripted(self.schedule.clone()),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub any_unsafe: bool,
    pub any_undecided: bool,
    pub any_delivered: bool,
    pub horizon: usize,
    /// Configurations expanded (reduced) or runs executed (naive, static).
    pub steps: u64,
    /// Branches cut short by a contradictory certification. Only possible,
    /// and only tolerated, for inadmissible corrupted sets.
    pub faults: u64,
    /// First witness found for each bad verdict, undecided before unsafe.
    pub witnesses: Vec<Witness>,
}

#[derive(Default)]
struct Tally {
    faults: u64,
    any_unsafe: bool,
    any_undecided: bool,
    any_delivered: bool,
    undecided: Option<Schedule>,
    unsafe_: Option<(Verdict, Schedule)>,
}

impl Tally {
    fn record(&mut self, verdict: Verdict, schedule: impl FnOnce() -> Schedule) {
        match verdict {
            Verdict::Delivered(_) => self.any_delivered = true,
            Verdict::Undecided => {
                self.any_undecided = true;
                if self.undecided.is_none() {
                    self.undecided = Some(schedule());
                }
            }
            Verdict::Unsafe(_) => {
                self.any_unsafe = true;
                if self.unsafe_.is_none() {
                    self.unsafe_ = Some((verdict, schedule()));
                }
            }
        }
    }

    fn finish(self, horizon: usize, steps: u64) -> SearchSummary {
        let mut witnesses = Vec::new();
        if let Some(schedule) = self.undecided {
            witnesses.push(Witness {
                verdict: Verdict::Undecided,
                schedule,
            });
        }
        if let Some((verdict, schedule)) = self.unsafe_ {
            witnesses.push(Witness { verdict, schedule });
        }
        SearchSummary {
            any_unsafe: self.any_unsafe,
            any_undecided: self.any_undecided,
            any_delivered: self.any_delivered,
            horizon,
            steps,
            faults: self.faults,
            witnesses,
        }
    }
}

/// Runs Z-CPA with sender value `x` against every behavior of `corrupted`
/// in the configured space and aggregates the verdicts.
pub fn exhaustive_search(
    inst: &Instance,
    x: MessageValue,
    corrupted: &NodeSet,
    config: &SearchConfig,
) -> Result<SearchSummary> {
    classify_corruption(inst, corrupted, config.allow_inadmissible)?;
    let net = Network::new(inst)?;
    let horizon = config.horizon.unwrap_or(net.len());
    let mut alphabet = config.alphabet.clone();
    alphabet.sort_unstable();
    alphabet.dedup();
    match (config.space, config.mode) {
        (StrategySpace::Adaptive, SearchMode::Reduced) => {
            reduced(&net, x, net.mask_of(corrupted)?, &alphabet, horizon, config)
        }
        (StrategySpace::Adaptive, SearchMode::Naive) => {
            let edges = corrupted_edges(&net, net.mask_of(corrupted)?);
            let slots = edges.len() * horizon;
            enumerate_runs(
                inst,
                x,
                corrupted,
                config,
                horizon,
                &alphabet,
                slots,
                |choice| {
                    (0..horizon)
                        .map(|r| {
                            messages(
                                &net,
                                &edges,
                                &choice[r * edges.len()..(r + 1) * edges.len()],
                                &alphabet,
                            )
                        })
                        .collect()
                },
            )
        }
        (StrategySpace::Static, _) => {
            let edges = corrupted_edges(&net, net.mask_of(corrupted)?);
            enumerate_runs(
                inst,
                x,
                corrupted,
                config,
                horizon,
                &alphabet,
                edges.len(),
                |choice| {
                    let round = messages(&net, &edges, choice, &alphabet);
                    vec![round; horizon]
                },
            )
        }
    }
}

/// Every directed edge out of a corrupted player, sorted.
fn corrupted_edges(net: &Network, corrupted: u64) -> Vec<(usize, usize)> {
    iter_bits(corrupted)
        .flat_map(|a| iter_bits(net.neighbors(a)).map(move |u| (a, u)))
        .collect()
}

/// Choice `0` is "nothing", choice `k` is `alphabet[k - 1]`.
fn messages(
    net: &Network,
    edges: &[(usize, usize)],
    choice: &[usize],
    alphabet: &[MessageValue],
) -> Vec<ProtocolMessage> {
    edges
        .iter()
        .zip(choice)
        .filter(|(_, &c)| c > 0)
        .map(|(&(from, to), &c)| {
            net.message(&Envelope {
                to,
                from,
                value: alphabet[c - 1],
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn enumerate_runs(
    inst: &Instance,
    x: MessageValue,
    corrupted: &NodeSet,
    config: &SearchConfig,
    horizon: usize,
    alphabet: &[MessageValue],
    slots: usize,
    schedule_of: impl Fn(&[usize]) -> Schedule,
) -> Result<SearchSummary> {
    let radix = alphabet.len() + 1;
    let total = u32::try_from(slots)
        .ok()
        .and_then(|s| (radix as u64).checked_pow(s))
        .filter(|&t| t <= config.budget)
        .ok_or(Error::BudgetExceeded {
            budget: config.budget,
        })?;
    let run_config = RunConfig {
        horizon: Some(horizon),
        allow_inadmissible: config.allow_inadmissible,
    };
    let mut tally = Tally::default();
    let mut choice = vec![0usize; slots];
    for _ in 0..total {
        let schedule = schedule_of(&choice);
        let behavior =
            AdversaryBehavior::new(corrupted.clone(), StrategyKind::Scripted(schedule.clone()));
        match run(inst, x, &behavior, run_config) {
            Ok(outcome) => tally.record(outcome.verdict, || schedule),
            Err(Error::Contradiction { .. }) if config.allow_inadmissible => tally.faults += 1,
            Err(e) => return Err(e),
        }
        // Mixed-radix increment.
        for c in choice.iter_mut() {
            *c += 1;
            if *c < radix {
                break;
            }
            *c = 0;
        }
    }
    Ok(tally.finish(horizon, total))
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    players: Players,
    pending: Vec<Envelope>,
}

fn reduced(
    net: &Network,
    x: MessageValue,
    corrupted: u64,
    alphabet: &[MessageValue],
    horizon: usize,
    config: &SearchConfig,
) -> Result<SearchSummary> {
    let budget = config.budget;
    let (players, pending) = initial_players(net, corrupted, x);
    let edges = corrupted_edges(net, corrupted);
    let mut tally = Tally::default();
    let mut steps = 0u64;
    // Each configuration carries the adversary path that first reached it.
    let mut frontier: Vec<(Config, Vec<Vec<Envelope>>)> =
        vec![(Config { players, pending }, Vec::new())];

    for _round in 1..=horizon {
        let mut next = Vec::new();
        let mut seen: HashSet<Config> = HashSet::new();
        for (state, path) in &frontier {
            // Per edge: the values that would change the recipient's support.
            let options: Vec<(usize, usize, Vec<MessageValue>)> = edges
                .iter()
                .filter_map(|&(a, u)| {
                    let player = state.players[u].as_ref()?;
                    if player.halted {
                        return None;
                    }
                    let fresh: Vec<MessageValue> = alphabet
                        .iter()
                        .copied()
                        .filter(|&v| player.support_mask(v) >> a & 1 == 0)
                        .collect();
                    (!fresh.is_empty()).then_some((a, u, fresh))
                })
                .collect();
            let mut choice = vec![0usize; options.len()];
            loop {
                steps += 1;
                if steps > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                let emitted: Vec<Envelope> = options
                    .iter()
                    .zip(&choice)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&(from, to, ref fresh), &c)| Envelope {
                        to,
                        from,
                        value: fresh[c - 1],
                    })
                    .collect();
                let mut batch = state.pending.clone();
                batch.extend(emitted.iter().copied());
                batch.sort_unstable();
                let mut players = state.players.clone();
                let pending = match deliver_round(net, &mut players, &batch) {
                    Ok(p) => p,
                    Err(Error::Contradiction { .. }) if config.allow_inadmissible => {
                        tally.faults += 1;
                        if !advance(&mut choice, &options) {
                            break;
                        }
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let verdict = receiver_verdict(net, &players, x);
                let extend = || {
                    let mut p = path.clone();
                    p.push(emitted.clone());
                    p
                };
                if verdict != Verdict::Undecided {
                    tally.record(verdict, || to_schedule(net, &extend()));
                } else {
                    let succ = Config { players, pending };
                    if !seen.contains(&succ) {
                        seen.insert(succ.clone());
                        next.push((succ, extend()));
                    }
                }
                if !advance(&mut choice, &options) {
                    break;
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    for (_, path) in &frontier {
        tally.record(Verdict::Undecided, || to_schedule(net, path));
    }
    Ok(tally.finish(horizon, steps))
}

fn advance(choice: &mut [usize], options: &[(usize, usize, Vec<MessageValue>)]) -> bool {
    for (c, (_, _, fresh)) in choice.iter_mut().zip(options) {
        *c += 1;
        if *c <= fresh.len() {
            return true;
        }
        *c = 0;
    }
    false
}

fn to_schedule(net: &Network, path: &[Vec<Envelope>]) -> Schedule {
    path.iter()
        .map(|round| round.iter().map(|e| net.message(e)).collect())
        .collect()
}
