// Single Z-CPA executions with a printed trace.
//
//     cargo run --example zcpa_run

use rmt_core::engine::StrategyKind;
use rmt_core::instance::named;
use rmt_core::{node_set, run, AdversaryBehavior, MessageValue, RunConfig, Verdict};

pub fn run_example() -> rmt_core::Result<()> {
    let three = named::three_path();
    let liar = AdversaryBehavior::new(node_set(["v1"]), StrategyKind::ConstantLie(MessageValue(1)));
    let out = run(&three, MessageValue(0), &liar, RunConfig::default())?;
    for e in &out.trace {
        println!(
            "round {}: {} -> {} : {}",
            e.round, e.message.from, e.message.to, e.message.value
        );
    }
    println!(
        "three-path, v1 lies: {:?} at round {:?}",
        out.verdict, out.receiver_decided_at
    );
    assert_eq!(out.verdict, Verdict::Delivered(MessageValue(0)));

    // Two disjoint relays, either of which may lie: R never gets enough
    // support and stays silent rather than guess.
    let out = run(
        &named::two_path(),
        MessageValue(0),
        &liar,
        RunConfig::default(),
    )?;
    println!("two-path, v1 lies: {:?}", out.verdict);
    assert_eq!(out.verdict, Verdict::Undecided);
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    run_example()
}
