// Exhaustive adversary search, with a witness schedule replayed through
// the executor.
//
//     cargo run --example exhaustive_search

use rmt_core::engine::{exhaustive_search, SearchConfig, SearchMode};
use rmt_core::instance::named;
use rmt_core::{node_set, run, MessageValue, RunConfig, Verdict};

pub fn run_example() -> rmt_core::Result<()> {
    let config = SearchConfig::default();

    let three = named::three_path();
    for relay in ["v1", "v2", "v3"] {
        let s = exhaustive_search(&three, MessageValue(0), &node_set([relay]), &config)?;
        println!(
            "three-path, {relay} corrupted: undecided={} unsafe={} ({} steps)",
            s.any_undecided, s.any_unsafe, s.steps
        );
        assert!(!s.any_undecided && !s.any_unsafe);
    }

    let two = named::two_path();
    let corrupted = node_set(["v1"]);
    let s = exhaustive_search(&two, MessageValue(0), &corrupted, &config)?;
    let naive = exhaustive_search(
        &two,
        MessageValue(0),
        &corrupted,
        &SearchConfig {
            mode: SearchMode::Naive,
            ..config.clone()
        },
    )?;
    println!(
        "two-path, v1 corrupted: {} steps reduced, {} runs naive",
        s.steps, naive.steps
    );
    assert_eq!(
        (s.any_undecided, s.any_unsafe),
        (naive.any_undecided, naive.any_unsafe)
    );

    let witness = s
        .witnesses
        .iter()
        .find(|w| w.verdict == Verdict::Undecided)
        .expect("two-path can be blocked");
    let replay = run(
        &two,
        MessageValue(0),
        &witness.behavior(&corrupted),
        RunConfig::default(),
    )?;
    println!("replayed blocking schedule: {:?}", replay.verdict);
    assert_eq!(replay.verdict, Verdict::Undecided);
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    run_example()
}
