// Generates seeded ad hoc instances and checks each one: without a Z-pp cut
// Z-CPA must deliver against every behavior, with one the cut's `C1` must be
// able to block it.
//
// Run with `cargo run --release --example verify_sweep -- [count] [seed]`.

use std::time::Instant;

use rmt_core::engine::{
    generate_instances, verify_instance, Expectation, GeneratorSpec, SearchConfig,
};
use rmt_core::{MessageValue, DEFAULT_SIZE_LIMIT};

pub fn run_example() -> rmt_core::Result<()> {
    sweep(40, 2017)
}

fn sweep(count: usize, seed: u64) -> rmt_core::Result<()> {
    let spec = GeneratorSpec {
        count,
        ..Default::default()
    };
    let search = SearchConfig::default();
    let started = Instant::now();
    let (mut deliver, mut block, mut failed, mut skipped) = (0, 0, 0, 0);
    for (i, inst) in generate_instances(&spec, seed)?.iter().enumerate() {
        match verify_instance(inst, MessageValue(0), &search, DEFAULT_SIZE_LIMIT) {
            Ok(check) => {
                match check.expectation {
                    Expectation::Deliver => deliver += 1,
                    Expectation::Block => block += 1,
                }
                if !check.passed {
                    failed += 1;
                    println!("instance {i}: {}", check.failure.unwrap_or_default());
                }
            }
            Err(rmt_core::Error::BudgetExceeded { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    println!(
        "{count} instances: {deliver} feasible, {block} with a Z-pp cut, {failed} failed, {skipped} skipped ({:.2?})",
        started.elapsed()
    );
    assert_eq!(failed, 0);
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let count = args.next().and_then(|a| a.parse().ok()).unwrap_or(40);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(2017);
    sweep(count, seed)
}
