// Z-pp cuts and RMT-cuts on the named instances.
//
//     cargo run --example cuts

use rmt_core::instance::named;
use rmt_core::topology::fmt_set;
use rmt_core::{find_rmt_cut, find_zpp_cut, ViewFunction, DEFAULT_SIZE_LIMIT};

pub fn run_example() -> rmt_core::Result<()> {
    for (name, inst) in named::all() {
        let zpp = find_zpp_cut(&inst, DEFAULT_SIZE_LIMIT)?;
        match &zpp {
            Some(w) => println!(
                "{name}: C = {}, C1 = {}, C2 = {}, B = {}",
                fmt_set(&w.cut),
                fmt_set(&w.part1),
                fmt_set(&w.part2),
                fmt_set(&w.side_b)
            ),
            None => println!("{name}: no Z-pp cut"),
        }
        // Here the two notions agree.
        assert_eq!(
            zpp.is_some(),
            find_rmt_cut(&inst, DEFAULT_SIZE_LIMIT)?.is_some()
        );
    }

    // Full knowledge does not help on two-path: R still cannot tell which
    // relay is lying.
    let two = named::two_path();
    let informed = two.with_views(ViewFunction::full(two.graph()))?;
    assert!(find_rmt_cut(&informed, DEFAULT_SIZE_LIMIT)?.is_some());
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    run_example()
}
