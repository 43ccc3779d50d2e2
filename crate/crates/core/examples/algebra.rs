// Restriction, the joint operation and the order on adversary structures.
//
//     cargo run --example algebra

use rmt_core::{node_set, AdversaryStructure};

pub fn run_example() -> rmt_core::Result<()> {
    // e knows {a, b} and fears a; f knows {b, c} and fears c.
    let e = AdversaryStructure::new(node_set(["a", "b"]), [node_set(["a"])])?;
    let f = AdversaryStructure::new(node_set(["b", "c"]), [node_set(["c"])])?;
    let joined = e.join(&f);
    println!("{e} ⊕ {f} = {joined}");
    assert_eq!(joined.maximal_sets(), [node_set(["a", "c"])]);
    assert!(joined.geq(&e) && joined.geq(&f));
    assert!(!e.geq(&f));

    // Restricting and re-joining never loses a member.
    let z = AdversaryStructure::new(
        node_set(["a", "b", "c", "d"]),
        [node_set(["a", "b"]), node_set(["c", "d"])],
    )?;
    let (a, b) = (node_set(["a", "c"]), node_set(["b", "d"]));
    let glued = z.restrict(&a).join(&z.restrict(&b));
    println!("Z = {z}\nZ^A ⊕ Z^B = {glued}");
    for m in z.members() {
        assert!(glued.member(&m));
    }
    // The glued structure also admits {a, d}, which Z does not.
    assert!(glued.member(&node_set(["a", "d"])) && !z.member(&node_set(["a", "d"])));
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    run_example()
}
