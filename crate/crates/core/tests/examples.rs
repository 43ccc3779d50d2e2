#[allow(dead_code)]
mod algebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/algebra.rs"));
}

#[allow(dead_code)]
mod cuts {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cuts.rs"));
}

#[allow(dead_code)]
mod zcpa_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/zcpa_run.rs"));
}

#[allow(dead_code)]
mod exhaustive_search {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/exhaustive_search.rs"
    ));
}

#[allow(dead_code)]
mod instance_files {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/instance_files.rs"
    ));
}

#[allow(dead_code)]
mod verify_sweep {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/verify_sweep.rs"
    ));
}

#[test]
fn algebra_example_runs() {
    algebra::run_example().expect("algebra example should run");
}

#[test]
fn cuts_example_runs() {
    cuts::run_example().expect("cuts example should run");
}

#[test]
fn zcpa_run_example_runs() {
    zcpa_run::run_example().expect("zcpa_run example should run");
}

#[test]
fn exhaustive_search_example_runs() {
    exhaustive_search::run_example().expect("exhaustive_search example should run");
}

#[test]
fn instance_files_example_runs() {
    instance_files::run_example().expect("instance_files example should run");
}

#[test]
fn verify_sweep_example_runs() {
    verify_sweep::run_example().expect("verify_sweep example should run");
}
