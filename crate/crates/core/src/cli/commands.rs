use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::format::{
    digest, read_instance, read_structure, structure_to_canonical, to_canonical, InstanceFile,
};
use super::report::Report;
use super::{exit, Options};
use crate::cuts::{find_rmt_cut, find_zpp_cut};
use crate::engine::{
    generate_instances, run, verify_instance, AdversaryBehavior, Expectation, GeneratorSpec,
    RunConfig, SearchConfig, StrategyKind, StrategySpace, Verdict, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::instance::{named, Instance};
use crate::protocol::MessageValue;
use crate::topology::{NodeId, NodeSet};

/// A finished command: its report and process exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub status: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            status: exit::OK,
        }
    }
}

fn echo(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|s| (*s).to_owned()).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    /// Z-pp cut, ad hoc instances only.
    Zpp,
    /// RMT-cut, any view function.
    Rmt,
}

/// Looks for a cut of the requested kind.
pub fn cmd_check(path: &Path, model: Model, opts: &Options) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let (name, witness) = match model {
        Model::Zpp => ("zpp", find_zpp_cut(&inst, opts.size_limit)?),
        Model::Rmt => ("rmt", find_rmt_cut(&inst, opts.size_limit)?),
    };
    let results = json!({
        "model": name,
        "found": witness.is_some(),
        "witness": witness,
    });
    Ok(Outcome::ok(Report::new(
        echo(&["check", &path.display().to_string(), "--model", name]),
        Some(digest(&inst)),
        results,
    )))
}

/// One Z-CPA execution. The status encodes the verdict.
pub fn cmd_run(
    path: &Path,
    value: MessageValue,
    strategy: &StrategyKind,
    corrupted: &NodeSet,
    opts: &Options,
) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let behavior = AdversaryBehavior::new(corrupted.clone(), strategy.clone());
    let config = RunConfig {
        horizon: opts.horizon,
        allow_inadmissible: opts.allow_inadmissible,
    };
    let outcome = run(&inst, value, &behavior, config)?;
    let status = match outcome.verdict {
        Verdict::Delivered(_) => exit::OK,
        Verdict::Undecided => exit::UNDECIDED,
        Verdict::Unsafe(_) => exit::UNSAFE,
    };
    let corrupted_list: Vec<&str> = corrupted.iter().map(NodeId::as_str).collect();
    let results = json!({
        "value": value,
        "strategy": strategy.to_string(),
        "corrupted": corrupted_list,
        "outcome": outcome,
    });
    Ok(Outcome {
        report: Report::new(
            echo(&[
                "run",
                &path.display().to_string(),
                "--value",
                &value.to_string(),
                "--strategy",
                &strategy.to_string(),
                "--corrupted",
                &corrupted_list.join(","),
            ]),
            Some(digest(&inst)),
            results,
        ),
        status,
    })
}

/// Where a sweep gets its instances.
#[derive(Clone, Debug, PartialEq)]
pub enum Suite {
    /// The `path`, `two-path` and `three-path` instances.
    Named,
    /// Seeded generation; the seed comes from [`Options::seed`].
    Generated(GeneratorSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub value: MessageValue,
    pub budget: u64,
    pub space: StrategySpace,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub dump_dir: PathBuf,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            value: MessageValue(0),
            budget: DEFAULT_BUDGET,
            space: StrategySpace::Adaptive,
            jobs: 0,
            dump_dir: PathBuf::from("rmt-failures"),
        }
    }
}

#[derive(Serialize)]
struct SearchRow {
    corrupted: NodeSet,
    any_delivered: bool,
    any_undecided: bool,
    any_unsafe: bool,
    steps: u64,
}

#[derive(Serialize)]
struct VerifyRow {
    index: usize,
    name: String,
    digest: String,
    nodes: usize,
    status: &'static str,
    expectation: Option<Expectation>,
    zpp_cut: Option<crate::topology::CutWitness>,
    searches: Vec<SearchRow>,
    failure: Option<String>,
    skipped_reason: Option<String>,
    reproducer: Option<String>,
}

fn suite_instances(suite: &Suite, seed: u64) -> Result<Vec<(String, Instance)>> {
    Ok(match suite {
        Suite::Named => named::all()
            .into_iter()
            .map(|(n, i)| (n.to_owned(), i))
            .collect(),
        Suite::Generated(spec) => generate_instances(spec, seed)?
            .into_iter()
            .enumerate()
            .map(|(i, inst)| (format!("generated-{i}"), inst))
            .collect(),
    })
}

fn verify_one(
    index: usize,
    name: String,
    inst: &Instance,
    search: &SearchConfig,
    vopts: &VerifyOptions,
    opts: &Options,
) -> VerifyRow {
    let mut row = VerifyRow {
        index,
        name,
        digest: digest(inst),
        nodes: inst.graph().len(),
        status: "passed",
        expectation: None,
        zpp_cut: None,
        searches: Vec::new(),
        failure: None,
        skipped_reason: None,
        reproducer: None,
    };
    match verify_instance(inst, vopts.value, search, opts.size_limit) {
        Ok(check) => {
            row.expectation = Some(check.expectation);
            row.searches = check
                .searches
                .iter()
                .map(|s| SearchRow {
                    corrupted: s.corrupted.clone(),
                    any_delivered: s.summary.any_delivered,
                    any_undecided: s.summary.any_undecided,
                    any_unsafe: s.summary.any_unsafe,
                    steps: s.summary.steps,
                })
                .collect();
            row.zpp_cut = check.zpp_cut;
            if !check.passed {
                row.status = "failed";
                row.failure = check.failure;
            }
        }
        Err(e @ (Error::NotAdHoc | Error::BudgetExceeded { .. } | Error::SizeLimit { .. })) => {
            row.status = "skipped";
            row.skipped_reason = Some(e.to_string());
        }
        Err(e) => {
            row.status = "failed";
            row.failure = Some(e.to_string());
        }
    }
    row
}

/// Checks the cut characterization against exhaustive Z-CPA search on every
/// instance of a suite. Failing instances are written to
/// `vopts.dump_dir` as instance files.
pub fn cmd_verify(suite: &Suite, vopts: &VerifyOptions, opts: &Options) -> Result<Outcome> {
    let instances = suite_instances(suite, opts.seed)?;
    let search = SearchConfig {
        alphabet: opts.alphabet.clone(),
        horizon: opts.horizon,
        budget: vopts.budget,
        space: vopts.space,
        allow_inadmissible: false,
        ..SearchConfig::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(vopts.jobs)
        .build()
        .map_err(|e| Error::Parse(format!("cannot start worker pool: {e}")))?;
    let mut rows: Vec<VerifyRow> = pool.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(i, (name, inst))| verify_one(i, name.clone(), inst, &search, vopts, opts))
            .collect()
    });

    for row in rows.iter_mut().filter(|r| r.status == "failed") {
        std::fs::create_dir_all(&vopts.dump_dir)?;
        let file = vopts.dump_dir.join(format!(
            "failure-{:04}-{}.json",
            row.index,
            &row.digest[..12]
        ));
        std::fs::write(&file, to_canonical(&instances[row.index].1))?;
        row.reproducer = Some(file.display().to_string());
    }

    let count = |status: &str| rows.iter().filter(|r| r.status == status).count();
    let expect = |e: Expectation| rows.iter().filter(|r| r.expectation == Some(e)).count();
    let failed = count("failed");
    let counters = json!({
        "instances": rows.len(),
        "passed": count("passed"),
        "failed": failed,
        "skipped": count("skipped"),
        "deliver_expected": expect(Expectation::Deliver),
        "block_expected": expect(Expectation::Block),
        "unsafe_searches": rows.iter().flat_map(|r| &r.searches).filter(|s| s.any_unsafe).count(),
        "steps": rows.iter().flat_map(|r| &r.searches).map(|s| s.steps).sum::<u64>(),
    });
    let suite_echo = match suite {
        Suite::Named => json!("named"),
        Suite::Generated(spec) => to_value(spec),
    };
    let results = json!({
        "suite": suite_echo,
        "seed": opts.seed,
        "value": vopts.value,
        "alphabet": opts.alphabet,
        "budget": vopts.budget,
        "counters": counters,
        "instances": rows,
    });
    let seed = opts.seed.to_string();
    let mut cmd = echo(&["verify", "--seed", &seed]);
    if *suite == Suite::Named {
        cmd.push("--named".into());
    }
    Ok(Outcome {
        report: Report::new(cmd, None, results),
        status: if failed > 0 {
            exit::VERIFY_FAILED
        } else {
            exit::OK
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraOp {
    Join(PathBuf, PathBuf),
    Geq(PathBuf, PathBuf),
    Restrict(PathBuf, NodeSet),
    Member(PathBuf, NodeSet),
}

/// Structure algebra on files. Structure results are reported in canonical
/// form and, with `out`, also written there.
pub fn cmd_algebra(op: &AlgebraOp, out: Option<&Path>) -> Result<Outcome> {
    let show = |p: &PathBuf| p.display().to_string();
    let set_arg = |s: &NodeSet| s.iter().map(NodeId::as_str).collect::<Vec<_>>().join(",");
    let (cmd, result) = match op {
        AlgebraOp::Join(a, b) => {
            let z = read_structure(a)?.join(&read_structure(b)?);
            (echo(&["algebra", "join", &show(a), &show(b)]), Ok(z))
        }
        AlgebraOp::Restrict(a, set) => {
            let z = read_structure(a)?.restrict(set);
            (
                echo(&["algebra", "restrict", &show(a), "--set", &set_arg(set)]),
                Ok(z),
            )
        }
        AlgebraOp::Geq(a, b) => {
            let ge = read_structure(a)?.geq(&read_structure(b)?);
            (echo(&["algebra", "geq", &show(a), &show(b)]), Err(ge))
        }
        AlgebraOp::Member(a, set) => {
            let m = read_structure(a)?.member(set);
            (
                echo(&["algebra", "member", &show(a), "--set", &set_arg(set)]),
                Err(m),
            )
        }
    };
    let results = match result {
        Ok(z) => {
            if let Some(path) = out {
                std::fs::write(path, structure_to_canonical(&z))?;
            }
            json!({ "structure": z })
        }
        Err(answer) => json!({ "answer": answer }),
    };
    Ok(Outcome::ok(Report::new(cmd, None, results)))
}

/// Generates a seeded suite. With `out_dir` the instances are written as
/// `instance-NNNN.json`; otherwise they are embedded in the report.
pub fn cmd_gen(spec: &GeneratorSpec, out_dir: Option<&Path>, opts: &Options) -> Result<Outcome> {
    let instances = generate_instances(spec, opts.seed)?;
    let mut rows = Vec::new();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    for (i, inst) in instances.iter().enumerate() {
        let mut row = json!({ "index": i, "digest": digest(inst) });
        match out_dir {
            Some(dir) => {
                let file = dir.join(format!("instance-{i:04}.json"));
                std::fs::write(&file, to_canonical(inst))?;
                row["path"] = json!(file.display().to_string());
            }
            None => row["instance"] = to_value(&InstanceFile::from_instance(inst)),
        }
        rows.push(row);
    }
    let seed = opts.seed.to_string();
    Ok(Outcome::ok(Report::new(
        echo(&["gen", "--seed", &seed]),
        None,
        json!({ "spec": spec, "seed": opts.seed, "instances": rows }),
    )))
}
