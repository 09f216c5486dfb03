//! The `oddpack` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal
//! invariant breach.

pub mod dot;
pub mod gen;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use oddpack::io::{self, to_json};
use oddpack::{
    build_double_cover, certify, max_multiflow_exhaustive, max_multiflow_fractional, max_multiflow_integer,
    max_odd_walk_packing, max_trail_packing_exhaustive, min_barrier_exhaustive, min_proper_partition,
    odd_trail_packing, validate_packing, Error, Network, OracleBudget, ParityFilter, Rational, TrailFamily,
};
use serde_json::{json, Value};

pub use gen::{generate, GenConfig};

#[derive(Debug, Parser)]
#[command(
    name = "oddpack",
    version,
    about = "Maximum packings of odd T-walks and odd T-trails"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads when several instances are given.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Oracle budget such as `vertices=8,edges=12,terminals=6,seconds=60`;
    /// overrides ODDPACK_ORACLE_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum fractional odd T-walk packing with a minimum barrier.
    PackWalks { inputs: Vec<PathBuf> },
    /// Maximum integer odd T-trail packing (capacities 2, inner Eulerian).
    PackTrails {
        inputs: Vec<PathBuf>,
        /// Dump the pipeline trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Minimum odd T-walk barrier.
    MinBarrier { inputs: Vec<PathBuf> },
    /// Maximum multiflow in the double cover with a minimum proper partition.
    Multiflow {
        inputs: Vec<PathBuf>,
        /// Require an integer multiflow.
        #[arg(long)]
        integer: bool,
    },
    /// Check a packing, and optimality against a barrier when given.
    Verify {
        instance: PathBuf,
        packing: PathBuf,
        #[arg(long)]
        barrier: Option<PathBuf>,
    },
    /// Brute-force counterpart of a main command.
    Oracle {
        #[arg(value_enum)]
        target: OracleTarget,
        inputs: Vec<PathBuf>,
        /// Print the oracle result only, without comparing.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Seeded random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        vertices: usize,
        #[arg(long, default_value_t = 10)]
        edges: usize,
        #[arg(long, default_value_t = 2)]
        min_terminals: usize,
        #[arg(long, default_value_t = 4)]
        max_terminals: usize,
        #[arg(long)]
        eulerian: bool,
        #[arg(long)]
        cap2: bool,
        #[arg(long)]
        even_caps: bool,
    },
    /// Graphviz DOT rendering.
    ExportDot {
        instance: PathBuf,
        #[arg(long)]
        barrier: Option<PathBuf>,
        #[arg(long)]
        packing: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleTarget {
    PackWalks,
    PackTrails,
    MinBarrier,
    Multiflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { 2 } else { 3 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Res<Network<Rational>> {
    let text = read(path)?;
    io::parse_instance(&text).map_err(|e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    })
}

fn budget(cfg: &RunConfig) -> Res<OracleBudget> {
    let b = match &cfg.budget {
        Some(s) => OracleBudget::parse(s),
        None => OracleBudget::from_env(),
    };
    b.map_err(Failure::from)
}

fn pack_walks(n: &Network<Rational>) -> Res<Value> {
    let (p, b) = max_odd_walk_packing(n)?;
    Ok(json!({
        "value": p.value().to_string(),
        "packing": io::packing_to_json(n, &p),
        "barrier": io::barrier_to_json(n, &b),
    }))
}

fn pack_trails(n: &Network<Rational>) -> Res<(Value, Value)> {
    let out = odd_trail_packing(n)?;
    let v = json!({
        "value": out.packing.value().to_string(),
        "packing": io::packing_to_json(n, &out.packing),
        "p": out.p,
        "q": out.q,
    });
    Ok((v, serde_json::to_value(&out.trace).expect("trace serializes")))
}

fn min_barrier(n: &Network<Rational>) -> Res<Value> {
    let (_, b) = max_odd_walk_packing(n)?;
    let j = io::barrier_to_json(n, &b);
    Ok(json!({ "capacity": j.capacity, "barrier": j }))
}

fn multiflow(n: &Network<Rational>, integer: bool) -> Res<Value> {
    let dc = build_double_cover(n);
    let r = if integer {
        max_multiflow_integer(&dc)?
    } else {
        max_multiflow_fractional(&dc)?
    };
    Ok(json!({
        "value": r.packing.value().to_string(),
        "packing": io::packing_to_json(dc.cover(), &r.packing),
        "partition": io::partition_to_json(&dc, &r.certificate),
    }))
}

fn oracle(n: &Network<Rational>, target: OracleTarget, exhaustive: bool, b: &OracleBudget) -> Res<(Value, bool)> {
    let (oracle_value, detail) = match target {
        OracleTarget::PackWalks | OracleTarget::MinBarrier => {
            let (bar, cap) = min_barrier_exhaustive(n, b)?;
            (cap, json!(io::barrier_to_json(n, &bar)))
        }
        OracleTarget::PackTrails => {
            let p = max_trail_packing_exhaustive(n, ParityFilter::Odd, TrailFamily::Graph, b)?;
            (p.value(), json!(io::packing_to_json(n, &p)))
        }
        OracleTarget::Multiflow => {
            let dc = build_double_cover(n);
            let p = max_multiflow_exhaustive(&dc, b)?;
            (p.value(), json!(io::packing_to_json(dc.cover(), &p)))
        }
    };
    if exhaustive {
        return Ok((
            json!({ "value": oracle_value.to_string(), "certificate": detail }),
            true,
        ));
    }
    let main_value = match target {
        OracleTarget::PackWalks | OracleTarget::MinBarrier => max_odd_walk_packing(n)?.0.value(),
        OracleTarget::PackTrails => odd_trail_packing(n)?.packing.value(),
        OracleTarget::Multiflow => min_proper_partition(&build_double_cover(n))?.capacity,
    };
    let agree = main_value == oracle_value;
    Ok((
        json!({ "main": main_value.to_string(), "oracle": oracle_value.to_string(), "agree": agree }),
        agree,
    ))
}

/// Runs `f` on every input with up to `jobs` threads. One input gives its
/// result directly; several give a `results` array in input order.
fn batch(inputs: &[PathBuf], jobs: usize, f: &(dyn Fn(&Network<Rational>) -> Res<Value> + Sync)) -> Res<Value> {
    if inputs.is_empty() {
        return Err(input_failure("no instance given".into()));
    }
    if inputs.len() == 1 {
        return f(&load_instance(&inputs[0])?);
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Res<Value>>>> = inputs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, inputs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= inputs.len() {
                    break;
                }
                let r = load_instance(&inputs[i]).and_then(|n| f(&n));
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    let mut code = 0;
    let mut results = Vec::new();
    for (path, slot) in inputs.iter().zip(slots) {
        let input = path.display().to_string();
        match slot.into_inner().unwrap().expect("every slot filled") {
            Ok(v) => results.push(json!({ "input": input, "result": v })),
            Err(e) => {
                code = code.max(e.code);
                results.push(json!({ "input": input, "error": e.message, "code": e.code }));
            }
        }
    }
    let out = json!({ "results": results });
    if code == 0 {
        Ok(out)
    } else {
        Err(Failure {
            code,
            message: to_json(&out),
        })
    }
}

fn verify(instance: &Path, packing: &Path, barrier: Option<&Path>) -> Res<(Value, bool)> {
    let n = load_instance(instance)?;
    let p = io::parse_packing(&n, &read(packing)?)?;
    let g = n.graph();
    let report = match barrier {
        Some(path) => {
            let b = io::parse_barrier(&n, &read(path)?)?;
            let r = certify(&n, &p, &b)?;
            json!({
                "value": r.value.to_string(),
                "capacity": r.capacity.to_string(),
                "failures": r.failures,
            })
        }
        None => {
            let check = validate_packing(&n, &p)?;
            let mut failures: Vec<String> = check
                .violations
                .iter()
                .map(|v| {
                    format!(
                        "edge {} carries load {} above capacity {}",
                        g.edge(v.edge).name,
                        v.load,
                        v.cap
                    )
                })
                .collect();
            for (i, item) in p.items.iter().enumerate() {
                if !item.walk.is_odd() || !item.walk.is_t_walk(n.terminals()) {
                    failures.push(format!("item {i} is not an odd T-walk"));
                }
            }
            json!({ "value": check.value.to_string(), "failures": failures })
        }
    };
    let ok = report["failures"].as_array().is_some_and(|f| f.is_empty());
    Ok((report, ok))
}

fn dispatch(cfg: &RunConfig) -> Res<(String, i32)> {
    let text = |v: Value| to_json(&v);
    match &cfg.command {
        Command::PackWalks { inputs } => Ok((text(batch(inputs, cfg.jobs, &pack_walks)?), 0)),
        Command::MinBarrier { inputs } => Ok((text(batch(inputs, cfg.jobs, &min_barrier)?), 0)),
        Command::Multiflow { inputs, integer } => Ok((text(batch(inputs, cfg.jobs, &|n| multiflow(n, *integer))?), 0)),
        Command::PackTrails { inputs, trace } => match trace {
            Some(path) => {
                if inputs.len() != 1 {
                    return Err(input_failure("--trace needs exactly one instance".into()));
                }
                let (v, t) = pack_trails(&load_instance(&inputs[0])?)?;
                std::fs::write(path, to_json(&t)).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
                Ok((text(v), 0))
            }
            None => Ok((text(batch(inputs, cfg.jobs, &|n| pack_trails(n).map(|x| x.0))?), 0)),
        },
        Command::Verify {
            instance,
            packing,
            barrier,
        } => {
            let (v, ok) = verify(instance, packing, barrier.as_deref())?;
            Ok((text(v), if ok { 0 } else { 1 }))
        }
        Command::Oracle {
            target,
            inputs,
            exhaustive,
        } => {
            let b = budget(cfg)?;
            let agree = AtomicUsize::new(0);
            let v = batch(inputs, cfg.jobs, &|n| {
                let (v, ok) = oracle(n, *target, *exhaustive, &b)?;
                if !ok {
                    agree.fetch_add(1, Ordering::SeqCst);
                }
                Ok(v)
            })?;
            Ok((text(v), if agree.load(Ordering::SeqCst) == 0 { 0 } else { 1 }))
        }
        Command::Gen {
            seed,
            vertices,
            edges,
            min_terminals,
            max_terminals,
            eulerian,
            cap2,
            even_caps,
        } => {
            if *min_terminals < 1 || min_terminals > max_terminals || *vertices < (*min_terminals).max(2) {
                return Err(input_failure("inconsistent size bounds".into()));
            }
            let cfg = GenConfig {
                seed: *seed,
                max_vertices: *vertices,
                max_edges: *edges,
                min_terminals: *min_terminals,
                max_terminals: *max_terminals,
                eulerian: *eulerian,
                cap2: *cap2,
                even_caps: *even_caps,
            };
            Ok((to_json(&io::instance_to_json(&generate(&cfg))), 0))
        }
        Command::ExportDot {
            instance,
            barrier,
            packing,
        } => {
            let n = load_instance(instance)?;
            let b = barrier
                .as_ref()
                .map(|p| read(p).and_then(|t| Ok(io::parse_barrier(&n, &t)?)))
                .transpose()?;
            let p = packing
                .as_ref()
                .map(|p| read(p).and_then(|t| Ok(io::parse_packing(&n, &t)?)))
                .transpose()?;
            Ok((dot::export_dot(&n, b.as_ref(), p.as_ref()), 0))
        }
    }
}

/// Runs one command. With `--output` the result goes to the file and
/// stdout stays empty.
pub fn run(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok((text, code)) => match &cfg.output {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome {
                    code,
                    stdout: String::new(),
                    stderr: String::new(),
                },
                Err(e) => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {}: {e}\n", path.display()),
                },
            },
            None => Outcome {
                code,
                stdout: text,
                stderr: String::new(),
            },
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// exit with 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
