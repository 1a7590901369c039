//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed (witnesses on stdout), 2 usage or
//! input error, 3 specification unsatisfiable even with all sensors on,
//! 4 state cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::DelayBounds;
use crate::comm::psi;
use crate::comm::{build_comm_capped, build_w_capped, BuildError, DEFAULT_STATE_CAP};
use crate::decentral::{minimize_decentralized, AgentOrder, JointEngine};
use crate::diagnosis::{
    check_delay_k_diag_capped, diag_spec, make_live, refine_k_diag, DiagError, FaultClass,
    FaultSpec, Refined,
};
use crate::fsa::Plant;
use crate::io::{self, IoError};
use crate::observe::{info_map, SensorPolicy};
use crate::synthesis::{
    check_delay_feasible, max_feasible_subpolicy, minimize_sap, PickOrder, SynthError,
};
use crate::validation::simulate_run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSATISFIABLE: i32 = 3;
pub const EXIT_STATE_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "netsap",
    version,
    about = "Sensor activation under bounded communication delays"
)]
pub struct Cli {
    /// Abort when an automaton grows past this many states.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BoundsArgs {
    /// Observation delay bound, in time units.
    #[arg(long = "no")]
    pub no: u32,
    /// Control delay bound, in time units.
    #[arg(long = "nc")]
    pub nc: u32,
}

impl BoundsArgs {
    fn bounds(self) -> DelayBounds {
        DelayBounds::new(self.no, self.nc)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FaultArgs {
    /// Fault class as `name=f1,f2`; repeatable.
    #[arg(long = "fault", required = true)]
    pub faults: Vec<String>,
    /// Steps after a fault within which it must be diagnosed.
    #[arg(long)]
    pub k: u32,
    /// Add unobservable self-loops at dead-end states first.
    #[arg(long)]
    pub live: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotTarget {
    Plant,
    Comm,
    W,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the communication automaton and report its size.
    BuildComm {
        model: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Write the automaton as JSON.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a policy for delay feasibility.
    CheckFeasibility {
        model: PathBuf,
        policy: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Largest delay-feasible subpolicy of a policy.
    MaxSubpolicy {
        model: PathBuf,
        policy: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Synthesize a minimal delay-feasible policy for a pair specification.
    Synthesize {
        model: PathBuf,
        spec: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        /// `desc`, `asc`, or a policy file listing transitions to try first.
        #[arg(long, default_value = "desc")]
        order: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Write the per-iteration log as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Delay K-diagnosability.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Synthesize one policy per agent for a joint specification.
    SynthesizeDec {
        model: PathBuf,
        agents: PathBuf,
        spec: PathBuf,
        /// Shuffle the agent order with this seed instead of using file order.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "desc")]
        order: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Random walks over the communication automaton.
    Simulate {
        model: PathBuf,
        policy: PathBuf,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        max_len: usize,
        /// Write one line per step of every run.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Graphviz rendering of the plant, the communication automaton, or its
    /// refinement with the command tracker.
    ExportDot {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "plant")]
        what: DotTarget,
        #[arg(long = "no", default_value_t = 0)]
        no: u32,
        #[arg(long = "nc", default_value_t = 0)]
        nc: u32,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Write the counter-refined model.
    Refine {
        model: PathBuf,
        #[command(flatten)]
        faults: FaultArgs,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Write the pairs of refined states that must be distinguished.
    Spec {
        model: PathBuf,
        #[command(flatten)]
        faults: FaultArgs,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check a policy, stated over the original or the refined states.
    Check {
        model: PathBuf,
        #[command(flatten)]
        faults: FaultArgs,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long)]
        policy: PathBuf,
    },
}

pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Unsatisfiable(String),
    StateCap(usize),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<BuildError> for Failure {
    fn from(BuildError::StateExplosion(n): BuildError) -> Self {
        Failure::StateCap(n)
    }
}

impl From<DiagError> for Failure {
    fn from(e: DiagError) -> Self {
        match e {
            DiagError::Build(b) => b.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Plant, Failure> {
    Ok(io::parse_model(&read(path)?)?)
}

fn load_policy(plant: &Plant, path: &Path) -> Result<SensorPolicy, Failure> {
    Ok(io::parse_policy(plant, &read(path)?)?)
}

fn pick_order(plant: &Plant, order: &str) -> Result<PickOrder, Failure> {
    match order {
        "desc" => Ok(PickOrder::Descending),
        "asc" => Ok(PickOrder::Ascending),
        path => {
            let file: io::PolicyFile =
                serde_json::from_str(&read(Path::new(path))?).map_err(IoError::from)?;
            let list = file
                .activate
                .iter()
                .map(|a| {
                    let q = plant
                        .state_by_name(&a.state)
                        .ok_or_else(|| IoError::UnknownState(a.state.clone()))?;
                    let e = plant
                        .event_by_name(&a.event)
                        .ok_or_else(|| IoError::UnknownEvent(a.event.clone()))?;
                    Ok((q, e))
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            Ok(PickOrder::Explicit(list))
        }
    }
}

fn fault_spec(plant: &Plant, args: &FaultArgs) -> Result<FaultSpec, Failure> {
    let mut classes = Vec::new();
    for raw in &args.faults {
        let (name, events) = raw.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("fault class `{raw}` is not of the form name=f1,f2"))
        })?;
        let events = events
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|n| {
                plant
                    .event_by_name(n)
                    .ok_or_else(|| Failure::Usage(format!("unknown event `{n}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        classes.push(FaultClass {
            name: name.to_string(),
            events,
        });
    }
    Ok(FaultSpec::new(plant, classes, args.k)?)
}

fn refined(model: &Path, args: &FaultArgs) -> Result<(Plant, FaultSpec, Refined), Failure> {
    let mut plant = load_model(model)?;
    if args.live {
        plant = make_live(&plant, "tau").map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let faults = fault_spec(&plant, args)?;
    let r = refine_k_diag(&plant, &faults)?;
    Ok((plant, faults, r))
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => Ok(writeln!(out, "{text}")?),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{}", e.render());
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Unsatisfiable(msg)) => {
            let _ = writeln!(out, "{msg}");
            EXIT_UNSATISFIABLE
        }
        Err(Failure::StateCap(n)) => {
            let _ = writeln!(err, "error: state space exceeds the cap of {n} states");
            EXIT_STATE_CAP
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let cap = cli.state_cap;
    match &cli.command {
        Command::BuildComm {
            model,
            bounds,
            output,
            dot,
        } => {
            let plant = load_model(model)?;
            let comm = build_comm_capped(&plant, bounds.bounds(), cap)?;
            writeln!(
                out,
                "states: {}\ntransitions: {}",
                comm.num_states(),
                comm.automaton().num_transitions()
            )?;
            if let Some(p) = output {
                write(p, &io::comm_to_json(&plant, &comm))?;
            }
            if let Some(p) = dot {
                write(p, &io::comm_to_dot(&plant, &comm))?;
            }
            Ok(EXIT_OK)
        }
        Command::CheckFeasibility {
            model,
            policy,
            bounds,
        } => {
            let plant = load_model(model)?;
            let policy = load_policy(&plant, policy)?;
            let w = build_w_capped(&plant, bounds.bounds(), cap)?;
            let report = check_delay_feasible(&plant, &w, &policy);
            if report.feasible() {
                writeln!(out, "feasible")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "infeasible: {} violations", report.violations.len())?;
                for line in report.render(&plant, &w) {
                    writeln!(out, "{line}")?;
                }
                Ok(EXIT_CHECK_FAILED)
            }
        }
        Command::MaxSubpolicy {
            model,
            policy,
            bounds,
            output,
        } => {
            let plant = load_model(model)?;
            let policy = load_policy(&plant, policy)?;
            let w = build_w_capped(&plant, bounds.bounds(), cap)?;
            let (sub, tconf) = max_feasible_subpolicy(&plant, &w, &policy);
            writeln!(out, "subpolicy: {}", sub.render(&plant))?;
            writeln!(
                out,
                "confusable: {}",
                serde_json::to_string(&io::pairs_report(&plant, &tconf)).expect("strings")
            )?;
            if let Some(p) = output {
                write(p, &io::policy_to_json(&plant, &sub))?;
            }
            Ok(EXIT_OK)
        }
        Command::Synthesize {
            model,
            spec,
            bounds,
            order,
            output,
            trace,
        } => {
            let plant = load_model(model)?;
            let spec = io::parse_pairs(&plant, &read(spec)?)?;
            let order = pick_order(&plant, order)?;
            let w = build_w_capped(&plant, bounds.bounds(), cap)?;
            match minimize_sap(&plant, &w, &spec, &order) {
                Ok((policy, steps)) => {
                    writeln!(
                        out,
                        "policy ({} transitions): {}",
                        policy.len(),
                        policy.render(&plant)
                    )?;
                    if let Some(p) = output {
                        write(p, &io::policy_to_json(&plant, &policy))?;
                    }
                    if let Some(p) = trace {
                        write(p, &serde_json::to_string_pretty(&steps).expect("trace"))?;
                    }
                    Ok(EXIT_OK)
                }
                Err(SynthError::SpecUnsatisfiableEvenFullyActivated(pairs)) => {
                    Err(Failure::Unsatisfiable(format!(
                        "specification unsatisfiable even with all sensors on; violated pairs: {}",
                        serde_json::to_string(&io::pairs_report(&plant, &pairs)).expect("strings")
                    )))
                }
                Err(SynthError::Build(b)) => Err(b.into()),
            }
        }
        Command::Diag(DiagCommand::Refine {
            model,
            faults,
            output,
        }) => {
            let (_, _, r) = refined(model, faults)?;
            emit(out, output, &io::model_to_json(&r.plant))?;
            Ok(EXIT_OK)
        }
        Command::Diag(DiagCommand::Spec {
            model,
            faults,
            output,
        }) => {
            let (_, f, r) = refined(model, faults)?;
            emit(
                out,
                output,
                &io::pairs_to_json(&r.plant, &diag_spec(&r, &f)),
            )?;
            Ok(EXIT_OK)
        }
        Command::Diag(DiagCommand::Check {
            model,
            faults,
            bounds,
            policy,
        }) => {
            let (plant, f, r) = refined(model, faults)?;
            let text = read(policy)?;
            let lifted = match io::parse_policy(&plant, &text) {
                Ok(p) => r.lift_policy(&p),
                Err(_) => io::parse_policy(&r.plant, &text)?,
            };
            let report = check_delay_k_diag_capped(&r, &f, bounds.bounds(), &lifted, cap)?;
            let mut ok = true;
            if !report.feasibility.feasible() {
                ok = false;
                let w = build_w_capped(&r.plant, bounds.bounds(), cap)?;
                writeln!(
                    out,
                    "infeasible: {} violations",
                    report.feasibility.violations.len()
                )?;
                for line in report.feasibility.render(&r.plant, &w) {
                    writeln!(out, "{line}")?;
                }
            }
            if report.diagnosable() {
                writeln!(out, "delay {}-diagnosable", f.k())?;
            } else {
                ok = false;
                writeln!(
                    out,
                    "not delay {}-diagnosable; confusable pairs: {}",
                    f.k(),
                    serde_json::to_string(&io::pairs_report(&r.plant, &report.witnesses))
                        .expect("strings")
                )?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::SynthesizeDec {
            model,
            agents,
            spec,
            seed,
            order,
            output,
        } => {
            let plant = load_model(model)?;
            let agents = io::parse_agents(&plant, &read(agents)?)?;
            let spec = io::parse_joint_spec(&plant, agents.len() + 1, &read(spec)?)?;
            let pick = pick_order(&plant, order)?;
            let agent_order = seed.map_or(AgentOrder::Listed, AgentOrder::Seeded);
            match minimize_decentralized(
                &plant,
                &agents,
                &spec,
                agent_order,
                &pick,
                JointEngine::Product,
            ) {
                Ok((policies, _)) => {
                    let file = io::PolicyVectorFile {
                        agents: agents
                            .iter()
                            .zip(&policies)
                            .map(|(a, p)| io::AgentPolicyFile {
                                id: a.id,
                                activate: io::policy_file(&plant, p).activate,
                            })
                            .collect(),
                    };
                    for (a, p) in agents.iter().zip(&policies) {
                        writeln!(out, "agent {}: {}", a.id, p.render(&plant))?;
                    }
                    if let Some(p) = output {
                        write(p, &serde_json::to_string_pretty(&file).expect("policies"))?;
                    }
                    Ok(EXIT_OK)
                }
                Err(crate::decentral::DecError::SpecUnsatisfiableEvenFullyActivated(tuples)) => {
                    let names: Vec<Vec<&str>> = tuples
                        .iter()
                        .map(|t| t.iter().map(|&q| plant.state_name(q)).collect())
                        .collect();
                    Err(Failure::Unsatisfiable(format!(
                        "joint specification unsatisfiable even with all sensors on; violated tuples: {}",
                        serde_json::to_string(&names).expect("strings")
                    )))
                }
                Err(crate::decentral::DecError::Build(b)) => Err(b.into()),
            }
        }
        Command::Simulate {
            model,
            policy,
            bounds,
            runs,
            seed,
            max_len,
            log,
        } => {
            let plant = load_model(model)?;
            let policy = load_policy(&plant, policy)?;
            let comm = build_comm_capped(&plant, bounds.bounds(), cap)?;
            let mut mismatches = 0;
            let mut total_len = 0;
            let mut log_text = String::new();
            for r in 0..*runs {
                let run_seed = seed.wrapping_add(r as u64);
                let t = simulate_run(&comm, &plant, &policy, run_seed, *max_len, &[]);
                total_len += t.mu.len();
                let expected =
                    info_map(&plant, &policy, &psi(&t.mu)).expect("walk stays in the language");
                if expected != t.observation {
                    mismatches += 1;
                }
                if log.is_some() {
                    log_text.push_str(&format!("# run {r} seed {run_seed}\n"));
                    for line in t.log_lines(&plant, &comm) {
                        log_text.push_str(&line);
                        log_text.push('\n');
                    }
                }
            }
            writeln!(out, "runs: {runs}")?;
            writeln!(
                out,
                "mean length: {:.2}",
                total_len as f64 / (*runs).max(1) as f64
            )?;
            writeln!(
                out,
                "observation differs from the undelayed one: {mismatches}"
            )?;
            if let Some(p) = log {
                write(p, &log_text)?;
            }
            Ok(if mismatches == 0 {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::ExportDot {
            model,
            what,
            no,
            nc,
            output,
        } => {
            let plant = load_model(model)?;
            let bounds = DelayBounds::new(*no, *nc);
            let text = match what {
                DotTarget::Plant => io::plant_to_dot(&plant),
                DotTarget::Comm => {
                    io::comm_to_dot(&plant, &build_comm_capped(&plant, bounds, cap)?)
                }
                DotTarget::W => io::w_to_dot(&plant, &build_w_capped(&plant, bounds, cap)?),
            };
            emit(out, output, &text)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_synthesize() {
        let cli = parse_args([
            "netsap",
            "synthesize",
            "toy.json",
            "spec.json",
            "--no",
            "1",
            "--nc",
            "2",
            "-o",
            "out.json",
        ])
        .unwrap();
        match cli.command {
            Command::Synthesize { bounds, output, .. } => {
                assert_eq!(bounds.bounds(), DelayBounds::new(1, 2));
                assert_eq!(output, Some(PathBuf::from("out.json")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_bound_is_usage_error() {
        let err =
            parse_args(["netsap", "synthesize", "toy.json", "spec.json", "--nc", "2"]).unwrap_err();
        assert!(err.use_stderr());
        let mut out = Vec::new();
        let mut errs = Vec::new();
        let code = main_with(
            ["netsap", "synthesize", "toy.json", "spec.json", "--nc", "2"],
            &mut out,
            &mut errs,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn parses_diag_check() {
        let cli = parse_args([
            "netsap",
            "diag",
            "check",
            "prodline.json",
            "--fault",
            "f=f",
            "--k",
            "2",
            "--no",
            "2",
            "--nc",
            "2",
            "--policy",
            "dstar.json",
        ])
        .unwrap();
        match cli.command {
            Command::Diag(DiagCommand::Check { faults, bounds, .. }) => {
                assert_eq!(faults.faults, vec!["f=f".to_string()]);
                assert_eq!(faults.k, 2);
                assert_eq!(bounds.bounds(), DelayBounds::new(2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
