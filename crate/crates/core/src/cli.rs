//! The `solenoid` command line: JSON files in, one [`CommandResult`] out.

use std::ffi::OsString;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::duality::{dual_presentation, membership_roundtrip, DualityError, GroupPresentation};
use crate::exactnum::{covering_degree, int_json, parse_rational, snf, IntMatrix, RationalMatrix};
use crate::flows::{decide_equivalence_2d, EquivalenceVerdict, FrequencyVector};
use crate::multipliers::{continuity_probe, is_iso_multiplier, is_proper_multiplier, ProbeVerdict};
use crate::products::{aut_group_form_2d, is_automorphism, ProductSolenoid};
use crate::supernatural::{compare, proper_arrangement, slot_terms, Descriptor, OrderRelation};
use crate::trajectories::{density_search, TrajectoryError, TruncatedPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Obstruction,
    Undecided,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    /// Written to standard error, never to the JSON output.
    #[serde(skip)]
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn new(status: Status, payload: impl Serialize) -> Self {
        CommandResult {
            status,
            payload: serde_json::to_value(payload).expect("payloads serialize"),
            diagnostics: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.diagnostics.push(line.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Error => 2,
            _ => 0,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "solenoid", version, about = "Classification of 1-solenoids, their products and linear flows")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bing order of two 1-solenoids.
    Compare {
        /// Descriptor file for P.
        p: PathBuf,
        /// Descriptor file for Q.
        q: PathBuf,
    },
    /// Properly arrange finitely many 1-solenoids.
    Arrange {
        /// Descriptor files, or one product file.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Number of slot terms to print per coordinate.
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
    /// Scalar multipliers between 1-solenoids.
    #[command(subcommand)]
    Mult(MultCommand),
    /// Automorphisms of products.
    #[command(subcommand)]
    Aut(AutCommand),
    /// Linear flows on products.
    #[command(subcommand)]
    Flow(FlowCommand),
    /// Smith normal form of an integer matrix.
    Snf {
        /// Integer matrix file.
        matrix: PathBuf,
    },
    /// Diagonal bonding matrices dual to a group presentation.
    Dualize {
        /// Group presentation file.
        generators: PathBuf,
        /// Number of bonding matrices to produce.
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
}

#[derive(Args, Debug)]
struct Pair {
    /// Rational multiplier, e.g. `3/2`.
    #[arg(allow_hyphen_values = true)]
    r: String,
    /// Descriptor file for the source.
    #[arg(long)]
    from: PathBuf,
    /// Descriptor file for the target.
    #[arg(long)]
    to: PathBuf,
}

#[derive(Subcommand, Debug)]
enum MultCommand {
    /// Whether `r` is a proper multiplier (and iso-multiplier when `--from` and `--to` agree).
    Check(Pair),
    /// Numerically follow the candidate homomorphism along the witness sequence.
    Probe {
        #[command(flatten)]
        pair: Pair,
        /// Probe depth: 4·depth terms over 2·depth levels.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum AutCommand {
    /// Whether a rational matrix induces an automorphism of a product.
    Check {
        /// Rational matrix file.
        matrix: PathBuf,
        /// Product file.
        #[arg(long)]
        solenoid: PathBuf,
    },
    /// Shape of the automorphism group of a product of two 1-solenoids.
    Form {
        /// Descriptor file for P.
        p: PathBuf,
        /// Descriptor file for Q.
        q: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum FlowCommand {
    /// Decide whether two flows on a 2-dimensional product are equivalent.
    Classify {
        /// Product file.
        #[arg(long)]
        solenoid: PathBuf,
        /// Frequency vector file.
        #[arg(long)]
        omega: PathBuf,
        /// Frequency vector file for the second flow.
        #[arg(long = "omega-prime")]
        omega_prime: PathBuf,
    },
    /// Find a time whose trajectory point is within `eps` of a target.
    Density {
        /// Product file.
        #[arg(long)]
        solenoid: PathBuf,
        /// Frequency vector file.
        #[arg(long)]
        omega: PathBuf,
        /// Truncated point file.
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Maximum number of candidate times to try.
        #[arg(long, default_value_t = 10_000_000.0)]
        budget: f64,
        /// Write the `(t, distance)` samples here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Obstruction
    }
}

fn execute(cmd: Command) -> Result<CommandResult, InputError> {
    Ok(match cmd {
        Command::Compare { p, q } => {
            let (p, q) = (read::<Descriptor>(&p)?.supernatural(), read::<Descriptor>(&q)?.supernatural());
            let v = compare(&p, &q);
            CommandResult::new(status(v.verdict != OrderRelation::Incomparable), &v).note(format!("P = {p}, Q = {q}"))
        }
        Command::Arrange { files, terms } => {
            let mut descriptors = Vec::new();
            for f in &files {
                let value: Value = read(f)?;
                match value.get("coordinates") {
                    Some(c) => descriptors.extend(Vec::<Descriptor>::deserialize(c)?),
                    None => descriptors.push(Descriptor::deserialize(&value)?),
                }
            }
            let coords: Vec<_> = descriptors.iter().map(Descriptor::supernatural).collect();
            let arranged = proper_arrangement(&coords);
            let slots: Vec<Vec<u64>> = arranged.iter().map(|c| slot_terms(c, terms)).collect();
            CommandResult::new(
                Status::Ok,
                json!({ "coordinates": arranged, "terms": slots, "already_arranged": arranged == coords }),
            )
        }
        Command::Mult(MultCommand::Check(pair)) => {
            let r = parse_rational(&pair.r)?;
            let (p, q) = (read::<Descriptor>(&pair.from)?.supernatural(), read::<Descriptor>(&pair.to)?.supernatural());
            let v = is_proper_multiplier(&r, &p, &q);
            let mut payload = serde_json::to_value(&v)?;
            if p == q {
                payload["iso"] = json!(is_iso_multiplier(&r, &p).unwrap_or(false));
            }
            CommandResult::new(status(v.proper), payload)
        }
        Command::Mult(MultCommand::Probe { pair, depth }) => {
            let r = parse_rational(&pair.r)?;
            let (p, q) = (read::<Descriptor>(&pair.from)?.supernatural(), read::<Descriptor>(&pair.to)?.supernatural());
            let report = continuity_probe(&r, &p, &q, depth);
            let ok = matches!(report.verdict, ProbeVerdict::ConvergesToIdentity);
            CommandResult::new(status(ok), &report)
        }
        Command::Aut(AutCommand::Check { matrix, solenoid }) => {
            let a: RationalMatrix = read(&matrix)?;
            let p: ProductSolenoid = read(&solenoid)?;
            let v = is_automorphism(&a, &p)?;
            CommandResult::new(status(v.is_automorphism), &v)
        }
        Command::Aut(AutCommand::Form { p, q }) => {
            let (p, q) = (read::<Descriptor>(&p)?.supernatural(), read::<Descriptor>(&q)?.supernatural());
            CommandResult::new(Status::Ok, aut_group_form_2d(&p, &q))
        }
        Command::Flow(FlowCommand::Classify { solenoid, omega, omega_prime }) => {
            let p: ProductSolenoid = read(&solenoid)?;
            let (w, w2): (FrequencyVector, FrequencyVector) = (read(&omega)?, read(&omega_prime)?);
            let v = decide_equivalence_2d(&p, &w, &w2)?;
            let s = match v {
                EquivalenceVerdict::Equivalent { .. } => Status::Ok,
                EquivalenceVerdict::NotEquivalent { .. } => Status::Obstruction,
                EquivalenceVerdict::Undecided { .. } => Status::Undecided,
            };
            CommandResult::new(s, &v).note(format!("omega = {w}, omega' = {w2}"))
        }
        Command::Flow(FlowCommand::Density { solenoid, omega, target, eps, budget, csv }) => {
            let p: ProductSolenoid = read(&solenoid)?;
            let w: FrequencyVector = read(&omega)?;
            let t: TruncatedPoint = read(&target)?;
            match density_search(&p, &w, &t, eps, budget.max(0.0) as u64) {
                Ok(report) => {
                    if let Some(path) = csv {
                        fs::write(&path, report.samples_csv()).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                    }
                    CommandResult::new(Status::Ok, &report)
                }
                Err(e @ TrajectoryError::NotIrrational { .. }) => {
                    CommandResult::new(Status::Obstruction, json!({ "error": e.to_string() }))
                }
                Err(TrajectoryError::BudgetExhausted { effort, best }) => CommandResult::new(
                    Status::Undecided,
                    json!({ "search_effort": effort, "best_distance": best, "epsilon": eps }),
                ),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Snf { matrix } => {
            let m: IntMatrix = read(&matrix)?;
            let dec = snf(&m)?;
            let int = |x: &BigInt| int_json::serialize(x, serde_json::value::Serializer).expect("integers serialize");
            let mut payload = serde_json::to_value(&dec)?;
            payload["invariant_factors"] = dec.invariant_factors().iter().map(int).collect();
            payload["covering_degree"] = int(&covering_degree(&m)?);
            CommandResult::new(Status::Ok, payload)
        }
        Command::Dualize { generators, depth } => {
            let g: GroupPresentation = read(&generators)?;
            match dual_presentation(&g, depth) {
                Ok(d) => {
                    let roundtrip = membership_roundtrip(&g, depth)?;
                    let mut payload = serde_json::to_value(&d)?;
                    payload["roundtrip"] = serde_json::to_value(&roundtrip)?;
                    CommandResult::new(Status::Ok, payload)
                }
                Err(e @ DualityError::NotRelativelyPrime { .. }) => {
                    CommandResult::new(Status::Obstruction, json!({ "error": e.to_string() }))
                }
                Err(e) => return Err(e.into()),
            }
        }
    })
}

fn init_logging() {
    let level = match std::env::var("SOLENOID_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Off,
        Ok("info") => log::LevelFilter::Info,
        Ok("trace") => log::LevelFilter::Trace,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).try_init();
}

/// Parses `argv` and runs the command. Returns the result and the exit code:
/// 0 for any decision, 2 for bad input, 3 for an internal failure.
pub fn dispatch<I, T>(argv: I) -> (Option<CommandResult>, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return (None, if e.use_stderr() { 2 } else { 0 });
        }
    };
    log::info!("{:?}", cli.command);
    match panic::catch_unwind(AssertUnwindSafe(|| execute(cli.command))) {
        Ok(Ok(r)) => (Some(r), 0),
        Ok(Err(InputError(msg))) => (Some(CommandResult::new(Status::Error, json!({ "error": msg }))), 2),
        Err(_) => (
            Some(CommandResult::new(Status::Error, json!({ "error": "internal error" }))),
            3,
        ),
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    init_logging();
    let (result, code) = dispatch(std::env::args_os());
    if let Some(r) = result {
        for line in &r.diagnostics {
            eprintln!("{line}");
        }
        println!("{}", serde_json::to_string_pretty(&r).expect("results serialize"));
    }
    code
}
