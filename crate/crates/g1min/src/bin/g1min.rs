//! Batch CLI: exact invariants, fiber classification, normality and
//! minimisation of genus one equations, with JSON reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 mathematical rejection
//! (singular or non-integral input), 3 undecided (no certificate within
//! the configured bounds).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use g1min::fiber::{self, FiberError, NormalityStatus};
use g1min::invariants::invariants;
use g1min::jacobian::{self, JacobianError};
use g1min::minimise::{
    self, Minimality, MinimisationCertificate, MinimisationStatus, MinimiseError, MinimiseOpts,
};
use g1min::modelfile::{ModelFile, ModelFileError, REPORT_SCHEMA};
use g1min::report::{
    cert_value, geometric_str, minimality_str, model_value, normality_str, position_value,
    status_str, verdict_value,
};
use g1min::models::GenusOneEquation;
use g1min::rat::{rat_string, LocalContext};
use g1min::testgen;

#[derive(Parser)]
#[command(
    name = "g1min",
    version,
    about = "Exact invariants, special-fiber classification and minimisation \
             of genus one equations of degree up to 4"
)]
struct Cli {
    /// Emit a JSON report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact c4, c6 and discriminant of a model.
    Invariants { model: PathBuf },
    /// Classify the special fiber at a prime.
    ClassifyFiber {
        model: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Decide normality of the model's scheme at a prime.
    Normality {
        model: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Level of the model at a prime (12-steps above the minimal valuation).
    Level {
        model: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Jacobian curve and the minimal discriminant of its class.
    Jacobian { model: PathBuf },
    /// Decide minimality at a prime, with certificate evidence.
    IsMinimal {
        model: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Minimise at one prime (--prime) or at every prime at once (--global).
    Minimise {
        model: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, conflicts_with = "prime")]
        global: bool,
        /// Guided-search rounds allowed after deterministic moves stall.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Write the minimised model to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance with planted levels and known ground truth.
    GenInstance {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long)]
        degree: u8,
        /// Planted level, as prime:k; repeatable.
        #[arg(long = "plant", value_parser = parse_plant)]
        plant: Vec<(u64, u32)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the generated model to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_plant(s: &str) -> Result<(u64, u32), String> {
    let (p, k) = s
        .split_once(':')
        .ok_or_else(|| format!("expected prime:k, got {s:?}"))?;
    let p: u64 = p.parse().map_err(|_| format!("bad prime {p:?}"))?;
    let k: u32 = k.parse().map_err(|_| format!("bad level {k:?}"))?;
    Ok((p, k))
}

// ------------------------------------------------------------- error→exit

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
    fn math(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
    fn undecided(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl From<ModelFileError> for Failure {
    fn from(e: ModelFileError) -> Self {
        match e {
            ModelFileError::Io(_) | ModelFileError::Json(_) => Failure::usage(e.to_string()),
            _ => Failure::math(e),
        }
    }
}

impl From<FiberError> for Failure {
    fn from(e: FiberError) -> Self {
        match e {
            FiberError::UnsupportedResidueField(..) | FiberError::PrimeBoundExceeded { .. } => {
                Failure::undecided(e)
            }
            _ => Failure::math(e),
        }
    }
}

impl From<JacobianError> for Failure {
    fn from(e: JacobianError) -> Self {
        Failure::math(e)
    }
}

impl From<MinimiseError> for Failure {
    fn from(e: MinimiseError) -> Self {
        Failure::math(e)
    }
}

impl From<testgen::TestgenError> for Failure {
    fn from(e: testgen::TestgenError) -> Self {
        match e {
            testgen::TestgenError::BadPrime(_) => Failure::usage(e.to_string()),
            _ => Failure::math(e),
        }
    }
}

// ----------------------------------------------------------------- helpers

fn load(path: &PathBuf) -> Result<(GenusOneEquation, Option<u64>), Failure> {
    let mf = ModelFile::read(path)?;
    let phi = mf.to_equation()?;
    Ok((phi, mf.prime))
}

fn context(flag: Option<u64>, file_default: Option<u64>) -> Result<LocalContext, Failure> {
    let p = flag
        .or(file_default)
        .ok_or_else(|| Failure::usage("a prime is required: pass --prime p"))?;
    let bound = fiber::prime_bound();
    if p > bound {
        return Err(Failure::undecided(format!(
            "prime {p} exceeds the bound {bound} (override with G1MIN_PRIME_BOUND)"
        )));
    }
    LocalContext::new(p).map_err(|_| Failure::usage(format!("{p} is not prime")))
}

struct Outcome {
    text: String,
    payload: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: String, payload: Value) -> Self {
        Outcome {
            text,
            payload,
            code: 0,
        }
    }
}

fn cert_text(cert: &MinimisationCertificate) -> String {
    let mut out = String::new();
    for (i, m) in cert.moves.iter().enumerate() {
        out.push_str(&format!(
            "move {}: {} (drop {})\n",
            i + 1,
            m.tag.name(),
            m.drop
        ));
    }
    let vals: Vec<String> = cert.delta_valuations.iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("nu(delta) trail: {}\n", vals.join(" -> ")));
    out.push_str(&format!(
        "result: degree {} [{}]\n",
        cert.result.degree(),
        cert.result
            .coeffs()
            .iter()
            .map(rat_string)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    out.push_str(&format!(
        "level: {}\nstatus: {}\ninput minimality: {}",
        cert.level,
        status_str(cert.status),
        minimality_str(cert.minimality)
    ));
    out
}

// --------------------------------------------------------------- commands

fn run(cmd: &Cmd) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Invariants { model } => {
            let (phi, _) = load(model)?;
            let inv = invariants(&phi).map_err(Failure::math)?;
            let text = format!(
                "c4 = {}\nc6 = {}\ndelta = {}",
                rat_string(&inv.c4),
                rat_string(&inv.c6),
                rat_string(&inv.delta)
            );
            Ok(Outcome::ok(
                text,
                json!({
                    "c4": rat_string(&inv.c4),
                    "c6": rat_string(&inv.c6),
                    "delta": rat_string(&inv.delta),
                }),
            ))
        }
        Cmd::ClassifyFiber { model, prime } => {
            let (phi, file_p) = load(model)?;
            let ctx = context(*prime, file_p)?;
            let (class, pos) = fiber::classify_fiber(&phi, &ctx)?;
            let text = format!("class at p={}: {}", ctx.prime(), class.name());
            let payload = json!({
                "prime": ctx.prime(),
                "class": class.name(),
                "standard_position": pos.as_ref().map(position_value),
            });
            Ok(Outcome::ok(text, payload))
        }
        Cmd::Normality { model, prime } => {
            let (phi, file_p) = load(model)?;
            let ctx = context(*prime, file_p)?;
            let v = fiber::normality(&phi, &ctx)?;
            let text = format!(
                "{} at p={} ({}; {})",
                normality_str(v.status),
                ctx.prime(),
                v.criterion,
                v.witness
            );
            let code = if v.status == NormalityStatus::NotProvedNormal {
                3
            } else {
                0
            };
            Ok(Outcome {
                text,
                payload: json!({ "prime": ctx.prime(), "verdict": verdict_value(&v) }),
                code,
            })
        }
        Cmd::Level { model, prime } => {
            let (phi, file_p) = load(model)?;
            let ctx = context(*prime, file_p)?;
            let l = jacobian::level(&phi, &ctx)?;
            Ok(Outcome::ok(
                format!("level = {} at p={}", l.value, l.prime),
                json!({ "prime": l.prime, "level": l.value }),
            ))
        }
        Cmd::Jacobian { model } => {
            let (phi, _) = load(model)?;
            let inv = invariants(&phi).map_err(Failure::math)?;
            let j = jacobian::jacobian(&inv.c4, &inv.c6)?;
            let report = jacobian::minimal_discriminant_global(&j.curve)?;
            let text = format!(
                "jacobian: degree 1 [{}] (u = {})\nminimal discriminant: {}",
                j.curve
                    .coeffs()
                    .iter()
                    .map(rat_string)
                    .collect::<Vec<_>>()
                    .join(", "),
                rat_string(&j.u),
                rat_string(&report.delta_min)
            );
            let payload = json!({
                "curve": model_value(&j.curve),
                "u": rat_string(&j.u),
                "delta_min": rat_string(&report.delta_min),
                "per_prime": report.per_prime.iter().map(|(p, nu, k)| json!({
                    "prime": p, "nu_delta_min": nu, "scaling_exponent": k,
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::ok(text, payload))
        }
        Cmd::IsMinimal { model, prime } => {
            let (phi, file_p) = load(model)?;
            let ctx = context(*prime, file_p)?;
            let (minimal, cert) = minimise::is_minimal(&phi, &ctx)?;
            let geometric = fiber::normality(&phi, &ctx)
                .ok()
                .map(|v| minimise::geometric_status(&cert, &v));
            let mut text = format!(
                "minimal at p={}: {}",
                ctx.prime(),
                minimality_str(cert.minimality)
            );
            if let Some(g) = geometric {
                text.push_str(&format!("\ngeometric: {}", geometric_str(g)));
            }
            let code = if cert.minimality == Minimality::Unknown {
                3
            } else {
                0
            };
            Ok(Outcome {
                text,
                payload: json!({
                    "prime": ctx.prime(),
                    "minimal": minimal,
                    "minimality": minimality_str(cert.minimality),
                    "geometric": geometric.map(geometric_str),
                    "certificate": cert_value(&cert),
                }),
                code,
            })
        }
        Cmd::Minimise {
            model,
            prime,
            global,
            depth,
            out,
        } => {
            let (phi, file_p) = load(model)?;
            let opts = MinimiseOpts { depth: *depth };
            let cert = if *global {
                minimise::minimise_global(&phi, &opts)?
            } else {
                let ctx = context(*prime, file_p)?;
                minimise::minimise_local(&phi, &ctx, &opts)?
            };
            if let Some(path) = out {
                ModelFile::from_equation(&cert.result).write(path)?;
            }
            let code = if cert.status == MinimisationStatus::MinimalNoCertificate {
                3
            } else {
                0
            };
            Ok(Outcome {
                text: cert_text(&cert),
                payload: json!({ "certificate": cert_value(&cert) }),
                code,
            })
        }
        Cmd::GenInstance {
            a,
            b,
            degree,
            plant,
            seed,
            out,
        } => {
            let (phi, truth) = testgen::generate_instance(*a, *b, *degree, plant, *seed)?;
            let mf = ModelFile::from_equation(&phi);
            if let Some(path) = out {
                mf.write(path)?;
            }
            let planted: Vec<String> = truth
                .planted
                .iter()
                .map(|(p, k, lvl)| format!("p={p} k={k} level={lvl}"))
                .collect();
            let text = format!(
                "{}\nplanted: {}\ndelta = {}",
                mf.to_json(),
                if planted.is_empty() {
                    "none".into()
                } else {
                    planted.join(", ")
                },
                rat_string(&truth.delta)
            );
            let payload = json!({
                "model": model_value(&phi),
                "ground_truth": {
                    "degree": truth.degree,
                    "a": rat_string(&truth.a),
                    "b": rat_string(&truth.b),
                    "seed": truth.seed,
                    "planted": truth.planted.iter().map(|(p, k, lvl)| json!({
                        "prime": p, "k": k, "level": lvl,
                    })).collect::<Vec<_>>(),
                    "minimal_valuations": truth.minimal_valuations.iter().map(|(p, nu)| json!({
                        "prime": p, "nu_delta_min": nu,
                    })).collect::<Vec<_>>(),
                    "delta": rat_string(&truth.delta),
                },
            });
            Ok(Outcome::ok(text, payload))
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Invariants { .. } => "invariants",
        Cmd::ClassifyFiber { .. } => "classify-fiber",
        Cmd::Normality { .. } => "normality",
        Cmd::Level { .. } => "level",
        Cmd::Jacobian { .. } => "jacobian",
        Cmd::IsMinimal { .. } => "is-minimal",
        Cmd::Minimise { .. } => "minimise",
        Cmd::GenInstance { .. } => "gen-instance",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not usage errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let name = command_name(&cli.cmd);
    // A closed stdout (e.g. piping into head) must not panic.
    let emit = |s: String| {
        let _ = writeln!(std::io::stdout(), "{s}");
    };
    match run(&cli.cmd) {
        Ok(outcome) => {
            if cli.json {
                let report = json!({
                    "schema": REPORT_SCHEMA,
                    "command": name,
                    "exit": outcome.code,
                    "result": outcome.payload,
                });
                emit(serde_json::to_string_pretty(&report).unwrap());
            } else {
                emit(outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            if cli.json {
                let report = json!({
                    "schema": REPORT_SCHEMA,
                    "command": name,
                    "exit": f.code,
                    "error": f.message,
                });
                emit(serde_json::to_string_pretty(&report).unwrap());
            } else {
                eprintln!("g1min: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
