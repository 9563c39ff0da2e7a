//! Command-line front end: every closed form plus the numerical
//! verification harness, with machine-readable JSON reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 for
//! parse/usage errors, 3 for domain, validation, feasibility or partition
//! errors.

mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use intrec::placement::{self, TimesDescription};
use intrec::recovery::{self, RecoveryWeights};
use intrec::simulation::{self, io as procio};
use intrec::{parse, Error};
use report::{nums, Json};

#[derive(Parser)]
#[command(
    name = "intrec",
    version,
    about = "Worst-case recovery of integrals of random processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp single-sample bound on [0, a] for a random sampling time.
    Bound(BoundArgs),
    /// Optimal recovery error for a schedule and a trigger envelope.
    Error(ErrorArgs),
    /// Optimal recovery weights for a schedule.
    Weights(WeightsArgs),
    /// Optimal measurement times, free or trigger-constrained.
    Place(PlaceArgs),
    /// Monte-Carlo upper-bound verification against the closed form.
    Verify(VerifyArgs),
    /// Constructive sharpness check via the extremal process.
    Sharpness(SharpnessArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// Modulus spec, e.g. linear:K=1 or hoelder:K=1,alpha=0.5
    #[arg(long)]
    omega: String,
    /// Interval length
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Random time spec, e.g. det:0.5 or srv:0.2@0.5,0.6@0.5
    #[arg(long)]
    tau: String,
}

#[derive(Args)]
struct ErrorArgs {
    #[arg(long)]
    omega: String,
    /// Offset schedule, e.g. 0,0.25,0.6
    #[arg(long)]
    schedule: String,
    /// Trigger envelope m,M on [0, 1]
    #[arg(long, conflicts_with = "tau")]
    env: Option<String>,
    /// Trigger time spec; its envelope is used
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long)]
    schedule: String,
    /// Optional trigger time spec; realized weights are reported per atom
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args)]
struct PlaceArgs {
    #[arg(long)]
    omega: String,
    /// Number of measurements
    #[arg(long)]
    n: usize,
    /// Trigger envelope m,M; omit for the free (uniform) optimum
    #[arg(long)]
    env: Option<String>,
    /// Grid-search resolution; when given, the independent numeric oracle
    /// runs too and its agreement becomes a verdict
    #[arg(long)]
    resolution: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    omega: String,
    #[arg(long)]
    schedule: String,
    #[arg(long)]
    tau: String,
    /// Number of grid cells
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Number of random processes to draw
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one CSV row per trial to this path
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Check this stored process instead of sampling random ones
    #[arg(long)]
    process: Option<PathBuf>,
}

#[derive(Args)]
struct SharpnessArgs {
    #[arg(long)]
    omega: String,
    #[arg(long)]
    schedule: String,
    #[arg(long)]
    tau: String,
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Write the constructed extremal process to this path (CSV + sidecar)
    #[arg(long)]
    dump_process: Option<PathBuf>,
}

/// Tolerance of the Monte-Carlo upper-bound verdict.
const UPPER_BOUND_TOL: f64 = 1e-3;

struct Outcome {
    command: &'static str,
    inputs: Vec<(String, Json)>,
    result: Vec<(String, Json)>,
    verdicts: Vec<(String, bool)>,
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok(outcome) => {
            let all_pass = outcome.verdicts.iter().all(|(_, ok)| *ok);
            let verdicts = outcome
                .verdicts
                .iter()
                .map(|(name, ok)| {
                    (
                        name.clone(),
                        Json::Str(if *ok { "pass" } else { "fail" }.into()),
                    )
                })
                .collect();
            let report = Json::Obj(vec![
                ("command".into(), Json::Str(outcome.command.into())),
                ("inputs".into(), Json::Obj(outcome.inputs)),
                ("result".into(), Json::Obj(outcome.result)),
                ("verdicts".into(), Json::Obj(verdicts)),
                (
                    "wall_time_s".into(),
                    Json::Num(started.elapsed().as_secs_f64()),
                ),
            ]);
            println!("{}", report.render());
            std::process::exit(if all_pass { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::Parse(_) => 2,
                _ => 3,
            });
        }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Bound(args) => cmd_bound(args),
        Command::Error(args) => cmd_error(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Place(args) => cmd_place(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sharpness(args) => cmd_sharpness(args),
    }
}

fn cmd_bound(args: BoundArgs) -> Result<Outcome, Error> {
    let omega = parse::parse_modulus(&args.omega)?;
    let tau = parse::parse_srv(&args.tau, args.a)?;
    let env = tau.envelope();
    let bound = recovery::ostrowski_bound(&omega, args.a, &env)?;
    let t_star = env.sup_deviation(args.a / 2.0);
    Ok(Outcome {
        command: "bound",
        inputs: vec![
            ("omega".into(), Json::Str(args.omega)),
            ("a".into(), Json::Num(args.a)),
            ("tau".into(), Json::Str(args.tau)),
        ],
        result: vec![
            ("t_star".into(), Json::Num(t_star)),
            ("bound".into(), Json::Num(bound)),
            ("normalized".into(), Json::Num(bound / args.a)),
        ],
        verdicts: Vec::new(),
    })
}

fn envelope_input(
    env: &Option<String>,
    tau: &Option<String>,
) -> Result<(intrec::Envelope64, Vec<(String, Json)>), Error> {
    match (env, tau) {
        (Some(spec), _) => Ok((
            parse::parse_envelope(spec)?,
            vec![("env".into(), Json::Str(spec.clone()))],
        )),
        (None, Some(spec)) => Ok((
            parse::parse_srv(spec, 1.0)?.envelope(),
            vec![("tau".into(), Json::Str(spec.clone()))],
        )),
        (None, None) => Err(Error::Parse("one of --env or --tau is required".into())),
    }
}

fn cmd_error(args: ErrorArgs) -> Result<Outcome, Error> {
    let omega = parse::parse_modulus(&args.omega)?;
    let sched = parse::parse_schedule(&args.schedule)?;
    let (env, mut inputs) = envelope_input(&args.env, &args.tau)?;
    inputs.insert(0, ("omega".into(), Json::Str(args.omega)));
    inputs.insert(1, ("schedule".into(), Json::Str(args.schedule)));
    let value = recovery::recovery_error(&omega, &sched, &env)?;
    let center = (1.0 - sched.last()) / 2.0;
    Ok(Outcome {
        command: "error",
        inputs,
        result: vec![
            ("n".into(), Json::Int(sched.n() as i64)),
            ("center".into(), Json::Num(center)),
            ("t_star".into(), Json::Num(env.sup_deviation(center))),
            ("value".into(), Json::Num(value)),
        ],
        verdicts: Vec::new(),
    })
}

fn cmd_weights(args: WeightsArgs) -> Result<Outcome, Error> {
    let sched = parse::parse_schedule(&args.schedule)?;
    let weights = recovery::optimal_weights(&sched);
    let mut inputs = vec![("schedule".into(), Json::Str(args.schedule))];
    let mut result = vec![("n".into(), Json::Int(sched.n() as i64))];
    match &weights {
        RecoveryWeights::Single => {
            result.push(("kind".into(), Json::Str("constant".into())));
            result.push(("c".into(), nums(&[1.0])));
        }
        RecoveryWeights::Affine {
            first_base,
            mid,
            last_base,
        } => {
            result.push(("kind".into(), Json::Str("affine".into())));
            result.push(("c_first_base".into(), Json::Num(*first_base)));
            result.push(("c_mid".into(), nums(mid)));
            result.push(("c_last_base".into(), Json::Num(*last_base)));
        }
    }
    if let Some(spec) = &args.tau {
        let tau = parse::parse_srv(spec, 1.0)?;
        inputs.push(("tau".into(), Json::Str(spec.clone())));
        let realizations = tau
            .values()
            .iter()
            .map(|&v| {
                let c = weights.realize(v);
                Json::Obj(vec![
                    ("tau".into(), Json::Num(v)),
                    ("c".into(), nums(&c)),
                    ("sum".into(), Json::Num(c.iter().sum())),
                ])
            })
            .collect();
        result.push(("realized".into(), Json::Arr(realizations)));
    }
    Ok(Outcome {
        command: "weights",
        inputs,
        result,
        verdicts: Vec::new(),
    })
}

fn cmd_place(args: PlaceArgs) -> Result<Outcome, Error> {
    let omega = parse::parse_modulus(&args.omega)?;
    let mut inputs = vec![
        ("omega".into(), Json::Str(args.omega)),
        ("n".into(), Json::Int(args.n as i64)),
    ];
    let mut verdicts = Vec::new();

    let (outcome, env) = match &args.env {
        Some(spec) => {
            inputs.push(("env".into(), Json::Str(spec.clone())));
            let env = parse::parse_envelope(spec)?;
            (
                placement::triggered_optimal(&omega, args.n, &env)?,
                Some(env),
            )
        }
        None => (placement::uniform_optimal(&omega, args.n)?, None),
    };

    let mut result = vec![
        ("case".into(), Json::Str(outcome.case.label().into())),
        ("value".into(), Json::Num(outcome.value)),
        ("offsets".into(), nums(outcome.offsets.offsets())),
    ];
    match &outcome.times {
        TimesDescription::Fixed(times) => {
            result.push((
                "times".into(),
                Json::Obj(vec![
                    ("kind".into(), Json::Str("fixed".into())),
                    ("values".into(), nums(times)),
                ]),
            ));
        }
        TimesDescription::TriggerOffset { envelope, offsets } => {
            result.push((
                "times".into(),
                Json::Obj(vec![
                    ("kind".into(), Json::Str("trigger_offset".into())),
                    ("envelope".into(), nums(&[envelope.inf(), envelope.sup()])),
                    ("offsets".into(), nums(offsets)),
                ]),
            ));
        }
    }

    if let Some(resolution) = args.resolution {
        inputs.push(("resolution".into(), Json::Num(resolution)));
        let env = env.ok_or_else(|| {
            Error::Parse(
                "--resolution needs --env: the oracle searches trigger-constrained schedules"
                    .into(),
            )
        })?;
        let (sched, value) = placement::numeric_search(&omega, args.n, &env, resolution)?;
        let agreement_tol = 5.0 * resolution * omega.eval(1.0)?;
        result.push(("search_value".into(), Json::Num(value)));
        result.push(("search_offsets".into(), nums(sched.offsets())));
        result.push(("agreement_tol".into(), Json::Num(agreement_tol)));
        verdicts.push((
            "oracle_agreement".into(),
            (value - outcome.value).abs() <= agreement_tol,
        ));
    }

    Ok(Outcome {
        command: "place",
        inputs,
        result,
        verdicts,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, Error> {
    let omega = parse::parse_modulus(&args.omega)?;
    let sched = parse::parse_schedule(&args.schedule)?;
    let tau = parse::parse_srv(&args.tau, 1.0)?;
    let mut inputs = vec![
        ("omega".into(), Json::Str(args.omega)),
        ("schedule".into(), Json::Str(args.schedule)),
        ("tau".into(), Json::Str(args.tau)),
        ("grid".into(), Json::Int(args.grid as i64)),
    ];
    let theoretical;
    let empirical: Vec<f64>;
    match &args.process {
        Some(path) => {
            inputs.push(("process".into(), Json::Str(path.display().to_string())));
            let p = procio::read_process(path)?;
            theoretical = recovery::recovery_error(&omega, &sched, &tau.envelope())?;
            let w = recovery::optimal_weights(&sched);
            empirical = vec![simulation::empirical_error(&p, &sched, &tau, &w)?];
        }
        None => {
            inputs.push(("trials".into(), Json::Int(args.trials as i64)));
            inputs.push(("seed".into(), Json::Int(args.seed as i64)));
            let run = simulation::monte_carlo_upper_bound(
                &omega,
                &sched,
                &tau,
                args.grid,
                args.trials,
                args.seed,
            )?;
            theoretical = run.theoretical;
            empirical = run.empirical;
        }
    }
    let max_empirical = empirical.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if let Some(path) = &args.csv {
        let mut text = String::from("trial,empirical,theoretical,ratio\n");
        for (i, &e) in empirical.iter().enumerate() {
            let ratio = if theoretical > 0.0 {
                e / theoretical
            } else {
                f64::NAN
            };
            text.push_str(&format!(
                "{i},{},{},{}\n",
                procio::format_f64(e),
                procio::format_f64(theoretical),
                procio::format_f64(ratio)
            ));
        }
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        inputs.push(("csv".into(), Json::Str(path.display().to_string())));
    }
    let pass = max_empirical <= theoretical + UPPER_BOUND_TOL;
    let max_ratio = if theoretical > 0.0 {
        max_empirical / theoretical
    } else {
        f64::NAN
    };
    Ok(Outcome {
        command: "verify",
        inputs,
        result: vec![
            ("theoretical".into(), Json::Num(theoretical)),
            ("trials".into(), Json::Int(empirical.len() as i64)),
            ("max_empirical".into(), Json::Num(max_empirical)),
            ("max_ratio".into(), Json::Num(max_ratio)),
            ("tolerance".into(), Json::Num(UPPER_BOUND_TOL)),
        ],
        verdicts: vec![("upper_bound".into(), pass)],
    })
}

fn cmd_sharpness(args: SharpnessArgs) -> Result<Outcome, Error> {
    let omega = parse::parse_modulus(&args.omega)?;
    let sched = parse::parse_schedule(&args.schedule)?;
    let tau = parse::parse_srv(&args.tau, 1.0)?;
    let mut inputs = vec![
        ("omega".into(), Json::Str(args.omega)),
        ("schedule".into(), Json::Str(args.schedule)),
        ("tau".into(), Json::Str(args.tau)),
        ("grid".into(), Json::Int(args.grid as i64)),
    ];
    let theoretical = recovery::recovery_error(&omega, &sched, &tau.envelope())?;
    let process = simulation::extremal_process(&omega, &sched, &tau, args.grid)?;
    let weights = recovery::optimal_weights(&sched);
    let empirical = simulation::empirical_error(&process, &sched, &tau, &weights)?;
    if let Some(path) = &args.dump_process {
        procio::write_process(path, &process)?;
        inputs.push(("dump_process".into(), Json::Str(path.display().to_string())));
    }
    let tolerance = 2.0 * omega.eval(1.0 / args.grid as f64)?;
    let diff = (empirical - theoretical).abs();
    Ok(Outcome {
        command: "sharpness",
        inputs,
        result: vec![
            ("theoretical".into(), Json::Num(theoretical)),
            ("empirical".into(), Json::Num(empirical)),
            ("abs_diff".into(), Json::Num(diff)),
            ("tolerance".into(), Json::Num(tolerance)),
        ],
        verdicts: vec![("sharp".into(), diff <= tolerance)],
    })
}
