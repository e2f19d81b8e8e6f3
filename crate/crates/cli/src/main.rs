//! Command-line front end: distance commands over JSON files, witness
//! dumps, entwinedness, and the seeded verification suites.
//!
//! Exit codes: 0 success, 1 domain error (bad data, solver failure),
//! 2 usage error, 3 verification failure.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use valdist_core::dist::{marginal, tensor, tvd, tvd_witness, Side};
use valdist_core::effect::{ard, EffectModule, FuzzyModel, MatrixEffectModel, UnitIntervalModel};
use valdist_core::io;
use valdist_core::metric::{kantorovich_plan, lipschitz_witness, witness_gap};
use valdist_core::quantum::{trd, trd_witness, vld};
use valdist_core::triangle::{effect_roundtrip_residual, triangle_commutes_classical};
use valdist_core::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "valdist",
    version,
    about = "Validity-based distances on classical and quantum states, with optimal witnesses"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Total variation distance between two distribution files.
    Tvd { a: PathBuf, b: PathBuf },
    /// Kantorovich distance over a metric space.
    Kvd {
        /// Metric-space JSON file.
        #[arg(long)]
        metric: PathBuf,
        a: PathBuf,
        b: PathBuf,
        /// Also dump the optimal transport plan.
        #[arg(long)]
        plan: bool,
    },
    /// Trace distance between two density-matrix files.
    Trd { a: PathBuf, b: PathBuf },
    /// Validity distance between two density-matrix files.
    Vld { a: PathBuf, b: PathBuf },
    /// Archimedean distance between two effect-module elements.
    Ard {
        #[arg(long, value_enum)]
        model: ModelKind,
        x: PathBuf,
        y: PathBuf,
    },
    /// Optimal witness for a distance (sharp subset, Lipschitz
    /// predicate, or projection).
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        /// Metric-space JSON file (kvd only).
        #[arg(long)]
        metric: Option<PathBuf>,
        a: PathBuf,
        b: PathBuf,
    },
    /// Distance between a joint state and the product of its marginals.
    Entwine {
        input: PathBuf,
        /// Factor dimensions for a density-matrix input.
        #[arg(long, num_args = 2)]
        dims: Option<Vec<usize>>,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Round-trip checks for the state-and-effect representations.
    TriangleVerify {
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Fuzzy,
    Matrix,
    Scalar,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Tvd,
    Kvd,
    Trd,
}

enum CliError {
    Domain(String),
    Usage(String),
    VerificationFailed,
}

impl<E: Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Formats with 12 significant digits.
fn fmt12(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000000".into();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..=11).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn print_value(json: bool, command: &str, value: f64) {
    if json {
        println!(
            "{}",
            serde_json::json!({ "command": command, "value": value })
        );
    } else {
        println!("{}", fmt12(value));
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Tvd { a, b } => {
            let da = io::dist_from_json(&read(&a)?)?;
            let db = io::dist_from_json(&read(&b)?)?;
            print_value(cli.json, "tvd", tvd(&da, &db));
        }
        Cmd::Kvd { metric, a, b, plan } => {
            let space = io::metric_from_json(&read(&metric)?)?;
            let da = io::dist_from_json(&read(&a)?)?;
            let db = io::dist_from_json(&read(&b)?)?;
            let solved = kantorovich_plan(&space, &da, &db)?;
            if plan {
                println!(
                    "{}",
                    serde_json::json!({
                        "command": "kvd",
                        "value": solved.value,
                        "plan": solved.plan,
                        "row_potentials": solved.row_potentials,
                        "col_potentials": solved.col_potentials,
                    })
                );
            } else {
                print_value(cli.json, "kvd", solved.value.clamp(0.0, 1.0));
            }
        }
        Cmd::Trd { a, b } => {
            let ra = io::density_from_json(&read(&a)?)?;
            let rb = io::density_from_json(&read(&b)?)?;
            print_value(cli.json, "trd", trd(&ra, &rb)?);
        }
        Cmd::Vld { a, b } => {
            let ra = io::density_from_json(&read(&a)?)?;
            let rb = io::density_from_json(&read(&b)?)?;
            print_value(cli.json, "vld", vld(&ra, &rb)?);
        }
        Cmd::Ard { model, x, y } => {
            let (value, direct) = match model {
                ModelKind::Fuzzy => {
                    let p = io::predicate_from_json(&read(&x)?)?;
                    let q = io::predicate_from_json(&read(&y)?)?;
                    if p.points() != q.points() {
                        return Err(CliError::Domain(
                            "predicates live on different point lists".into(),
                        ));
                    }
                    let m = FuzzyModel::new(p.points().to_vec());
                    (ard(&m, &p, &q), m.direct_ard(&p, &q))
                }
                ModelKind::Matrix => {
                    let e = io::effect_from_json(&read(&x)?)?;
                    let d = io::effect_from_json(&read(&y)?)?;
                    if e.dim() != d.dim() {
                        return Err(CliError::Domain("effects have different dimensions".into()));
                    }
                    let m = MatrixEffectModel::new(e.dim());
                    (ard(&m, &e, &d), m.direct_ard(&e, &d))
                }
                ModelKind::Scalar => {
                    let parse = |text: &str| -> Result<f64, CliError> {
                        let v: f64 = serde_json::from_str(text)
                            .map_err(|e| CliError::Domain(format!("scalar file: {e}")))?;
                        if !(0.0..=1.0).contains(&v) {
                            return Err(CliError::Domain(format!("scalar {v} outside [0,1]")));
                        }
                        Ok(v)
                    };
                    let r = parse(&read(&x)?)?;
                    let s = parse(&read(&y)?)?;
                    let m = UnitIntervalModel;
                    (ard(&m, &r, &s), m.direct_ard(&r, &s))
                }
            };
            let direct = direct.expect("bundled models have native metrics");
            let agree = (value - direct).abs() <= 1e-8;
            println!(
                "{}",
                serde_json::json!({ "ard": value, "direct": direct, "agree": agree })
            );
            if !agree {
                return Err(CliError::Domain(format!(
                    "bisection ard {value} disagrees with direct metric {direct}"
                )));
            }
        }
        Cmd::Witness { kind, metric, a, b } => match kind {
            WitnessKind::Tvd => {
                let da = io::dist_from_json(&read(&a)?)?;
                let db = io::dist_from_json(&read(&b)?)?;
                let (subset, gap) = tvd_witness(&da, &db);
                let labels: Vec<String> = subset.iter().map(|l| l.as_str().to_string()).collect();
                if cli.json {
                    println!("{}", serde_json::json!({ "subset": labels, "gap": gap }));
                } else {
                    println!("subset: {{{}}}", labels.join(", "));
                    println!("gap: {}", fmt12(gap));
                }
            }
            WitnessKind::Kvd => {
                let metric = metric.ok_or_else(|| {
                    CliError::Usage("witness kvd requires --metric <file>".into())
                })?;
                let space = io::metric_from_json(&read(&metric)?)?;
                let da = io::dist_from_json(&read(&a)?)?;
                let db = io::dist_from_json(&read(&b)?)?;
                let w = lipschitz_witness(&space, &da, &db)?;
                let gap = witness_gap(&w, &da, &db)?;
                if cli.json {
                    println!(
                        "{}",
                        serde_json::json!({ "values": w.values(), "gap": gap })
                    );
                } else {
                    for (l, v) in w.space().points().iter().zip(w.values()) {
                        println!("{l}: {}", fmt12(*v));
                    }
                    println!("gap: {}", fmt12(gap));
                }
            }
            WitnessKind::Trd => {
                let ra = io::density_from_json(&read(&a)?)?;
                let rb = io::density_from_json(&read(&b)?)?;
                let (s, gap) = trd_witness(&ra, &rb)?;
                if cli.json {
                    let doc: serde_json::Value =
                        serde_json::from_str(&io::matrix_to_json(s.matrix()))
                            .expect("matrix JSON is valid");
                    println!("{}", serde_json::json!({ "effect": doc, "gap": gap }));
                } else {
                    println!("{}", io::matrix_to_json(s.matrix()));
                    println!("gap: {}", fmt12(gap));
                }
            }
        },
        Cmd::Entwine { input, dims } => {
            let text = read(&input)?;
            match dims {
                Some(dims) => {
                    let [d1, d2] = dims[..] else {
                        return Err(CliError::Usage("--dims takes exactly two values".into()));
                    };
                    let rho = io::density_from_json(&text)?;
                    let m1 = rho.partial_trace(d1, d2, Side::First)?;
                    let m2 = rho.partial_trace(d1, d2, Side::Second)?;
                    print_value(cli.json, "entwine", trd(&rho, &m1.tensor(&m2))?);
                }
                None => {
                    let omega = io::dist_from_json(&text)?;
                    let m1 = marginal(&omega, Side::First)?;
                    let m2 = marginal(&omega, Side::Second)?;
                    print_value(cli.json, "entwine", tvd(&omega, &tensor(&m1, &m2)));
                }
            }
        }
        Cmd::Verify { suite, seed } => {
            let suite = Suite::parse(&suite)
                .ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
            let report = run_suite(suite, seed);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.render_text());
            }
            if !report.all_passed() {
                return Err(CliError::VerificationFailed);
            }
        }
        Cmd::TriangleVerify { size, trials, seed } => {
            if size == 0 {
                return Err(CliError::Usage("--size must be at least 1".into()));
            }
            let classical = triangle_commutes_classical(size, trials, seed)?;
            let dim = size.clamp(2, 4);
            let effect = effect_roundtrip_residual(dim, trials, seed)?;
            let worst = classical.max_residual().max(effect);
            let pass = worst <= valdist_core::tol::HOM_TOL;
            println!(
                "{}",
                serde_json::json!({
                    "size": size,
                    "trials": trials,
                    "seed": seed,
                    "kleisli_roundtrip": classical.kleisli_roundtrip,
                    "state_roundtrip": classical.state_roundtrip,
                    "predicate_roundtrip": classical.predicate_roundtrip,
                    "effect_roundtrip": effect,
                    "effect_dim": dim,
                    "pass": pass,
                })
            );
            if !pass {
                return Err(CliError::VerificationFailed);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::VerificationFailed) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
