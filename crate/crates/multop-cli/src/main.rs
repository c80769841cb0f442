//! Command-line driver for the multiplication-operator toolkit.
//!
//! Subcommands: `analyze` (operator report as JSON), `evolve` (Cauchy-problem
//! trajectory as CSV plus a semigroup summary), `verify` (built-in or
//! config-scoped check suite), and `laplace` (resolvent–Laplace identity).
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numeric failure, 4 generation failure without `--force`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multop::config::ProblemConfig;
use multop::operator;
use multop::report;
use multop::semigroup;
use multop::suite::{self, SuiteOptions};
use multop::Error;

#[derive(Parser)]
#[command(name = "multop", version, about = "Matrix multiplication operators on discretized Banach function spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for all randomized probes (overrides the config's task.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Margin tolerance for analyzer verdicts (overrides task.tol).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable analyzer and emit an operator report.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the Cauchy problem over the configured time grid.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        /// Evolve even when the strong-generation check fails.
        #[arg(long)]
        force: bool,
    },
    /// Run the built-in verification suite or a config-scoped subset.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Named suite ("builtin").
        #[arg(long)]
        suite: Option<String>,
        /// Fault-injection fixture: perturb the analytic norm so the norm
        /// check must fail.
        #[arg(long, hide = true)]
        inject_norm_bug: bool,
    },
    /// Check the resolvent–Laplace identity for the configured symbol.
    Laplace {
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_)
            | Error::Parse { .. }
            | Error::DimensionMismatch(_)
            | Error::BadTimeGrid
            | Error::SetsNotNested
            | Error::SequenceModeUnsupported
            | Error::MissingTailEnvelope => 2,
            Error::NonFinite { .. }
            | Error::Singular { .. }
            | Error::EigenNonConvergence { .. }
            | Error::QuadratureNonConvergence
            | Error::SpectrumTooClose(_)
            | Error::InsufficientDecay { .. }
            | Error::Hypothesis(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze { common } => cmd_analyze(&common),
        Command::Evolve { common, force } => cmd_evolve(&common, force),
        Command::Verify {
            common,
            suite,
            inject_norm_bug,
        } => cmd_verify(&common, suite.as_deref(), inject_norm_bug),
        Command::Laplace { common } => cmd_laplace(&common),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Problem {
    config: ProblemConfig,
    space: multop::measure::SpaceRef,
    symbol: multop::symbol::SymbolFunction,
    norm: multop::space::NormSpec,
    seed: u64,
    tol: f64,
}

fn load_problem(common: &CommonArgs) -> Result<Problem, Failure> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Failure::config("--config PATH is required for this subcommand"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let config = ProblemConfig::from_json(&text)?;
    let space = config.build_space()?;
    let symbol = config.build_symbol(&space)?;
    let norm = config.build_norm()?;
    let seed = common.seed.unwrap_or(config.task.seed);
    let tol = common.tol.unwrap_or(config.task.tol);
    Ok(Problem {
        config,
        space,
        symbol,
        norm,
        seed,
        tol,
    })
}

fn emit(common: &CommonArgs, payload: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn cmd_analyze(common: &CommonArgs) -> Result<u8, Failure> {
    let problem = load_problem(common)?;
    problem.symbol.validate()?;
    let report = operator::analyze(&problem.symbol, &problem.norm, problem.tol)?;
    let json = report::to_json_pretty(&report::OperatorReportJson::from(&report));
    emit(common, &json)?;
    Ok(0)
}

fn cmd_evolve(common: &CommonArgs, force: bool) -> Result<u8, Failure> {
    let problem = load_problem(common)?;
    problem.symbol.validate()?;
    let generation = semigroup::generation_check(&problem.symbol)?;
    if !generation.generates_c0 && !force {
        eprintln!(
            "generation check failed ({}); rerun with --force to evolve anyway",
            generation.note
        );
        return Ok(4);
    }
    let initial = problem
        .config
        .build_initial(&problem.space, problem.symbol.dim())?;
    let trajectory = semigroup::solve_acp(&problem.symbol, &initial, &problem.config.task.t_grid)?;
    let integrated = semigroup::integrated_semigroup_check(&problem.symbol)?;
    let stability = semigroup::stability_bound(&problem.symbol, &problem.norm)?;
    let m = problem
        .config
        .task
        .m
        .unwrap_or(2 * problem.symbol.dim() as u32 + 1);
    let summary = report::semigroup_report_json(&generation, &integrated, &stability, m);
    let csv = report::trajectory_csv(&trajectory);
    let json = report::to_json_pretty(&summary);
    match &common.out {
        Some(_) => {
            emit(common, &csv)?;
            print!("{json}");
        }
        None => {
            print!("{csv}");
            eprint!("{json}");
        }
    }
    Ok(0)
}

fn cmd_verify(
    common: &CommonArgs,
    suite_name: Option<&str>,
    inject_norm_bug: bool,
) -> Result<u8, Failure> {
    let results = match suite_name {
        Some("builtin") => {
            let seed = common.seed.unwrap_or(0);
            suite::builtin_suite(&SuiteOptions {
                seed,
                inject_norm_bug,
            })
        }
        Some(other) => {
            return Err(Failure::config(format!(
                "unknown suite `{other}` (available: builtin)"
            )))
        }
        None => {
            let problem = load_problem(common)?;
            config_scoped_checks(&problem)?
        }
    };
    let text = suite::format_results(&results);
    emit(common, &text)?;
    if results.iter().all(|r| r.passed) {
        Ok(0)
    } else {
        Ok(1)
    }
}

/// Checks applicable to one configured symbol: norm-formula agreement and the
/// probe oracle, the dense spectrum oracle, the scalar range identity, the
/// semigroup law, the half-plane routes, and the configured norm's axioms.
fn config_scoped_checks(problem: &Problem) -> Result<Vec<suite::CheckResult>, Failure> {
    use multop::matrix::hausdorff_distance;
    let mut results = Vec::new();
    let u = &problem.symbol;
    u.validate()?;
    let finite = problem.space.is_finite_mode();

    let analytic = operator::operator_norm(u)?;
    let least_m = operator::operator_norm_least_m(u)?;
    let formulas_agree = analytic == least_m || (analytic - least_m).abs() <= 1e-12;
    let mut norm_detail = format!("sup formula {analytic:.6e}, least-M formula {least_m:.6e}");
    let mut norm_pass = formulas_agree;
    if finite && analytic.is_finite() {
        let dense = multop::oracle::assemble_dense(u)?;
        let estimate = multop::oracle::operator_norm_estimate(
            &dense,
            &problem.norm,
            problem.config.task.trials.max(1),
            problem.seed,
        )?;
        norm_pass &= (estimate - analytic).abs() <= 1e-9;
        norm_detail.push_str(&format!(", probe estimate {estimate:.6e}"));
    }
    results.push(suite::CheckResult {
        name: "norm_formulas_and_probe_oracle",
        passed: norm_pass,
        detail: norm_detail,
    });

    if finite && problem.space.atom_count() * u.dim() <= multop::oracle::MAX_DENSE_DIM {
        let dense = multop::oracle::dense_eigenvalues(&multop::oracle::assemble_dense(u)?)?;
        let spectrum = operator::spectrum(u)?;
        let distance = hausdorff_distance(&spectrum.points, &dense);
        results.push(suite::CheckResult {
            name: "spectrum_vs_dense_oracle",
            passed: distance <= 1e-8,
            detail: format!("Hausdorff distance {distance:.3e}"),
        });
    }

    if u.dim() == 1 {
        let range = operator::essential_range(u)?;
        let spectrum = operator::spectrum(u)?;
        results.push(suite::CheckResult {
            name: "scalar_spectrum_equals_essential_range",
            passed: range == spectrum,
            detail: format!("{} spectral points", spectrum.points.len()),
        });
    }

    if analytic.is_finite() {
        let mut worst: f64 = 0.0;
        for (s, t) in [(0.25, 0.5), (0.7, 1.1), (1.5, 0.2)] {
            let joint = semigroup::semigroup_at(u, s + t)?;
            let ts = semigroup::semigroup_at(u, s)?;
            let tt = semigroup::semigroup_at(u, t)?;
            for atom in problem.space.positive_atoms() {
                let product = ts.eval_at(atom)?.matmul(&tt.eval_at(atom)?);
                worst = worst.max(joint.eval_at(atom)?.sub(&product).sup_induced_norm());
            }
        }
        results.push(suite::CheckResult {
            name: "semigroup_law",
            passed: worst <= 1e-9,
            detail: format!("worst deviation {worst:.3e} over three (s, t) pairs"),
        });
    }

    let integrated = semigroup::integrated_semigroup_check(u)?;
    results.push(suite::CheckResult {
        name: "half_plane_routes_agree",
        passed: integrated.routes_agree,
        detail: format!(
            "w* = {}, half-plane bound {}",
            integrated.w_star, integrated.half_plane_w
        ),
    });

    let axioms = multop::space::verify_axioms(&problem.norm, &problem.space, 30, problem.seed);
    results.push(suite::CheckResult {
        name: "configured_norm_axioms",
        passed: axioms.all_pass(),
        detail: format!(
            "{} monotonicity violations over {} samples",
            axioms.monotonicity_violations, axioms.monotonicity_samples
        ),
    });

    Ok(results)
}

fn cmd_laplace(common: &CommonArgs) -> Result<u8, Failure> {
    let problem = load_problem(common)?;
    problem.symbol.validate()?;
    let lambda = problem.config.task.lambda.value();
    let m = problem
        .config
        .task
        .m
        .unwrap_or(2 * problem.symbol.dim() as u32 + 1);
    let integrated = semigroup::integrated_semigroup_check(&problem.symbol)?;
    let t_max = match problem.config.task.t_max {
        Some(t) => t,
        None => {
            let margin = lambda.re - integrated.w_star;
            if margin <= 0.0 {
                return Err(Error::InsufficientDecay {
                    re_lambda: lambda.re,
                    bound: integrated.w_star,
                    margin: 0.0,
                }
                .into());
            }
            12.0 * std::f64::consts::LN_10 / margin * 1.1
        }
    };
    let error = semigroup::laplace_identity_check(&problem.symbol, lambda, m, t_max)?;
    let payload = serde_json::json!({
        "lambda": {"re": lambda.re, "im": lambda.im},
        "m": m,
        "t_max": t_max,
        "w_star": integrated.w_star,
        "relative_error": error,
    });
    let mut text = serde_json::to_string_pretty(&payload).expect("json serializes");
    text.push('\n');
    emit(common, &text)?;
    Ok(0)
}
