//! Command-line front end: runs the continuous, discrete, stopping, and
//! classical experiments and the invariant suites, emitting CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on invalid arguments or I/O failure, 2 when a
//! verification suite reports a violated property.

mod report;

use std::path::PathBuf;
use std::process;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use multigrover::classical::{self, UrnModel};
use multigrover::continuous::{optimal_time, probability_curve, HamiltonianSpec, Propagator};
use multigrover::discrete::{iterate, optimal_iterations, GroverAngles};
use multigrover::state::{success_probability, SearchInstance};
use multigrover::stopping::{self, root_certificate, StoppingProblem};
use multigrover::verify::{self, Suite};

use report::{
    emit, resolve, ClassicalConfig, ClassicalReport, ClassicalSummary, ContinuousConfig,
    ContinuousReport, ContinuousSummary, CurveRow, DiscreteConfig, DiscreteReport, DiscreteSummary,
    Format, IterationRow, StoppingConfig, StoppingReport, StoppingSummary, VerifyConfig,
    VerifyReport, VerifyRow, VerifySummary,
};

#[derive(Parser)]
#[command(
    name = "multigrover",
    version,
    about = "Simulate and cross-verify quantum search with multiple marked items"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Success-probability curve under the search Hamiltonian, closed form
    /// against full-space evolution
    Continuous(ContinuousArgs),
    /// Success probabilities along the amplification iteration, closed form
    /// against full-space simulation
    Discrete(DiscreteArgs),
    /// Optimal restart count for the run-measure-retry schedule
    Stopping(StoppingArgs),
    /// Classical urn baseline: exact expectation and Monte Carlo estimate
    Classical(ClassicalArgs),
    /// Run a named invariant suite and report each property
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Database dimension
    #[arg(long)]
    n: usize,
    /// Mark items 1..=ELL
    #[arg(long, conflicts_with = "marked")]
    ell: Option<usize>,
    /// Explicit comma-separated 1-based marked indices
    #[arg(long, value_delimiter = ',')]
    marked: Option<Vec<usize>>,
}

impl InstanceArgs {
    fn instance(&self) -> Result<SearchInstance> {
        match (self.ell, &self.marked) {
            (Some(ell), None) => Ok(SearchInstance::first_marked(self.n, ell)?),
            (None, Some(marked)) => Ok(SearchInstance::new(self.n, marked)?),
            (None, None) => bail!("exactly one of --ell or --marked is required"),
            (Some(_), Some(_)) => unreachable!("argument parser rejects the combination"),
        }
    }
}

#[derive(Args)]
struct ContinuousArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Hamiltonian energy scale
    #[arg(long, default_value_t = 1.0)]
    energy: f64,
    /// Final time of the sample grid; defaults to twice the optimal time
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 50)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; defaults to $MULTIGROVER_OUTPUT_DIR/continuous.<ext> or
    /// standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DiscreteArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Largest iteration count in the trace; defaults to twice the optimum
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StoppingArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Number of balls in the urn
    #[arg(long)]
    n: u64,
    /// Number of marked balls; the whole urn may be marked
    #[arg(long)]
    ell: u64,
    /// Monte Carlo trial count
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Seed for the deterministic sharded sampler
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: state-core, continuous, discrete, stopping, classical,
    /// lemma26, or all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Database dimension for the lemma26 sandwich check
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Marked count for the lemma26 sandwich check; must divide n
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Energy scale for the lemma26 sandwich check
    #[arg(long, default_value_t = 1.0)]
    energy: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            process::exit(if benign { 0 } else { 1 });
        }
    };
    let started = Instant::now();
    match run(cli) {
        Ok(code) => {
            eprintln!("completed in {:?}", started.elapsed());
            process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Continuous(args) => run_continuous(args),
        Command::Discrete(args) => run_discrete(args),
        Command::Stopping(args) => run_stopping(args),
        Command::Classical(args) => run_classical(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_continuous(args: ContinuousArgs) -> Result<i32> {
    if args.steps < 2 {
        bail!("--steps must be at least 2");
    }
    let instance = args.instance.instance()?;
    let spec = HamiltonianSpec::new(instance, args.energy)?;
    let t_star = optimal_time(&spec)?;
    let t_max = args.t_max.unwrap_or(2.0 * t_star);
    if !(t_max.is_finite() && t_max >= 0.0) {
        bail!("--t-max must be a nonnegative finite time");
    }

    let times: Vec<f64> = (0..args.steps)
        .map(|i| t_max * i as f64 / (args.steps - 1) as f64)
        .collect();
    let analytic = probability_curve(&spec, &times)?;
    let propagator = Propagator::new(&spec)?;
    let start = spec.start().clone();

    let mut rows = Vec::with_capacity(args.steps);
    let mut max_abs_err = 0.0f64;
    for sample in &analytic {
        let evolved = propagator.apply(&start, sample.t)?;
        let p_full = success_probability(&evolved, spec.instance())?;
        let abs_err = (p_full - sample.probability).abs();
        max_abs_err = max_abs_err.max(abs_err);
        rows.push(CurveRow {
            t: sample.t,
            p_analytic: sample.probability,
            p_full,
            abs_err,
        });
    }

    let report = ContinuousReport {
        config: ContinuousConfig {
            command: "continuous",
            n: spec.instance().dimension(),
            marked: spec.instance().marked().to_vec(),
            energy: args.energy,
            t_max,
            steps: args.steps,
            format: args.format,
        },
        summary: ContinuousSummary {
            optimal_time: t_star,
            overlap: spec.overlap(),
            max_abs_err,
        },
        rows,
    };
    let destination = resolve(args.output, "continuous", args.format);
    emit(&report.render(args.format)?, &destination)?;
    Ok(0)
}

fn run_discrete(args: DiscreteArgs) -> Result<i32> {
    let instance = args.instance.instance()?;
    let angles = GroverAngles::new(&instance);
    let (m_star, p_at_m_star) = optimal_iterations(&instance);
    let iterations = args.iterations.unwrap_or(2 * m_star as usize);
    let trace = iterate(&instance, iterations)?;

    let rows: Vec<IterationRow> = trace
        .rows()
        .iter()
        .map(|row| IterationRow {
            m: row.m,
            p_closed: row.p_closed,
            p_full: row.p_full,
            abs_err: (row.p_full - row.p_closed).abs(),
        })
        .collect();

    let report = DiscreteReport {
        config: DiscreteConfig {
            command: "discrete",
            n: instance.dimension(),
            marked: instance.marked().to_vec(),
            iterations,
            format: args.format,
        },
        summary: DiscreteSummary {
            theta: angles.theta(),
            alpha: angles.alpha(),
            m_star,
            p_at_m_star,
            max_abs_err: trace.max_abs_err(),
        },
        rows,
    };
    let destination = resolve(args.output, "discrete", args.format);
    emit(&report.render(args.format)?, &destination)?;
    Ok(0)
}

fn run_stopping(args: StoppingArgs) -> Result<i32> {
    let instance = args.instance.instance()?;
    let angles = GroverAngles::new(&instance);
    let problem = StoppingProblem::from_angles(&angles)?;
    let solution = stopping::solve(&problem)?;
    let certificate = solution.j_real.map(|j| root_certificate(j, &problem));

    let report = StoppingReport {
        config: StoppingConfig {
            command: "stopping",
            n: instance.dimension(),
            marked: instance.marked().to_vec(),
            format: args.format,
        },
        summary: StoppingSummary {
            theta: problem.theta(),
            alpha: problem.alpha(),
            j_real: solution.j_real,
            j_first_order: solution.j_first_order,
            j_int: solution.j_int,
            e_at_j_int: solution.e_at_j_int,
            residual: solution.residual,
            certificate,
        },
    };
    let destination = resolve(args.output, "stopping", args.format);
    emit(&report.render(args.format)?, &destination)?;
    Ok(0)
}

fn run_classical(args: ClassicalArgs) -> Result<i32> {
    let urn = UrnModel::new(args.n, args.ell)?;
    let expectation = classical::expectation(&urn);
    let expectation_pmf = if urn.n() <= classical::EXACT_SUMMATION_CAP {
        Some(classical::expectation_from_pmf(&urn)?)
    } else {
        None
    };
    let estimate = classical::monte_carlo(&urn, args.trials, args.seed)?;

    let report = ClassicalReport {
        config: ClassicalConfig {
            command: "classical",
            n: args.n,
            ell: args.ell,
            trials: args.trials,
            seed: args.seed,
            format: args.format,
        },
        summary: ClassicalSummary {
            expectation,
            expectation_pmf,
            with_replacement: classical::with_replacement_expectation(&urn),
            mc_mean: estimate.mean,
            mc_standard_error: estimate.standard_error,
        },
    };
    let destination = resolve(args.output, "classical", args.format);
    emit(&report.render(args.format)?, &destination)?;
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let results = match suite {
        Suite::Lemma26 => verify::lemma26_suite(args.n, args.ell, args.energy),
        Suite::All => {
            let mut results = Vec::new();
            for base in [
                Suite::StateCore,
                Suite::Continuous,
                Suite::Discrete,
                Suite::Stopping,
                Suite::Classical,
            ] {
                results.extend(verify::run(base));
            }
            results.extend(verify::lemma26_suite(args.n, args.ell, args.energy));
            results
        }
        other => verify::run(other),
    };

    let rows: Vec<VerifyRow> = results
        .iter()
        .map(|r| VerifyRow {
            suite: r.suite.to_string(),
            property: r.property.to_string(),
            passed: r.passed,
            detail: r.detail.clone(),
        })
        .collect();
    let passed = rows.iter().filter(|r| r.passed).count();
    let report = VerifyReport {
        config: VerifyConfig {
            command: "verify",
            suite: suite.name().to_string(),
            n: args.n,
            ell: args.ell,
            energy: args.energy,
            format: args.format,
        },
        summary: VerifySummary {
            total: rows.len(),
            passed,
            failed: rows.len() - passed,
        },
        rows,
    };
    let destination = resolve(args.output, "verify", args.format);
    emit(&report.render(args.format)?, &destination)?;
    Ok(if report.summary.failed == 0 { 0 } else { 2 })
}
