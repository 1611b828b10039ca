use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dpf_core::experiment::{
    export_front, run_experiment, summarize, ExperimentConfig, DEFAULT_REFERENCE_SIZE,
    DEFAULT_RUN_COUNT,
};
use dpf_core::optimizers::Algorithm;
use dpf_core::verify::{check_dominance_preservation, check_pareto_set_equality};
use dpf_core::{ProblemInstance, ProblemKind, Transform};

/// Exit status of `verify` when a violation is found.
const VIOLATIONS_FOUND: u8 = 3;

/// Degenerate Pareto-front benchmark harness.
///
/// Without a subcommand, runs a batch experiment and prints the IGD summary.
#[derive(Parser, Debug)]
#[command(version, args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that essential and full objectives order sampled pairs alike.
    Verify(VerifyArgs),
    /// Sample a reference front and write it as CSV.
    Front(FrontArgs),
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Problem kind (DPF1..DPF5, DPF1A..DPF5A, DTLZ5IM, DEMO_IMPLICIT, DEMO_PARTIAL).
    #[arg(long, required = true)]
    problem: ProblemKind,
    /// Number of objectives.
    #[arg(long)]
    m: usize,
    /// Number of essential objectives.
    #[arg(long)]
    d: usize,
    /// Distance-variable count (default depends on the problem).
    #[arg(long)]
    k: Option<usize>,
    /// identity, quadratic or sigmoid (default depends on the problem).
    #[arg(long)]
    transform: Option<Transform>,
}

impl InstanceArgs {
    fn build(&self) -> Result<ProblemInstance> {
        let mut inst = ProblemInstance::new(self.problem, self.m, self.d)?;
        if let Some(k) = self.k {
            inst = inst.with_k(k)?;
        }
        if let Some(t) = self.transform {
            inst = inst.with_transform(t)?;
        }
        Ok(inst)
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Problem kinds, comma separated or repeated.
    #[arg(long, value_delimiter = ',', required = true)]
    problem: Vec<ProblemKind>,
    /// Number of objectives.
    #[arg(long, required = true)]
    m: Option<usize>,
    /// Number of essential objectives.
    #[arg(long, required = true)]
    d: Option<usize>,
    /// Distance-variable count (default depends on the problem).
    #[arg(long)]
    k: Option<usize>,
    /// identity, quadratic or sigmoid (default depends on the problem).
    #[arg(long)]
    transform: Option<Transform>,
    /// NSGA2 and/or MOEAD, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "NSGA2")]
    algo: Vec<Algorithm>,
    /// Population size; MOEA/D needs a weight-lattice size (105, 132, 275, ...).
    #[arg(long, default_value_t = 100)]
    pop: usize,
    #[arg(long, default_value_t = 500)]
    gens: usize,
    /// Independent runs per (problem, algorithm).
    #[arg(long, default_value_t = DEFAULT_RUN_COUNT)]
    runs: usize,
    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference-front size used for IGD.
    #[arg(long = "ref-size", default_value_t = DEFAULT_REFERENCE_SIZE)]
    ref_size: usize,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of sampled pairs.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Cloud size for the Pareto-set comparison (0 skips it).
    #[arg(long = "pareto-samples", default_value_t = 2_000)]
    pareto_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FrontArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Number of front points.
    #[arg(long, default_value_t = DEFAULT_REFERENCE_SIZE)]
    count: usize,
    /// CSV file to write.
    #[arg(long)]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let (Some(m), Some(d)) = (args.m, args.d) else {
        bail!("--m and --d are required");
    };
    let cfg = ExperimentConfig {
        problems: args.problem,
        m,
        d,
        k: args.k,
        transform: args.transform,
        algorithms: args.algo,
        population_size: args.pop,
        generations: args.gens,
        run_count: args.runs,
        base_seed: args.seed,
        reference_front_size: args.ref_size,
        output_dir: args.out,
        workers: args.workers,
    };
    let records = run_experiment(&cfg).context("experiment failed")?;
    let table = summarize(&records)?;
    println!("problem\talgorithm\truns\tmean_igd\tstd_igd\tbest_seed");
    for row in &table.rows {
        println!(
            "{}\t{}\t{}\t{:.6e}\t{:.6e}\t{}{}",
            row.problem,
            row.algorithm,
            row.runs,
            row.mean_igd,
            row.std_igd,
            row.best_seed,
            if row.best_mean { "\t*" } else { "" }
        );
    }
    println!("results written to {}", cfg.output_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let inst = args.instance.build()?;
    let report = check_dominance_preservation(&inst, args.samples, args.seed)?;
    println!(
        "{}: {} pairs, {} violations",
        report.instance, report.samples_tested, report.violation_count
    );
    if let Some(cases) = report.threshold_cases {
        println!(
            "threshold cases: above {}, straddling {}, below {}",
            cases.above, cases.straddling, cases.below
        );
    }
    let mut passed = report.passed;
    if args.pareto_samples > 0 {
        let sets = check_pareto_set_equality(&inst, args.pareto_samples, args.seed)?;
        println!(
            "pareto sets over {} points: essential {}, full {}, equal {}",
            sets.samples,
            sets.essential_front.len(),
            sets.full_front.len(),
            sets.equal
        );
        passed &= sets.equal;
    }
    if let Some(path) = &args.report {
        report.write_json(path)?;
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VIOLATIONS_FOUND)
    })
}

fn front(args: FrontArgs) -> Result<ExitCode> {
    let inst = args.instance.build()?;
    let front = export_front(&inst, args.count, &args.out)?;
    println!("{} points of {} written to {}", front.len(), inst.label(), args.out.display());
    if let Some(s) = front.segments {
        println!("segments: full sphere {}, degenerate {}", s.full_sphere, s.degenerate);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Some(Command::Verify(args)) => verify(args),
        Some(Command::Front(args)) => front(args),
        None => run(cli.run),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
