use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ant_gls::SolverConfig;
use ant_gls_cli::experiment::{
    classify_bench, run_experiment, ClassifyBenchReport, ExperimentSpec, SolveReport,
};
use ant_gls_cli::{final_pheromone_csv, load_instance, trace::trace_figures};

#[derive(Parser)]
#[command(
    name = "ant-gls",
    about = "Genetic local search TSP solver with pheromone-guided pointer-based crossover",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded solver replicates on an instance and aggregate the results
    Solve(SolveArgs),
    /// Measure how much the classify local search improves random tours
    ClassifyBench(ClassifyBenchArgs),
    /// Print the reference crossover and classify traces on the demo instance
    TraceFigures,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Init {
    Random,
    /// Nearest-neighbor walks from random start cities
    Nn,
}

#[derive(Args)]
struct SolveArgs {
    /// TSPLIB file or literal matrix fixture
    #[arg(long)]
    instance: PathBuf,
    /// Number of independent replicates (seeds base..base+N-1)
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Base seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    pop_size: usize,
    #[arg(long, default_value_t = 500)]
    gen_size: usize,
    /// Heuristic exponent
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Exploitation threshold
    #[arg(long, default_value_t = 0.9)]
    q0: f64,
    /// Local evaporation rate
    #[arg(long, default_value_t = 0.1)]
    rho: f64,
    /// Global evaporation rate
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Cursors per parent in the crossover
    #[arg(long, default_value_t = 3)]
    pointers: usize,
    /// Classify passes per population-initialization tour
    #[arg(long, default_value_t = 4)]
    classify_k: usize,
    /// Consecutive failed local-search trials before giving up
    /// (default: instance size)
    #[arg(long)]
    ls_patience: Option<usize>,
    /// Initial population construction
    #[arg(long, value_enum, default_value_t = Init::Random)]
    init: Init,
    /// Known optimum; enables the quality columns
    #[arg(long)]
    optimum: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Concurrent replicates
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Safety cap on outer iterations per run
    #[arg(long, default_value_t = 1000)]
    max_iters: u64,
    /// Wall-clock limit per run, seconds
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write the final pheromone matrix of the last run as CSV
    #[arg(long)]
    dump_pheromone: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyBenchArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random tours to improve
    #[arg(long, default_value_t = 30)]
    tours: usize,
    /// Independent applications per tour (the best result is kept)
    #[arg(long, default_value_t = 30)]
    repeats: usize,
    /// Classify passes per application
    #[arg(long, default_value_t = 4)]
    classify_k: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::ClassifyBench(args) => cmd_classify_bench(args),
        Command::TraceFigures => {
            print!("{}", trace_figures());
            Ok(())
        }
    };
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn solver_config(args: &SolveArgs) -> Result<SolverConfig> {
    let acs = ant_gls::AcsParams::new(args.alpha, args.beta, args.rho, args.q0)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(SolverConfig {
        population_size: args.pop_size,
        generation_size: args.gen_size,
        pointers_k: args.pointers,
        acs,
        classify_k: args.classify_k,
        ls_patience: args.ls_patience,
        init_heuristic: match args.init {
            Init::Random => ant_gls::InitHeuristic::Random,
            Init::Nn => ant_gls::InitHeuristic::NearestNeighbor,
        },
        seed: args.seed,
        max_while_iterations: args.max_iters,
        time_limit_s: args.time_limit,
    })
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let loaded = load_instance(&args.instance)?;
    let spec = ExperimentSpec {
        runs: args.runs,
        config: solver_config(&args)?,
        known_optimum: args.optimum,
        jobs: args.jobs,
    };
    let report = run_experiment(&loaded.name, &loaded.matrix, &spec)?;

    if let Some(path) = &args.dump_pheromone {
        let csv = final_pheromone_csv(&loaded.matrix, &spec)?;
        std::fs::write(path, csv)
            .with_context(|| format!("writing pheromone dump {}", path.display()))?;
    }

    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => print!("{}", solve_csv(&report)),
        Format::Text => print!("{}", solve_text(&report)),
    }
    Ok(())
}

fn solve_csv(report: &SolveReport) -> String {
    let mut out = String::new();
    let with_quality = report.runs.iter().any(|r| r.quality.is_some());
    if with_quality {
        out.push_str("run,seed,best_cost,quality,time_s\n");
    } else {
        out.push_str("run,seed,best_cost,time_s\n");
    }
    for (i, r) in report.runs.iter().enumerate() {
        if let Some(q) = r.quality {
            out.push_str(&format!("{i},{},{},{q},{}\n", r.seed, r.best_cost, r.time_s));
        } else {
            out.push_str(&format!("{i},{},{},{}\n", r.seed, r.best_cost, r.time_s));
        }
    }
    out.push('\n');
    out.push_str("key,value\n");
    let a = &report.aggregate;
    out.push_str(&format!("best_length,{}\n", a.best_length));
    if let Some(q) = a.best_quality {
        out.push_str(&format!("best_quality,{q}\n"));
    }
    out.push_str(&format!("average_length,{}\n", a.average_length));
    if let Some(q) = a.average_quality {
        out.push_str(&format!("average_quality,{q}\n"));
    }
    out.push_str(&format!("worst_length,{}\n", a.worst_length));
    if let Some(q) = a.worst_quality {
        out.push_str(&format!("worst_quality,{q}\n"));
    }
    out.push_str(&format!("average_time_s,{}\n", a.average_time_s));
    out
}

fn solve_text(report: &SolveReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "instance {} ({} runs, base seed {})\n",
        report.instance,
        report.runs.len(),
        report.config.seed
    ));
    for (i, r) in report.runs.iter().enumerate() {
        match r.quality {
            Some(q) => out.push_str(&format!(
                "run {i:3}  seed {:3}  best {:8}  quality {q:6.2}%  {:8.2}s\n",
                r.seed, r.best_cost, r.time_s
            )),
            None => out.push_str(&format!(
                "run {i:3}  seed {:3}  best {:8}  {:8.2}s\n",
                r.seed, r.best_cost, r.time_s
            )),
        }
    }
    let a = &report.aggregate;
    let fq = |q: Option<f64>| q.map(|q| format!(" ({q:.2}%)")).unwrap_or_default();
    out.push_str(&format!("best length    {}{}\n", a.best_length, fq(a.best_quality)));
    out.push_str(&format!(
        "average length {:.2}{}\n",
        a.average_length,
        fq(a.average_quality)
    ));
    out.push_str(&format!("worst length   {}{}\n", a.worst_length, fq(a.worst_quality)));
    out.push_str(&format!("average time   {:.2} s\n", a.average_time_s));
    if let Some(best) = report
        .runs
        .iter()
        .min_by_key(|r| r.best_cost)
        .map(|r| &r.best_tour)
    {
        out.push_str(&format!("best tour: {}\n", best.to_line()));
    }
    out
}

fn cmd_classify_bench(args: ClassifyBenchArgs) -> Result<()> {
    let loaded = load_instance(&args.instance)?;
    let report = classify_bench(
        &loaded.name,
        &loaded.matrix,
        args.tours,
        args.repeats,
        args.classify_k,
        args.seed,
    )?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => print!("{}", classify_csv(&report)),
        Format::Text => print!("{}", classify_text(&report)),
    }
    Ok(())
}

fn classify_csv(report: &ClassifyBenchReport) -> String {
    let mut out = String::from("key,value\n");
    out.push_str(&format!("instance,{}\n", report.instance));
    out.push_str(&format!("tours,{}\n", report.tours));
    out.push_str(&format!("repeats,{}\n", report.repeats));
    out.push_str(&format!("classify_k,{}\n", report.classify_k));
    out.push_str(&format!("seed,{}\n", report.seed));
    out.push_str(&format!(
        "percent_of_improving_in_average,{}\n",
        report.percent_of_improving_in_average
    ));
    out.push_str(&format!(
        "percent_of_improving_at_best_case,{}\n",
        report.percent_of_improving_at_best_case
    ));
    out.push_str(&format!("time_s,{}\n", report.time_s));
    out
}

fn classify_text(report: &ClassifyBenchReport) -> String {
    format!(
        "instance {} ({} tours x {} applications, {} passes each, seed {})\n\
         percent of improving in average   {:.2}\n\
         percent of improving at best case {:.2}\n\
         time per application              {:.6} s\n",
        report.instance,
        report.tours,
        report.repeats,
        report.classify_k,
        report.seed,
        report.percent_of_improving_in_average,
        report.percent_of_improving_at_best_case,
        report.time_s,
    )
}
