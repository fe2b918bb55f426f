//! Seeded replicate experiments and their aggregated statistics, plus the
//! classify improvement benchmark.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;

use ant_gls::{
    classify_ls, compute_quality, random_tour, run_gls, DistanceMatrix, SolverConfig, SolverRng,
    Tour,
};

/// One experiment: `runs` independent solver replicates seeded
/// `base seed + run index`.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub runs: usize,
    pub config: SolverConfig,
    pub known_optimum: Option<u64>,
    pub jobs: usize,
}

/// Per-run summary, in the report schema.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub best_cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quality: Option<f64>,
    pub time_s: f64,
    pub cost_history: Vec<(u64, u64)>,
    #[serde(skip)]
    pub best_tour: Tour,
}

/// Aggregate columns over the replicate best costs.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateStats {
    pub best_length: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_quality: Option<f64>,
    pub average_length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_quality: Option<f64>,
    pub worst_length: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_quality: Option<f64>,
    pub average_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub config: SolverConfig,
    pub runs: Vec<RunSummary>,
    pub aggregate: AggregateStats,
}

/// Run the replicates (up to `jobs` in parallel) and aggregate. Results
/// are ordered by run index, so output does not depend on scheduling.
pub fn run_experiment(name: &str, d: &DistanceMatrix, spec: &ExperimentSpec) -> Result<SolveReport> {
    if spec.runs == 0 {
        bail!("need at least one run");
    }
    if let Some(opt) = spec.known_optimum {
        if opt == 0 {
            bail!("known optimum must be positive");
        }
    }
    spec.config
        .validate(d.n())
        .map_err(|e| anyhow::anyhow!("{e}"))?;

    let jobs = spec.jobs.max(1).min(spec.runs);
    let slots: Mutex<Vec<Option<RunSummary>>> = Mutex::new(vec![None; spec.runs]);
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<String>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= spec.runs {
                    return;
                }
                let mut config = spec.config.clone();
                config.seed = spec.config.seed.wrapping_add(idx as u64);
                match run_gls(d, &config) {
                    Ok(report) => {
                        let quality = spec
                            .known_optimum
                            .map(|opt| compute_quality(report.best_cost, opt).expect("opt > 0"));
                        let summary = RunSummary {
                            seed: config.seed,
                            best_cost: report.best_cost,
                            quality,
                            time_s: report.wall_time_s,
                            cost_history: report.cost_history,
                            best_tour: report.best_tour,
                        };
                        slots.lock().unwrap()[idx] = Some(summary);
                    }
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e.to_string());
                        return;
                    }
                }
            });
        }
    });

    if let Some(msg) = failure.into_inner().unwrap() {
        bail!("solver run failed: {msg}");
    }
    let runs: Vec<RunSummary> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|s| s.expect("every run completed"))
        .collect();

    let aggregate = aggregate(&runs, spec.known_optimum)?;
    Ok(SolveReport {
        instance: name.to_string(),
        config: spec.config.clone(),
        runs,
        aggregate,
    })
}

fn aggregate(runs: &[RunSummary], optimum: Option<u64>) -> Result<AggregateStats> {
    let best = runs.iter().map(|r| r.best_cost).min().expect("runs non-empty");
    let worst = runs.iter().map(|r| r.best_cost).max().expect("runs non-empty");
    let average = runs.iter().map(|r| r.best_cost as f64).sum::<f64>() / runs.len() as f64;
    let average_time_s = runs.iter().map(|r| r.time_s).sum::<f64>() / runs.len() as f64;
    let q = |cost: f64| -> Option<f64> {
        optimum.map(|opt| (cost - opt as f64) / opt as f64 * 100.0)
    };
    Ok(AggregateStats {
        best_length: best,
        best_quality: q(best as f64),
        average_length: average,
        average_quality: q(average),
        worst_length: worst,
        worst_quality: q(worst as f64),
        average_time_s,
    })
}

/// Classify improvement benchmark: `tours` random tours; each gets
/// `repeats` independent applications of the classify local search
/// (`classify_k` passes each), keeping its best result.
///
/// Reports the average improvement over the tour set,
/// (avg before - avg after) / avg before * 100, the best single-tour
/// improvement (before - after) / before * 100, and the mean wall time of
/// one application.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyBenchReport {
    pub instance: String,
    pub tours: usize,
    pub repeats: usize,
    pub classify_k: usize,
    pub seed: u64,
    pub percent_of_improving_in_average: f64,
    pub percent_of_improving_at_best_case: f64,
    pub time_s: f64,
}

pub fn classify_bench(
    name: &str,
    d: &DistanceMatrix,
    tours: usize,
    repeats: usize,
    classify_k: usize,
    seed: u64,
) -> Result<ClassifyBenchReport> {
    if tours == 0 || repeats == 0 || classify_k == 0 {
        bail!("tours, repeats and classify_k must be positive");
    }
    let n = d.n();
    let mut rng = SolverRng::seeded(seed);
    let mut before_sum = 0.0;
    let mut after_sum = 0.0;
    let mut best_improvement: f64 = 0.0;
    let mut applications = 0u64;
    let mut elapsed = 0.0;
    for _ in 0..tours {
        let tour = random_tour(n, &mut rng, d);
        let before = tour.cost();
        let mut after = before;
        let started = Instant::now();
        for _ in 0..repeats {
            let improved = classify_ls(&tour, d, classify_k, &mut rng);
            after = after.min(improved.cost());
            applications += 1;
        }
        elapsed += started.elapsed().as_secs_f64();
        before_sum += before as f64;
        after_sum += after as f64;
        let improvement = (before - after) as f64 / before as f64 * 100.0;
        best_improvement = best_improvement.max(improvement);
    }
    Ok(ClassifyBenchReport {
        instance: name.to_string(),
        tours,
        repeats,
        classify_k,
        seed,
        percent_of_improving_in_average: (before_sum - after_sum) / before_sum * 100.0,
        percent_of_improving_at_best_case: best_improvement,
        time_s: elapsed / applications as f64,
    })
}
