//! The ant-based genetic-local-search driver: classify-improved random
//! population, ant-crossover children refined by 2-opt and 3-opt, elitist
//! truncation, and a best-tour global pheromone update per generation.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::crossover::ant_crossover;
use crate::local_search::{classify_ls, three_opt_ls, two_opt_ls};
use crate::pheromone::{AcsParams, PheromoneMatrix};
use crate::rng::SolverRng;
use crate::tour::{random_tour, Population, Tour};
use crate::tsplib::DistanceMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("population size {0} too small, need at least 2")]
    PopulationTooSmall(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("instance too small: {0} cities, need at least 3")]
    InstanceTooSmall(usize),
    #[error("known optimum must be positive")]
    BadOptimum,
}

/// How the initial population is constructed (each tour is then improved
/// by the classify pass either way).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitHeuristic {
    /// Uniformly random permutations.
    Random,
    /// Greedy nearest-neighbor walks from random start cities.
    NearestNeighbor,
}

/// All solver parameters. Defaults follow the reference experiment scale
/// (population 50, generation size 500, k = 3 pointers, classify K = 4)
/// with the canonical ant-colony-system settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub population_size: usize,
    pub generation_size: usize,
    pub pointers_k: usize,
    pub acs: AcsParams,
    pub classify_k: usize,
    /// Consecutive failed trials before a local search stops; `None` uses
    /// the instance size n.
    pub ls_patience: Option<usize>,
    pub init_heuristic: InitHeuristic,
    pub seed: u64,
    /// Safety cap on outer while-iterations.
    pub max_while_iterations: u64,
    /// Optional wall-clock limit in seconds.
    pub time_limit_s: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            population_size: 50,
            generation_size: 500,
            pointers_k: 3,
            acs: AcsParams::default(),
            classify_k: 4,
            ls_patience: None,
            init_heuristic: InitHeuristic::Random,
            seed: 0,
            max_while_iterations: 1000,
            time_limit_s: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, n: usize) -> Result<(), EngineError> {
        if n < 3 {
            return Err(EngineError::InstanceTooSmall(n));
        }
        if self.population_size < 2 {
            return Err(EngineError::PopulationTooSmall(self.population_size));
        }
        if self.generation_size == 0 {
            return Err(EngineError::InvalidConfig("generation_size must be positive".into()));
        }
        if self.pointers_k < 3 || self.pointers_k > n {
            return Err(EngineError::InvalidConfig(format!(
                "pointers_k = {} out of range 3..={n}",
                self.pointers_k
            )));
        }
        if self.classify_k == 0 {
            return Err(EngineError::InvalidConfig("classify_k must be positive".into()));
        }
        if self.ls_patience == Some(0) {
            return Err(EngineError::InvalidConfig("ls_patience must be positive".into()));
        }
        if self.max_while_iterations == 0 {
            return Err(EngineError::InvalidConfig(
                "max_while_iterations must be positive".into(),
            ));
        }
        if let Some(t) = self.time_limit_s {
            if t.is_nan() || t <= 0.0 {
                return Err(EngineError::InvalidConfig("time_limit_s must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// No child survived reduction: the population stopped changing.
    Converged,
    IterationCap,
    TimeLimit,
}

/// Everything a single run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub best_tour: Tour,
    pub best_cost: u64,
    pub iterations_completed: u64,
    pub children_generated: u64,
    pub wall_time_s: f64,
    /// Best population cost after initialization (iteration 0) and after
    /// each while-iteration.
    pub cost_history: Vec<(u64, u64)>,
    pub termination: Termination,
    pub config_echo: SolverConfig,
    pub seed: u64,
}

/// `population_size` tours built by the configured heuristic, each
/// improved by the classify pass.
pub fn initialize_population(
    config: &SolverConfig,
    d: &DistanceMatrix,
    rng: &mut SolverRng,
) -> Population {
    let n = d.n();
    let mut pop = Population::new(config.population_size);
    for _ in 0..config.population_size {
        let raw = match config.init_heuristic {
            InitHeuristic::Random => random_tour(n, rng, d),
            InitHeuristic::NearestNeighbor => nearest_neighbor_tour(rng.index(n), d),
        };
        pop.push(classify_ls(&raw, d, config.classify_k, rng));
    }
    pop
}

/// Greedy nearest-neighbor tour from `start`, ties to the lowest city index.
pub fn nearest_neighbor_tour(start: usize, d: &DistanceMatrix) -> Tour {
    let n = d.n();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut current = start;
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .min_by_key(|&j| (d.dist(current, j), j))
            .expect("unvisited city exists");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::new(order, d)
}

/// Two distinct member indices, uniform without replacement.
pub fn select_parents(pop: &Population, rng: &mut SolverRng) -> Result<(usize, usize), EngineError> {
    let len = pop.len();
    if len < 2 {
        return Err(EngineError::PopulationTooSmall(len));
    }
    let father = rng.index(len);
    let mut mother = rng.index(len - 1);
    if mother >= father {
        mother += 1;
    }
    Ok((father, mother))
}

/// Percentage excess over the known optimum:
/// (cost - optimum) / optimum * 100.
pub fn compute_quality(cost: u64, optimum: u64) -> Result<f64, EngineError> {
    if optimum == 0 {
        return Err(EngineError::BadOptimum);
    }
    Ok((cost as f64 - optimum as f64) / optimum as f64 * 100.0)
}

/// Run the full solver loop on a distance matrix.
pub fn run_gls(d: &DistanceMatrix, config: &SolverConfig) -> Result<RunReport, EngineError> {
    let mut tau = PheromoneMatrix::init(d);
    run_gls_with(d, config, &mut tau)
}

/// As [`run_gls`], but on a caller-owned pheromone matrix so its final
/// state can be inspected afterwards.
pub fn run_gls_with(
    d: &DistanceMatrix,
    config: &SolverConfig,
    tau: &mut PheromoneMatrix,
) -> Result<RunReport, EngineError> {
    let n = d.n();
    config.validate(n)?;
    let started = Instant::now();
    let deadline = config.time_limit_s.map(Duration::from_secs_f64);
    let patience = config.ls_patience.unwrap_or(n);

    let mut rng = SolverRng::seeded(config.seed);
    let mut pop = initialize_population(config, d, &mut rng);

    let mut history: Vec<(u64, u64)> = Vec::new();
    history.push((0, pop.best().expect("population non-empty").cost()));

    let mut iterations = 0u64;
    let mut children = 0u64;
    let mut termination = Termination::Converged;
    let mut changed = true;

    'outer: while changed {
        if iterations >= config.max_while_iterations {
            termination = Termination::IterationCap;
            break;
        }
        iterations += 1;
        for _ in 0..config.generation_size {
            if let Some(limit) = deadline {
                if started.elapsed() >= limit {
                    // keep the population consistent before leaving
                    pop.reduce();
                    history.push((iterations, pop.best().expect("non-empty").cost()));
                    termination = Termination::TimeLimit;
                    break 'outer;
                }
            }
            let (fi, mi) = select_parents(&pop, &mut rng)?;
            let father = pop.get(fi).clone();
            let mother = pop.get(mi).clone();
            let child = ant_crossover(
                &father,
                &mother,
                config.pointers_k,
                tau,
                &config.acs,
                d,
                &mut rng,
            )
            .map_err(|e| EngineError::InvalidConfig(e.to_string()))?;
            let child = two_opt_ls(&child, d, &mut rng, patience);
            let child = three_opt_ls(&child, d, &mut rng, patience);
            pop.push(child);
            children += 1;
        }
        changed = pop.reduce();
        let best = pop.best().expect("population non-empty");
        if best.cost() > 0 {
            tau.global_update(best, config.acs.alpha).expect("cost checked");
        }
        history.push((iterations, best.cost()));
    }

    let best = pop.best().expect("population non-empty").clone();
    Ok(RunReport {
        best_cost: best.cost(),
        best_tour: best,
        iterations_completed: iterations,
        children_generated: children,
        wall_time_s: started.elapsed().as_secs_f64(),
        cost_history: history,
        termination,
        config_echo: config.clone(),
        seed: config.seed,
    })
}
