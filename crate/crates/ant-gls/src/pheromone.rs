//! Pheromone matrix with the ant-colony-system update rules: per-step
//! local evaporation toward the baseline level and best-tour-only global
//! reinforcement.

use serde::Serialize;
use thiserror::Error;

use crate::tour::Tour;
use crate::tsplib::DistanceMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum PheromoneError {
    #[error("parameter {name} = {value} out of range, expected {expected}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("local update needs two distinct cities, got {0} twice")]
    SameCity(usize),
    #[error("global update needs a positive tour cost")]
    ZeroCostTour,
}

/// Ant-colony-system parameters.
///
/// `alpha`: global evaporation in (0,1); `beta`: heuristic exponent >= 0;
/// `rho`: local evaporation in (0,1); `q0`: exploitation threshold in [0,1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcsParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub q0: f64,
}

impl AcsParams {
    pub fn new(alpha: f64, beta: f64, rho: f64, q0: f64) -> Result<Self, PheromoneError> {
        fn check(
            name: &'static str,
            value: f64,
            ok: bool,
            expected: &'static str,
        ) -> Result<(), PheromoneError> {
            if ok {
                Ok(())
            } else {
                Err(PheromoneError::ParamOutOfRange {
                    name,
                    value,
                    expected,
                })
            }
        }
        check("alpha", alpha, alpha > 0.0 && alpha < 1.0, "(0,1)")?;
        check("beta", beta, beta >= 0.0 && beta.is_finite(), ">= 0")?;
        check("rho", rho, rho > 0.0 && rho < 1.0, "(0,1)")?;
        check("q0", q0, (0.0..=1.0).contains(&q0), "[0,1]")?;
        Ok(AcsParams {
            alpha,
            beta,
            rho,
            q0,
        })
    }
}

impl Default for AcsParams {
    fn default() -> Self {
        AcsParams {
            alpha: 0.1,
            beta: 2.0,
            rho: 0.1,
            q0: 0.9,
        }
    }
}

/// Symmetric matrix of strictly positive pheromone levels.
#[derive(Debug, Clone)]
pub struct PheromoneMatrix {
    n: usize,
    tau: Vec<f64>,
    tau0: f64,
}

impl PheromoneMatrix {
    /// Standard initialization: tau0 = 1 / (n * L_nn) with L_nn the
    /// nearest-neighbor tour cost from city 0; every off-diagonal entry
    /// starts at tau0. A zero-cost greedy tour (all cities coincident)
    /// falls back to tau0 = 1, where the scale is meaningless anyway.
    pub fn init(d: &DistanceMatrix) -> Self {
        let n = d.n();
        let l_nn = nearest_neighbor_cost(d, 0);
        let tau0 = if l_nn == 0 {
            1.0
        } else {
            1.0 / (n as f64 * l_nn as f64)
        };
        Self::with_level(n, tau0)
    }

    /// Uniform matrix at an explicit level (level becomes tau0).
    pub fn with_level(n: usize, tau0: f64) -> Self {
        assert!(tau0 > 0.0, "pheromone level must be positive");
        PheromoneMatrix {
            n,
            tau: vec![tau0; n * n],
            tau0,
        }
    }

    #[inline(always)]
    pub fn get(&self, r: usize, s: usize) -> f64 {
        self.tau[r * self.n + s]
    }

    #[inline]
    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Reset every off-diagonal entry to `level` without changing tau0.
    pub fn fill(&mut self, level: f64) {
        assert!(level > 0.0);
        self.tau.fill(level);
    }

    #[inline]
    fn set_pair(&mut self, r: usize, s: usize, value: f64) {
        self.tau[r * self.n + s] = value;
        self.tau[s * self.n + r] = value;
    }

    /// Local evaporation toward tau0 on one edge:
    /// tau <- (1-rho)*tau + rho*tau0, written as tau + rho*(tau0 - tau) so
    /// tau0 is a bitwise-exact fixed point.
    pub fn local_update(&mut self, r: usize, s: usize, rho: f64) -> Result<(), PheromoneError> {
        if r == s {
            return Err(PheromoneError::SameCity(r));
        }
        let old = self.get(r, s);
        self.set_pair(r, s, old + rho * (self.tau0 - old));
        Ok(())
    }

    /// Global reinforcement on the edges of the best tour only:
    /// tau <- (1-alpha)*tau + alpha/best_cost on each tour edge.
    pub fn global_update(&mut self, best: &Tour, alpha: f64) -> Result<(), PheromoneError> {
        if best.cost() == 0 {
            return Err(PheromoneError::ZeroCostTour);
        }
        let deposit = 1.0 / best.cost() as f64;
        let order = best.order();
        let n = order.len();
        for i in 0..n {
            let r = order[i];
            let s = order[(i + 1) % n];
            let old = self.get(r, s);
            self.set_pair(r, s, old + alpha * (deposit - old));
        }
        Ok(())
    }

    /// CSV dump of the upper triangle (`i,j,tau`), for convergence debugging.
    pub fn snapshot_csv(&self) -> String {
        let mut out = String::from("i,j,tau\n");
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push_str(&format!("{i},{j},{}\n", self.get(i, j)));
            }
        }
        out
    }
}

/// Greedy nearest-neighbor tour cost from `start` (ties to the lowest city
/// index). Used for the tau0 scale.
pub fn nearest_neighbor_cost(d: &DistanceMatrix, start: usize) -> u64 {
    let n = d.n();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut current = start;
    let mut total = 0u64;
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .min_by_key(|&j| (d.dist(current, j), j))
            .expect("unvisited city exists");
        total += d.dist(current, next) as u64;
        visited[next] = true;
        current = next;
    }
    total + d.dist(current, start) as u64
}
