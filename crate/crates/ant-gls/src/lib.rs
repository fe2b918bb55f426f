//! Symmetric TSP solver: genetic local search whose crossover operator is
//! a pheromone-guided ant.
//!
//! The pieces, bottom up:
//!
//! - [`tsplib`]: EUC_2D TSPLIB parsing, literal matrix fixtures, integer
//!   distance matrices.
//! - [`tour`]: tours with cached integer cost, random construction, the
//!   population container.
//! - [`rng`]: the seedable randomness contract (one stream per run).
//! - [`pheromone`]: the ant-colony-system pheromone matrix and its local
//!   and global update rules.
//! - [`crossover`]: pointer-based crossover (PBX) cursors, the greedy and
//!   ant transition rules over the pointed-city set, and the plain ACS
//!   constructor baseline.
//! - [`local_search`]: randomized 2-opt and 3-opt single-move descents
//!   with exact delta costs, and the classify pass.
//! - [`engine`]: the full solver loop and its run report.
//!
//! The `demo` module carries a small 8-city instance certified by
//! exhaustive enumeration, used across tests and traces.

pub mod crossover;
pub mod demo;
pub mod engine;
pub mod local_search;
pub mod pheromone;
pub mod rng;
pub mod tour;
pub mod tsplib;

pub use crossover::{
    acs_construct_tour, acs_transition_probabilities, ant_crossover, pbx_crossover, Branch,
    Candidate, CrossoverError, CrossoverState, ParentCursors, Side, StepRecord,
};
pub use engine::{
    compute_quality, initialize_population, nearest_neighbor_tour, run_gls, run_gls_with,
    select_parents, EngineError, InitHeuristic, RunReport, SolverConfig, Termination,
};
pub use local_search::{
    apply_three_opt, apply_two_opt, classify_ls, classify_method, classify_pass,
    propose_three_opt, propose_two_opt, three_opt_ls, three_opt_predicted_costs, two_opt_ls,
    two_opt_predicted_cost, MoveError, MoveKind, MoveProposal,
};
pub use pheromone::{nearest_neighbor_cost, AcsParams, PheromoneError, PheromoneMatrix};
pub use rng::SolverRng;
pub use tour::{is_permutation, random_tour, tour_cost, Population, Tour};
pub use tsplib::{
    euc2d_distance, parse_tsplib, DistanceMatrix, EdgeWeightType, Instance, TsplibError,
};
