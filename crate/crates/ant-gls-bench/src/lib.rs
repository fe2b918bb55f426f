//! Shared fixtures for the solver benches.

use ant_gls::{parse_tsplib, DistanceMatrix};

/// The bundled eil51 benchmark instance.
pub fn eil51() -> DistanceMatrix {
    let text = include_str!("../../../data/eil51.tsp");
    DistanceMatrix::from_instance(&parse_tsplib(text).expect("bundled instance parses"))
}
