//! TSPLIB instance parsing and integer distance matrices.
//!
//! Supports the EUC_2D subset of the TSPLIB95 text format (NAME, TYPE,
//! DIMENSION, EDGE_WEIGHT_TYPE, NODE_COORD_SECTION, EOF) plus a literal
//! matrix fixture format: one token `n` followed by `n*n` whitespace
//! separated integers in row-major order.

use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TsplibError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unsupported EDGE_WEIGHT_TYPE {0:?} (only EUC_2D is supported)")]
    UnsupportedEdgeWeightType(String),
    #[error("DIMENSION is {declared} but found {found} coordinate rows")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("missing required field or section: {0}")]
    Missing(&'static str),
    #[error("invalid matrix fixture: {0}")]
    BadFixture(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Edge weight function declared by an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EdgeWeightType {
    Euc2d,
}

impl fmt::Display for EdgeWeightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeWeightType::Euc2d => write!(f, "EUC_2D"),
        }
    }
}

/// A parsed TSPLIB problem: city coordinates in file order, 0-indexed
/// internally (file indices are 1-based).
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub dimension: usize,
    pub coords: Vec<(f64, f64)>,
    pub edge_weight_type: EdgeWeightType,
}

impl Instance {
    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self, TsplibError> {
        let content = std::fs::read_to_string(path)?;
        parse_tsplib(&content)
    }
}

/// Parse an EUC_2D TSPLIB instance from its text content.
pub fn parse_tsplib(content: &str) -> Result<Instance, TsplibError> {
    let mut name = None;
    let mut dimension = None;
    let mut ewt = None;
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut in_coords = false;

    for (idx, raw) in content.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if in_coords {
            if line == "EOF" {
                in_coords = false;
                continue;
            }
            let mut parts = line.split_whitespace();
            let id: usize = parts
                .next()
                .ok_or_else(|| malformed(lineno, "empty coordinate row"))?
                .parse()
                .map_err(|_| malformed(lineno, "city index is not an integer"))?;
            let x: f64 = parts
                .next()
                .ok_or_else(|| malformed(lineno, "missing x coordinate"))?
                .parse()
                .map_err(|_| malformed(lineno, "x coordinate is not a number"))?;
            let y: f64 = parts
                .next()
                .ok_or_else(|| malformed(lineno, "missing y coordinate"))?
                .parse()
                .map_err(|_| malformed(lineno, "y coordinate is not a number"))?;
            if id != coords.len() + 1 {
                return Err(malformed(
                    lineno,
                    &format!("expected city index {}, got {id}", coords.len() + 1),
                ));
            }
            coords.push((x, y));
            continue;
        }
        if line == "NODE_COORD_SECTION" {
            in_coords = true;
            continue;
        }
        if line == "EOF" {
            continue;
        }
        if let Some((key, value)) = split_header(line) {
            match key {
                "NAME" => name = Some(value.to_string()),
                "DIMENSION" => {
                    dimension = Some(value.parse::<usize>().map_err(|_| {
                        malformed(lineno, &format!("DIMENSION {value:?} is not an integer"))
                    })?)
                }
                "EDGE_WEIGHT_TYPE" => {
                    if value != "EUC_2D" {
                        return Err(TsplibError::UnsupportedEdgeWeightType(value.to_string()));
                    }
                    ewt = Some(EdgeWeightType::Euc2d);
                }
                // TYPE, COMMENT and anything else we do not need.
                _ => {}
            }
        } else {
            return Err(malformed(lineno, "expected `KEY : value` header line"));
        }
    }

    let name = name.ok_or(TsplibError::Missing("NAME"))?;
    let dimension = dimension.ok_or(TsplibError::Missing("DIMENSION"))?;
    let edge_weight_type = ewt.ok_or(TsplibError::Missing("EDGE_WEIGHT_TYPE"))?;
    if coords.is_empty() {
        return Err(TsplibError::Missing("NODE_COORD_SECTION"));
    }
    if coords.len() != dimension {
        return Err(TsplibError::DimensionMismatch {
            declared: dimension,
            found: coords.len(),
        });
    }
    if dimension < 3 {
        return Err(TsplibError::BadFixture(format!(
            "instance needs at least 3 cities, got {dimension}"
        )));
    }
    Ok(Instance {
        name,
        dimension,
        coords,
        edge_weight_type,
    })
}

fn malformed(line: usize, msg: &str) -> TsplibError {
    TsplibError::Malformed {
        line,
        msg: msg.to_string(),
    }
}

fn split_header(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim(), value.trim()))
}

/// TSPLIB EUC_2D distance: Euclidean distance rounded half-up to the
/// nearest integer.
pub fn euc2d_distance(a: (f64, f64), b: (f64, f64)) -> u32 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    ((dx * dx + dy * dy).sqrt() + 0.5).floor() as u32
}

/// Symmetric integer distance matrix with zero diagonal, stored dense.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn from_instance(inst: &Instance) -> Self {
        let n = inst.dimension;
        let mut d = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = euc2d_distance(inst.coords[i], inst.coords[j]);
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        DistanceMatrix { n, d }
    }

    /// Parse the literal fixture format: `n` then `n*n` integers row-major.
    /// The matrix must be symmetric with a zero diagonal.
    pub fn from_literal(text: &str) -> Result<Self, TsplibError> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| TsplibError::BadFixture("empty fixture".into()))?
            .parse()
            .map_err(|_| TsplibError::BadFixture("first token must be the size n".into()))?;
        if n == 0 {
            return Err(TsplibError::BadFixture("size n must be positive".into()));
        }
        let mut d = Vec::with_capacity(n * n);
        for tok in tokens.by_ref().take(n * n) {
            let v: i64 = tok
                .parse()
                .map_err(|_| TsplibError::BadFixture(format!("bad entry {tok:?}")))?;
            if v < 0 {
                return Err(TsplibError::BadFixture(format!("negative distance {v}")));
            }
            d.push(v as u32);
        }
        if d.len() != n * n {
            return Err(TsplibError::BadFixture(format!(
                "expected {} entries, got {}",
                n * n,
                d.len()
            )));
        }
        if tokens.next().is_some() {
            return Err(TsplibError::BadFixture("trailing tokens after matrix".into()));
        }
        for i in 0..n {
            if d[i * n + i] != 0 {
                return Err(TsplibError::BadFixture(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                if d[i * n + j] != d[j * n + i] {
                    return Err(TsplibError::BadFixture(format!(
                        "asymmetric at ({i},{j}): {} vs {}",
                        d[i * n + j],
                        d[j * n + i]
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    #[inline(always)]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    #[inline(always)]
    pub fn n(&self) -> usize {
        self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::demo8_matrix;

    const MINI: &str = "NAME : mini\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 6 0\nEOF\n";

    fn data(name: &str) -> String {
        let p = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/");
        std::fs::read_to_string(format!("{p}{name}")).unwrap()
    }

    #[test]
    fn parses_minimal_instance() {
        let inst = parse_tsplib(MINI).unwrap();
        assert_eq!(inst.name, "mini");
        assert_eq!(inst.dimension, 3);
        assert_eq!(inst.coords[1], (3.0, 4.0));
        assert_eq!(inst.edge_weight_type, EdgeWeightType::Euc2d);
    }

    #[test]
    fn parses_eil51_and_a280() {
        let e = parse_tsplib(&data("eil51.tsp")).unwrap();
        assert_eq!(e.dimension, 51);
        assert_eq!(e.coords.len(), 51);
        let a = parse_tsplib(&data("a280.tsp")).unwrap();
        assert_eq!(a.dimension, 280);
        assert_eq!(a.coords.len(), 280);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let text = MINI.replace("DIMENSION : 3", "DIMENSION : 4");
        match parse_tsplib(&text) {
            Err(TsplibError::DimensionMismatch { declared: 4, found: 3 }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_edge_weight_type_is_an_error() {
        let text = MINI.replace("EUC_2D", "GEO");
        assert!(matches!(
            parse_tsplib(&text),
            Err(TsplibError::UnsupportedEdgeWeightType(t)) if t == "GEO"
        ));
    }

    #[test]
    fn malformed_header_names_the_line() {
        let text = "NAME : x\nDIMENSION three\nEDGE_WEIGHT_TYPE : EUC_2D\n";
        match parse_tsplib(text) {
            Err(TsplibError::Malformed { line: 2, .. }) => {}
            other => panic!("expected malformed line 2, got {other:?}"),
        }
    }

    #[test]
    fn euc2d_examples() {
        assert_eq!(euc2d_distance((0.0, 0.0), (3.0, 4.0)), 5);
        assert_eq!(euc2d_distance((0.0, 0.0), (1.0, 1.0)), 1);
        // eil51 city 1 and city 2: nint(sqrt(12^2 + 3^2)) = nint(12.369...)
        assert_eq!(euc2d_distance((37.0, 52.0), (49.0, 49.0)), 12);
    }

    #[test]
    fn half_up_rounding() {
        // distance exactly 0.5 rounds up
        assert_eq!(euc2d_distance((0.0, 0.0), (0.5, 0.0)), 1);
        assert_eq!(euc2d_distance((0.0, 0.0), (0.49, 0.0)), 0);
    }

    #[test]
    fn eil51_matrix_golden_entry() {
        let inst = parse_tsplib(&data("eil51.tsp")).unwrap();
        let d = DistanceMatrix::from_instance(&inst);
        assert_eq!(d.dist(0, 1), 12);
        assert_eq!(d.dist(1, 0), 12);
    }

    #[test]
    fn matrices_are_symmetric_with_zero_diagonal() {
        for name in ["eil51.tsp", "eil76.tsp", "kroA100.tsp", "a280.tsp"] {
            let inst = parse_tsplib(&data(name)).unwrap();
            let d = DistanceMatrix::from_instance(&inst);
            let n = d.n();
            for i in 0..n {
                assert_eq!(d.dist(i, i), 0);
                for j in 0..n {
                    assert_eq!(d.dist(i, j), d.dist(j, i));
                }
            }
        }
    }

    #[test]
    fn demo_fixture_matches_known_entries() {
        let d = demo8_matrix();
        assert_eq!(d.n(), 8);
        // 1-based cities 4 and 5
        assert_eq!(d.dist(3, 4), 20);
        for i in 0..8 {
            assert_eq!(d.dist(i, i), 0);
        }
    }

    #[test]
    fn fixture_rejects_bad_input() {
        assert!(DistanceMatrix::from_literal("").is_err());
        assert!(DistanceMatrix::from_literal("2 0 1 1").is_err()); // too few entries
        assert!(DistanceMatrix::from_literal("2 0 1 2 0").is_err()); // asymmetric
        assert!(DistanceMatrix::from_literal("2 1 0 0 1").is_err()); // nonzero diagonal
        assert!(DistanceMatrix::from_literal("2 0 1 1 0 7").is_err()); // trailing token
        assert!(DistanceMatrix::from_literal("2 0 -1 -1 0").is_err()); // negative
    }

    #[test]
    fn parse_preserves_every_city() {
        // round-trip: serialize coords back out and reparse
        let inst = parse_tsplib(&data("eil76.tsp")).unwrap();
        let mut text = format!(
            "NAME : {}\nTYPE : TSP\nDIMENSION : {}\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n",
            inst.name, inst.dimension
        );
        for (i, (x, y)) in inst.coords.iter().enumerate() {
            text.push_str(&format!("{} {} {}\n", i + 1, x, y));
        }
        text.push_str("EOF\n");
        let again = parse_tsplib(&text).unwrap();
        assert_eq!(again.coords.len(), inst.coords.len());
        assert_eq!(again.coords, inst.coords);
    }
}
