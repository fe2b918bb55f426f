//! Bundled 8-city demonstration instance, given as a literal distance
//! matrix. Small enough to certify by exhaustive enumeration; used by the
//! trace command, the test suite and the benches.

use crate::tsplib::DistanceMatrix;

/// Literal matrix fixture text for the 8-city demo instance.
pub const DEMO8_FIXTURE: &str = "8
 0 12 19 31 22 17 23 12
12  0 15 37 21 28 35 22
19 15  0 50 36 35 35 21
31 37 50  0 20 21 37 38
22 21 36 20  0 25 40 33
17 28 35 21 25  0 16 18
23 35 35 37 40 16  0 14
12 22 21 38 33 18 14  0
";

/// The demo matrix, parsed from [`DEMO8_FIXTURE`].
pub fn demo8_matrix() -> DistanceMatrix {
    DistanceMatrix::from_literal(DEMO8_FIXTURE).expect("embedded fixture is valid")
}
