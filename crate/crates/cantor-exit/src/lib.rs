//! Exact arithmetic for ternary orbits of quadratic irrationals.
//!
//! Everything in this crate is integer and rational arithmetic on
//! arbitrary-precision numbers; no floating point enters any asserted
//! comparison. The pieces:
//!
//! * [`surd`] / [`poly`] — real quadratic surds `u + v*sqrt(d)` with exact
//!   sign, comparison and floor, and the primitive integer quadratics they
//!   come from.
//! * [`orbit`] — digit streams and itineraries under `θ ↦ {3θ}`, exit times
//!   from the middle-third Cantor set, R-block/L-run decompositions and the
//!   associated integer-power inequality checks.
//! * [`interval`] / [`certify`] — exact rational interval splitting and the
//!   certified finite case analyses over clearance sets.
//! * [`dioph`] — forced triadic approximants, quadratic-form values at
//!   3-power arguments, and bounded-norm equation enumeration.
//! * [`distance`] — exact distance to the Cantor set via the exit-scaling
//!   identity, with a brute-force oracle over Cantor levels.
//! * [`scan`] / [`report`] — deterministic corpus scans and their CSV /
//!   JSON-lines serializations.
//!
//! With the default `parallel` feature the corpus scan, the certificate
//! branch exploration and the equation enumeration fan out over rayon;
//! disabling it leaves sequential fallbacks with identical output.

pub mod certify;
pub mod dioph;
pub mod distance;
pub mod interval;
pub mod orbit;
pub mod poly;
pub mod report;
pub mod scan;
pub mod surd;

mod util;

pub use certify::{
    verify_early_r_hit, verify_early_r_with, verify_far_from_boundary, verify_far_with,
    Certificate, TheoremId, VerifyError,
};
pub use dioph::{
    an_bound_check, deep_block_report, deficiency_stratification, discriminant_identity_check,
    forced_approximant, norm_value, solve_bounded_norm, BoundedNormSolution, TriadicApproximant,
};
pub use distance::{
    brute_force_cantor_distance, cantor_distance_via_exit, clearance_bound_check, DistanceReport,
};
pub use interval::{clearance_set, iterate_symbolic, IntervalError, RatInterval, SymbolicBranch};
pub use orbit::{
    check_shallow_cover, check_universal_lrun, classify_deep, delta_cantor, exit_time,
    fractional_part, next_digit, rational_digits, run_block_decomposition, shallow_contribution,
    OrbitError, OrbitRecord, Symbol,
};
pub use poly::{PolyError, QuadraticPoly, Root};
pub use scan::{enumerate_corpus, run_scan, sample_corpus, OutputFormat, ScanConfig, ScanOutput};
pub use surd::{QuadraticSurd, SurdError};
