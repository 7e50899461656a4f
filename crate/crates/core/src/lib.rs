//! Identifiability analysis and single-source DOA estimation for
//! non-uniform linear arrays.
//!
//! A linear array observes a far-field source only through wrapped pairwise
//! phase differences, so two distinct directions can become
//! indistinguishable once sensor spacings exceed half a wavelength. This
//! crate decides, exactly, whether a given geometry admits such collisions:
//!
//! * [`geometry`] — layouts as exact rationals, pairwise distances, and the
//!   reduction `d = scale * primitive` to a primitive integer vector;
//! * [`phasewrap`] — principal phases in [-pi, pi) and integer cycle counts;
//! * [`identifiability`] — the verdict, explicit ambiguity witnesses, and a
//!   lattice search for identifiable layouts;
//! * [`estimator`] — wrapped phase-difference patterns over a sine grid,
//!   grid-matching DOA estimation, and a brute-force collision oracle that
//!   independently validates the analytic verdict;
//! * [`simulator`] — seeded single-snapshot observations and Monte Carlo
//!   RMSE sweeps;
//! * [`io`] — the layout file format and machine-readable documents.
//!
//! All analysis on the rational side is exact: verdicts are discontinuous
//! in the distances, so nothing is decided on floats.

pub mod error;
pub mod estimator;
pub mod geometry;
pub mod identifiability;
pub mod io;
pub mod phasewrap;
pub mod rational;
pub mod simulator;

pub use error::{Error, Result};
pub use estimator::{
    build_wpdp, collision_oracle, collision_scan, match_doa, DoaEstimate, WpdpGrid,
};
pub use geometry::{
    pair_distances, pair_distances_subset, reduce_to_primitive, PairDistances, RationalReduction,
    SensorLayout,
};
pub use identifiability::{
    ambiguous_direction_pairs, check_distances, check_identifiability, q_max_vector,
    search_identifiable_layouts, IdentifiabilityReport, QMaxVector, Verdict,
};
pub use phasewrap::{
    circular_distance, cycle_count, decompose, true_phase, wrap, wrapped_vector,
    PhaseDecomposition, WrappedPhase,
};
pub use rational::DEFAULT_DENOMINATOR_LIMIT;
pub use simulator::{
    generate_snapshot, monte_carlo_rmse, principal_phases, steering_vector, SourceConfig,
    Snapshot, SweepPoint,
};
