//! Oracles for testing the samplers and reductions: exact tables, distance
//! and goodness-of-fit estimates, exhaustive distinguishers on tiny
//! instances, and advantage estimation.

mod advantage;
mod chisq;
mod distinguisher;
mod pmf;
mod report;
mod tv;
mod unknown_noise;

pub use advantage::{advantage_estimate, from_counts, hoeffding_halfwidth, AdvantageEstimate, DEFAULT_CONFIDENCE};
pub use chisq::{chi_square_gof, tally, ChiSquare, MIN_EXPECTED};
pub use distinguisher::{
    Distinguisher, ExhaustiveDistinguisher, SecretSpace, MAX_Q, MAX_SAMPLES, MAX_SECRETS, TORUS_BINS,
};
pub use pmf::{brute_force_pmf, pmf_1d, PmfTable, DEFAULT_RADIUS_MULT};
pub use report::{fmt12, Report, Row};
pub use tv::{binned_tv, empirical_tv, exact_tv, separation_distance, BinningSpec, TvEstimate};
pub use unknown_noise::{variance_step, UnknownNoiseDecision, UnknownNoiseWrapper, DEFAULT_FAILURE};
