//! Sample Fréchet mean networks for the two-community stochastic block model.
//!
//! The crate computes barycenters of network ensembles under two metrics:
//!
//! - the Hamming distance, where the sample Fréchet mean is found by exhaustive
//!   search on small graphs and compared against the majority-rule median;
//! - the resistance-perturbation distance, where the barycenter has a closed
//!   form (the entrywise mean of effective resistances) and is turned back into
//!   a weighted adjacency matrix by inverting the resistance map.
//!
//! [`theory`] carries the closed-form predictions for `G(n, p, q)` used as
//! oracles, and [`experiment`] drives seeded Monte-Carlo runs that compare the
//! two.

pub mod error;
pub mod experiment;
pub mod frechet;
pub mod graph;
pub mod io;
mod linalg;
pub mod metrics;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
pub use frechet::{
    adjacency_from_resistance, brute_force_frechet_mean, decompose_frechet,
    frechet_function_hamming, frechet_function_median, majority_median, resistance_barycenter,
    BarycenterResult, BruteForceResult, FrechetDecomposition, FrechetMetric,
};
pub use graph::{
    expected_matrix, sample_moments, sample_sbm, BinaryAdjacency, NetworkSample, SampleMoments,
    SbmParams, WeightedAdjacency,
};
pub use metrics::{
    delta, effective_resistance, hamming, resistance_distance, resistance_distance_sq,
    spectral_decomposition, ResistanceMatrix, SpectralDecomposition,
};
pub use theory::{
    predicted_lambda2, predicted_mean_resistance, residual_bound, spectral_tail_bound,
    TheoryPrediction,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
