//! Closed-form predictions for `G(n, p, q)`.
//!
//! Constants hidden in asymptotic statements (the width of the `λ₂` band) are
//! set to 1. They are reporting conventions for the experiments, not bounds.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::SbmParams;
use crate::metrics::ResistanceMatrix;

/// Predictions bundled for one parameter set.
#[derive(Clone, Debug)]
pub struct TheoryPrediction {
    pub expected_resistance: ResistanceMatrix,
    pub lambda2: f64,
    pub lambda2_band: f64,
    pub tail_bound: f64,
    /// `8√2 / (np)^{3/2}`, the degree-free factor of [`residual_bound`].
    pub residual_scale: f64,
}

impl TheoryPrediction {
    pub fn new(params: &SbmParams) -> Result<Self> {
        let (lambda2, lambda2_band) = predicted_lambda2(params)?;
        Ok(Self {
            expected_resistance: predicted_mean_resistance(params)?,
            lambda2,
            lambda2_band,
            tail_bound: spectral_tail_bound(params),
            residual_scale: residual_scale(params),
        })
    }
}

/// Within-community and across-community expected resistances.
pub fn predicted_resistance_values(params: &SbmParams) -> Result<(f64, f64)> {
    params.validate()?;
    let SbmParams { n, p, q } = *params;
    if q <= 0.0 {
        return Err(Error::Undefined(format!(
            "expected resistance needs q > 0: the bottleneck term (p-q)/(p+q) * 4/(n^2 q) diverges at q = {q}"
        )));
    }
    let nf = n as f64;
    let within = 4.0 / (nf * (p + q));
    let bottleneck = (p - q) / (p + q) * 4.0 / (nf * nf * q);
    Ok((within, within + bottleneck))
}

/// `E[R] = 4/(n(p+q)) J + ((p−q)/(p+q)) 4/(n² q) K` with the diagonal set to zero,
/// where `K` marks across-community pairs.
pub fn predicted_mean_resistance(params: &SbmParams) -> Result<ResistanceMatrix> {
    let (within, across) = predicted_resistance_values(params)?;
    let n = params.n;
    ResistanceMatrix::new(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else if params.same_community(i, j) {
            within
        } else {
            across
        }
    }))
}

/// Second eigenvalue of the normalized adjacency, `(p−q)/(p+q)`, with the band
/// `√(2 ln n / (n(p+q)))`.
pub fn predicted_lambda2(params: &SbmParams) -> Result<(f64, f64)> {
    params.validate()?;
    let SbmParams { n, p, q } = *params;
    if p + q <= 0.0 {
        return Err(Error::Undefined(
            "lambda2 prediction needs p + q > 0".into(),
        ));
    }
    let nf = n as f64;
    Ok(((p - q) / (p + q), (2.0 * nf.ln() / (nf * (p + q))).sqrt()))
}

/// `8/√(np)`, bound on `max_{m≥3} |λ_m|`. Infinite when `np = 0`.
pub fn spectral_tail_bound(params: &SbmParams) -> f64 {
    8.0 / (params.n as f64 * params.p).sqrt()
}

fn residual_scale(params: &SbmParams) -> f64 {
    8.0 * 2f64.sqrt() / (params.n as f64 * params.p).powf(1.5)
}

/// `(1/d_i + 1/d_j) · 8√2 / (np)^{3/2}`, bound on the contribution of the
/// spectrum beyond `λ₂` to `R_ij`.
pub fn residual_bound(params: &SbmParams, di: f64, dj: f64) -> Result<f64> {
    if di <= 0.0 || dj <= 0.0 || di.is_nan() || dj.is_nan() {
        return Err(Error::InvalidParams(format!(
            "degrees must be positive, got {di} and {dj}"
        )));
    }
    Ok((1.0 / di + 1.0 / dj) * residual_scale(params))
}
