//! Sample Fréchet functions and barycenters.
//!
//! Under the Hamming distance the sample Fréchet mean is a combinatorial object:
//! [`brute_force_frechet_mean`] enumerates every graph on up to six vertices,
//! and [`decompose_frechet`] splits the Fréchet function into a term minimized
//! by the majority-rule median plus a residual that shrinks like `1/√N`.
//!
//! Under the resistance-perturbation distance the Fréchet function is quadratic
//! in the resistances of the candidate, so its minimizer has the entrywise mean
//! resistance. [`resistance_barycenter`] computes that mean and turns it back
//! into a weighted adjacency matrix with [`adjacency_from_resistance`].

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    pair_count, pairs, sample_moments, BinaryAdjacency, NetworkSample, SampleMoments,
    WeightedAdjacency,
};
use crate::linalg;
use crate::metrics::{
    delta, effective_resistance, effective_resistance_combinatorial, hamming, is_connected,
    resistance_matrix_distance_sq, ResistanceMatrix,
};

/// Largest vertex count accepted by [`brute_force_frechet_mean`] (`2^15` candidates).
pub const BRUTE_FORCE_MAX_N: usize = 6;

/// Maximum entrywise resistance error accepted when inverting resistances.
pub const ROUND_TRIP_TOL: f64 = 1e-6;

/// Condition estimates above this make the inversion fail as singular.
pub const MAX_CONDITION: f64 = 1e13;

/// Relative tolerance under which two resistance Fréchet values are tied.
pub const RESISTANCE_TIE_TOL: f64 = 1e-12;

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `(1/N) Σ_k d_H(B, A_k)²`.
pub fn frechet_function_hamming(b: &BinaryAdjacency, sample: &NetworkSample) -> Result<f64> {
    check_dims(b.n(), sample.n())?;
    let total: u64 = sample
        .iter()
        .map(|a| hamming(b, a).map(|d| d * d))
        .sum::<Result<u64>>()?;
    Ok(total as f64 / sample.len() as f64)
}

/// `(1/N) Σ_k d_H(B, A_k)`, which equals `δ(B, P̂)`.
pub fn frechet_function_median(b: &BinaryAdjacency, sample: &NetworkSample) -> Result<f64> {
    check_dims(b.n(), sample.n())?;
    let total: u64 = sample.iter().map(|a| hamming(b, a)).sum::<Result<u64>>()?;
    let value = total as f64 / sample.len() as f64;
    debug_assert!(delta(&b.to_weighted(), sample_moments(sample).phat())
        .is_ok_and(|via_delta| (value - via_delta).abs() <= 1e-9 * value.max(1.0)));
    Ok(value)
}

/// Entrywise majority vote: edge `(i, j)` is kept when it appears in at least
/// `N/2` of the networks (ties keep the edge).
pub fn majority_median(sample: &NetworkSample) -> BinaryAdjacency {
    let n = sample.n();
    let count = sample.len();
    let upper: Vec<bool> = pairs(n)
        .map(|(i, j)| 2 * sample.iter().filter(|a| a.has_edge(i, j)).count() >= count)
        .collect();
    BinaryAdjacency::from_upper(n, &upper).expect("upper triangle has pair_count entries")
}

/// `F₂(B) = F̂(B) + ζ_N(B)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FrechetDecomposition {
    pub f2: f64,
    pub fhat: f64,
    pub zeta: f64,
}

impl FrechetDecomposition {
    pub fn identity_residual(&self) -> f64 {
        (self.f2 - self.fhat - self.zeta).abs()
    }
}

/// `Σ (P̂_ij P̂_i'j' − ρ̂_{ij,i'j'})` over all ordered pairs of vertex pairs.
/// Independent of the candidate graph.
pub fn correlation_offset(moments: &SampleMoments) -> f64 {
    let n = moments.n();
    let phat: Vec<f64> = pairs(n).map(|(i, j)| moments.phat().get(i, j)).collect();
    let m = pair_count(n);
    let mut total = 0.0;
    for a in 0..m {
        for b in 0..m {
            total += phat[a] * phat[b] - moments.rho_by_index(a, b);
        }
    }
    total
}

/// Dominant term `F̂(B) = δ(B, P̂)² − Σ (P̂ P̂' − ρ̂)`.
pub fn dominant_term(b: &BinaryAdjacency, moments: &SampleMoments) -> Result<f64> {
    dominant_term_with_offset(b, moments, correlation_offset(moments))
}

fn dominant_term_with_offset(
    b: &BinaryAdjacency,
    moments: &SampleMoments,
    offset: f64,
) -> Result<f64> {
    check_dims(b.n(), moments.n())?;
    let d = delta(&b.to_weighted(), moments.phat())?;
    Ok(d * d - offset)
}

/// Residual `ζ_N(B) = 4 Σ (P̂_ij P̂_i'j' − ρ̂_{ij,i'j'})` over `[i,j]` a non-edge
/// of `B` and `[i',j']` an edge of `B`.
pub fn residual_term(b: &BinaryAdjacency, moments: &SampleMoments) -> Result<f64> {
    check_dims(b.n(), moments.n())?;
    let phat = moments.phat();
    let edges: Vec<(usize, usize)> = b.edges().collect();
    let mut total = 0.0;
    for (i, j) in b.non_edges() {
        for &(k, l) in &edges {
            total += phat.get(i, j) * phat.get(k, l) - moments.rho((i, j), (k, l));
        }
    }
    Ok(4.0 * total)
}

/// Splits the Hamming Fréchet function of `b` into its dominant term and residual.
pub fn decompose_frechet(
    b: &BinaryAdjacency,
    sample: &NetworkSample,
) -> Result<FrechetDecomposition> {
    check_dims(b.n(), sample.n())?;
    let moments = sample_moments(sample);
    Ok(FrechetDecomposition {
        f2: frechet_function_hamming(b, sample)?,
        fhat: dominant_term(b, &moments)?,
        zeta: residual_term(b, &moments)?,
    })
}

/// Smallest ratio `|F̂(B) − F̂(median)| / ‖B − median‖₁²` over candidates
/// different from `median` (`‖·‖₁` is the entrywise norm over the full matrix).
/// Returns `+∞` when no candidate differs from `median`.
pub fn variance_inequality_ratio<'a>(
    median: &BinaryAdjacency,
    moments: &SampleMoments,
    candidates: impl IntoIterator<Item = &'a BinaryAdjacency>,
) -> Result<f64> {
    let offset = correlation_offset(moments);
    let base = dominant_term_with_offset(median, moments, offset)?;
    let mut best = f64::INFINITY;
    for b in candidates {
        let l1 = 2 * hamming(b, median)?;
        if l1 == 0 {
            continue;
        }
        let gap = (dominant_term_with_offset(b, moments, offset)? - base).abs();
        best = best.min(gap / (l1 * l1) as f64);
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrechetMetric {
    Hamming,
    ResistanceSq,
}

/// Every global minimizer of the sample Fréchet function over the searched space.
#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub minimizers: Vec<BinaryAdjacency>,
    pub value: f64,
    pub candidates: usize,
    pub skipped_disconnected: usize,
}

/// Exhaustive minimization of `(1/N) Σ d²(B, A_k)` over all graphs on `n ≤ 6`
/// vertices. The resistance metric only searches connected candidates and
/// requires connected sample members.
pub fn brute_force_frechet_mean(
    sample: &NetworkSample,
    metric: FrechetMetric,
) -> Result<BruteForceResult> {
    let n = sample.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    match metric {
        FrechetMetric::Hamming => Ok(brute_force_hamming(sample)),
        FrechetMetric::ResistanceSq => brute_force_resistance(sample),
    }
}

fn brute_force_hamming(sample: &NetworkSample) -> BruteForceResult {
    let n = sample.n();
    let candidates = 1u64 << pair_count(n);
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for a in sample.iter() {
        *histogram.entry(a.to_mask().expect("n <= 6")).or_default() += 1;
    }
    let histogram: Vec<(u64, u64)> = histogram.into_iter().collect();

    // Sums of squared distances are integers, so ties are exact.
    let (best, masks) = (0..candidates)
        .into_par_iter()
        .fold(
            || (u64::MAX, Vec::new()),
            |(best, mut masks), c| {
                let s: u64 = histogram
                    .iter()
                    .map(|&(m, k)| {
                        let d = u64::from((c ^ m).count_ones());
                        k * d * d
                    })
                    .sum();
                if s < best {
                    (s, vec![c])
                } else {
                    if s == best {
                        masks.push(c);
                    }
                    (best, masks)
                }
            },
        )
        .reduce(
            || (u64::MAX, Vec::new()),
            |(b1, mut m1), (b2, m2)| match b1.cmp(&b2) {
                std::cmp::Ordering::Less => (b1, m1),
                std::cmp::Ordering::Greater => (b2, m2),
                std::cmp::Ordering::Equal => {
                    m1.extend(m2);
                    (b1, m1)
                }
            },
        );
    let mut masks = masks;
    masks.sort_unstable();
    BruteForceResult {
        minimizers: masks
            .into_iter()
            .map(|m| BinaryAdjacency::from_mask(n, m))
            .collect(),
        value: best as f64 / sample.len() as f64,
        candidates: candidates as usize,
        skipped_disconnected: 0,
    }
}

fn brute_force_resistance(sample: &NetworkSample) -> Result<BruteForceResult> {
    let n = sample.n();
    let candidates = 1u64 << pair_count(n);
    let sample_r: Vec<ResistanceMatrix> = sample
        .iter()
        .map(|a| effective_resistance(&a.to_weighted()))
        .collect::<Result<_>>()?;

    let values: Vec<Option<f64>> = (0..candidates)
        .into_par_iter()
        .map(|c| {
            let b = BinaryAdjacency::from_mask(n, c).to_weighted();
            if !is_connected(&b) {
                return None;
            }
            let r = effective_resistance(&b).ok()?;
            let total: f64 = sample_r
                .iter()
                .map(|rk| resistance_matrix_distance_sq(&r, rk).expect("same n"))
                .sum();
            Some(total / sample_r.len() as f64)
        })
        .collect();

    let skipped = values.iter().filter(|v| v.is_none()).count();
    let best = values
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NoFeasibleCandidate { skipped });
    }
    let tol = RESISTANCE_TIE_TOL * best.abs().max(1.0);
    let minimizers = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_some_and(|v| v - best <= tol))
        .map(|(c, _)| BinaryAdjacency::from_mask(n, c as u64))
        .collect();
    Ok(BruteForceResult {
        minimizers,
        value: best,
        candidates: candidates as usize,
        skipped_disconnected: skipped,
    })
}

/// Weighted adjacency recovered from a resistance matrix, with diagnostics.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub adjacency: WeightedAdjacency,
    /// `max |R(adjacency) − R|` over all entries.
    pub round_trip_residual: f64,
    /// 1-norm condition estimate of `L† + (α/n) J`.
    pub condition: f64,
}

/// Inverts the resistance map without enforcing the round-trip tolerance:
/// `L† = −½ (I − J/n) R (I − J/n)`, `L = [L† + (α/n) J]⁻¹ − J/(α n)`,
/// `A = −L + diag(L)`. Since `J/n` is the projector onto the null space of
/// `L†`, the inverse of `L† + (α/n) J` is `L + J/(α n)`.
pub fn invert_resistance(r: &ResistanceMatrix, alpha: f64) -> Result<Inversion> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!(
            "alpha = {alpha} must be finite and nonzero"
        )));
    }
    let n = r.n();
    let nf = n as f64;
    let centering = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / nf);
    let lap_pinv = (&centering * r.as_matrix() * &centering) * -0.5;
    let shift = DMatrix::from_element(n, n, alpha / nf);
    let system = &lap_pinv + &shift;
    let inverse = system.clone().lu().try_inverse().ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let condition = linalg::norm1(&system) * linalg::norm1(&inverse);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    let laplacian = inverse - DMatrix::from_element(n, n, 1.0 / (alpha * nf));
    let adjacency = WeightedAdjacency::from_matrix_symmetrized(-laplacian);
    let back = effective_resistance_combinatorial(&adjacency)?;
    let round_trip_residual = linalg::max_abs_diff(back.as_matrix(), r.as_matrix());
    Ok(Inversion {
        adjacency,
        round_trip_residual,
        condition,
    })
}

/// The weighted adjacency whose effective resistance is `r`. The result does not
/// depend on `alpha`; inputs whose reconstruction misses `r` by more than
/// [`ROUND_TRIP_TOL`] are rejected.
pub fn adjacency_from_resistance(r: &ResistanceMatrix, alpha: f64) -> Result<WeightedAdjacency> {
    let inv = invert_resistance(r, alpha)?;
    if inv.round_trip_residual > ROUND_TRIP_TOL {
        return Err(Error::NotRealizable {
            residual: inv.round_trip_residual,
        });
    }
    Ok(inv.adjacency)
}

/// Resistance-metric barycenter of a sample.
#[derive(Clone, Debug)]
pub struct BarycenterResult {
    pub mean_resistance: ResistanceMatrix,
    pub reconstructed: WeightedAdjacency,
    pub alpha: f64,
    pub round_trip_residual: f64,
    pub condition: f64,
}

impl BarycenterResult {
    pub fn min_entry(&self) -> f64 {
        self.reconstructed.min_off_diagonal()
    }

    pub fn max_entry(&self) -> f64 {
        self.reconstructed.max_off_diagonal()
    }
}

/// Per-network effective resistances, in sample order.
pub fn sample_resistances(sample: &NetworkSample) -> Result<Vec<ResistanceMatrix>> {
    sample
        .networks()
        .par_iter()
        .map(|a| effective_resistance(&a.to_weighted()))
        .collect()
}

/// Mean effective resistance of the sample and the weighted network realizing it.
/// Reconstructed entries are reported as computed, without clipping.
pub fn resistance_barycenter(sample: &NetworkSample, alpha: f64) -> Result<BarycenterResult> {
    let per_network = sample_resistances(sample)?;
    let mean_resistance = ResistanceMatrix::mean(&per_network)?;
    let inv = invert_resistance(&mean_resistance, alpha)?;
    if inv.round_trip_residual > ROUND_TRIP_TOL {
        return Err(Error::NotRealizable {
            residual: inv.round_trip_residual,
        });
    }
    Ok(BarycenterResult {
        mean_resistance,
        reconstructed: inv.adjacency,
        alpha,
        round_trip_residual: inv.round_trip_residual,
        condition: inv.condition,
    })
}
