//! Distances between networks: Hamming, its `[0, 1]`-weighted extension, and the
//! resistance-perturbation distance built on effective resistances.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{pairs, BinaryAdjacency, WeightedAdjacency};
use crate::linalg;

/// Weights at or below this value do not count as edges for connectivity.
pub const EDGE_WEIGHT_EPS: f64 = 1e-12;

/// Per-vertex tolerance on `1 - λ` below which a normalized-Laplacian eigenvalue
/// is treated as zero (scaled by `n`).
pub const PINV_EIGEN_TOL: f64 = 1e-10;

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Number of vertex pairs on which `a` and `b` differ, `½‖A − B‖₁`.
pub fn hamming(a: &BinaryAdjacency, b: &BinaryAdjacency) -> Result<u64> {
    check_dims(a.n(), b.n())?;
    Ok(pairs(a.n())
        .filter(|&(i, j)| a.get(i, j) != b.get(i, j))
        .count() as u64)
}

fn check_unit_interval(a: &WeightedAdjacency) -> Result<()> {
    for (i, j) in pairs(a.n()) {
        let value = a.get(i, j);
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfUnitInterval { i, j, value });
        }
    }
    Ok(())
}

/// Bilinear extension of the Hamming distance to matrices with entries in `[0, 1]`:
/// `Σ a_ij + Σ b_ij − 2 Σ a_ij b_ij` over pairs `i < j`.
pub fn delta(a: &WeightedAdjacency, b: &WeightedAdjacency) -> Result<f64> {
    check_dims(a.n(), b.n())?;
    check_unit_interval(a)?;
    check_unit_interval(b)?;
    let (mut sa, mut sb, mut cross) = (0.0, 0.0, 0.0);
    for (i, j) in pairs(a.n()) {
        let (x, y) = (a.get(i, j), b.get(i, j));
        sa += x;
        sb += y;
        cross += x * y;
    }
    Ok(sa + sb - 2.0 * cross)
}

/// Pairwise effective resistances of a connected network.
#[derive(Clone, Debug, PartialEq)]
pub struct ResistanceMatrix {
    matrix: DMatrix<f64>,
}

impl ResistanceMatrix {
    /// Checks shape, symmetry, zero diagonal and nonnegativity.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let w = WeightedAdjacency::new(matrix)?;
        if let Some((i, j)) = pairs(w.n()).find(|&(i, j)| w.get(i, j) < 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "negative resistance {} at ({i}, {j})",
                w.get(i, j)
            )));
        }
        Ok(Self {
            matrix: w.into_matrix(),
        })
    }

    pub(crate) fn from_raw(matrix: DMatrix<f64>) -> Self {
        Self {
            matrix: WeightedAdjacency::from_matrix_symmetrized(matrix).into_matrix(),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Entrywise mean, summed in the given order.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a ResistanceMatrix>) -> Result<Self> {
        let mut iter = items.into_iter();
        let first = iter.next().ok_or(Error::EmptySample)?;
        let mut sum = first.matrix.clone();
        let mut count = 1usize;
        for r in iter {
            check_dims(first.n(), r.n())?;
            sum += &r.matrix;
            count += 1;
        }
        Ok(Self {
            matrix: sum / count as f64,
        })
    }
}

/// Number of connected components, counting only edges heavier than [`EDGE_WEIGHT_EPS`].
pub fn connected_components(a: &WeightedAdjacency) -> usize {
    let n = a.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for (i, j) in pairs(n) {
        if a.get(i, j) > EDGE_WEIGHT_EPS {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                components -= 1;
            }
        }
    }
    components
}

pub fn is_connected(a: &WeightedAdjacency) -> bool {
    connected_components(a) <= 1
}

/// Eigendecomposition of the normalized adjacency `Â = D^{-1/2} A D^{-1/2}`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    degrees: Vec<f64>,
}

impl SpectralDecomposition {
    /// Eigenvalues `λ₁ ≥ … ≥ λ_n`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unit eigenvector of `λ_{m+1}` (0-based `m`).
    pub fn eigenvector(&self, m: usize) -> DVector<f64> {
        self.eigenvectors.column(m).into_owned()
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Orthogonal projector `Π` onto eigenvector `m` (0-based).
    pub fn projector(&self, m: usize) -> DMatrix<f64> {
        let v = self.eigenvectors.column(m);
        v * v.transpose()
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Total degree `τ = Σ d_i`.
    pub fn total_degree(&self) -> f64 {
        self.degrees.iter().sum()
    }

    /// Perron projector `τ⁻¹ d^{1/2} (d^{1/2})ᵀ`.
    pub fn perron_projector(&self) -> DMatrix<f64> {
        let s = DVector::from_iterator(self.degrees.len(), self.degrees.iter().map(|d| d.sqrt()));
        (&s * s.transpose()) / self.total_degree()
    }

    /// Largest `|λ_m|` for `m ≥ 3` (1-based), i.e. the spectrum outside the two
    /// leading eigenvalues.
    pub fn tail_magnitude(&self) -> f64 {
        self.eigenvalues
            .iter()
            .skip(2)
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    /// `𝓛† = Σ (1 − λ_m)⁻¹ Π_m` over eigenvalues with `1 − λ_m` above
    /// `PINV_EIGEN_TOL · n`.
    pub fn normalized_laplacian_pinv(&self) -> DMatrix<f64> {
        let n = self.degrees.len();
        let tol = PINV_EIGEN_TOL * n as f64;
        let mut pinv = DMatrix::zeros(n, n);
        for (m, &lambda) in self.eigenvalues.iter().enumerate() {
            let mu = 1.0 - lambda;
            if mu > tol {
                let v = self.eigenvectors.column(m);
                pinv.ger(1.0 / mu, &v, &v, 1.0);
            }
        }
        pinv
    }

    /// Number of normalized-Laplacian eigenvalues treated as zero.
    pub fn nullity(&self) -> usize {
        let tol = PINV_EIGEN_TOL * self.degrees.len() as f64;
        self.eigenvalues.iter().filter(|&&l| 1.0 - l <= tol).count()
    }
}

pub fn spectral_decomposition(a: &WeightedAdjacency) -> Result<SpectralDecomposition> {
    let degrees = a.degrees();
    if let Some(vertex) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegree { vertex });
    }
    let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let n = a.n();
    let normalized = DMatrix::from_fn(n, n, |i, j| a.get(i, j) * inv_sqrt[i] * inv_sqrt[j]);
    let (eigenvalues, eigenvectors) = linalg::symmetric_eigen_desc(normalized);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        degrees,
    })
}

fn require_connected(a: &WeightedAdjacency) -> Result<()> {
    match connected_components(a) {
        0 | 1 => Ok(()),
        components => Err(Error::Disconnected { components }),
    }
}

/// Effective resistances `R_ij = ⟨u_i − u_j, 𝓛†(u_i − u_j)⟩` with `u_i = e_i/√d_i`,
/// from the eigendecomposition of the normalized Laplacian.
pub fn effective_resistance(a: &WeightedAdjacency) -> Result<ResistanceMatrix> {
    require_connected(a)?;
    let spectral = spectral_decomposition(a)?;
    let pinv = spectral.normalized_laplacian_pinv();
    let scale: Vec<f64> = spectral.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let n = a.n();
    let gram = DMatrix::from_fn(n, n, |i, j| pinv[(i, j)] * scale[i] * scale[j]);
    Ok(ResistanceMatrix::from_raw(linalg::resistance_from_gram(
        &gram,
    )))
}

/// Effective resistances from the combinatorial Laplacian,
/// `R_ij = L†_ii + L†_jj − 2 L†_ij`.
///
/// Independent of [`effective_resistance`]; also accepts signed weights as long
/// as `L + J/n` is invertible.
pub fn effective_resistance_combinatorial(a: &WeightedAdjacency) -> Result<ResistanceMatrix> {
    let l = linalg::laplacian(a.as_matrix());
    let pinv = linalg::laplacian_pinv(&l).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    Ok(ResistanceMatrix::from_raw(linalg::resistance_from_gram(
        &pinv,
    )))
}

/// `Σ_{i<j} (R_ij − R'_ij)²` between two resistance matrices.
pub fn resistance_matrix_distance_sq(r: &ResistanceMatrix, s: &ResistanceMatrix) -> Result<f64> {
    check_dims(r.n(), s.n())?;
    Ok(pairs(r.n())
        .map(|(i, j)| (r.get(i, j) - s.get(i, j)).powi(2))
        .sum())
}

/// Resistance-perturbation distance as a sum of squares, the quantity that
/// enters Fréchet functions directly.
pub fn resistance_distance_sq(a: &WeightedAdjacency, b: &WeightedAdjacency) -> Result<f64> {
    check_dims(a.n(), b.n())?;
    resistance_matrix_distance_sq(&effective_resistance(a)?, &effective_resistance(b)?)
}

/// Square root of [`resistance_distance_sq`].
pub fn resistance_distance(a: &WeightedAdjacency, b: &WeightedAdjacency) -> Result<f64> {
    resistance_distance_sq(a, b).map(f64::sqrt)
}
