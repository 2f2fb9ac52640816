//! Network space, the two-community block model, sampling and sample moments.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{split_seed, stream_rng};

/// Number of unordered vertex pairs `{i, j}`, `i < j`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` in row-major upper-triangular order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j` in row-major upper-triangular order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Adjacency matrix of a simple undirected graph on `n` labeled vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryAdjacency {
    n: usize,
    entries: Vec<u8>,
}

impl BinaryAdjacency {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for (i, j) in pairs(n) {
            g.set(i, j, true);
        }
        g
    }

    /// Builds a graph from 0-based edge endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidMatrix(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidMatrix(format!("self-loop at vertex {i}")));
            }
            g.set(i, j, true);
        }
        Ok(g)
    }

    /// Builds a graph from a full `n x n` 0/1 matrix, checking symmetry and the diagonal.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i}, {j}) = {v} is not 0/1"
                    )));
                }
                if rows[j].get(i) != Some(&v) {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({i}, {j})")));
                }
                if i == j && v != 0 {
                    return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
                }
                g.entries[i * n + j] = v;
            }
        }
        Ok(g)
    }

    /// Builds a graph from an upper-triangular indicator vector in [`pairs`] order.
    pub fn from_upper(n: usize, upper: &[bool]) -> Result<Self> {
        if upper.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                left: upper.len(),
                right: pair_count(n),
            });
        }
        let mut g = Self::empty(n);
        for ((i, j), &e) in pairs(n).zip(upper) {
            g.set(i, j, e);
        }
        Ok(g)
    }

    /// Builds a graph from a bitmask over [`pairs`] order (bit `k` is pair `k`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(pair_count(n) <= 64);
        let mut g = Self::empty(n);
        for (k, (i, j)) in pairs(n).enumerate() {
            g.set(i, j, mask >> k & 1 == 1);
        }
        g
    }

    /// Bitmask over [`pairs`] order; `None` when the graph has more than 64 pairs.
    pub fn to_mask(&self) -> Option<u64> {
        if pair_count(self.n) > 64 {
            return None;
        }
        Some(
            pairs(self.n)
                .enumerate()
                .filter(|&(_, (i, j))| self.has_edge(i, j))
                .fold(0u64, |m, (k, _)| m | 1 << k),
        )
    }

    fn set(&mut self, i: usize, j: usize, edge: bool) {
        let v = u8::from(edge);
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.n + j] == 1
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    /// Number of edges `m(B)`.
    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edge set `E(B)` as pairs `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pairs(self.n).filter(|&(i, j)| self.has_edge(i, j))
    }

    /// Non-edge set `Ē(B)` as pairs `i < j`.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pairs(self.n).filter(|&(i, j)| !self.has_edge(i, j))
    }

    /// Upper-triangular indicator in [`pairs`] order.
    pub fn upper(&self) -> Vec<bool> {
        pairs(self.n).map(|(i, j)| self.has_edge(i, j)).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.entries[i * self.n..(i + 1) * self.n]
            .iter()
            .filter(|&&v| v == 1)
            .count()
    }

    pub fn to_weighted(&self) -> WeightedAdjacency {
        WeightedAdjacency {
            matrix: DMatrix::from_fn(self.n, self.n, |i, j| f64::from(self.get(i, j))),
        }
    }
}

/// Symmetric real matrix with zero diagonal.
///
/// Holds edge-probability matrices, sample means, and reconstructed barycenters.
/// Entries are not required to be nonnegative because reconstructions from
/// averaged resistances may leave `[0, 1]`; operations that need a sign or range
/// condition check it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAdjacency {
    matrix: DMatrix<f64>,
}

impl WeightedAdjacency {
    /// Relative asymmetry tolerated on construction.
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        for i in 0..n {
            if matrix[(i, i)] != 0.0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "non-finite entry at ({i}, {j})"
                    )));
                }
                if (a - b).abs() > Self::SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Builds a matrix from its upper triangle in [`pairs`] order.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != pair_count(n) {
            return Err(Error::DimensionMismatch {
                left: upper.len(),
                right: pair_count(n),
            });
        }
        let mut m = DMatrix::zeros(n, n);
        for ((i, j), &w) in pairs(n).zip(upper) {
            m[(i, j)] = w;
            m[(j, i)] = w;
        }
        Self::new(m)
    }

    /// Symmetrizes `(M + Mᵀ)/2` and zeroes the diagonal.
    pub(crate) fn from_matrix_symmetrized(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)] = 0.0;
            for j in i + 1..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { matrix: m }
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

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.matrix.row_iter().map(|r| r.sum()).collect()
    }

    pub fn min_off_diagonal(&self) -> f64 {
        pairs(self.n())
            .map(|(i, j)| self.get(i, j))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        pairs(self.n())
            .map(|(i, j)| self.get(i, j))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Parameters of `G(n, p, q)`: two communities of `n/2` vertices, edge
/// probability `p` within a community and `q` across.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SbmParams {
    pub n: usize,
    pub p: f64,
    pub q: f64,
}

impl SbmParams {
    pub fn new(n: usize, p: f64, q: f64) -> Result<Self> {
        let params = Self { n, p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "n = {} must be a positive even number (two equal communities)",
                self.n
            )));
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} is not in [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Community sign: `+1` for the first `n/2` vertices, `-1` for the rest.
    pub fn sigma(&self, i: usize) -> f64 {
        if i < self.n / 2 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn same_community(&self, i: usize, j: usize) -> bool {
        (i < self.n / 2) == (j < self.n / 2)
    }

    /// Edge probability `P_ij` (zero on the diagonal).
    pub fn probability(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else if self.same_community(i, j) {
            self.p
        } else {
            self.q
        }
    }
}

/// The block matrix `P`: `p` within communities, `q` across, zero diagonal.
pub fn expected_matrix(params: &SbmParams) -> WeightedAdjacency {
    WeightedAdjacency {
        matrix: DMatrix::from_fn(params.n, params.n, |i, j| params.probability(i, j)),
    }
}

/// An ordered list of networks on a common vertex set.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSample {
    networks: Vec<BinaryAdjacency>,
    seed: Option<u64>,
}

impl NetworkSample {
    pub fn new(networks: Vec<BinaryAdjacency>, seed: Option<u64>) -> Result<Self> {
        let first = networks.first().ok_or(Error::EmptySample)?;
        let n = first.n();
        if let Some(bad) = networks.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.n(),
            });
        }
        Ok(Self { networks, seed })
    }

    pub fn from_networks(networks: Vec<BinaryAdjacency>) -> Result<Self> {
        Self::new(networks, None)
    }

    pub fn n(&self) -> usize {
        self.networks[0].n()
    }

    pub fn len(&self) -> usize {
        self.networks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.networks.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn networks(&self) -> &[BinaryAdjacency] {
        &self.networks
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BinaryAdjacency> {
        self.networks.iter()
    }
}

/// Draws one network; edges are visited in row-major upper-triangular order and
/// `(i, j)` is present iff a uniform `f64` in `[0, 1)` falls below `P_ij`.
pub fn sample_network(params: &SbmParams, seed: u64) -> BinaryAdjacency {
    let mut rng = stream_rng(seed);
    let n = params.n;
    let mut g = BinaryAdjacency::empty(n);
    for (i, j) in pairs(n) {
        let u: f64 = rng.gen();
        if u < params.probability(i, j) {
            g.set(i, j, true);
        }
    }
    g
}

/// Draws `count` independent networks from `G(n, p, q)`.
///
/// Network `k` uses the stream `split_seed(seed, k)`, so the result depends only
/// on `(params, count, seed)`.
pub fn sample_sbm(params: &SbmParams, count: usize, seed: u64) -> Result<NetworkSample> {
    params.validate()?;
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let networks = (0..count as u64)
        .into_par_iter()
        .map(|k| sample_network(params, split_seed(seed, k)))
        .collect();
    NetworkSample::new(networks, Some(seed))
}

/// Largest `n` for which the pairwise correlation table is stored densely.
pub const DENSE_RHO_MAX_N: usize = 32;

#[derive(Clone, Debug)]
enum Correlation {
    /// `counts[a * pairs + b]` = number of networks holding both pair `a` and pair `b`.
    Dense { pairs: usize, counts: Vec<u32> },
    /// Per-network edge bitsets over pair indices, evaluated on request.
    OnDemand { bits: Vec<Vec<u64>> },
}

/// Entrywise sample mean `P̂` and pairwise sample correlations `ρ̂`.
#[derive(Clone, Debug)]
pub struct SampleMoments {
    n: usize,
    count: usize,
    phat: WeightedAdjacency,
    rho: Correlation,
}

impl SampleMoments {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample_size(&self) -> usize {
        self.count
    }

    pub fn phat(&self) -> &WeightedAdjacency {
        &self.phat
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.rho, Correlation::Dense { .. })
    }

    /// `ρ̂` between pair indices `a` and `b` (see [`pair_index`]).
    pub fn rho_by_index(&self, a: usize, b: usize) -> f64 {
        let hits = match &self.rho {
            Correlation::Dense { pairs, counts } => counts[a * pairs + b] as usize,
            Correlation::OnDemand { bits } => bits
                .iter()
                .filter(|w| w[a / 64] >> (a % 64) & 1 == 1 && w[b / 64] >> (b % 64) & 1 == 1)
                .count(),
        };
        hits as f64 / self.count as f64
    }

    /// `ρ̂_{ij,i'j'} = (1/N) Σ_k a_ij a_i'j'`.
    pub fn rho(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
        self.rho_by_index(pair_index(self.n, i, j), pair_index(self.n, k, l))
    }
}

pub fn sample_moments(sample: &NetworkSample) -> SampleMoments {
    sample_moments_with_cap(sample, DENSE_RHO_MAX_N)
}

/// Like [`sample_moments`], storing `ρ̂` densely only when `n <= dense_cap`.
pub fn sample_moments_with_cap(sample: &NetworkSample, dense_cap: usize) -> SampleMoments {
    let n = sample.n();
    let count = sample.len();
    let m = pair_count(n);

    let mut hits = vec![0u32; m];
    let uppers: Vec<Vec<bool>> = sample.iter().map(BinaryAdjacency::upper).collect();
    for upper in &uppers {
        for (h, &e) in hits.iter_mut().zip(upper) {
            *h += u32::from(e);
        }
    }
    let phat_upper: Vec<f64> = hits.iter().map(|&h| h as f64 / count as f64).collect();
    let phat = WeightedAdjacency::from_upper(n, &phat_upper).expect("sample mean is symmetric");

    let rho = if n <= dense_cap {
        let mut counts = vec![0u32; m * m];
        for upper in &uppers {
            let present: Vec<usize> = (0..m).filter(|&a| upper[a]).collect();
            for &a in &present {
                for &b in &present {
                    counts[a * m + b] += 1;
                }
            }
        }
        Correlation::Dense { pairs: m, counts }
    } else {
        let words = m.div_ceil(64);
        let bits = uppers
            .iter()
            .map(|upper| {
                let mut w = vec![0u64; words];
                for (a, _) in upper.iter().enumerate().filter(|(_, &e)| e) {
                    w[a / 64] |= 1 << (a % 64);
                }
                w
            })
            .collect();
        Correlation::OnDemand { bits }
    };

    SampleMoments {
        n,
        count,
        phat,
        rho,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_enumerates_upper_triangle() {
        for n in 2..8 {
            for (k, (i, j)) in pairs(n).enumerate() {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(pair_index(n, j, i), k);
            }
        }
    }

    #[test]
    fn expected_matrix_degenerate_probabilities() {
        let p = expected_matrix(&SbmParams::new(4, 1.0, 0.0).unwrap());
        let edges: Vec<_> = pairs(4).filter(|&(i, j)| p.get(i, j) == 1.0).collect();
        assert_eq!(edges, vec![(0, 1), (2, 3)]);
        assert!(pairs(4).all(|(i, j)| p.get(i, j) == 1.0 || p.get(i, j) == 0.0));
    }

    #[test]
    fn expected_matrix_two_vertices() {
        // One vertex per community: the only pair is an across pair.
        let p = expected_matrix(&SbmParams::new(2, 0.3, 0.7).unwrap());
        assert_eq!(
            p.as_matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 0.7, 0.7, 0.0])
        );
    }

    #[test]
    fn expected_matrix_block_structure() {
        let p = expected_matrix(&SbmParams::new(6, 0.5, 0.1).unwrap());
        for i in 0..6 {
            assert_eq!(p.get(i, i), 0.0);
            for j in 0..6 {
                if i == j {
                    continue;
                }
                let want = if (i < 3) == (j < 3) { 0.5 } else { 0.1 };
                assert_eq!(p.get(i, j), want);
            }
        }
    }

    #[test]
    fn odd_n_and_bad_probabilities_are_rejected() {
        assert!(matches!(
            SbmParams::new(5, 0.5, 0.1),
            Err(Error::InvalidParams(_))
        ));
        assert!(SbmParams::new(0, 0.5, 0.1).is_err());
        assert!(SbmParams::new(4, 1.5, 0.1).is_err());
        assert!(SbmParams::new(4, 0.5, -0.1).is_err());
        assert!(SbmParams::new(4, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn sampling_extremes() {
        let full = sample_sbm(&SbmParams::new(4, 1.0, 1.0).unwrap(), 1, 3).unwrap();
        assert_eq!(full.networks()[0], BinaryAdjacency::complete(4));
        let none = sample_sbm(&SbmParams::new(4, 0.0, 0.0).unwrap(), 3, 3).unwrap();
        assert_eq!(none.len(), 3);
        assert!(none.iter().all(|g| *g == BinaryAdjacency::empty(4)));
        assert!(matches!(
            sample_sbm(&SbmParams::new(4, 0.5, 0.5).unwrap(), 0, 1),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn within_community_density_concentrates() {
        // 200 networks x 2 * C(50, 2) within pairs; binomial sd of the mean is
        // sqrt(0.25 / 490_000) ~ 7e-4, so [0.48, 0.52] is far outside 4 sd.
        let params = SbmParams::new(100, 0.5, 0.1).unwrap();
        let sample = sample_sbm(&params, 200, 11).unwrap();
        let (mut hits, mut total) = (0usize, 0usize);
        for g in sample.iter() {
            for (i, j) in pairs(100).filter(|&(i, j)| params.same_community(i, j)) {
                hits += usize::from(g.has_edge(i, j));
                total += 1;
            }
        }
        let mean = hits as f64 / total as f64;
        let sd = (0.25 / total as f64).sqrt();
        assert!((0.48..=0.52).contains(&mean), "{mean}");
        assert!((mean - 0.5).abs() <= 4.0 * sd, "{mean}");
    }

    #[test]
    fn moments_of_empty_pair() {
        let s = NetworkSample::from_networks(vec![BinaryAdjacency::empty(3); 2]).unwrap();
        let m = sample_moments(&s);
        assert!(pairs(3).all(|(i, j)| m.phat().get(i, j) == 0.0));
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(m.rho_by_index(a, b), 0.0);
            }
        }
    }

    #[test]
    fn moments_of_triangle_and_empty() {
        let s = NetworkSample::from_networks(vec![
            BinaryAdjacency::complete(3),
            BinaryAdjacency::empty(3),
        ])
        .unwrap();
        for m in [sample_moments(&s), sample_moments_with_cap(&s, 0)] {
            assert!(pairs(3).all(|(i, j)| m.phat().get(i, j) == 0.5));
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(m.rho_by_index(a, b), 0.5);
                }
            }
        }
    }

    #[test]
    fn moments_of_single_network() {
        let g = BinaryAdjacency::from_edges(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let s = NetworkSample::from_networks(vec![g.clone()]).unwrap();
        let m = sample_moments(&s);
        assert_eq!(m.phat(), &g.to_weighted());
        for a in pairs(4) {
            for b in pairs(4) {
                let want = f64::from(g.get(a.0, a.1) * g.get(b.0, b.1));
                assert_eq!(m.rho(a, b), want);
            }
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(BinaryAdjacency::from_rows(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(BinaryAdjacency::from_rows(&[vec![1, 0], vec![0, 0]]).is_err());
        assert!(BinaryAdjacency::from_rows(&[vec![0, 2], vec![2, 0]]).is_err());
        assert!(BinaryAdjacency::from_edges(3, &[(1, 1)]).is_err());
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(WeightedAdjacency::new(bad).is_err());
    }

    #[test]
    fn mask_round_trip() {
        let g = BinaryAdjacency::from_edges(5, &[(0, 4), (2, 3), (1, 2)]).unwrap();
        assert_eq!(BinaryAdjacency::from_mask(5, g.to_mask().unwrap()), g);
    }
}
