//! Dense symmetric helpers on top of nalgebra.

use nalgebra::DMatrix;

/// Eigenpairs of a symmetric matrix with eigenvalues sorted descending;
/// eigenvector `m` is column `m` of the returned matrix.
pub(crate) fn symmetric_eigen_desc(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    (values, vectors)
}

/// Combinatorial Laplacian `D - A`.
pub(crate) fn laplacian(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut l = -a.clone();
    for i in 0..a.nrows() {
        l[(i, i)] = a.row(i).sum() - a[(i, i)];
    }
    l
}

/// Pseudoinverse of a Laplacian-like matrix whose null space is spanned by the
/// constant vector: `(L + J/n)^{-1} - J/n`.
pub(crate) fn laplacian_pinv(l: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = l.nrows();
    let shift = DMatrix::from_element(n, n, 1.0 / n as f64);
    let inv = (l + &shift).lu().try_inverse()?;
    Some(inv - shift)
}

/// `R_ij = M_ii + M_jj - 2 M_ij` for a Gram-type matrix `M`.
pub(crate) fn resistance_from_gram(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            g[(i, i)] + g[(j, j)] - 2.0 * g[(i, j)]
        }
    })
}

/// Maximum absolute column sum.
pub(crate) fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
