//! Eigensolvers: dense symmetric, kernels by SVD, general real spectra, and a
//! Lanczos extremal solver for blocks too large for dense diagonalization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::{Error, Result};

/// Blocks at or above this dimension go to the iterative solver.
pub const DENSE_LIMIT: usize = 4096;

/// Residual tolerance for the iterative solver.
pub const LANCZOS_TOL: f64 = 1e-10;

/// Singular values below this fraction of the largest count as zero.
pub const KERNEL_REL_TOL: f64 = 1e-8;

/// Eigenvalues (ascending) and matching eigenvector columns of a symmetric matrix.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let sym = (m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Orthonormal basis (as columns) of the kernel of `m`.
///
/// Singular values below `rel_tol` times the largest singular value are treated
/// as zero. A zero matrix has the whole space as kernel.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if rows == 0 || m.amax() == 0.0 {
        return DMatrix::identity(cols, cols);
    }
    // Thin SVD only returns min(rows, cols) right singular vectors; pad to square.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma = &svd.singular_values;
    let smax = sigma.max();
    let keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] < rel_tol * smax).collect();
    let mut out = DMatrix::zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &v_t.row(i).transpose());
    }
    out
}

/// Complex eigenvalues of a general real square matrix, as `(re, im)` pairs.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect()
}

/// Ascending eigenvalues of a matrix known to have a real spectrum (for example a
/// symmetric operator written in a non-orthogonal basis).
pub fn real_spectrum(m: &DMatrix<f64>, imag_tol: f64) -> Result<Vec<f64>> {
    let scale = m.amax().max(1.0);
    let mut out = Vec::with_capacity(m.nrows());
    for (re, im) in general_eigenvalues(m) {
        if im.abs() > imag_tol * scale {
            return Err(Error::Numerical(format!(
                "expected a real spectrum, found eigenvalue {re} + {im}i"
            )));
        }
        out.push(re);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Smallest real part among the eigenvalues of a general square matrix.
pub fn inf_real_spectrum(m: &DMatrix<f64>) -> f64 {
    general_eigenvalues(m)
        .into_iter()
        .map(|(re, _)| re)
        .fold(f64::INFINITY, f64::min)
}

/// Largest modulus among the eigenvalues of a general square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    general_eigenvalues(m)
        .into_iter()
        .map(|(re, im)| re.hypot(im))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    Smallest,
    Largest,
}

/// Extremal eigenvalue of a symmetric operator given only through its action,
/// by Lanczos iteration with full reorthogonalization.
pub fn lanczos_extremal<F>(dim: usize, apply: F, which: Extremal, tol: f64) -> Result<f64>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    if dim == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let max_iter = dim.min(600);
    // Deterministic, generic start vector.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut v = DVector::from_fn(dim, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        0.5 + (state % 1_000_003) as f64 / 1_000_003.0
    });
    v /= v.norm();

    let mut basis: Vec<DVector<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut last = f64::NAN;
    for k in 0..max_iter {
        let mut w = apply(&basis[k]);
        let alpha = w.dot(&basis[k]);
        alphas.push(alpha);
        for b in &basis {
            let c = w.dot(b);
            w.axpy(-c, b, 1.0);
        }
        // Second pass keeps the Krylov basis orthogonal to working precision.
        for b in &basis {
            let c = w.dot(b);
            w.axpy(-c, b, 1.0);
        }
        let beta = w.norm();

        let m = alphas.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alphas[i];
            if i + 1 < m {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let (theta, s) = symmetric_eigen(&t);
        let idx = match which {
            Extremal::Smallest => 0,
            Extremal::Largest => m - 1,
        };
        let ritz = theta[idx];
        let residual = beta * s[(m - 1, idx)].abs();
        last = ritz;
        if residual <= tol * ritz.abs().max(1.0) || beta <= 1e-14 || m == dim {
            return Ok(ritz);
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    Err(Error::Numerical(format!(
        "Lanczos did not converge in {max_iter} iterations (last Ritz value {last})"
    )))
}

/// Smallest and largest eigenvalue of a symmetric matrix: dense below
/// [`DENSE_LIMIT`], Lanczos above.
pub fn extremal_eigenvalues(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if n < DENSE_LIMIT {
        let v = symmetric_eigenvalues(m);
        Ok((v[0], v[n - 1]))
    } else {
        let lo = lanczos_extremal(n, |x| m * x, Extremal::Smallest, LANCZOS_TOL)?;
        let hi = lanczos_extremal(n, |x| m * x, Extremal::Largest, LANCZOS_TOL)?;
        Ok((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i)] += 1.0;
            m[(i + 1, i + 1)] += 1.0;
            m[(i, i + 1)] -= 1.0;
            m[(i + 1, i)] -= 1.0;
        }
        m
    }

    #[test]
    fn sorted_eigenpairs() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
        let r = &m * vecs.column(0) - vecs.column(0) * vals[0];
        assert!(r.norm() < 1e-12);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        // Rank 1, three columns: kernel dimension 2.
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let k = null_space(&m, KERNEL_REL_TOL);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).amax() < 1e-12);
        let gram = k.transpose() * &k;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn kernel_of_zero_and_injective() {
        assert_eq!(null_space(&DMatrix::zeros(2, 3), KERNEL_REL_TOL).ncols(), 3);
        assert_eq!(null_space(&DMatrix::identity(3, 3), KERNEL_REL_TOL).ncols(), 0);
    }

    #[test]
    fn lanczos_matches_dense() {
        // Path Laplacian eigenvalues are 2 - 2cos(k pi / n).
        let n = 200;
        let m = path_laplacian(n);
        let lo = lanczos_extremal(n, |x| &m * x, Extremal::Smallest, LANCZOS_TOL).unwrap();
        let hi = lanczos_extremal(n, |x| &m * x, Extremal::Largest, LANCZOS_TOL).unwrap();
        let exact_hi = 2.0 - 2.0 * (std::f64::consts::PI * (n - 1) as f64 / n as f64).cos();
        assert!(lo.abs() < 1e-8, "{lo}");
        assert!((hi - exact_hi).abs() < 1e-8, "{hi} vs {exact_hi}");
    }

    #[test]
    fn real_spectrum_of_similar_matrix() {
        // P D P^{-1} with D = diag(1, 2, 5).
        let p = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0]);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 5.0]));
        let m = &p * d * p.clone().try_inverse().unwrap();
        let s = real_spectrum(&m, 1e-9).unwrap();
        for (a, b) in s.iter().zip([1.0, 2.0, 5.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((inf_real_spectrum(&m) - 1.0).abs() < 1e-10);
        assert!((spectral_radius(&m) - 5.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_has_no_real_spectrum() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(real_spectrum(&m, 1e-9).is_err());
    }
}
