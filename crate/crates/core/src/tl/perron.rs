//! Perron-Frobenius ground vectors and the spectral comparison theorems for
//! matrices with nonpositive (or nonnegative) off-diagonal entries.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigen::{general_eigenvalues, inf_real_spectrum, spectral_radius};
use crate::{Error, Result};

/// Entries below this fraction of the largest entry count as structural zeros.
const PATTERN_TOL: f64 = 1e-14;

/// Components must exceed this fraction of the largest to count as positive.
pub const POSITIVITY_REL_TOL: f64 = 1e-10;

/// Strong connectivity of the directed graph `i -> j` for `a_{ij} != 0`, `i != j`.
///
/// For a matrix with nonpositive off-diagonals this is irreducibility of
/// `c·I - A` in the nonnegative sense.
pub fn is_irreducible(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    if n <= 1 {
        return true;
    }
    let cut = PATTERN_TOL * a.amax().max(f64::MIN_POSITIVE);
    let reach = |transpose: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                let v = if transpose { a[(j, i)] } else { a[(i, j)] };
                if i != j && !seen[j] && v.abs() > cut {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(false) && reach(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronVector {
    /// Bottom eigenvalue.
    pub value: f64,
    /// Eigenvector normalized to unit length, sign chosen with positive sum.
    pub vector: Vec<f64>,
    /// Every component exceeds `POSITIVITY_REL_TOL` times the largest.
    pub positive: bool,
    /// Distance from the bottom eigenvalue to the next distinct real part
    /// (`+inf` for 1×1 matrices).
    pub gap: f64,
}

impl PerronVector {
    pub fn is_simple(&self) -> bool {
        self.gap >= 1e-10
    }
}

/// Ground vector of a real matrix with real spectrum and nonpositive
/// off-diagonals. Fails with [`Error::Reducible`] when the off-diagonal
/// pattern is not strongly connected.
pub fn perron_ground_vector(a: &DMatrix<f64>) -> Result<PerronVector> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::InvalidParameter("perron vector needs a nonempty square matrix".into()));
    }
    if !is_irreducible(a) {
        return Err(Error::Reducible);
    }
    if n == 1 {
        return Ok(PerronVector { value: a[(0, 0)], vector: vec![1.0], positive: true, gap: f64::INFINITY });
    }
    let mut re: Vec<f64> = general_eigenvalues(a).into_iter().map(|(r, _)| r).collect();
    re.sort_by(f64::total_cmp);
    let value = re[0];
    let gap = re[1] - re[0];
    let shifted = a - DMatrix::identity(n, n) * value;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    let mut v: DVector<f64> = v_t.row(idx).transpose();
    if v.sum() < 0.0 {
        v = -v;
    }
    v /= v.norm();
    let max = v.max();
    let positive = v.iter().all(|&x| x > POSITIVITY_REL_TOL * max);
    Ok(PerronVector { value, vector: v.iter().copied().collect(), positive, gap })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    /// Spectral quantity of the first argument (inf spec or spectral radius).
    pub a_value: f64,
    pub b_value: f64,
    /// The strict-inequality hypotheses hold (irreducible `B` and a strict entry).
    pub strict_expected: bool,
    /// The non-strict conclusion holds (with `tol` slack).
    pub holds: bool,
    /// The strict conclusion holds (gap larger than `tol`).
    pub strict_holds: bool,
}

impl ComparisonVerdict {
    /// No conclusion of the theorem is contradicted.
    pub fn consistent(&self) -> bool {
        self.holds && (!self.strict_expected || self.strict_holds)
    }
}

/// For `A` (n×n) and `B` (m×m), `n <= m`, both with nonpositive off-diagonals
/// and `b_{ij} <= a_{ij}` on the leading n×n block: `inf spec B <= inf spec A`,
/// strictly if `B` is irreducible and either (i) some `b_{ij} < a_{ij}` in the
/// shared block or (ii) some `b_{ij} < 0` with `i` or `j` outside it.
pub fn min_spec_comparison(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<ComparisonVerdict> {
    let (n, m) = (a.nrows(), b.nrows());
    if a.ncols() != n || b.ncols() != m {
        return Err(Error::HypothesisViolation("matrices must be square".into()));
    }
    if n > m {
        return Err(Error::HypothesisViolation(format!("size {n} exceeds size {m}")));
    }
    let slack = 1e-12 * a.amax().max(b.amax()).max(1.0);
    for (name, mat) in [("A", a), ("B", b)] {
        for i in 0..mat.nrows() {
            for j in 0..mat.nrows() {
                if i != j && mat[(i, j)] > slack {
                    return Err(Error::HypothesisViolation(format!(
                        "{name}[{i},{j}] = {} is positive",
                        mat[(i, j)]
                    )));
                }
            }
        }
    }
    let mut strict_entry = false;
    for i in 0..m {
        for j in 0..m {
            if i < n && j < n {
                if b[(i, j)] > a[(i, j)] + slack {
                    return Err(Error::HypothesisViolation(format!(
                        "B[{i},{j}] = {} exceeds A[{i},{j}] = {}",
                        b[(i, j)],
                        a[(i, j)]
                    )));
                }
                strict_entry |= b[(i, j)] < a[(i, j)] - slack;
            } else if i != j {
                strict_entry |= b[(i, j)] < -slack;
            }
        }
    }
    let strict_expected = strict_entry && is_irreducible(b);
    let a_value = if n == 0 { f64::INFINITY } else { inf_real_spectrum(a) };
    let b_value = inf_real_spectrum(b);
    Ok(ComparisonVerdict {
        a_value,
        b_value,
        strict_expected,
        holds: b_value <= a_value + tol,
        strict_holds: b_value < a_value - tol,
    })
}

/// For nonnegative n×n `A <= B` entrywise: `specrad A <= specrad B`, strictly
/// if `B` is irreducible and some `a_{ij} < b_{ij}`.
pub fn spectral_radius_comparison(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<ComparisonVerdict> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::HypothesisViolation("matrices must be square and of equal size".into()));
    }
    if a.min() < 0.0 || b.min() < 0.0 {
        return Err(Error::HypothesisViolation("matrices must be nonnegative".into()));
    }
    let mut strict_entry = false;
    for (x, y) in a.iter().zip(b.iter()) {
        if x > y {
            return Err(Error::HypothesisViolation(format!("entry {x} exceeds {y}")));
        }
        strict_entry |= x < y;
    }
    let strict_expected = strict_entry && is_irreducible(b);
    let a_value = spectral_radius(a);
    let b_value = spectral_radius(b);
    Ok(ComparisonVerdict {
        a_value,
        b_value,
        strict_expected,
        holds: a_value <= b_value + tol,
        strict_holds: a_value < b_value - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tl::tl_hamiltonian_matrix;

    #[test]
    fn one_by_one() {
        let p = perron_ground_vector(&DMatrix::from_element(1, 1, 3.0)).unwrap();
        assert_eq!(p.vector, vec![1.0]);
        assert_eq!(p.value, 3.0);
    }

    #[test]
    fn tl_ground_vectors_are_positive() {
        for (k, n) in [(4, 1), (5, 2), (6, 3)] {
            let m = tl_hamiltonian_matrix(k, n, &vec![1.0; k - 1], 1.0).unwrap();
            let p = perron_ground_vector(&m.a).unwrap();
            assert!(p.positive, "k={k} n={n}: {:?}", p.vector);
            assert!(p.is_simple());
            let r = &m.a * DVector::from_vec(p.vector.clone()) - DVector::from_vec(p.vector.clone()) * p.value;
            assert!(r.norm() < 1e-9);
        }
    }

    #[test]
    fn reducible_is_refused() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 2.0]);
        assert!(!is_irreducible(&m));
        assert!(matches!(perron_ground_vector(&m), Err(Error::Reducible)));
    }

    #[test]
    fn comparison_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let v = min_spec_comparison(&a, &a, 1e-12).unwrap();
        assert!(v.holds && !v.strict_expected && (v.a_value - v.b_value).abs() < 1e-12);

        let a = DMatrix::from_element(1, 1, 0.0);
        let b = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        let v = min_spec_comparison(&a, &b, 1e-12).unwrap();
        assert!(v.strict_expected && v.strict_holds);
        assert!((v.b_value + 1.0).abs() < 1e-12);

        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(min_spec_comparison(&a, &bad, 1e-12), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn radius_comparison() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 1.0, 0.0]);
        let v = spectral_radius_comparison(&a, &b, 1e-12).unwrap();
        assert!(v.strict_expected && v.strict_holds);
        assert!(spectral_radius_comparison(&b, &a, 1e-12).is_err());
    }
}
