//! Real (symmetric) operators on tensor-product, configuration, or diagram bases.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::{Error, Result};

/// What the rows and columns of an operator are indexed by.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisTag {
    /// Product basis of local factors with the given dimensions, site 0 slowest.
    TensorProduct(Vec<usize>),
    /// Exclusion-process configurations on `sites` vertices, optionally restricted to a
    /// fixed particle number.
    Configurations { sites: usize, particles: Option<usize> },
    /// Arc diagrams with `arcs` arcs on `vertices` vertices.
    Diagrams { vertices: usize, arcs: usize },
    /// Anything else, identified only by its dimension.
    Plain(usize),
}

impl BasisTag {
    pub fn dim(&self) -> usize {
        match self {
            BasisTag::TensorProduct(dims) => dims.iter().product(),
            BasisTag::Configurations { sites, particles: None } => 1usize << sites,
            BasisTag::Configurations { sites, particles: Some(n) } => binomial(*sites, *n),
            BasisTag::Diagrams { vertices, arcs } => {
                let c = binomial(*vertices, *arcs);
                if *arcs == 0 {
                    c
                } else {
                    c - binomial(*vertices, arcs - 1)
                }
            }
            BasisTag::Plain(d) => *d,
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub enum Storage {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix<f64>),
}

#[derive(Clone, Debug)]
pub struct RealOperator {
    storage: Storage,
    basis: BasisTag,
}

impl RealOperator {
    pub fn from_dense(matrix: DMatrix<f64>, basis: BasisTag) -> Result<Self> {
        check_square(matrix.nrows(), matrix.ncols(), &basis)?;
        Ok(RealOperator { storage: Storage::Dense(matrix), basis })
    }

    pub fn from_sparse(matrix: CsrMatrix<f64>, basis: BasisTag) -> Result<Self> {
        check_square(matrix.nrows(), matrix.ncols(), &basis)?;
        Ok(RealOperator { storage: Storage::Sparse(matrix), basis })
    }

    /// Sparse operator from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        basis: BasisTag,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let dim = basis.dim();
        let mut coo = CooMatrix::new(dim, dim);
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.max(c) + 1 });
            }
            coo.push(r, c, v);
        }
        Ok(RealOperator { storage: Storage::Sparse(CsrMatrix::from(&coo)), basis })
    }

    pub fn zeros(basis: BasisTag) -> Self {
        let dim = basis.dim();
        RealOperator { storage: Storage::Sparse(CsrMatrix::zeros(dim, dim)), basis }
    }

    pub fn identity(basis: BasisTag) -> Self {
        let dim = basis.dim();
        RealOperator { storage: Storage::Sparse(CsrMatrix::identity(dim)), basis }
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(m) => m.nrows(),
        }
    }

    pub fn basis(&self) -> &BasisTag {
        &self.basis
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => {
                let mut d = DMatrix::zeros(m.nrows(), m.ncols());
                for (r, c, v) in m.triplet_iter() {
                    d[(r, c)] += *v;
                }
                d
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m[(row, col)],
            Storage::Sparse(m) => m
                .get_entry(row, col)
                .map(|e| e.into_value())
                .unwrap_or(0.0),
        }
    }

    /// Iterates over stored entries (all entries for dense storage).
    pub fn entries(&self) -> Box<dyn Iterator<Item = (usize, usize, f64)> + '_> {
        match &self.storage {
            Storage::Dense(m) => Box::new(
                (0..m.ncols()).flat_map(move |c| (0..m.nrows()).map(move |r| (r, c, m[(r, c)]))),
            ),
            Storage::Sparse(m) => Box::new(m.triplet_iter().map(|(r, c, v)| (r, c, *v))),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        match &self.storage {
            Storage::Dense(m) => m * x,
            Storage::Sparse(m) => {
                let mut y = DVector::zeros(m.nrows());
                for (r, row) in m.row_iter().enumerate() {
                    let mut acc = 0.0;
                    for (&c, &v) in row.col_indices().iter().zip(row.values()) {
                        acc += v * x[c];
                    }
                    y[r] = acc;
                }
                y
            }
        }
    }

    /// Dense submatrix with the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(rows.len(), cols.len());
        match &self.storage {
            Storage::Dense(m) => {
                for (i, &r) in rows.iter().enumerate() {
                    for (j, &c) in cols.iter().enumerate() {
                        out[(i, j)] = m[(r, c)];
                    }
                }
            }
            Storage::Sparse(m) => {
                let mut col_pos = vec![usize::MAX; m.ncols()];
                for (j, &c) in cols.iter().enumerate() {
                    col_pos[c] = j;
                }
                for (i, &r) in rows.iter().enumerate() {
                    let row = m.row(r);
                    for (&c, &v) in row.col_indices().iter().zip(row.values()) {
                        let j = col_pos[c];
                        if j != usize::MAX {
                            out[(i, j)] += v;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> RealOperator {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m * factor),
            Storage::Sparse(m) => Storage::Sparse(m * factor),
        };
        RealOperator { storage, basis: self.basis.clone() }
    }

    pub fn add(&self, other: &RealOperator) -> Result<RealOperator> {
        self.check_same_dim(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a + b),
            _ => Storage::Dense(self.to_dense() + other.to_dense()),
        };
        Ok(RealOperator { storage, basis: self.basis.clone() })
    }

    pub fn sub(&self, other: &RealOperator) -> Result<RealOperator> {
        self.add(&other.scaled(-1.0))
    }

    pub fn matmul(&self, other: &RealOperator) -> Result<RealOperator> {
        self.check_same_dim(other)?;
        let storage = match (&self.storage, &other.storage) {
            (Storage::Sparse(a), Storage::Sparse(b)) => Storage::Sparse(a * b),
            (Storage::Sparse(a), Storage::Dense(b)) => Storage::Dense(a * b),
            (Storage::Dense(a), Storage::Sparse(b)) => {
                Storage::Dense((&b.transpose() * &a.transpose()).transpose())
            }
            (Storage::Dense(a), Storage::Dense(b)) => Storage::Dense(a * b),
        };
        Ok(RealOperator { storage, basis: self.basis.clone() })
    }

    pub fn transpose(&self) -> RealOperator {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(m.transpose()),
            Storage::Sparse(m) => Storage::Sparse(m.transpose()),
        };
        RealOperator { storage, basis: self.basis.clone() }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0, |acc, (_, _, v)| acc.max(v.abs()))
    }

    /// Largest absolute entry of `self·other − other·self`.
    pub fn commutator_norm(&self, other: &RealOperator) -> Result<f64> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.sub(&ba)?.max_abs())
    }

    /// Largest absolute entry of `self − selfᵀ`.
    pub fn symmetry_defect(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => (m - m.transpose()).amax(),
            Storage::Sparse(m) => (m - &m.transpose())
                .values()
                .iter()
                .fold(0.0, |acc: f64, v| acc.max(v.abs())),
        }
    }

    /// Largest absolute entry of `self − other`.
    pub fn distance(&self, other: &RealOperator) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    fn check_same_dim(&self, other: &RealOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

fn check_square(rows: usize, cols: usize, basis: &BasisTag) -> Result<()> {
    if rows != cols {
        return Err(Error::DimensionMismatch { expected: rows, found: cols });
    }
    if basis.dim() != rows {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: rows });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_like() -> RealOperator {
        RealOperator::from_triplets(BasisTag::Plain(2), [(0, 1, 1.0), (1, 0, 1.0)]).unwrap()
    }

    #[test]
    fn sparse_and_dense_agree() {
        let a = pauli_like();
        let d = RealOperator::from_dense(a.to_dense(), BasisTag::Plain(2)).unwrap();
        let diag = RealOperator::from_triplets(BasisTag::Plain(2), [(0, 0, 1.0), (1, 1, -1.0)])
            .unwrap();
        let c1 = a.commutator_norm(&diag).unwrap();
        let c2 = d.commutator_norm(&diag).unwrap();
        assert_eq!(c1, 2.0);
        assert_eq!(c2, 2.0);
        let x = DVector::from_vec(vec![3.0, 5.0]);
        assert_eq!(a.apply(&x), d.apply(&x));
    }

    #[test]
    fn duplicates_are_summed() {
        let a = RealOperator::from_triplets(BasisTag::Plain(2), [(0, 0, 1.0), (0, 0, 2.5)])
            .unwrap();
        assert_eq!(a.get(0, 0), 3.5);
        assert_eq!(a.get(1, 1), 0.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(RealOperator::from_dense(DMatrix::zeros(2, 3), BasisTag::Plain(2)).is_err());
        assert!(RealOperator::from_dense(DMatrix::zeros(3, 3), BasisTag::Plain(2)).is_err());
        assert!(RealOperator::from_triplets(BasisTag::Plain(2), [(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn submatrix_extracts_block() {
        let a = RealOperator::from_triplets(
            BasisTag::Plain(3),
            [(0, 0, 1.0), (1, 2, 2.0), (2, 1, 2.0), (2, 2, 4.0)],
        )
        .unwrap();
        let s = a.submatrix(&[1, 2], &[1, 2]);
        assert_eq!(s, DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 2.0, 4.0]));
        assert_eq!(a.symmetry_defect(), 0.0);
    }

    #[test]
    fn diagram_tag_dimension() {
        assert_eq!(BasisTag::Diagrams { vertices: 5, arcs: 2 }.dim(), 5);
        assert_eq!(BasisTag::Configurations { sites: 4, particles: Some(2) }.dim(), 6);
        assert_eq!(binomial(10, 5), 252);
    }
}
