//! Spin matrices, tensor embeddings, total-spin operators and the SU(2) Casimir.
//!
//! Everything is real: transverse couplings go through `S^+`/`S^-`, so `S^2`
//! (which is imaginary in the `S^3` basis) is never formed. Local basis states
//! are ordered `m = s, s-1, ..., -s`; site 0 is the slowest tensor index.

use nalgebra::DMatrix;

use crate::operator::{BasisTag, RealOperator};
use crate::{Error, HalfInt, Result};

/// Local dimensions `2s_x + 1` of a tensor-product Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertShape {
    local_dims: Vec<usize>,
}

impl HilbertShape {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if let Some(&d) = local_dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidParameter(format!(
                "local dimension {d} < 2 (spin-0 sites carry no degrees of freedom)"
            )));
        }
        Ok(HilbertShape { local_dims })
    }

    pub fn from_spins(spins: &[HalfInt]) -> Result<Self> {
        for s in spins {
            if s.twice() < 1 {
                return Err(Error::InvalidParameter(format!("spin {s} must be at least 1/2")));
            }
        }
        Self::new(spins.iter().map(|s| s.multiplet_dim()).collect())
    }

    /// `n` sites of spin 1/2.
    pub fn qubits(n: usize) -> Self {
        HilbertShape { local_dims: vec![2; n] }
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn sites(&self) -> usize {
        self.local_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.local_dims.iter().product()
    }

    pub fn spin(&self, site: usize) -> HalfInt {
        HalfInt::from_twice(self.local_dims[site] as i64 - 1)
    }

    pub fn spins(&self) -> Vec<HalfInt> {
        (0..self.sites()).map(|x| self.spin(x)).collect()
    }

    /// `S_max = Σ s_x`.
    pub fn max_spin(&self) -> HalfInt {
        self.spins().into_iter().sum()
    }

    pub fn basis_tag(&self) -> BasisTag {
        BasisTag::TensorProduct(self.local_dims.clone())
    }

    /// Tensor-index stride of each site.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.sites()];
        for x in (0..self.sites().saturating_sub(1)).rev() {
            strides[x] = strides[x + 1] * self.local_dims[x + 1];
        }
        strides
    }

    /// Local digits of a product-basis index (digit `i` means `m = s - i`).
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.sites()];
        for x in (0..self.sites()).rev() {
            out[x] = index % self.local_dims[x];
            index /= self.local_dims[x];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.local_dims)
            .fold(0, |acc, (&d, &n)| acc * n + d)
    }

    /// Twice the total `S^3` eigenvalue of a product-basis state.
    pub fn twice_m(&self, index: usize) -> i64 {
        self.digits(index)
            .iter()
            .zip(&self.local_dims)
            .map(|(&d, &n)| n as i64 - 1 - 2 * d as i64)
            .sum()
    }
}

/// `S^3`, `S^+`, `S^-` for a single spin.
#[derive(Clone, Debug)]
pub struct LocalSpinOps {
    pub s: HalfInt,
    pub sz: DMatrix<f64>,
    pub splus: DMatrix<f64>,
    pub sminus: DMatrix<f64>,
}

/// Standard ladder-operator matrices, `<m+1|S^+|m> = sqrt(s(s+1) - m(m+1))`.
pub fn spin_matrices(s: HalfInt) -> Result<LocalSpinOps> {
    if s.is_negative() {
        return Err(Error::InvalidParameter(format!("negative spin {s}")));
    }
    let d = s.multiplet_dim();
    let sv = s.as_f64();
    let m = |i: usize| sv - i as f64;
    let sz = DMatrix::from_fn(d, d, |r, c| if r == c { m(r) } else { 0.0 });
    let splus = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            let mc = m(c);
            (sv * (sv + 1.0) - mc * (mc + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let sminus = splus.transpose();
    Ok(LocalSpinOps { s, sz, splus, sminus })
}

/// A small dense operator acting on a few sites of a product space.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub sites: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

/// Sum of local terms, each extended by the identity on the remaining sites.
pub fn assemble(shape: &HilbertShape, terms: &[LocalTerm]) -> Result<RealOperator> {
    let strides = shape.strides();
    for t in terms {
        let local: usize = t.sites.iter().map(|&x| shape.local_dims()[x]).product();
        if t.matrix.nrows() != local || t.matrix.ncols() != local {
            return Err(Error::DimensionMismatch { expected: local, found: t.matrix.nrows() });
        }
        if t.sites.iter().any(|&x| x >= shape.sites()) {
            return Err(Error::InvalidParameter("site index out of range".into()));
        }
    }
    let dim = shape.dim();
    let mut triplets = Vec::new();
    for col in 0..dim {
        let digits = shape.digits(col);
        for t in terms {
            let local_col = t
                .sites
                .iter()
                .fold(0, |acc, &x| acc * shape.local_dims()[x] + digits[x]);
            let base = col
                - t.sites
                    .iter()
                    .map(|&x| digits[x] * strides[x])
                    .sum::<usize>();
            for local_row in 0..t.matrix.nrows() {
                let v = t.matrix[(local_row, local_col)];
                if v == 0.0 {
                    continue;
                }
                let mut rem = local_row;
                let mut row = base;
                for &x in t.sites.iter().rev() {
                    let d = shape.local_dims()[x];
                    row += (rem % d) * strides[x];
                    rem /= d;
                }
                triplets.push((row, col, v));
            }
        }
    }
    RealOperator::from_triplets(shape.basis_tag(), triplets)
}

/// `local` acting on `site`, identity elsewhere.
pub fn embed_site(shape: &HilbertShape, site: usize, local: &DMatrix<f64>) -> Result<RealOperator> {
    if site >= shape.sites() {
        return Err(Error::InvalidParameter(format!("site {site} out of range")));
    }
    let d = shape.local_dims()[site];
    if local.nrows() != d || local.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: local.nrows() });
    }
    assemble(shape, &[LocalTerm { sites: vec![site], matrix: local.clone() }])
}

#[derive(Clone, Debug)]
pub struct TotalSpinOps {
    pub s3: RealOperator,
    pub splus: RealOperator,
    pub sminus: RealOperator,
}

pub fn total_spin_ops(shape: &HilbertShape) -> Result<TotalSpinOps> {
    let mut z = Vec::new();
    let mut p = Vec::new();
    let mut m = Vec::new();
    for x in 0..shape.sites() {
        let ops = spin_matrices(shape.spin(x))?;
        z.push(LocalTerm { sites: vec![x], matrix: ops.sz });
        p.push(LocalTerm { sites: vec![x], matrix: ops.splus });
        m.push(LocalTerm { sites: vec![x], matrix: ops.sminus });
    }
    Ok(TotalSpinOps {
        s3: assemble(shape, &z)?,
        splus: assemble(shape, &p)?,
        sminus: assemble(shape, &m)?,
    })
}

/// `C = (S^3)^2 + (S^+ S^- + S^- S^+)/2`.
pub fn casimir(shape: &HilbertShape) -> Result<RealOperator> {
    let t = total_spin_ops(shape)?;
    let zz = t.s3.matmul(&t.s3)?;
    let pm = t.splus.matmul(&t.sminus)?;
    let mp = t.sminus.matmul(&t.splus)?;
    zz.add(&pm.add(&mp)?.scaled(0.5))
}

/// `S_1·S_2 = S^3⊗S^3 + (S^+⊗S^- + S^-⊗S^+)/2` on `C^{2s1+1} ⊗ C^{2s2+1}`.
pub fn heisenberg_bond_matrix(s1: HalfInt, s2: HalfInt) -> Result<DMatrix<f64>> {
    let a = spin_matrices(s1)?;
    let b = spin_matrices(s2)?;
    Ok(a.sz.kronecker(&b.sz) + (a.splus.kronecker(&b.sminus) + a.sminus.kronecker(&b.splus)) * 0.5)
}

pub fn heisenberg_bond(s1: HalfInt, s2: HalfInt) -> Result<RealOperator> {
    let m = heisenberg_bond_matrix(s1, s2)?;
    RealOperator::from_dense(
        m,
        BasisTag::TensorProduct(vec![s1.multiplet_dim(), s2.multiplet_dim()]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::symmetric_eigenvalues;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn assert_spectrum(m: &DMatrix<f64>, expected: &[f64]) {
        let got = symmetric_eigenvalues(m);
        let mut exp = expected.to_vec();
        exp.sort_by(f64::total_cmp);
        assert_eq!(got.len(), exp.len());
        for (a, b) in got.iter().zip(&exp) {
            assert!((a - b).abs() < 1e-12, "{got:?} vs {exp:?}");
        }
    }

    #[test]
    fn spin_half_matrices() {
        let ops = spin_matrices(h(1)).unwrap();
        assert_eq!(ops.sz, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]));
        assert_eq!(ops.splus, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn spin_one_ladder_entries() {
        let ops = spin_matrices(h(2)).unwrap();
        let r2 = 2f64.sqrt();
        assert!((ops.splus[(0, 1)] - r2).abs() < 1e-15);
        assert!((ops.splus[(1, 2)] - r2).abs() < 1e-15);
        assert_eq!(ops.sz[(2, 2)], -1.0);
    }

    #[test]
    fn spin_zero_is_trivial() {
        let ops = spin_matrices(HalfInt::ZERO).unwrap();
        assert_eq!(ops.sz.shape(), (1, 1));
        assert_eq!(ops.splus[(0, 0)], 0.0);
    }

    #[test]
    fn ladder_commutator_for_several_spins() {
        for twice in 1..=7 {
            let ops = spin_matrices(h(twice)).unwrap();
            let c = &ops.splus * &ops.sminus - &ops.sminus * &ops.splus;
            assert!((c - &ops.sz * 2.0).amax() < 1e-12);
            assert_eq!(ops.splus.transpose(), ops.sminus);
        }
    }

    #[test]
    fn embedding_examples() {
        let shape = HilbertShape::qubits(2);
        let sz = spin_matrices(h(1)).unwrap().sz;
        let e = embed_site(&shape, 0, &sz).unwrap().to_dense();
        assert_eq!(e, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 0.5, -0.5, -0.5])));

        let one = HilbertShape::qubits(1);
        let id = embed_site(&one, 0, &DMatrix::identity(2, 2)).unwrap().to_dense();
        assert_eq!(id, DMatrix::identity(2, 2));

        let mixed = HilbertShape::new(vec![2, 3]).unwrap();
        let sz1 = spin_matrices(h(2)).unwrap().sz;
        let e = embed_site(&mixed, 1, &sz1).unwrap().to_dense();
        let expected = DMatrix::identity(2, 2).kronecker(&sz1);
        assert_eq!(e, expected);
        assert!(embed_site(&mixed, 1, &sz).is_err());
    }

    #[test]
    fn total_spin_examples() {
        let t = total_spin_ops(&HilbertShape::qubits(2)).unwrap();
        let d = t.s3.to_dense();
        assert_eq!(d.diagonal().as_slice(), &[1.0, 0.0, 0.0, -1.0]);
        let c = t.splus.matmul(&t.sminus).unwrap().sub(&t.sminus.matmul(&t.splus).unwrap()).unwrap();
        assert!(c.distance(&t.s3.scaled(2.0)).unwrap() < 1e-14);

        let single = total_spin_ops(&HilbertShape::qubits(1)).unwrap();
        assert_eq!(single.splus.to_dense(), spin_matrices(h(1)).unwrap().splus);
    }

    #[test]
    fn casimir_spectra() {
        assert_spectrum(&casimir(&HilbertShape::qubits(2)).unwrap().to_dense(), &[2.0, 2.0, 2.0, 0.0]);
        let three = [3.75, 3.75, 3.75, 3.75, 0.75, 0.75, 0.75, 0.75];
        assert_spectrum(&casimir(&HilbertShape::qubits(3)).unwrap().to_dense(), &three);
        assert_spectrum(&casimir(&HilbertShape::new(vec![3]).unwrap()).unwrap().to_dense(), &[2.0; 3]);
    }

    #[test]
    fn bond_spectra() {
        assert_spectrum(&heisenberg_bond_matrix(h(1), h(1)).unwrap(), &[0.25, 0.25, 0.25, -0.75]);
        let one = [1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -2.0];
        assert_spectrum(&heisenberg_bond_matrix(h(2), h(2)).unwrap(), &one);
        let zero = heisenberg_bond_matrix(h(1), HalfInt::ZERO).unwrap();
        assert_eq!(zero.shape(), (2, 2));
        assert_eq!(zero.amax(), 0.0);
    }

    #[test]
    fn bond_is_half_casimir_difference() {
        for (a, b) in [(1, 1), (1, 2), (2, 3), (3, 3), (4, 1)] {
            let (s1, s2) = (h(a), h(b));
            let shape = HilbertShape::from_spins(&[s1, s2]).unwrap();
            let c = casimir(&shape).unwrap().to_dense();
            let id = DMatrix::<f64>::identity(shape.dim(), shape.dim());
            let expected = (c - &id * s1.casimir_value() - &id * s2.casimir_value()) * 0.5;
            let bond = heisenberg_bond_matrix(s1, s2).unwrap();
            assert!((bond - expected).amax() < 1e-12);
        }
    }

    #[test]
    fn twice_m_and_digits_round_trip() {
        let shape = HilbertShape::new(vec![2, 3, 4]).unwrap();
        for i in 0..shape.dim() {
            assert_eq!(shape.index(&shape.digits(i)), i);
        }
        assert_eq!(shape.twice_m(0), 1 + 2 + 3);
        assert_eq!(shape.twice_m(shape.dim() - 1), -6);
        assert_eq!(shape.max_spin(), h(6));
    }
}
