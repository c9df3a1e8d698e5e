//! Hamiltonian builders: Heisenberg on graphs, normalized and polynomial-bond
//! chains, the spin-1 β-chain and the SU_q(2)-invariant XXZ chain.

use nalgebra::DMatrix;

use crate::graph::{ChainSpec, SpinGraph};
use crate::spin::{assemble, heisenberg_bond_matrix, spin_matrices, HilbertShape, LocalTerm};
use crate::{Error, HalfInt, RealOperator, Result};

/// `h = Σ_m c_m (S_1·S_2)^m` for one bond.
#[derive(Clone, Debug, PartialEq)]
pub struct BondPolynomial {
    coeffs: Vec<f64>,
}

impl BondPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        BondPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree ignoring trailing zero coefficients; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// Dense matrix of the bond on `C^{2s1+1} ⊗ C^{2s2+1}`.
    pub fn bond_matrix(&self, s1: HalfInt, s2: HalfInt) -> Result<DMatrix<f64>> {
        let max_deg = s1.twice().min(s2.twice()) as usize;
        if let Some(d) = self.degree() {
            if d > max_deg {
                return Err(Error::InvalidParameter(format!(
                    "bond polynomial of degree {d} exceeds 2·min(s1, s2) = {max_deg} for spins {s1}, {s2}"
                )));
            }
        }
        let b = heisenberg_bond_matrix(s1, s2)?;
        let n = b.nrows();
        let mut power = DMatrix::identity(n, n);
        let mut out = DMatrix::zeros(n, n);
        for &c in &self.coeffs {
            if c != 0.0 {
                out += &power * c;
            }
            power = &power * &b;
        }
        Ok(out)
    }
}

/// `H = -Σ_{x~y} J_xy S_x·S_y`.
pub fn build_heisenberg(g: &SpinGraph) -> Result<RealOperator> {
    let spins = g.spins();
    let shape = HilbertShape::from_spins(&spins)?;
    let mut terms = Vec::with_capacity(g.edges().len());
    for e in g.edges() {
        let b = heisenberg_bond_matrix(spins[e.u], spins[e.v])?;
        terms.push(LocalTerm { sites: vec![e.u, e.v], matrix: b * -e.coupling });
    }
    assemble(&shape, &terms)
}

/// `H = -Σ_x J_x (S_x·S_{x+1} / (s_x s_{x+1}) - 1)`, zero on the polarized state.
pub fn build_normalized_chain(c: &ChainSpec) -> Result<RealOperator> {
    let spins = c.spins();
    let shape = HilbertShape::from_spins(spins)?;
    let mut terms = Vec::with_capacity(c.couplings().len());
    for (x, &j) in c.couplings().iter().enumerate() {
        let (s1, s2) = (spins[x], spins[x + 1]);
        let b = heisenberg_bond_matrix(s1, s2)?;
        let n = b.nrows();
        let h = (DMatrix::identity(n, n) - b / (s1.as_f64() * s2.as_f64())) * j;
        terms.push(LocalTerm { sites: vec![x, x + 1], matrix: h });
    }
    assemble(&shape, &terms)
}

/// Chain with an arbitrary SU(2)-invariant polynomial interaction per bond,
/// `H = Σ_x J_x Σ_m c^{(x)}_m (S_x·S_{x+1})^m`.
pub fn build_general_bond_chain(
    spins: &[HalfInt],
    couplings: &[f64],
    polys: &[BondPolynomial],
) -> Result<RealOperator> {
    let chain = ChainSpec::new(spins.to_vec(), couplings.to_vec())?;
    if polys.len() != couplings.len() {
        return Err(Error::DimensionMismatch { expected: couplings.len(), found: polys.len() });
    }
    let shape = HilbertShape::from_spins(spins)?;
    let mut terms = Vec::with_capacity(polys.len());
    for (x, (p, &j)) in polys.iter().zip(chain.couplings()).enumerate() {
        let h = p.bond_matrix(spins[x], spins[x + 1])? * j;
        terms.push(LocalTerm { sites: vec![x, x + 1], matrix: h });
    }
    assemble(&shape, &terms)
}

/// Bond polynomial `(1 - λ) + β(1 - λ²)` in `λ = S·S`, the spin-1 β-chain interaction.
pub fn spin1_beta_polynomial(beta: f64) -> BondPolynomial {
    BondPolynomial::new(vec![1.0 + beta, -1.0, -beta])
}

/// Spin-1 chain `H = Σ_x (1 - S_x·S_{x+1}) + β(1 - (S_x·S_{x+1})²)` with unit couplings.
///
/// Two-site energies are 0, 2 and 3 - 3β for total spin 2, 1, 0, so the
/// singlet and triplet cross at β = 1/3.
pub fn build_spin1_beta_chain(len: usize, beta: f64) -> Result<RealOperator> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!("chain length {len} < 2")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("β = {beta}")));
    }
    let poly = spin1_beta_polynomial(beta);
    build_general_bond_chain(&vec![HalfInt::ONE; len], &vec![1.0; len - 1], &vec![poly; len - 1])
}

/// Boundary-field strength `A(Δ) = sqrt(1 - 1/Δ²) / 2`.
pub fn xxz_boundary_field(delta: f64) -> f64 {
    0.5 * (1.0 - 1.0 / (delta * delta)).sqrt()
}

/// SU_q(2)-invariant spin-1/2 XXZ chain,
/// `H = -Σ_x [Δ^{-1}(S¹S¹ + S²S²) + (S³S³ - 1/4)] + A(Δ)(S³_L - S³_1)`.
///
/// The boundary term carries the sign under which `H` commutes with the
/// generators of [`crate::qgroup::suq2_generators`].
pub fn build_xxz_chain(len: usize, delta: f64) -> Result<RealOperator> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!("chain length {len} < 2")));
    }
    if delta <= 1.0 || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("Δ = {delta} must exceed 1")));
    }
    let shape = HilbertShape::qubits(len);
    let ops = spin_matrices(HalfInt::HALF)?;
    let transverse = (ops.splus.kronecker(&ops.sminus) + ops.sminus.kronecker(&ops.splus)) * 0.5;
    let zz = ops.sz.kronecker(&ops.sz);
    let bond = -(transverse / delta + zz - DMatrix::identity(4, 4) * 0.25);
    let a = xxz_boundary_field(delta);
    let mut terms: Vec<LocalTerm> = (0..len - 1)
        .map(|x| LocalTerm { sites: vec![x, x + 1], matrix: bond.clone() })
        .collect();
    terms.push(LocalTerm { sites: vec![len - 1], matrix: &ops.sz * a });
    terms.push(LocalTerm { sites: vec![0], matrix: &ops.sz * -a });
    assemble(&shape, &terms)
}
