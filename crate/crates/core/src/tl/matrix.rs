//! Hamiltonian matrices on the diagram basis and their dominance structure.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::diagram::{embed_diagram, enumerate_arc_diagrams, tl_generator_action, ArcDiagram};
use crate::report::{Cell, CsvTable};
use crate::{Error, Result};

/// Matrix of `H = -(4/(q + 1/q)) Σ_x J_x U_x` on the diagrams with `n` arcs on
/// `k` vertices. Entry `(i, j)` is the coefficient of `basis[i]` in `H basis[j]`.
///
/// At `q = 1` this is `-2 Σ J_x U_x`, the spin-1/2 chain with bonds
/// `J_x (1 - 4 S_x·S_{x+1})`. For `q < 1` and unit couplings it is four times
/// the SU_q(2)-invariant XXZ chain.
#[derive(Clone, Debug, PartialEq)]
pub struct TLMatrix {
    pub k: usize,
    pub n: usize,
    pub q: f64,
    pub couplings: Vec<f64>,
    pub basis: Vec<ArcDiagram>,
    pub a: DMatrix<f64>,
}

impl TLMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest off-diagonal entry (zero for 1×1 matrices).
    pub fn max_offdiagonal(&self) -> f64 {
        let d = self.dim();
        let mut m = f64::NEG_INFINITY;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    m = m.max(self.a[(i, j)]);
                }
            }
        }
        if m.is_finite() {
            m
        } else {
            0.0
        }
    }

    /// Columns `row, col, value` for the stored nonzero entries.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["row", "col", "value"]);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.a[(i, j)];
                if v != 0.0 {
                    t.push(vec![Cell::from(i), Cell::from(j), Cell::Float(v)]);
                }
            }
        }
        t
    }
}

pub fn tl_hamiltonian_matrix(k: usize, n: usize, couplings: &[f64], q: f64) -> Result<TLMatrix> {
    if k == 0 || couplings.len() + 1 != k {
        return Err(Error::InvalidParameter(format!(
            "{k} vertices need {} couplings, got {}",
            k.saturating_sub(1),
            couplings.len()
        )));
    }
    if let Some(j) = couplings.iter().find(|&&j| j <= 0.0 || !j.is_finite()) {
        return Err(Error::InvalidParameter(format!("nonpositive coupling {j}")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} outside (0, 1]")));
    }
    if 2 * n > k {
        return Err(Error::InvalidParameter(format!("{n} arcs do not fit on {k} vertices")));
    }
    let basis = enumerate_arc_diagrams(k, n);
    let index: HashMap<&ArcDiagram, usize> = basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let scale = -4.0 / (q + 1.0 / q);
    let dim = basis.len();
    let mut a = DMatrix::zeros(dim, dim);
    for (j, d) in basis.iter().enumerate() {
        for (x, &jx) in couplings.iter().enumerate() {
            for (image, c) in tl_generator_action(d, x, q)?.iter() {
                let i = index[image];
                a[(i, j)] += scale * jx * c;
            }
        }
    }
    Ok(TLMatrix { k, n, q, couplings: couplings.to_vec(), basis, a })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceVerdict {
    pub ok: bool,
    /// `d(k+1, S+1/2) >= d(k, S)`.
    pub dims_ok: bool,
    /// Largest `A^{(k+1)}_{ij} - A^{(k)}_{ij}` over the shared prefix.
    pub max_excess: f64,
}

/// Entrywise `big_{ij} <= small_{ij}` on the prefix of `big` spanned by the
/// embedded basis of `small`.
pub fn check_dominance(small: &TLMatrix, big: &TLMatrix) -> Result<DominanceVerdict> {
    if big.k != small.k + 1 || big.n != small.n {
        return Err(Error::IndexMisalignment(format!(
            "expected (k+1, n) = ({}, {}), got ({}, {})",
            small.k + 1,
            small.n,
            big.k,
            big.n
        )));
    }
    let dims_ok = big.dim() >= small.dim();
    if !dims_ok {
        return Ok(DominanceVerdict { ok: false, dims_ok, max_excess: f64::NAN });
    }
    for (i, d) in small.basis.iter().enumerate() {
        if embed_diagram(d) != big.basis[i] {
            return Err(Error::IndexMisalignment(format!(
                "position {i}: {} embeds to {}, found {}",
                d,
                embed_diagram(d),
                big.basis[i]
            )));
        }
    }
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..small.dim() {
        for j in 0..small.dim() {
            max_excess = max_excess.max(big.a[(i, j)] - small.a[(i, j)]);
        }
    }
    if small.dim() == 0 {
        max_excess = 0.0;
    }
    let tol = 1e-12 * small.a.amax().max(1.0);
    Ok(DominanceVerdict { ok: max_excess <= tol, dims_ok, max_excess })
}
