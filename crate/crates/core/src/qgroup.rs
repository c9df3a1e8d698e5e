//! SU_q(2) symmetry of the XXZ chain: deformed generators, the q-Casimir,
//! q-sector energies and droplet energies.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::hamiltonian::build_xxz_chain;
use crate::operator::BasisTag;
use crate::report::{Cell, CsvTable};
use crate::sector::{compressed_spectrum, foel_from_minima, raising_kernel, s3_blocks, FoelVerdict, FOEL_TOL};
use crate::spin::HilbertShape;
use crate::{par, Error, HalfInt, RealOperator, Result};

/// Largest `q` accepted by the Casimir, whose constant term has a pole at 1.
pub const Q_CASIMIR_MAX: f64 = 1.0 - 1e-6;

/// Tolerance for `[H, S_q^±] = 0`.
pub const Q_INVARIANCE_TOL: f64 = 1e-9;

/// Deformation parameter `q ∈ (0, 1)` with `Δ = (q + 1/q)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QParam {
    q: f64,
    delta: f64,
}

impl QParam {
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("q = {q} outside (0, 1)")));
        }
        Ok(QParam { q, delta: (q + 1.0 / q) / 2.0 })
    }

    pub fn from_delta(delta: f64) -> Result<Self> {
        if delta <= 1.0 || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("Δ = {delta} must exceed 1")));
        }
        // Root of q² - 2Δq + 1 in (0, 1), written to avoid cancellation.
        let q = 1.0 / (delta + (delta * delta - 1.0).sqrt());
        Ok(QParam { q, delta })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

#[derive(Clone, Debug)]
pub struct QTotalOps {
    pub s3: RealOperator,
    pub sqplus: RealOperator,
    pub sqminus: RealOperator,
    /// `t ⊗ ... ⊗ t` with `t = diag(1/q, q)`.
    pub t: RealOperator,
}

/// `S^+ = Σ_x t ⊗ ... ⊗ t ⊗ S^+_x ⊗ 1 ⊗ ... ⊗ 1` and
/// `S^- = Σ_x 1 ⊗ ... ⊗ 1 ⊗ S^-_x ⊗ t^{-1} ⊗ ... ⊗ t^{-1}` on `L` spins 1/2.
pub fn suq2_generators(len: usize, qp: QParam) -> Result<QTotalOps> {
    if len == 0 {
        return Err(Error::InvalidParameter("empty chain".into()));
    }
    let shape = HilbertShape::qubits(len);
    let tag = shape.basis_tag();
    let q = qp.q;
    let t_of = |down: bool| if down { q } else { 1.0 / q };
    let mut s3 = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut t = Vec::new();
    for col in 0..shape.dim() {
        // Bit (L-1-x) set means site x is down.
        let down = |x: usize| col >> (len - 1 - x) & 1 == 1;
        s3.push((col, col, shape.twice_m(col) as f64 / 2.0));
        t.push((col, col, (0..len).map(|x| t_of(down(x))).product::<f64>()));
        for x in 0..len {
            let bit = 1usize << (len - 1 - x);
            if down(x) {
                let left: f64 = (0..x).map(|y| t_of(down(y))).product();
                plus.push((col ^ bit, col, left));
            } else {
                let right: f64 = (x + 1..len).map(|y| 1.0 / t_of(down(y))).product();
                minus.push((col ^ bit, col, right));
            }
        }
    }
    Ok(QTotalOps {
        s3: RealOperator::from_triplets(tag.clone(), s3)?,
        sqplus: RealOperator::from_triplets(tag.clone(), plus)?,
        sqminus: RealOperator::from_triplets(tag.clone(), minus)?,
        t: RealOperator::from_triplets(tag, t)?,
    })
}

/// `C = S^+ S^- + ((qT)^{-1} + qT)/(1/q - q)²`.
pub fn q_casimir(len: usize, qp: QParam) -> Result<RealOperator> {
    if qp.q > Q_CASIMIR_MAX {
        return Err(Error::InvalidParameter(format!(
            "q = {} too close to 1 for the q-Casimir",
            qp.q
        )));
    }
    let ops = suq2_generators(len, qp)?;
    let q = qp.q;
    let denom = (1.0 / q - q).powi(2);
    let diag: Vec<(usize, usize, f64)> = ops
        .t
        .entries()
        .map(|(i, j, tv)| (i, j, (1.0 / (q * tv) + q * tv) / denom))
        .collect();
    let constant = RealOperator::from_triplets(ops.t.basis().clone(), diag)?;
    ops.sqplus.matmul(&ops.sqminus)?.add(&constant)
}

/// Eigenvalue of the q-Casimir on spin `S`: `(q^{-(2S+1)} + q^{2S+1})/(1/q - q)²`.
pub fn q_casimir_value(spin: HalfInt, qp: QParam) -> f64 {
    let q = qp.q;
    let p = (spin.twice() + 1) as i32;
    (q.powi(-p) + q.powi(p)) / (1.0 / q - q).powi(2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QSectorEntry {
    pub spin: HalfInt,
    pub dim: usize,
    pub min_energy: f64,
    pub casimir_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QSectorReport {
    pub len: usize,
    pub q: f64,
    /// Ascending `S`.
    pub entries: Vec<QSectorEntry>,
    pub foel: FoelVerdict,
}

impl QSectorReport {
    pub fn min_energy(&self, spin: HalfInt) -> Option<f64> {
        self.entries.iter().find(|e| e.spin == spin).map(|e| e.min_energy)
    }

    /// Columns `S_times2, dim, min_energy, casimir_value`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["S_times2", "dim", "min_energy", "casimir_value"]);
        for e in &self.entries {
            t.push(vec![
                Cell::Int(e.spin.twice()),
                Cell::from(e.dim),
                Cell::Float(e.min_energy),
                Cell::Float(e.casimir_value),
            ]);
        }
        t
    }
}

fn check_invariance(h: &RealOperator, ops: &QTotalOps) -> Result<()> {
    let scale = h.max_abs().max(1.0);
    for (name, op) in [("S_q^+", &ops.sqplus), ("S_q^-", &ops.sqminus), ("S^3", &ops.s3)] {
        let norm = h.commutator_norm(op)?;
        if norm > Q_INVARIANCE_TOL * scale {
            return Err(Error::NotInvariant { with: name, norm });
        }
    }
    Ok(())
}

/// `E(H_L, S)` on `ker(S_q^+) ∩ {S^3 = S}` for every `S`, with the q-FOEL verdict.
pub fn q_sector_energies(len: usize, qp: QParam) -> Result<QSectorReport> {
    q_sector_energies_with_tol(len, qp, FOEL_TOL)
}

pub fn q_sector_energies_with_tol(len: usize, qp: QParam, tol: f64) -> Result<QSectorReport> {
    let h = build_xxz_chain(len, qp.delta)?;
    let ops = suq2_generators(len, qp)?;
    check_invariance(&h, &ops)?;
    let blocks = s3_blocks(&HilbertShape::qubits(len));
    let labels: Vec<i64> = blocks.keys().copied().filter(|&m| m >= 0).collect();
    let entries = par::try_map(&labels, |&twice| -> Result<QSectorEntry> {
        let k = raising_kernel(&ops.sqplus, &blocks, twice)?;
        let spin = HalfInt::from_twice(twice);
        if k.ncols() == 0 {
            return Err(Error::Numerical(format!("empty q-highest-weight space at S = {spin}")));
        }
        let c = compressed_spectrum(&h, &blocks[&twice], &k)?;
        Ok(QSectorEntry { spin, dim: c.dim, min_energy: c.min, casimir_value: q_casimir_value(spin, qp) })
    })?;
    let minima: BTreeMap<HalfInt, f64> = entries.iter().map(|e| (e.spin, e.min_energy)).collect();
    let foel = foel_from_minima(&minima, tol);
    Ok(QSectorReport { len, q: qp.q, entries, foel })
}

/// Infinite-volume ground energy of `n` overturned spins,
/// `(1 - q²)(1 - qⁿ) / ((1 + q²)(1 + qⁿ))`.
pub fn droplet_energy(n: usize, qp: QParam) -> f64 {
    let q = qp.q;
    let qn = q.powi(n as i32);
    (1.0 - q * q) * (1.0 - qn) / ((1.0 + q * q) * (1.0 + qn))
}

/// Width of the `n`-droplet band, `4qⁿ(1 - q²) / ((1 + qⁿ)(1 - qⁿ))`.
pub fn droplet_bandwidth(n: usize, qp: QParam) -> f64 {
    let q = qp.q;
    let qn = q.powi(n as i32);
    4.0 * qn * (1.0 - q * q) / ((1.0 + qn) * (1.0 - qn))
}

/// Lowest energy of the `L`-site chain among states of q-spin `L/2 - n`,
/// i.e. `E(H_L, L/2 - n)` on `ker(S_q^+)` in the `S^3 = L/2 - n` block.
///
/// The plain minimum over that `S^3` block is always 0 (it contains a member
/// of the maximal q-multiplet), so the q-highest-weight restriction is what
/// isolates the `n`-droplet states.
pub fn finite_droplet_energy(len: usize, n: usize, qp: QParam) -> Result<f64> {
    if n == 0 || 2 * n > len {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n <= L/2, got n = {n}, L = {len}"
        )));
    }
    let h = build_xxz_chain(len, qp.delta)?;
    let ops = suq2_generators(len, qp)?;
    let blocks = s3_blocks(&HilbertShape::qubits(len));
    let twice = len as i64 - 2 * n as i64;
    let k = raising_kernel(&ops.sqplus, &blocks, twice)?;
    if k.ncols() == 0 {
        return Err(Error::EmptySector(HalfInt::from_twice(twice)));
    }
    Ok(compressed_spectrum(&h, &blocks[&twice], &k)?.min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DropletRow {
    pub len: usize,
    pub n: usize,
    pub q: f64,
    pub finite_energy: f64,
    pub infinite_energy: f64,
    pub bandwidth: f64,
}

/// Finite-volume droplet energies for every `(L, n)` with `2n <= L`.
pub fn droplet_sweep(lens: &[usize], ns: &[usize], qp: QParam) -> Result<Vec<DropletRow>> {
    let jobs: Vec<(usize, usize)> = lens
        .iter()
        .flat_map(|&l| ns.iter().map(move |&n| (l, n)))
        .filter(|&(l, n)| n >= 1 && 2 * n <= l)
        .collect();
    par::try_map(&jobs, |&(len, n)| {
        Ok(DropletRow {
            len,
            n,
            q: qp.q,
            finite_energy: finite_droplet_energy(len, n, qp)?,
            infinite_energy: droplet_energy(n, qp),
            bandwidth: droplet_bandwidth(n, qp),
        })
    })
}

/// Columns `L, n, q, finite_energy, E_infinity, bandwidth`.
pub fn droplet_csv(rows: &[DropletRow]) -> CsvTable {
    let mut t = CsvTable::new(&["L", "n", "q", "finite_energy", "E_infinity", "bandwidth"]);
    for r in rows {
        t.push(vec![
            Cell::from(r.len),
            Cell::from(r.n),
            Cell::Float(r.q),
            Cell::Float(r.finite_energy),
            Cell::Float(r.infinite_energy),
            Cell::Float(r.bandwidth),
        ]);
    }
    t
}

/// The basis tag used by every operator in this module.
pub fn qubit_tag(len: usize) -> BasisTag {
    HilbertShape::qubits(len).basis_tag()
}
