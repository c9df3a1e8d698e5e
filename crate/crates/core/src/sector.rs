//! Spectra by total spin: `S^3` blocks, highest-weight spaces, sector energies
//! `E(H,S)`, and the ordering verdicts built on them.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::eigen::{
    lanczos_extremal, null_space, symmetric_eigen, symmetric_eigenvalues, Extremal, DENSE_LIMIT,
    KERNEL_REL_TOL, LANCZOS_TOL,
};
use crate::report::{Cell, CsvTable};
use crate::spin::{casimir, total_spin_ops, HilbertShape};
use crate::{par, Error, HalfInt, RealOperator, Result};

/// Default strictness tolerance for FOEL gaps.
pub const FOEL_TOL: f64 = 1e-8;

/// Commutators with the total-spin operators must vanish to this (relative) level.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Sector cross-checks against the Casimir route run up to this full dimension.
pub const CROSS_CHECK_LIMIT: usize = 1000;

/// Product-basis indices grouped by `2·S^3`, ascending.
pub fn s3_blocks(shape: &HilbertShape) -> BTreeMap<i64, Vec<usize>> {
    let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..shape.dim() {
        out.entry(shape.twice_m(i)).or_default().push(i);
    }
    out
}

/// Orthonormal basis of `ker(S^+) ∩ {S^3 = S}`, stored in the coordinates of
/// the `S^3 = S` block.
#[derive(Clone, Debug)]
pub struct HighestWeightBasis {
    pub spin: HalfInt,
    /// Product-basis indices of the `S^3 = S` block.
    pub block: Vec<usize>,
    /// Columns are the basis vectors in block coordinates.
    pub vectors: DMatrix<f64>,
}

impl HighestWeightBasis {
    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    /// Column `j` embedded in the full product space of dimension `dim`.
    pub fn full_vector(&self, j: usize, dim: usize) -> nalgebra::DVector<f64> {
        let mut v = nalgebra::DVector::zeros(dim);
        for (i, &idx) in self.block.iter().enumerate() {
            v[idx] = self.vectors[(i, j)];
        }
        v
    }
}

/// Kernel of `raise` restricted from block `2M = twice_m` to block `2M + 2`.
///
/// The kernel dimension must equal the difference of the two block sizes
/// (surjectivity of the raising map onto the higher block); anything else is
/// reported as a numerical failure.
pub(crate) fn raising_kernel(
    raise: &RealOperator,
    blocks: &BTreeMap<i64, Vec<usize>>,
    twice_m: i64,
) -> Result<DMatrix<f64>> {
    let cols = blocks.get(&twice_m).map(Vec::as_slice).unwrap_or(&[]);
    let Some(rows) = blocks.get(&(twice_m + 2)) else {
        return Ok(DMatrix::identity(cols.len(), cols.len()));
    };
    let restricted = raise.submatrix(rows, cols);
    let kernel = null_space(&restricted, KERNEL_REL_TOL);
    let expected = cols.len().saturating_sub(rows.len());
    if kernel.ncols() != expected {
        return Err(Error::Numerical(format!(
            "raising-operator kernel at 2M = {twice_m} has dimension {}, expected {expected}",
            kernel.ncols()
        )));
    }
    Ok(kernel)
}

pub fn highest_weight_space(shape: &HilbertShape, spin: HalfInt) -> Result<HighestWeightBasis> {
    let blocks = s3_blocks(shape);
    if spin.is_negative() || !blocks.contains_key(&spin.twice()) {
        return Err(Error::EmptySector(spin));
    }
    let ops = total_spin_ops(shape)?;
    let vectors = raising_kernel(&ops.splus, &blocks, spin.twice())?;
    if vectors.ncols() == 0 {
        return Err(Error::EmptySector(spin));
    }
    Ok(HighestWeightBasis { spin, block: blocks[&spin.twice()].clone(), vectors })
}

/// Spectrum of `H` compressed to the orthonormal columns `k` of the block `block`.
#[derive(Clone, Debug)]
pub(crate) struct Compressed {
    pub dim: usize,
    pub min: f64,
    pub max: f64,
}

pub(crate) fn compressed_spectrum(h: &RealOperator, block: &[usize], k: &DMatrix<f64>) -> Result<Compressed> {
    let dim = k.ncols();
    let hb = h.submatrix(block, block);
    if dim < DENSE_LIMIT {
        let m = k.transpose() * &hb * k;
        let values = symmetric_eigenvalues(&m);
        Ok(Compressed { dim, min: values[0], max: values[dim - 1] })
    } else {
        let apply = |x: &nalgebra::DVector<f64>| k.transpose() * (&hb * (k * x));
        let min = lanczos_extremal(dim, apply, Extremal::Smallest, LANCZOS_TOL)?;
        let max = lanczos_extremal(dim, apply, Extremal::Largest, LANCZOS_TOL)?;
        Ok(Compressed { dim, min, max })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorEntry {
    pub spin: HalfInt,
    /// `dim V^(S)`, the multiplicity of spin `S`.
    pub dim: usize,
    pub min_energy: f64,
    pub max_energy: f64,
}

/// Outcome of an energy-ordering check over adjacent sector labels.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FoelVerdict {
    pub ok: bool,
    /// `(S, S - 1, E(S - 1) - E(S))` for each adjacent pair, descending `S`.
    pub margins: Vec<(HalfInt, HalfInt, f64)>,
    /// Pairs with `|gap| <= tol`.
    pub crossings: Vec<(HalfInt, HalfInt)>,
    /// Pairs with `gap < -tol`.
    pub violations: Vec<(HalfInt, HalfInt)>,
}

impl FoelVerdict {
    pub fn min_margin(&self) -> Option<f64> {
        self.margins.iter().map(|m| m.2).reduce(f64::min)
    }
}

/// Ordering of the largest sector eigenvalues.
///
/// The largest eigenvalue of a ferromagnet on `V^(S)` is minus the lowest
/// eigenvalue of the antiferromagnet, so Lieb-Mattis ordering of the latter
/// shows up as largest eigenvalues strictly decreasing in `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxOrderingVerdict {
    pub ok: bool,
    /// `(S, S + 1, max(S) - max(S + 1))` for each adjacent pair in the range;
    /// all positive when the ordering holds.
    pub gaps: Vec<(HalfInt, HalfInt, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorReport {
    /// One entry per total-spin label present, ascending `S`.
    pub entries: Vec<SectorEntry>,
    pub foel: FoelVerdict,
    /// Largest sector eigenvalues strictly decrease in `S` from the label
    /// carrying the overall largest eigenvalue up to `S_max`.
    pub max_ordering_ok: bool,
}

impl SectorReport {
    pub fn from_entries(entries: Vec<SectorEntry>, tol: f64) -> Self {
        let minima: BTreeMap<HalfInt, f64> = entries.iter().map(|e| (e.spin, e.min_energy)).collect();
        let foel = foel_from_minima(&minima, tol);
        let top = entries
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.max_energy.total_cmp(&b.1.max_energy))
            .map_or(0, |(i, _)| i);
        let max_ordering_ok = entries[top..].windows(2).all(|w| w[0].max_energy > w[1].max_energy);
        SectorReport { entries, foel, max_ordering_ok }
    }

    pub fn get(&self, spin: HalfInt) -> Option<&SectorEntry> {
        self.entries.iter().find(|e| e.spin == spin)
    }

    pub fn min_energy(&self, spin: HalfInt) -> Option<f64> {
        self.get(spin).map(|e| e.min_energy)
    }

    pub fn labels(&self) -> Vec<HalfInt> {
        self.entries.iter().map(|e| e.spin).collect()
    }

    /// `Σ_S (2S+1) dim V^(S)`.
    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|e| e.spin.multiplet_dim() * e.dim).sum()
    }

    /// Columns `S_times2, dim, min_energy, max_energy`, ascending `S`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["S_times2", "dim", "min_energy", "max_energy"]);
        for e in &self.entries {
            t.push(vec![
                Cell::Int(e.spin.twice()),
                Cell::Int(e.dim as i64),
                Cell::Float(e.min_energy),
                Cell::Float(e.max_energy),
            ]);
        }
        t
    }
}

/// FOEL check on a map from total-spin label to minimum energy.
pub fn foel_from_minima(minima: &BTreeMap<HalfInt, f64>, tol: f64) -> FoelVerdict {
    let mut v = FoelVerdict { ok: true, ..Default::default() };
    let labels: Vec<(&HalfInt, &f64)> = minima.iter().rev().collect();
    for w in labels.windows(2) {
        let (&s, &e_s) = w[0];
        let (&s_lower, &e_lower) = w[1];
        let gap = e_lower - e_s;
        v.margins.push((s, s_lower, gap));
        if gap.abs() <= tol {
            v.crossings.push((s, s_lower));
            v.ok = false;
        } else if gap < 0.0 {
            v.violations.push((s, s_lower));
            v.ok = false;
        }
    }
    v
}

pub fn check_foel(report: &SectorReport, strict_tol: f64) -> FoelVerdict {
    let minima = report.entries.iter().map(|e| (e.spin, e.min_energy)).collect();
    foel_from_minima(&minima, strict_tol)
}

/// Largest sector eigenvalues strictly decrease in `S` over `lo..=hi`
/// (labels outside the report are skipped).
pub fn check_max_ordering(report: &SectorReport, lo: HalfInt, hi: HalfInt) -> MaxOrderingVerdict {
    let in_range: Vec<&SectorEntry> =
        report.entries.iter().filter(|e| e.spin >= lo && e.spin <= hi).collect();
    let gaps: Vec<(HalfInt, HalfInt, f64)> = in_range
        .windows(2)
        .map(|w| (w[0].spin, w[1].spin, w[0].max_energy - w[1].max_energy))
        .collect();
    MaxOrderingVerdict { ok: gaps.iter().all(|g| g.2 > 0.0), gaps }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorOptions {
    pub strict_tol: f64,
    /// Cross-check every sector against Casimir eigenspaces when the full
    /// dimension is at most this value.
    pub cross_check_limit: usize,
}

impl Default for SectorOptions {
    fn default() -> Self {
        SectorOptions { strict_tol: FOEL_TOL, cross_check_limit: CROSS_CHECK_LIMIT }
    }
}

/// Min and max eigenvalue of `H` on every highest-weight space.
pub fn sector_energies(h: &RealOperator, shape: &HilbertShape) -> Result<SectorReport> {
    sector_energies_with(h, shape, SectorOptions::default())
}

pub fn sector_energies_with(
    h: &RealOperator,
    shape: &HilbertShape,
    opts: SectorOptions,
) -> Result<SectorReport> {
    if h.dim() != shape.dim() {
        return Err(Error::DimensionMismatch { expected: shape.dim(), found: h.dim() });
    }
    let ops = total_spin_ops(shape)?;
    let scale = h.max_abs().max(1.0);
    for (name, op) in [("S^3", &ops.s3), ("S^+", &ops.splus)] {
        let norm = h.commutator_norm(op)?;
        if norm > INVARIANCE_TOL * scale {
            return Err(Error::NotInvariant { with: name, norm });
        }
    }
    let blocks = s3_blocks(shape);
    let labels: Vec<i64> = blocks.keys().copied().filter(|&m| m >= 0).collect();
    let sectors = par::try_map(&labels, |&twice| -> Result<Option<SectorEntry>> {
        let k = raising_kernel(&ops.splus, &blocks, twice)?;
        if k.ncols() == 0 {
            return Ok(None);
        }
        let c = compressed_spectrum(h, &blocks[&twice], &k)?;
        Ok(Some(SectorEntry {
            spin: HalfInt::from_twice(twice),
            dim: c.dim,
            min_energy: c.min,
            max_energy: c.max,
        }))
    })?;
    let entries: Vec<SectorEntry> = sectors.into_iter().flatten().collect();
    if shape.dim() <= opts.cross_check_limit {
        cross_check_with_casimir(h, shape, &entries)?;
    }
    Ok(SectorReport::from_entries(entries, opts.strict_tol))
}

/// Spectrum of `H` on each Casimir eigenspace inside the `S^3 = S` block.
///
/// Independent of the kernel route; the label set comes from the Casimir
/// eigenvalues themselves.
pub fn casimir_sector_spectra(
    h: &RealOperator,
    shape: &HilbertShape,
) -> Result<BTreeMap<HalfInt, Vec<f64>>> {
    let c = casimir(shape)?;
    let blocks = s3_blocks(shape);
    let mut out = BTreeMap::new();
    for (&twice, block) in blocks.iter().filter(|(&m, _)| m >= 0) {
        let (vals, vecs) = symmetric_eigen(&c.submatrix(block, block));
        let hb = h.submatrix(block, block);
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (j, &lambda) in vals.iter().enumerate() {
            // λ = S(S+1)  ⇒  2S = sqrt(4λ + 1) - 1.
            let twice_s = ((4.0 * lambda + 1.0).max(0.0).sqrt() - 1.0).round() as i64;
            let s = HalfInt::from_twice(twice_s);
            if (s.casimir_value() - lambda).abs() > 1e-6 {
                return Err(Error::Numerical(format!("Casimir eigenvalue {lambda} is not S(S+1)")));
            }
            groups.entry(twice_s).or_default().push(j);
        }
        // Only S = M contributes a new label in this block.
        if let Some(cols) = groups.get(&twice) {
            let p = vecs.select_columns(cols);
            let m = p.transpose() * hb * &p;
            out.insert(HalfInt::from_twice(twice), symmetric_eigenvalues(&m));
        }
    }
    Ok(out)
}

fn cross_check_with_casimir(
    h: &RealOperator,
    shape: &HilbertShape,
    entries: &[SectorEntry],
) -> Result<()> {
    let oracle = casimir_sector_spectra(h, shape)?;
    if oracle.len() != entries.len() {
        return Err(Error::Numerical(format!(
            "kernel route found {} sectors, Casimir route {}",
            entries.len(),
            oracle.len()
        )));
    }
    for e in entries {
        let Some(vals) = oracle.get(&e.spin) else {
            return Err(Error::Numerical(format!("sector {} missing from Casimir route", e.spin)));
        };
        let tol = 1e-8 * e.min_energy.abs().max(e.max_energy.abs()).max(1.0);
        let (lo, hi) = (vals[0], vals[vals.len() - 1]);
        if vals.len() != e.dim || (lo - e.min_energy).abs() > tol || (hi - e.max_energy).abs() > tol {
            return Err(Error::Numerical(format!(
                "sector {} disagrees with Casimir route: dim {} vs {}, min {} vs {lo}, max {} vs {hi}",
                e.spin, e.dim, vals.len(), e.min_energy, e.max_energy
            )));
        }
    }
    Ok(())
}

/// Full spectrum per `S^3` block as `(2M, ascending eigenvalues)`, ascending `M`.
/// With `offset`, the global ground energy is subtracted from everything.
pub fn full_spectrum_by_s3(
    h: &RealOperator,
    shape: &HilbertShape,
    offset: bool,
) -> Result<Vec<(i64, Vec<f64>)>> {
    let ops = total_spin_ops(shape)?;
    let norm = h.commutator_norm(&ops.s3)?;
    if norm > INVARIANCE_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotInvariant { with: "S^3", norm });
    }
    let blocks: Vec<(i64, Vec<usize>)> = s3_blocks(shape).into_iter().collect();
    let mut out = par::map(&blocks, |(m, idx)| (*m, symmetric_eigenvalues(&h.submatrix(idx, idx))));
    if offset {
        let ground = out
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .fold(f64::INFINITY, f64::min);
        for (_, v) in &mut out {
            for e in v.iter_mut() {
                *e -= ground;
            }
        }
    }
    Ok(out)
}

/// Columns `M_times2, energy`, one row per eigenvalue.
pub fn spectrum_by_s3_csv(spectrum: &[(i64, Vec<f64>)]) -> CsvTable {
    let mut t = CsvTable::new(&["M_times2", "energy"]);
    for (m, vals) in spectrum {
        for &e in vals {
            t.push(vec![Cell::Int(*m), Cell::Float(e)]);
        }
    }
    t
}

/// How [`low_energy_by_deviation`] validates its truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffPolicy {
    /// Rely on the ordering of sector minima among the computed sectors.
    Trust,
    /// Also diagonalize the full operator and compare (small systems only).
    CrossCheck,
}

/// All eigenvalues of `H` (with multiplicity) up to `E(H, S_max - n)`, using
/// only the sectors `S_max, ..., S_max - n`.
///
/// This is exact when FOEL holds: lower sectors have no eigenvalue at or
/// below the cutoff. When `n` reaches the smallest label the whole spectrum
/// is returned.
pub fn low_energy_by_deviation(
    h: &RealOperator,
    shape: &HilbertShape,
    n: usize,
    policy: CutoffPolicy,
) -> Result<Vec<f64>> {
    let ops = total_spin_ops(shape)?;
    let blocks = s3_blocks(shape);
    let twice_max = *blocks.keys().last().expect("nonempty shape");
    let twice_min_present = blocks.keys().copied().filter(|&m| m >= 0).min().unwrap_or(0);
    let lowest = (twice_max - 2 * n as i64).max(twice_min_present);
    let labels: Vec<i64> = (0..=n as i64)
        .map(|d| twice_max - 2 * d)
        .filter(|&t| t >= lowest)
        .collect();
    let sectors = par::try_map(&labels, |&twice| -> Result<Option<(HalfInt, Vec<f64>)>> {
        let k = raising_kernel(&ops.splus, &blocks, twice)?;
        if k.ncols() == 0 {
            return Ok(None);
        }
        let hb = h.submatrix(&blocks[&twice], &blocks[&twice]);
        let m = k.transpose() * hb * &k;
        Ok(Some((HalfInt::from_twice(twice), symmetric_eigenvalues(&m))))
    })?;
    let sectors: Vec<(HalfInt, Vec<f64>)> = sectors.into_iter().flatten().collect();
    let minima: BTreeMap<HalfInt, f64> = sectors.iter().map(|(s, v)| (*s, v[0])).collect();
    let verdict = foel_from_minima(&minima, 0.0);
    if !verdict.violations.is_empty() {
        return Err(Error::HypothesisViolation(format!(
            "sector minima are not ordered: {:?}",
            verdict.violations
        )));
    }
    // With every sector computed nothing needs to be cut.
    let cutoff = if lowest == twice_min_present {
        f64::INFINITY
    } else {
        minima.values().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    let slack = if cutoff.is_finite() { 1e-9 * cutoff.abs().max(1.0) } else { 0.0 };
    let mut out = Vec::new();
    for (s, vals) in &sectors {
        for &e in vals.iter().filter(|&&e| e <= cutoff + slack) {
            out.extend(std::iter::repeat_n(e, s.multiplet_dim()));
        }
    }
    out.sort_by(f64::total_cmp);
    if policy == CutoffPolicy::CrossCheck {
        let full = symmetric_eigenvalues(&h.to_dense());
        let truncated: Vec<f64> = full.into_iter().filter(|&e| e <= cutoff + slack).collect();
        let agree = truncated.len() == out.len()
            && truncated.iter().zip(&out).all(|(a, b)| (a - b).abs() <= 1e-8 * a.abs().max(1.0));
        if !agree {
            return Err(Error::HypothesisViolation(format!(
                "truncated full spectrum ({} values) differs from sector route ({} values)",
                truncated.len(),
                out.len()
            )));
        }
    }
    Ok(out)
}
