//! Symmetric simple exclusion process on weighted graphs: generators,
//! spectral gaps per particle number, and the map to the spin-1/2
//! Heisenberg model.
//!
//! A configuration is an occupation integer with vertex `x` at bit
//! `N - 1 - x`. Under the spin map an occupied vertex is spin up, so the
//! product-basis index of a configuration is its bitwise complement.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigen::{lanczos_extremal, symmetric_eigenvalues, Extremal, DENSE_LIMIT, LANCZOS_TOL};
use crate::graph::SpinGraph;
use crate::operator::BasisTag;
use crate::report::{Cell, CsvTable};
use crate::spin::{assemble, heisenberg_bond_matrix, HilbertShape, LocalTerm};
use crate::{par, Error, HalfInt, RealOperator, Result};

/// Eigenvalues at or below this count as the invariant (zero) mode.
pub const ZERO_MODE_TOL: f64 = 1e-10;

/// Occupation `η: Λ -> {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ParticleConfig {
    pub occupation: Vec<bool>,
}

impl ParticleConfig {
    pub fn from_bits(bits: u64, sites: usize) -> Self {
        ParticleConfig { occupation: (0..sites).map(|x| bits >> (sites - 1 - x) & 1 == 1).collect() }
    }

    pub fn bits(&self) -> u64 {
        self.occupation.iter().fold(0, |acc, &o| acc << 1 | o as u64)
    }

    pub fn particles(&self) -> usize {
        self.occupation.iter().filter(|&&o| o).count()
    }

    /// `η^{xy}`: the occupations of `x` and `y` exchanged.
    pub fn swapped(&self, x: usize, y: usize) -> Self {
        let mut o = self.occupation.clone();
        o.swap(x, y);
        ParticleConfig { occupation: o }
    }
}

/// All `n`-particle occupation integers on `sites` vertices, ascending.
pub fn configurations(sites: usize, n: usize) -> Vec<u64> {
    (0..1u64 << sites).filter(|b| b.count_ones() as usize == n).collect()
}

#[derive(Clone, Debug)]
pub struct SsepGenerator {
    pub sites: usize,
    pub n: usize,
    /// Occupation integers, ascending; row/column order of `matrix`.
    pub configs: Vec<u64>,
    pub matrix: RealOperator,
}

impl SsepGenerator {
    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn config(&self, i: usize) -> ParticleConfig {
        ParticleConfig::from_bits(self.configs[i], self.sites)
    }
}

fn check_rates(g: &SpinGraph, rates: &[f64]) -> Result<()> {
    if rates.len() != g.edges().len() {
        return Err(Error::DimensionMismatch { expected: g.edges().len(), found: rates.len() });
    }
    if let Some(r) = rates.iter().find(|&&r| r <= 0.0 || !r.is_finite()) {
        return Err(Error::InvalidParameter(format!("nonpositive rate {r}")));
    }
    Ok(())
}

/// `(Lf)(η) = Σ_{x~y} r_xy (f(η) - f(η^{xy}))` on `n`-particle configurations.
/// `rates` follows the edge order of `g`.
pub fn ssep_generator(g: &SpinGraph, rates: &[f64], n: usize) -> Result<SsepGenerator> {
    check_rates(g, rates)?;
    let sites = g.len();
    if n > sites {
        return Err(Error::InvalidParameter(format!("{n} particles on {sites} sites")));
    }
    if sites > 62 {
        return Err(Error::InvalidParameter(format!("{sites} sites is too many")));
    }
    let configs = configurations(sites, n);
    let mut triplets = Vec::new();
    for (j, &eta) in configs.iter().enumerate() {
        for (e, &r) in g.edges().iter().zip(rates) {
            let (bx, by) = (1u64 << (sites - 1 - e.u), 1u64 << (sites - 1 - e.v));
            if (eta & bx != 0) != (eta & by != 0) {
                let swapped = eta ^ bx ^ by;
                let i = configs.binary_search(&swapped).expect("same particle number");
                triplets.push((j, j, r));
                triplets.push((i, j, -r));
            }
        }
    }
    let tag = BasisTag::Configurations { sites, particles: Some(n) };
    let matrix = RealOperator::from_triplets(tag, triplets)?;
    Ok(SsepGenerator { sites, n, configs, matrix })
}

/// Smallest positive eigenvalue `λ(n)`. The zero mode must be simple.
pub fn spectral_gap(gen: &SsepGenerator) -> Result<f64> {
    let dim = gen.dim();
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "the {}-particle sector has no positive eigenvalue",
            gen.n
        )));
    }
    if dim < DENSE_LIMIT {
        let vals = symmetric_eigenvalues(&gen.matrix.to_dense());
        let zeros = vals.iter().filter(|&&v| v <= ZERO_MODE_TOL).count();
        if zeros != 1 {
            return Err(Error::InvalidGraph(format!(
                "zero eigenvalue has multiplicity {zeros} in the {}-particle sector (graph disconnected?)",
                gen.n
            )));
        }
        return Ok(vals[1]);
    }
    // Lift the uniform zero mode above the spectrum, then take the bottom.
    let lift = 2.0 * gen.matrix.entries().filter(|e| e.0 == e.1).map(|e| e.2).fold(0.0, f64::max) + 1.0;
    let apply = |x: &DVector<f64>| {
        let mean = x.sum() / dim as f64;
        gen.matrix.apply(x).add_scalar(lift * mean)
    };
    let lambda = lanczos_extremal(dim, apply, Extremal::Smallest, LANCZOS_TOL)?;
    if lambda <= ZERO_MODE_TOL {
        return Err(Error::InvalidGraph(format!(
            "zero eigenvalue is not simple in the {}-particle sector (graph disconnected?)",
            gen.n
        )));
    }
    Ok(lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AldousRow {
    pub n: usize,
    pub dim: usize,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AldousReport {
    pub rows: Vec<AldousRow>,
    pub lambda1: f64,
    /// `max_n |λ(n) - λ(1)| / λ(1)`.
    pub max_relative_deviation: f64,
    pub ok: bool,
}

impl AldousReport {
    /// Columns `n, sector_dim, lambda_n, lambda_1, relative_deviation`.
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["n", "sector_dim", "lambda_n", "lambda_1", "relative_deviation"]);
        for r in &self.rows {
            t.push(vec![
                Cell::from(r.n),
                Cell::from(r.dim),
                Cell::Float(r.lambda),
                Cell::Float(self.lambda1),
                Cell::Float((r.lambda - self.lambda1).abs() / self.lambda1),
            ]);
        }
        t
    }
}

/// `λ(n)` for `1 <= n <= |Λ| - 1` and whether all agree with `λ(1)` to a
/// relative `1e-9`.
pub fn check_aldous(g: &SpinGraph, rates: &[f64]) -> Result<AldousReport> {
    check_rates(g, rates)?;
    if g.len() < 2 {
        return Err(Error::InvalidGraph("need at least two vertices".into()));
    }
    let ns: Vec<usize> = (1..g.len()).collect();
    let rows = par::try_map(&ns, |&n| -> Result<AldousRow> {
        let gen = ssep_generator(g, rates, n)?;
        Ok(AldousRow { n, dim: gen.dim(), lambda: spectral_gap(&gen)? })
    })?;
    let lambda1 = rows[0].lambda;
    let max_relative_deviation = rows
        .iter()
        .map(|r| (r.lambda - lambda1).abs() / lambda1)
        .fold(0.0, f64::max);
    Ok(AldousReport { rows, lambda1, max_relative_deviation, ok: max_relative_deviation <= 1e-9 })
}

/// Product-basis index of a configuration under the spin map.
pub fn spin_index(bits: u64, sites: usize) -> usize {
    (!bits & ((1u64 << sites) - 1)) as usize
}

/// `H = Σ_{x~y} J_xy (1/4 - S_x·S_y)` on spins 1/2.
pub fn interchange_hamiltonian(g: &SpinGraph, couplings: &[f64]) -> Result<RealOperator> {
    check_rates(g, couplings)?;
    if g.sites().iter().any(|s| s.spin != HalfInt::HALF) {
        return Err(Error::InvalidGraph("all sites must carry spin 1/2".into()));
    }
    let shape = HilbertShape::qubits(g.len());
    let bond = DMatrix::identity(4, 4) * 0.25 - heisenberg_bond_matrix(HalfInt::HALF, HalfInt::HALF)?;
    let terms: Vec<LocalTerm> = g
        .edges()
        .iter()
        .zip(couplings)
        .map(|(e, &j)| LocalTerm { sites: vec![e.u, e.v], matrix: &bond * j })
        .collect();
    assemble(&shape, &terms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpinMapVerdict {
    /// `max |U L U* - H|` over all entries.
    pub max_deviation: f64,
    /// Every `n`-particle configuration maps to `S^3 = n - |Λ|/2`.
    pub s3_ok: bool,
    pub ok: bool,
}

/// Checks `U L U* = H` for SSEP rates `J/2` and `H = Σ J(1/4 - S·S)`.
pub fn verify_spin_map(g: &SpinGraph, couplings: &[f64]) -> Result<SpinMapVerdict> {
    let h = interchange_hamiltonian(g, couplings)?;
    let sites = g.len();
    let rates: Vec<f64> = couplings.iter().map(|j| j / 2.0).collect();
    let shape = HilbertShape::qubits(sites);
    let mut mapped = Vec::new();
    let mut s3_ok = true;
    for n in 0..=sites {
        let gen = ssep_generator(g, &rates, n)?;
        for &c in &gen.configs {
            s3_ok &= shape.twice_m(spin_index(c, sites)) == 2 * n as i64 - sites as i64;
        }
        for (i, j, v) in gen.matrix.entries() {
            mapped.push((spin_index(gen.configs[i], sites), spin_index(gen.configs[j], sites), v));
        }
    }
    let mapped = RealOperator::from_triplets(shape.basis_tag(), mapped)?;
    let max_deviation = mapped.distance(&h)?;
    Ok(SpinMapVerdict { max_deviation, s3_ok, ok: s3_ok && max_deviation <= 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> SpinGraph {
        SpinGraph::path(&vec![HalfInt::HALF; n], &vec![1.0; n - 1]).unwrap()
    }

    fn triangle() -> SpinGraph {
        SpinGraph::uniform(3, HalfInt::HALF, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn config_bits() {
        let c = ParticleConfig::from_bits(0b101, 3);
        assert_eq!(c.occupation, vec![true, false, true]);
        assert_eq!(c.bits(), 0b101);
        assert_eq!(c.swapped(0, 1).bits(), 0b011);
        assert_eq!(configurations(3, 1), vec![1, 2, 4]);
    }

    #[test]
    fn path_of_three() {
        let g = path(3);
        let gen = ssep_generator(&g, &[0.5, 0.5], 1).unwrap();
        let vals = symmetric_eigenvalues(&gen.matrix.to_dense());
        for (a, b) in vals.iter().zip([0.0, 0.5, 1.5]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((spectral_gap(&gen).unwrap() - 0.5).abs() < 1e-12);
        let gen2 = ssep_generator(&g, &[0.5, 0.5], 2).unwrap();
        assert!((spectral_gap(&gen2).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn frozen_sectors() {
        let g = path(4);
        for n in [0, 4] {
            let gen = ssep_generator(&g, &[1.0; 3], n).unwrap();
            assert_eq!(gen.dim(), 1);
            assert_eq!(gen.matrix.max_abs(), 0.0);
        }
    }

    #[test]
    fn complete_graph() {
        let gen = ssep_generator(&triangle(), &[1.0; 3], 1).unwrap();
        let vals = symmetric_eigenvalues(&gen.matrix.to_dense());
        assert!(vals[0].abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12 && (vals[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn generator_structure() {
        let gen = ssep_generator(&path(5), &[0.3, 1.0, 2.0, 0.7], 2).unwrap();
        let m = gen.matrix.to_dense();
        assert!(gen.matrix.symmetry_defect() == 0.0);
        for i in 0..m.nrows() {
            assert!(m.row(i).sum().abs() < 1e-14);
            for j in 0..m.ncols() {
                assert!(i == j || m[(i, j)] <= 0.0);
            }
        }
    }

    #[test]
    fn disconnected_graph_is_diagnosed() {
        let g = SpinGraph::uniform(4, HalfInt::HALF, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let gen = ssep_generator(&g, &[1.0, 1.0], 1).unwrap();
        assert!(matches!(spectral_gap(&gen), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn aldous_on_a_path() {
        let r = check_aldous(&path(6), &[0.4, 1.1, 0.9, 1.7, 0.6]).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.rows.len(), 5);
        assert_eq!(r.to_csv().len(), 5);
    }

    #[test]
    fn spin_map_two_sites() {
        let v = verify_spin_map(&path(2), &[1.0]).unwrap();
        assert!(v.ok, "{v:?}");
        let v = verify_spin_map(&triangle(), &[0.5, 1.5, 2.0]).unwrap();
        assert!(v.ok, "{v:?}");
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(ssep_generator(&path(3), &[1.0, -1.0], 1).is_err());
        assert!(ssep_generator(&path(3), &[1.0], 1).is_err());
    }
}
