//! Oracles shared by the integration tests. Nothing here calls the sector
//! machinery of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use foel_core::eigen::symmetric_eigenvalues;
use foel_core::{HalfInt, RealOperator};
use rand::Rng;

/// Eigenvalues of `H` in each `S^3` block, found by scanning digits directly.
pub fn block_spectra(h: &RealOperator, spins: &[HalfInt]) -> BTreeMap<i64, Vec<f64>> {
    let dims: Vec<usize> = spins.iter().map(|s| s.multiplet_dim()).collect();
    let total: usize = dims.iter().product();
    let mut blocks: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut twice_m = 0;
        for (x, &d) in dims.iter().enumerate().rev() {
            let digit = rest % d;
            rest /= d;
            twice_m += spins[x].twice() - 2 * digit as i64;
        }
        blocks.entry(twice_m).or_default().push(idx);
    }
    blocks
        .into_iter()
        .map(|(m, idx)| (m, symmetric_eigenvalues(&h.submatrix(&idx, &idx))))
        .collect()
}

/// Removes from `big` one copy of each value in `small` (within `tol`).
pub fn multiset_difference(big: &[f64], small: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut rest: Vec<f64> = big.to_vec();
    for &x in small {
        let (pos, _) = rest
            .iter()
            .enumerate()
            .map(|(i, &y)| (i, (y - x).abs()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Spectrum of `H` on each highest-weight space: the `M = S` block minus
/// the `M = S + 1` block.
pub fn sector_spectra_by_difference(h: &RealOperator, spins: &[HalfInt]) -> BTreeMap<HalfInt, Vec<f64>> {
    let blocks = block_spectra(h, spins);
    let mut out = BTreeMap::new();
    for (&m, vals) in blocks.iter().filter(|(&m, _)| m >= 0) {
        let above = blocks.get(&(m + 2)).cloned().unwrap_or_default();
        let diff = multiset_difference(vals, &above, 1e-8 * vals.iter().fold(1.0f64, |a, v| a.max(v.abs())))
            .expect("M+1 block spectrum embeds in the M block");
        if !diff.is_empty() {
            out.insert(HalfInt::from_twice(m), diff);
        }
    }
    out
}

pub fn assert_multiset_eq(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len(), "lengths differ: {a:?} vs {b:?}");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= tol, "{x} vs {y}\n{a:?}\n{b:?}");
    }
}

/// Random chain: `L <= max_len`, spins in {1/2, 1, 3/2}, dimension at most `max_dim`,
/// couplings uniform in (0, 2].
pub fn random_chain<R: Rng>(rng: &mut R, max_len: usize, max_dim: usize) -> (Vec<HalfInt>, Vec<f64>) {
    loop {
        let len = rng.gen_range(2..=max_len);
        let spins: Vec<HalfInt> = (0..len).map(|_| HalfInt::from_twice(rng.gen_range(1..=3))).collect();
        let dim: usize = spins.iter().map(|s| s.multiplet_dim()).product();
        if dim <= max_dim {
            let js = (0..len - 1).map(|_| 2.0 - rng.gen::<f64>() * 2.0).collect();
            return (spins, js);
        }
    }
}
