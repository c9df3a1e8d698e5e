mod common;

use common::{assert_multiset_eq, block_spectra, random_chain, sector_spectra_by_difference};
use foel_core::eigen::symmetric_eigenvalues;
use foel_core::graph::nonisomorphic_trees;
use foel_core::hamiltonian::{build_heisenberg, build_normalized_chain, build_xxz_chain};
use foel_core::sector::{
    check_max_ordering, full_spectrum_by_s3, highest_weight_space, low_energy_by_deviation, sector_energies,
    CutoffPolicy,
};
use foel_core::{ChainSpec, Error, HalfInt, HilbertShape, SpinGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sum_rule(twice in prop::collection::vec(1i64..=3, 1..=5)) {
        let spins: Vec<HalfInt> = twice.into_iter().map(HalfInt::from_twice).collect();
        let shape = HilbertShape::from_spins(&spins).unwrap();
        let mut total = 0;
        for t in (0..=shape.max_spin().twice()).rev().step_by(2) {
            if let Ok(b) = highest_weight_space(&shape, HalfInt::from_twice(t)) {
                total += HalfInt::from_twice(t).multiplet_dim() * b.len();
            }
        }
        prop_assert_eq!(total, shape.dim());
    }

    #[test]
    fn sector_extremes_match_block_difference(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (spins, js) = random_chain(&mut rng, 5, 300);
        let h = build_normalized_chain(&ChainSpec::new(spins.clone(), js).unwrap()).unwrap();
        let shape = HilbertShape::from_spins(&spins).unwrap();
        let report = sector_energies(&h, &shape).unwrap();
        let oracle = sector_spectra_by_difference(&h, &spins);
        prop_assert_eq!(report.labels(), oracle.keys().copied().collect::<Vec<_>>());
        prop_assert_eq!(report.total_dim(), shape.dim());
        for e in &report.entries {
            let vals = &oracle[&e.spin];
            prop_assert_eq!(e.dim, vals.len());
            prop_assert!((e.min_energy - vals[0]).abs() <= 1e-9);
            prop_assert!((e.max_energy - vals[vals.len() - 1]).abs() <= 1e-9);
        }
    }
}

#[test]
fn sector_spectrum_sits_inside_its_block() {
    let spins = [HalfInt::ONE, HalfInt::HALF, HalfInt::from_twice(3), HalfInt::ONE];
    let h = build_normalized_chain(&ChainSpec::new(spins.to_vec(), vec![0.7, 1.3, 0.4]).unwrap()).unwrap();
    let shape = HilbertShape::from_spins(&spins).unwrap();
    let blocks = block_spectra(&h, &spins);
    for t in (0..=shape.max_spin().twice()).rev().step_by(2) {
        let b = highest_weight_space(&shape, HalfInt::from_twice(t)).unwrap();
        let hb = h.submatrix(&b.block, &b.block);
        let vals = symmetric_eigenvalues(&(b.vectors.transpose() * hb * &b.vectors));
        assert!(common::multiset_difference(&blocks[&t], &vals, 1e-9).is_some(), "S = {t}/2");
    }
}

#[test]
fn foel_randomized_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..30 {
        let (spins, js) = random_chain(&mut rng, 6, 1024);
        let h = build_normalized_chain(&ChainSpec::new(spins.clone(), js.clone()).unwrap()).unwrap();
        let report = sector_energies(&h, &HilbertShape::from_spins(&spins).unwrap()).unwrap();
        assert!(
            report.foel.ok && report.foel.min_margin().unwrap_or(1.0) > 1e-8,
            "trial {trial}: spins {spins:?} J {js:?} margins {:?}",
            report.foel.margins
        );
    }
}

fn heisenberg_foel(n: usize, edges: &[(usize, usize)]) -> (bool, Vec<(HalfInt, HalfInt, f64)>) {
    let weighted: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    let g = SpinGraph::uniform(n, HalfInt::HALF, &weighted).unwrap();
    let report = sector_energies(&build_heisenberg(&g).unwrap(), &HilbertShape::qubits(n)).unwrap();
    (report.foel.ok, report.foel.margins)
}

#[test]
fn foel_on_small_trees() {
    let mut failures = Vec::new();
    for n in 2..=8 {
        for tree in nonisomorphic_trees(n) {
            let (ok, margins) = heisenberg_foel(n, &tree);
            if !ok {
                failures.push((tree, margins));
            }
        }
    }
    assert!(failures.is_empty(), "FOEL failed on trees: {failures:?}");
}

/// Spin-1/2 rings: odd rings satisfy FOEL, even rings do not. On the
/// 4-ring `H = -S_A·S_B` with `A = {0, 2}`, `B = {1, 3}`, so `S_A = 1`,
/// `S_B = 0` gives `E(1) = 0 = E(0)` exactly; at 6 and 8 sites the singlet
/// drops below the triplet. Both verdicts are confirmed by the block oracle.
#[test]
fn foel_on_cycles() {
    let mut failures = Vec::new();
    for n in 3..=8 {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let (ok, margins) = heisenberg_foel(n, &edges);
        let weighted: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        let h = build_heisenberg(&SpinGraph::uniform(n, HalfInt::HALF, &weighted).unwrap()).unwrap();
        let oracle = sector_spectra_by_difference(&h, &vec![HalfInt::HALF; n]);
        let (e0, e1) = (oracle[&HalfInt::from_twice((n % 2) as i64)][0], oracle[&HalfInt::from_twice((n % 2) as i64 + 2)][0]);
        let last = margins.last().unwrap().2;
        assert!((last - (e0 - e1)).abs() <= 1e-9);
        if !ok {
            eprintln!("FOEL fails on the {n}-ring: margins {margins:?}");
            failures.push(n);
        }
    }
    assert_eq!(failures, vec![4, 6, 8], "unexpected FOEL verdicts on rings");
    let (_, m4) = heisenberg_foel(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    assert!(m4.last().unwrap().2.abs() <= 1e-12);
}

#[test]
fn spin_one_five_site_levels() {
    let spins = vec![HalfInt::ONE; 5];
    let h = build_normalized_chain(&ChainSpec::uniform(5, HalfInt::ONE).unwrap()).unwrap();
    let report = sector_energies(&h, &HilbertShape::from_spins(&spins).unwrap()).unwrap();
    let oracle = sector_spectra_by_difference(&h, &spins);
    for (s, want) in [(0, 2.3799), (1, 1.7061), (2, 1.2306), (3, 0.7906), (4, 0.38197), (5, 0.0)] {
        let s = HalfInt::from_int(s);
        let got = report.min_energy(s).unwrap();
        assert!((got - oracle[&s][0]).abs() < 1e-9);
        assert!((got - want).abs() < 5e-4, "S={s}: {got}");
    }
    assert!(report.foel.ok);
    assert!(check_max_ordering(&report, HalfInt::ONE, HalfInt::from_int(5)).ok);
    let offset = full_spectrum_by_s3(&h, &HilbertShape::from_spins(&spins).unwrap(), true).unwrap();
    let ground = offset.iter().flat_map(|(_, v)| v.iter().copied()).fold(f64::INFINITY, f64::min);
    assert!(ground.abs() <= 1e-10);
}

#[test]
fn truncated_spectrum_matches_full() {
    let spins = vec![HalfInt::HALF, HalfInt::ONE, HalfInt::HALF, HalfInt::ONE];
    let h = build_normalized_chain(&ChainSpec::new(spins.clone(), vec![1.0, 0.5, 1.5]).unwrap()).unwrap();
    let shape = HilbertShape::from_spins(&spins).unwrap();
    let full = symmetric_eigenvalues(&h.to_dense());
    for n in 0..=3 {
        let low = low_energy_by_deviation(&h, &shape, n, CutoffPolicy::CrossCheck).unwrap();
        let cutoff = low[low.len() - 1];
        let want: Vec<f64> = full.iter().copied().filter(|&e| e <= cutoff + 1e-9).collect();
        assert_multiset_eq(&low, &want, 1e-9);
    }
}

#[test]
fn anisotropic_operator_is_rejected() {
    let h = build_xxz_chain(4, 2.0).unwrap();
    assert!(matches!(sector_energies(&h, &HilbertShape::qubits(4)), Err(Error::NotInvariant { .. })));
}

