use foel_core::eigen::symmetric_eigenvalues;
use foel_core::graph::parse_graph_spec;
use foel_core::hamiltonian::{
    build_general_bond_chain, build_heisenberg, build_normalized_chain, build_spin1_beta_chain, build_xxz_chain,
    spin1_beta_polynomial, BondPolynomial,
};
use foel_core::spin::total_spin_ops;
use foel_core::{ChainSpec, HalfInt, HilbertShape, RealOperator, SpinGraph};
use nalgebra::DVector;
use proptest::prelude::*;

fn chain_strategy() -> impl Strategy<Value = (Vec<HalfInt>, Vec<f64>)> {
    prop::collection::vec(1i64..=3, 2..=5).prop_flat_map(|twice| {
        let n = twice.len();
        (
            Just(twice.into_iter().map(HalfInt::from_twice).collect::<Vec<_>>()),
            prop::collection::vec(0.01f64..=2.0, n - 1),
        )
    })
}

fn polarized(dim: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[0] = 1.0;
    v
}

fn check_symmetries(h: &RealOperator, shape: &HilbertShape, su2: bool) -> Result<(), TestCaseError> {
    let ops = total_spin_ops(shape).unwrap();
    prop_assert!(h.commutator_norm(&ops.s3).unwrap() <= 1e-10);
    if su2 {
        prop_assert!(h.commutator_norm(&ops.splus).unwrap() <= 1e-10);
        prop_assert!(h.commutator_norm(&ops.sminus).unwrap() <= 1e-10);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn normalized_chain_is_psd_with_polarized_kernel((spins, js) in chain_strategy()) {
        let chain = ChainSpec::new(spins.clone(), js).unwrap();
        let h = build_normalized_chain(&chain).unwrap();
        let shape = HilbertShape::from_spins(&spins).unwrap();
        check_symmetries(&h, &shape, true)?;
        prop_assert!(h.symmetry_defect() <= 1e-12);
        prop_assert!(symmetric_eigenvalues(&h.to_dense())[0] >= -1e-10);
        prop_assert!(h.apply(&polarized(shape.dim())).norm() <= 1e-12);
    }

    #[test]
    fn heisenberg_on_graphs_is_su2_invariant((spins, js) in chain_strategy(), extra in 0.1f64..2.0) {
        // The chain plus one closing edge.
        let n = spins.len();
        let mut edges: Vec<(i64, i64, f64)> = js.iter().enumerate().map(|(i, &j)| (i as i64, i as i64 + 1, j)).collect();
        if n > 2 {
            edges.push((0, n as i64 - 1, extra));
        }
        let sites = spins.iter().enumerate().map(|(i, &spin)| foel_core::graph::Site { id: i as i64, spin }).collect();
        let g = SpinGraph::new(sites, edges).unwrap();
        let h = build_heisenberg(&g).unwrap();
        check_symmetries(&h, &HilbertShape::from_spins(&spins).unwrap(), true)?;
    }

    #[test]
    fn xxz_is_psd_and_conserves_s3(len in 2usize..=7, delta in 1.01f64..5.0) {
        let h = build_xxz_chain(len, delta).unwrap();
        check_symmetries(&h, &HilbertShape::qubits(len), false)?;
        prop_assert!(symmetric_eigenvalues(&h.to_dense())[0] >= -1e-10);
        prop_assert!(h.apply(&polarized(1 << len)).norm() <= 1e-12);
    }

    #[test]
    fn general_bond_chain_is_su2_invariant(len in 2usize..=4, c0 in -1.0f64..1.0, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0) {
        let spins = vec![HalfInt::ONE; len];
        let polys = vec![BondPolynomial::new(vec![c0, c1, c2]); len - 1];
        let h = build_general_bond_chain(&spins, &vec![1.0; len - 1], &polys).unwrap();
        check_symmetries(&h, &HilbertShape::from_spins(&spins).unwrap(), true)?;
    }
}

#[test]
fn spin_half_heisenberg_path_matches_normalized_chain() {
    for len in 2..=7 {
        let js: Vec<f64> = (0..len - 1).map(|i| 0.3 + 0.2 * i as f64).collect();
        let spins = vec![HalfInt::HALF; len];
        let g = SpinGraph::path(&spins, &js).unwrap();
        // -J S·S summed; H_norm = Σ J (1 - 4 S·S) = Σ J + 4 H_heis.
        let heis = build_heisenberg(&g).unwrap();
        let norm = build_normalized_chain(&ChainSpec::new(spins, js.clone()).unwrap()).unwrap();
        let expected = heis.scaled(4.0).add(&RealOperator::identity(heis.basis().clone()).scaled(js.iter().sum())).unwrap();
        assert!(norm.distance(&expected).unwrap() <= 1e-12);
    }
}

#[test]
fn beta_chain_two_site_levels() {
    for beta in [0.0, 0.2, 1.0 / 3.0, 0.5] {
        let v = symmetric_eigenvalues(&build_spin1_beta_chain(2, beta).unwrap().to_dense());
        let mut want = vec![0.0; 5];
        want.extend([2.0; 3]);
        want.push(3.0 - 3.0 * beta);
        want.sort_by(f64::total_cmp);
        for (a, b) in v.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "beta={beta}: {v:?}");
        }
    }
    assert_eq!(spin1_beta_polynomial(0.25).coeffs(), &[1.25, -1.0, -0.25]);
}

#[test]
fn graph_spec_round_trip() {
    let text = "# triangle\nsite 0 2\nsite 1 2\nsite 7 1\nedge 0 1 1.0\nedge 1 7 0.5\nedge 0 7 2\n";
    let p = parse_graph_spec(text).unwrap();
    assert_eq!(p.graph.len(), 3);
    assert_eq!(p.graph.edges().len(), 3);
    assert!(p.warnings.is_empty());
    assert_eq!(p.graph.spins(), vec![HalfInt::ONE, HalfInt::ONE, HalfInt::HALF]);
    let h = build_heisenberg(&p.graph).unwrap();
    assert_eq!(h.dim(), 18);

    let disconnected = parse_graph_spec("site 0 1\nsite 1 1\nsite 2 1\nedge 0 1 1\n").unwrap();
    assert!(!disconnected.warnings.is_empty());
    match parse_graph_spec("site 0 1\nedge 0 3 1\n") {
        Err(foel_core::Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
}
