mod common;

use std::collections::BTreeMap;

use common::*;
use descentlab::complexes::{homology, ChainMap, Complex};
use descentlab::descent::*;
use descentlab::exec::Execution;
use descentlab::linalg::SparseMatrix;
use descentlab::scalars::Rational;
use proptest::prelude::*;

const EXEC: Execution = Execution::Sequential;

fn betti(pairs: &[(i32, usize)]) -> BTreeMap<i32, usize> {
    pairs.iter().copied().collect()
}

fn random(seed: u64, members: usize, max_cells: usize) -> CoverPresheaf {
    random_presheaf(seed, RandomShape { members, max_cells, width: 4 }).unwrap()
}

/// Every component square and of full rank, by the dense oracle.
fn oracle_bijective(f: &ChainMap<Rational>) -> bool {
    let degs: Vec<i32> = f.source().degrees().chain(f.target().degrees()).collect();
    degs.into_iter().all(|n| {
        let m = f.map(n);
        m.nrows() == m.ncols() && oracle_rank(&m) == m.ncols()
    })
}

#[test]
fn nerve_of_one_member() {
    let f = random(3, 1, 3);
    let nv = nerve(&f).unwrap();
    assert_eq!(nv.cosimplicial.num_levels(), 1);
    assert_eq!(nv.cosimplicial.level(0).trimmed(), f.value(1).trimmed());
    let aug = nv.cosimplicial.augmentation().unwrap();
    assert_eq!(aug.components(), f.restriction(TOP, 1).components());
    let c = cech(&f).unwrap();
    assert_eq!(homology(c.complex()).betti(), homology(f.value(1)).betti());
}

#[test]
fn nerve_of_two_members_face_convention() {
    // Tag the two restrictions into F(K_12) by different scalars.
    let mut values = BTreeMap::new();
    for j in 0..4u32 {
        values.insert(j, Complex::concentrated((), 0, 1));
    }
    let one = |c: i64| SparseMatrix::scalar(1, q(c));
    let map = |c: i64| ChainMap::new(Complex::concentrated((), 0, 1), Complex::concentrated((), 0, 1), 0, BTreeMap::from([(0, one(c))])).unwrap();
    let restrictions = BTreeMap::from([
        ((TOP, 0b01), map(1)),
        ((TOP, 0b10), map(1)),
        ((0b01, 0b11), map(2)),
        ((0b10, 0b11), map(3)),
    ]);
    // Not functorial (2 ≠ 3 on the composite from TOP).
    assert!(matches!(CoverPresheaf::new(2, values.clone(), restrictions), Err(DescentError::Functoriality { .. })));
    let restrictions = BTreeMap::from([
        ((TOP, 0b01), map(3)),
        ((TOP, 0b10), map(2)),
        ((0b01, 0b11), map(2)),
        ((0b10, 0b11), map(3)),
    ]);
    let f = CoverPresheaf::new(2, values, restrictions).unwrap();
    let nv = nerve(&f).unwrap();
    // D^0 = F1 ⊕ F2; d_0 drops the first index, so reads F2; d_1 reads F1.
    assert_eq!(nv.cosimplicial.coface(0, 0).map(0), SparseMatrix::from_triplets(1, 2, [(0, 1, q(3))]));
    assert_eq!(nv.cosimplicial.coface(0, 1).map(0), SparseMatrix::from_triplets(1, 2, [(0, 0, q(2))]));
}

#[test]
fn cosimplicial_identities_hold_for_three_members() {
    for seed in 0..10 {
        let f = random(seed, 3, 4);
        let nv = nerve(&f).unwrap();
        nv.cosimplicial.check_identities().unwrap();
        // exhaustive composition check, independent of check_identities
        let dc = &nv.cosimplicial;
        for j in 1..=2 {
            for i in 0..j {
                let l = dc.coface(0, i).then(dc.coface(1, j)).unwrap();
                let r = dc.coface(0, j - 1).then(dc.coface(1, i)).unwrap();
                assert_eq!(l, r);
            }
        }
    }
}

#[test]
fn broken_cosimplicial_identity_is_reported() {
    let f = random(5, 3, 4);
    let nv = nerve(&f).unwrap();
    let dc = &nv.cosimplicial;
    let levels: Vec<_> = (0..dc.num_levels()).map(|p| dc.level(p).clone()).collect();
    let mut cofaces: Vec<Vec<_>> = (0..dc.num_levels() - 1).map(|p| (0..=p + 1).map(|i| dc.coface(p, i).clone()).collect()).collect();
    cofaces[1].swap(0, 2);
    let broken = CosimplicialComplex::new(levels, cofaces, None);
    // swapping faces only breaks identities when the maps differ
    if dc.coface(1, 0) != dc.coface(1, 2) {
        assert!(matches!(broken, Err(DescentError::CosimplicialIdentity { .. })));
    }
}

#[test]
fn cech_examples() {
    let c = cech(&constant(2).unwrap()).unwrap();
    assert_eq!(homology(c.complex()).betti(), betti(&[(0, 1)]));
    assert_eq!(oracle_betti(c.complex()), betti(&[(0, 1)]));
    let d = cech(&disjoint().unwrap()).unwrap();
    assert_eq!(oracle_betti(d.complex()), betti(&[(0, 2)]));
    let r = verify_descent(&disjoint().unwrap()).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness_degree, Some(0));
    for n in 1..=4 {
        let c = cech(&constant(n).unwrap()).unwrap();
        assert_eq!(oracle_betti(c.complex()), betti(&[(0, 1)]), "N = {n}");
        assert!(verify_descent(&constant(n).unwrap()).unwrap().holds);
    }
}

#[test]
fn generated_complexes_square_to_zero() {
    for seed in 0..15 {
        let f = random(seed, 1 + (seed as usize % 4), 4);
        let c = cech(&f).unwrap();
        c.complex().validate().unwrap();
        let t = tot(&c.nerve.cosimplicial, EXEC).unwrap();
        t.complex.validate().unwrap();
        let w = tw(&c.nerve.cosimplicial, f.n(), EXEC).unwrap();
        w.complex.validate().unwrap();
    }
}

#[test]
fn tot_examples() {
    let single = CosimplicialComplex::single(random(7, 1, 4).value(1).clone());
    let t = tot(&single, EXEC).unwrap();
    assert_eq!(t.complex.trimmed(), single.level(0).trimmed());
    let c = cech(&constant(2).unwrap()).unwrap();
    let t = tot(&c.nerve.cosimplicial, EXEC).unwrap();
    assert_eq!(oracle_betti(&t.complex), betti(&[(0, 1)]));
    let d = cech(&disjoint().unwrap()).unwrap();
    let t = tot(&d.nerve.cosimplicial, EXEC).unwrap();
    assert_eq!(oracle_betti(&t.complex), betti(&[(0, 2)]));
}

#[test]
fn tot_cech_iso_examples() {
    let f = random(11, 1, 4);
    let c = cech(&f).unwrap();
    let t = tot(&c.nerve.cosimplicial, EXEC).unwrap();
    let iso = tot_cech_iso(&t, &c.cech).unwrap();
    for (n, m) in iso.components() {
        assert_eq!(*m, SparseMatrix::identity(c.complex().dim(*n), &()));
    }
    for seed in 0..10 {
        let f = random(seed, 2, 3);
        let c = cech(&f).unwrap();
        let t = tot(&c.nerve.cosimplicial, EXEC).unwrap();
        let iso = tot_cech_iso(&t, &c.cech).unwrap();
        iso.validate().unwrap();
        assert!(oracle_bijective(&iso), "seed {seed}");
    }
    for seed in 0..10 {
        let f = random(100 + seed, 3, 4);
        let cert = check_tot_cech(&f, EXEC).unwrap();
        assert!(cert.passed(), "seed {seed}: {cert:?}");
        assert_eq!(cert.tot_betti, cert.cech_betti);
    }
}

#[test]
fn tot_cech_iso_on_four_members() {
    for seed in 0..5 {
        let cert = check_tot_cech(&random(200 + seed, 4, 4), EXEC).unwrap();
        assert!(cert.passed(), "seed {seed}: {cert:?}");
    }
}

#[test]
fn tw_examples() {
    let level = random(9, 1, 4).value(1).clone();
    let single = CosimplicialComplex::single(level.clone());
    let w = tw(&single, 3, EXEC).unwrap();
    assert_eq!(w.complex.trimmed(), level.trimmed());
    let c = cech(&constant(2).unwrap()).unwrap();
    let w = tw(&c.nerve.cosimplicial, 2, EXEC).unwrap();
    assert_eq!(oracle_betti(&w.complex), betti(&[(0, 1)]));
    assert!(matches!(
        tw(&c.nerve.cosimplicial, 0, EXEC),
        Err(DescentError::CutoffTooSmall { needed: 1, given: 0 })
    ));
}

#[test]
fn tw_stabilizes_and_compares_to_tot() {
    for seed in 0..6 {
        let f = random(300 + seed, 2 + seed as usize % 2, 3);
        let n = f.n();
        let cert = check_tw_tot(&f, &[n, n + 1, n + 2], EXEC).unwrap();
        assert!(cert.passed(), "seed {seed}: {cert:?}");
        assert_eq!(cert.stabilizes_at, Some(n));
    }
}

#[test]
fn tw_to_tot_is_a_quasi_iso_with_whitney_section() {
    for seed in 0..5 {
        let f = random(400 + seed, 2, 4);
        let c = cech(&f).unwrap();
        let dc = &c.nerve.cosimplicial;
        let t = tot(dc, EXEC).unwrap();
        let w = tw(dc, 2, EXEC).unwrap();
        let i = tw_to_tot(&w, &t).unwrap();
        i.validate().unwrap();
        assert!(descentlab::complexes::is_quasi_iso(&i).unwrap().is_quasi_iso);
        let e = whitney_section(&t, &w).unwrap();
        assert_eq!(e.then(&i).unwrap(), ChainMap::identity(&t.complex));
        // betti tables agree by the dense oracle as well
        assert_eq!(oracle_betti(&w.complex), oracle_betti(&t.complex));
    }
}

#[test]
fn inclusion_exclusion_examples() {
    let cert = inclusion_exclusion(&constant(3).unwrap()).unwrap();
    assert!(cert.passed());
    assert_eq!(cert.cocone_betti, cert.cech_betti);
    for seed in 0..8 {
        let cert = inclusion_exclusion(&random(500 + seed, 3, 2)).unwrap();
        assert!(cert.passed(), "seed {seed}");
    }
    for seed in 0..4 {
        let cert = inclusion_exclusion(&random(600 + seed, 4, 4)).unwrap();
        assert!(cert.passed(), "seed {seed}");
    }
    // a path covered by its three edges: K_1 ∩ K_3 = ∅
    let x = SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![2, 3]]);
    let cover: Vec<Subcomplex> = [[0, 1], [1, 2], [2, 3]].iter().map(|e| closure(&[e.to_vec()])).collect();
    let f = x.cover_presheaf(&cover).unwrap();
    assert_eq!(f.value(0b101).total_dim(), 0);
    assert!(inclusion_exclusion(&f).unwrap().passed());
    assert!(matches!(inclusion_exclusion(&constant(2).unwrap()), Err(DescentError::BadCover(_))));
}

#[test]
fn descent_on_simplicial_fixtures() {
    let circle = simplicial_betti(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    assert_eq!(circle, betti(&[(0, 1), (1, 1)]));
    for (x, cover) in [triangle_two_arcs(), triangle_three_edges()] {
        let r = verify_descent(&x.cover_presheaf(&cover).unwrap()).unwrap();
        assert!(r.holds);
        assert_eq!(r.global_betti, circle);
        assert_eq!(r.cech_betti, circle);
    }
    let (x, cover) = square_complex();
    let r = verify_descent(&x.cover_presheaf(&cover).unwrap()).unwrap();
    let oracle = simplicial_betti(&[vec![0, 1, 2], vec![2, 3], vec![0, 3]]);
    assert_eq!(oracle, betti(&[(0, 1), (1, 1)]));
    assert!(r.holds);
    assert_eq!(r.cech_betti, oracle);
}

#[test]
fn descent_verdict_is_permutation_invariant() {
    let perms3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let (x, cover) = triangle_three_edges();
    let f = x.cover_presheaf(&cover).unwrap();
    for seed in 0..6 {
        let g = random(700 + seed, 3, 4);
        for h in [&f, &g] {
            let base = verify_descent(h).unwrap();
            for p in perms3 {
                let r = verify_descent(&h.permute(&p).unwrap()).unwrap();
                assert_eq!((r.holds, &r.cech_betti, &r.global_betti), (base.holds, &base.cech_betti, &base.global_betti));
            }
        }
    }
}

#[test]
fn induction_pipeline_reproves_descent() {
    let (x, cover) = triangle_three_edges();
    let report = induction_pipeline(&x, &cover).unwrap();
    assert!(report.concluded, "{report:?}");
    assert!(report.direct);
    assert!(report.steps.iter().all(|s| s.holds));
    assert!(report.steps.iter().filter(|s| s.members == 2).count() >= 3);
    let (x, cover) = square_complex();
    let report = induction_pipeline(&x, &cover).unwrap();
    assert!(report.concluded && report.direct);
    // four members: the boundary of a square, one edge each
    let x = SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
    let cover: Vec<Subcomplex> = [[0, 1], [1, 2], [2, 3], [0, 3]].iter().map(|e| closure(&[e.to_vec()])).collect();
    let report = induction_pipeline(&x, &cover).unwrap();
    assert!(report.concluded && report.direct);
}

#[test]
fn presheaf_json_round_trip() {
    for f in [constant(3).unwrap(), disjoint().unwrap(), random(800, 3, 4), triangle_two_arcs().0.cover_presheaf(&triangle_two_arcs().1).unwrap()] {
        let v = f.to_json();
        let g = CoverPresheaf::from_json(&v).unwrap();
        assert_eq!(f, g);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(CoverPresheaf::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
    }
    assert_eq!(label(TOP), "top");
    assert_eq!(label(0b101), "[1, 3]");
    assert_eq!(parse_label("[1, 3]").unwrap(), 0b101);
    assert!(parse_label("[0]").is_err());
}

#[test]
fn malformed_presheaves_are_rejected() {
    let f = constant(2).unwrap();
    let mut v = f.to_json();
    v["values"].as_object_mut().unwrap().remove("[1, 2]");
    assert!(matches!(CoverPresheaf::from_json(&v), Err(DescentError::MissingValue(_))));
    let mut v = f.to_json();
    v["restrictions"].as_object_mut().unwrap().remove("[1]→[1, 2]");
    assert!(matches!(CoverPresheaf::from_json(&v), Err(DescentError::MissingRestriction(..))));
    let mut v = f.to_json();
    v["restrictions"]["top→[1]"]["maps"]["0"] = serde_json::json!([[0, 0, "2"]]);
    assert!(matches!(CoverPresheaf::from_json(&v), Err(DescentError::Functoriality { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn tot_is_isomorphic_to_cech(seed in 0u64..1_000_000, members in 1usize..=3) {
        let f = random(seed, members, 4);
        let cert = check_tot_cech(&f, EXEC).unwrap();
        prop_assert!(cert.passed());
    }

    #[test]
    fn random_presheaves_are_valid(seed in 0u64..1_000_000, members in 1usize..=4) {
        let f = random(seed, members, 4);
        for c in f.values().values() {
            prop_assert!(c.validate().is_ok());
            prop_assert!(c.total_dim() <= 4);
        }
    }
}
