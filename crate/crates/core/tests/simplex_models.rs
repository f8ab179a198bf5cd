mod common;

use std::collections::BTreeMap;

use common::*;
use descentlab::complexes::{homology, Complex};
use descentlab::scalars::Rational;
use descentlab::simplex_models::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn delta(p: usize, v: &[usize]) -> NCochain {
    NCochain::delta(p, v).unwrap()
}

fn form(p: usize, s: &str) -> PolyForm {
    PolyForm::parse(p, s).unwrap()
}

fn random_cochain(rng: &mut ChaCha8Rng, p: usize) -> NCochain {
    let mut x = NCochain::zero(p);
    for f in 1u32..1 << (p + 1) {
        if rng.gen_bool(0.4) {
            x = x.add(&NCochain::from_face(p, f, q(rng.gen_range(-3..=3))));
        }
    }
    x
}

fn random_homogeneous(rng: &mut ChaCha8Rng, p: usize, k: usize) -> NCochain {
    random_cochain(rng, p).homogeneous(k)
}

fn random_form(rng: &mut ChaCha8Rng, p: usize, max_weight: usize) -> PolyForm {
    let model = FormModel::new(max_weight);
    let mut w = PolyForm::zero(p);
    for k in 0..=p {
        for m in model.basis(p, k) {
            if rng.gen_bool(0.15) {
                w = w.add(&PolyForm::monomial(p, m, q(rng.gen_range(-3..=3))));
            }
        }
    }
    w
}

fn all_injections(r: usize, q: usize) -> Vec<InjMap> {
    (0u32..1 << (q + 1))
        .filter(|m| m.count_ones() as usize == r + 1)
        .map(|m| InjMap::face(q, m))
        .collect()
}

#[test]
fn nc_differential_examples() {
    let x = delta(1, &[0]);
    assert_eq!(x.differential(), NCochain::from_face(1, 0b11, q(-1)));
    assert!(delta(1, &[0]).add(&delta(1, &[1])).differential().is_zero());
    assert!(delta(2, &[0]).differential().differential().is_zero());
}

#[test]
fn nc_coface_examples() {
    let x = delta(2, &[0, 2]);
    assert_eq!(x.pullback(&InjMap::identity(2)).unwrap(), x);
    let face02 = InjMap::new(2, vec![0, 2]).unwrap();
    assert_eq!(x.pullback(&face02).unwrap(), delta(1, &[0, 1]));
    let face01 = InjMap::new(2, vec![0, 1]).unwrap();
    assert!(x.pullback(&face01).unwrap().is_zero());
    assert!(x.pullback(&InjMap::identity(1)).is_err());
}

#[test]
fn nc_cup_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in 0..=3 {
        let x = random_cochain(&mut rng, p);
        assert_eq!(NCochain::unit(p).cup(&x).unwrap(), x);
        assert_eq!(x.cup(&NCochain::unit(p)).unwrap(), x);
    }
    assert_eq!(delta(1, &[0]).cup(&delta(1, &[0, 1])).unwrap(), delta(1, &[0, 1]));
    assert!(delta(1, &[0, 1]).cup(&delta(1, &[0])).unwrap().is_zero());
}

/// Brute-force cup product straight from the definition, face by face.
fn cup_oracle(x: &NCochain, y: &NCochain) -> NCochain {
    let p = x.dim();
    let mut out = NCochain::zero(p);
    for f in 1u32..1 << (p + 1) {
        let v = vertices(f);
        let mut total = Rational::zero();
        for k in 0..v.len() {
            let front = mask(&v[..=k]);
            let back = mask(&v[k..]);
            total += &(&x.get(front) * &y.get(back));
        }
        out = out.add(&NCochain::from_face(p, f, total));
    }
    out
}

#[test]
fn nc_cup_associative_and_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in 0..=3 {
        for _ in 0..10 {
            let (x, y, z) = (random_cochain(&mut rng, p), random_cochain(&mut rng, p), random_cochain(&mut rng, p));
            assert_eq!(x.cup(&y).unwrap(), cup_oracle(&x, &y));
            let l = x.cup(&y).unwrap().cup(&z).unwrap();
            let r = x.cup(&y.cup(&z).unwrap()).unwrap();
            assert_eq!(l, r);
            for k in 0..=p {
                let xk = random_homogeneous(&mut rng, p, k);
                let sign = if k % 2 == 0 { q(1) } else { q(-1) };
                let lhs = xk.cup(&y).unwrap().differential();
                let rhs = xk.differential().cup(&y).unwrap().add(&xk.cup(&y.differential()).unwrap().scale(&sign));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn form_differential_examples() {
    assert_eq!(PolyForm::t(1, 1).differential(), PolyForm::dt(1, 1));
    assert_eq!(form(2, "1*t1*t2").differential(), form(2, "1*t2*dt1 + 1*t1*dt2"));
    assert!(form(1, "1*t1*dt1").differential().is_zero());
}

#[test]
fn form_wedge_examples() {
    let (a, b) = (PolyForm::dt(2, 1), PolyForm::dt(2, 2));
    assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&q(-1)));
    let w = form(2, "3*t2*dt1 + -1*t1");
    assert_eq!(PolyForm::t(2, 1).wedge(&w).unwrap(), form(2, "3*t1*t2*dt1 + -1*t1^2"));
    assert!(a.wedge(&a).unwrap().is_zero());
}

#[test]
fn form_pullback_examples() {
    let dt1 = PolyForm::dt(1, 1);
    assert_eq!(dt1.pullback(&InjMap::identity(1)).unwrap(), dt1);
    let to01 = InjMap::new(2, vec![0, 1]).unwrap();
    assert!(PolyForm::t(2, 2).pullback(&to01).unwrap().is_zero());
    // t0 = 1 − t1 − t2 restricted to the face [1,2]: the homogeneous
    // substitution oracle sends t1 ↦ s0 = 1 − s1, t2 ↦ s1, so t0 ↦ 0.
    let to12 = InjMap::new(2, vec![1, 2]).unwrap();
    assert!(PolyForm::barycentric(2, 0).pullback(&to12).unwrap().is_zero());
    assert_eq!(PolyForm::t(2, 1).pullback(&to12).unwrap(), form(1, "1 + -1*t1"));
}

#[test]
fn integration_examples() {
    assert_eq!(PolyForm::dt(1, 1).integrate(), q(1));
    // ∫_0^1 ∫_0^{1−t1} t1 t2 dt2 dt1 = ∫ t1 (1−t1)²/2 = 1/24
    assert_eq!(form(2, "1*t1*t2*dt1^dt2").integrate(), qq(1, 24));
    assert_eq!(form(2, "1*dt2^dt1").integrate(), qq(-1, 2));
    assert_eq!(PolyForm::constant(0, q(5)).integrate(), q(5));
}

#[test]
fn integration_cochain_examples() {
    for p in 0..=3 {
        let one = PolyForm::constant(p, q(1)).integration_cochain();
        assert_eq!(one, NCochain::unit(p));
    }
    assert_eq!(PolyForm::dt(1, 1).integration_cochain(), delta(1, &[0, 1]));
    let w = form(2, "1*t1*t2*dt1");
    assert_eq!(w.differential().integration_cochain(), w.integration_cochain().differential());
}

#[test]
fn whitney_examples() {
    for p in 0..=3 {
        for i in 0..=p {
            assert_eq!(PolyForm::whitney(&delta(p, &[i])), PolyForm::barycentric(p, i));
        }
    }
    let e01 = PolyForm::whitney(&delta(1, &[0, 1]));
    assert_eq!(e01, PolyForm::dt(1, 1));
    assert_eq!(e01.integrate(), q(1));
    let e012 = PolyForm::whitney(&delta(2, &[0, 1, 2]));
    assert_eq!(e012.integration_cochain(), delta(2, &[0, 1, 2]));
    assert_eq!(e012, form(2, "2*dt1^dt2"));
}

#[test]
fn weight_truncation_examples() {
    assert!(form(1, "1*t1^2").truncate(1).is_zero());
    assert_eq!(form(1, "1*dt1 + 1*t1^2*dt1").truncate(2), PolyForm::dt(1, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in 1..=3 {
        for cut in 0..=4 {
            let w = random_form(&mut rng, p, 5);
            assert_eq!(w.truncate(cut).differential(), w.differential().truncate(cut));
        }
    }
}

#[test]
fn square_zero_and_products_in_both_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in 0..=4 {
        let x = random_cochain(&mut rng, p);
        assert!(x.differential().differential().is_zero());
        let w = random_form(&mut rng, p, 4);
        assert!(w.differential().differential().is_zero());
        // graded commutativity and Leibniz for forms
        for k in 0..=p.min(2) {
            for l in 0..=p.min(2) {
                let mut a = PolyForm::zero(p);
                let mut b = PolyForm::zero(p);
                for (m, c) in random_form(&mut rng, p, 3).terms() {
                    if m.form_degree() == k {
                        a = a.add(&PolyForm::monomial(p, m.clone(), c.clone()));
                    }
                }
                for (m, c) in random_form(&mut rng, p, 3).terms() {
                    if m.form_degree() == l {
                        b = b.add(&PolyForm::monomial(p, m.clone(), c.clone()));
                    }
                }
                let sign = if (k * l) % 2 == 1 { q(-1) } else { q(1) };
                assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
                let ks = if k % 2 == 1 { q(-1) } else { q(1) };
                let lhs = a.wedge(&b).unwrap().differential();
                let rhs = a.differential().wedge(&b).unwrap().add(&a.wedge(&b.differential()).unwrap().scale(&ks));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn functoriality_of_pullbacks() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for qd in 0..=3 {
        for pd in 0..=qd {
            for rd in 0..=pd {
                for g in all_injections(pd, qd) {
                    for f in all_injections(rd, pd) {
                        let gf = f.then(&g).unwrap();
                        let x = random_cochain(&mut rng, qd);
                        assert_eq!(x.pullback(&g).unwrap().pullback(&f).unwrap(), x.pullback(&gf).unwrap());
                        let w = random_form(&mut rng, qd, 3);
                        assert_eq!(w.pullback(&g).unwrap().pullback(&f).unwrap(), w.pullback(&gf).unwrap());
                        // pullback commutes with d and the products
                        assert_eq!(w.pullback(&g).unwrap().differential(), w.differential().pullback(&g).unwrap());
                        let w2 = random_form(&mut rng, qd, 2);
                        assert_eq!(
                            w.wedge(&w2).unwrap().pullback(&g).unwrap(),
                            w.pullback(&g).unwrap().wedge(&w2.pullback(&g).unwrap()).unwrap()
                        );
                        assert_eq!(x.differential().pullback(&g).unwrap(), x.pullback(&g).unwrap().differential());
                    }
                }
            }
        }
    }
}

#[test]
fn integration_is_a_semicosimplicial_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in 0..=3 {
        for _ in 0..5 {
            let w = random_form(&mut rng, p, 4);
            let iw = w.integration_cochain();
            assert_eq!(w.differential().integration_cochain(), iw.differential());
            if p >= 1 {
                for i in 0..=p {
                    let d = InjMap::coface(p, i);
                    assert_eq!(w.pullback(&d).unwrap().integration_cochain(), iw.pullback(&d).unwrap());
                }
            }
        }
    }
}

#[test]
fn whitney_is_a_section_and_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for p in 0..=4 {
        for _ in 0..4 {
            let x = random_cochain(&mut rng, p);
            let ex = PolyForm::whitney(&x);
            assert_eq!(ex.integration_cochain(), x);
            assert_eq!(PolyForm::whitney(&x.differential()), ex.differential());
            if p >= 1 {
                for i in 0..=p {
                    let d = InjMap::coface(p, i);
                    assert_eq!(PolyForm::whitney(&x.pullback(&d).unwrap()), ex.pullback(&d).unwrap());
                }
            }
        }
    }
}

fn model_complex(model: &dyn SimplexModel, p: usize) -> Complex<Rational> {
    let dims = (0..=p).map(|k| model.dim(p, k)).collect();
    let diffs = (0..p).map(|k| model.differential(p, k)).collect();
    Complex::new((), 0, dims, diffs).unwrap()
}

#[test]
fn simplex_models_are_contractible() {
    for p in 0..=4 {
        let c = model_complex(&NcModel, p);
        c.validate().unwrap();
        assert_eq!(homology(&c).betti(), BTreeMap::from([(0, 1)]));
    }
    for p in 0..=3 {
        for cut in 0..=4 {
            let c = model_complex(&FormModel::new(cut), p);
            c.validate().unwrap();
            assert_eq!(oracle_betti(&c), BTreeMap::from([(0, 1)]), "p={p} P={cut}");
        }
    }
}

#[test]
fn whitney_weight_bound() {
    assert_eq!(whitney_weight(0), 0);
    for p in 1..=4 {
        assert_eq!(whitney_weight(p), p);
    }
}

#[test]
fn model_matrices_match_elementwise_operations() {
    let model = FormModel::new(3);
    for p in 0..=2 {
        for k in 0..=p {
            let i = integration_matrix(&model, p, k);
            let e = whitney_matrix(&model, p, k);
            // I ∘ E = id on NC^k(Δ^p)
            assert_eq!(i.mul(&e), descentlab::linalg::SparseMatrix::identity(NcModel.dim(p, k), &()));
        }
    }
}

#[test]
fn polyform_text_round_trip() {
    let w = form(3, "3/2*t1^2*t2*dt1^dt3 + -1*dt2");
    assert_eq!(w.to_string(), "-1*dt2 + 3/2*t1^2*t2*dt1^dt3");
    assert_eq!(form(3, &w.to_string()), w);
    assert_eq!(form(2, "1*dt2^dt1"), form(2, "-1*dt1^dt2"));
    assert!(PolyForm::parse(2, "1*t3").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stokes_on_random_forms(seed in 0u64..100_000, p in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_form(&mut rng, p, 4);
        prop_assert_eq!(w.differential().integration_cochain(), w.integration_cochain().differential());
    }

    #[test]
    fn pullback_never_raises_weight(seed in 0u64..100_000, p in 1usize..=3, i in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_form(&mut rng, p, 4);
        let d = InjMap::coface(p, i.min(p));
        prop_assert!(w.pullback(&d).unwrap().weight() <= w.weight());
    }
}
