//! Acceptance run: one PASS/FAIL line per criterion, each under its time
//! budget. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::poisson::*;
use common::schouten::*;
use common::*;
use descentlab::complexes::{colimit_homology, complete, homology, is_quasi_iso, telescope, ChainMap, Complex};
use descentlab::descent::*;
use descentlab::exec::Execution;
use descentlab::involutive::*;
use descentlab::linalg::SparseMatrix;
use descentlab::operad_alg::*;
use descentlab::scalars::{NovikovElem, NovikovRing, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exec() -> Execution {
    Execution::best()
}

/// The shared corpus: N ≤ 4 members, per-level dimensions ≤ 4, support width ≤ 4.
fn corpus() -> Vec<CoverPresheaf> {
    (0..25u64)
        .map(|seed| {
            let shape = RandomShape { members: 1 + (seed % 4) as usize, max_cells: 4, width: 4 };
            random_presheaf(1000 + seed, shape).expect("corpus presheaf")
        })
        .collect()
}

fn oracle_bijective(f: &ChainMap<Rational>) -> bool {
    let degs: Vec<i32> = f.source().degrees().chain(f.target().degrees()).collect();
    degs.into_iter().all(|n| {
        let m = f.map(n);
        m.nrows() == m.ncols() && oracle_rank(&m) == m.ncols()
    })
}

fn betti(pairs: &[(i32, usize)]) -> BTreeMap<i32, usize> {
    pairs.iter().copied().collect()
}

fn tot_cech(corpus: &[CoverPresheaf]) -> Outcome {
    for (k, f) in corpus.iter().enumerate() {
        let cert = check_tot_cech(f, exec()).map_err(|e| format!("case {k}: {e}"))?;
        ensure!(cert.passed(), "case {k}: {cert:?}");
        let c = cech(f).map_err(|e| e.to_string())?;
        let t = tot(&c.nerve.cosimplicial, exec()).map_err(|e| e.to_string())?;
        let iso = tot_cech_iso(&t, &c.cech).map_err(|e| e.to_string())?;
        ensure!(iso.validate().is_ok() && oracle_bijective(&iso), "case {k}: oracle rejects the isomorphism");
        ensure!(cert.cech_betti == oracle_betti(c.complex()), "case {k}: Čech Betti numbers disagree with the oracle");
    }
    Ok(format!("{} presheaves", corpus.len()))
}

fn tw_tot(corpus: &[CoverPresheaf]) -> Outcome {
    for (k, f) in corpus.iter().enumerate() {
        let n = f.n();
        let cert = check_tw_tot(f, &[n, n + 1], exec()).map_err(|e| format!("case {k}: {e}"))?;
        ensure!(cert.passed(), "case {k}: {cert:?}");
        ensure!(cert.tw_betti.iter().all(|b| *b == cert.tot_betti), "case {k}: Betti tables differ between P = N and N + 1");
        let c = cech(f).map_err(|e| e.to_string())?;
        let dc = &c.nerve.cosimplicial;
        let t = tot(dc, exec()).map_err(|e| e.to_string())?;
        let w = tw(dc, n, exec()).map_err(|e| e.to_string())?;
        let i = tw_to_tot(&w, &t).map_err(|e| e.to_string())?;
        ensure!(is_quasi_iso(&i).map_err(|e| e.to_string())?.is_quasi_iso, "case {k}: integration is not a quasi-isomorphism");
        let e = whitney_section(&t, &w).map_err(|e| e.to_string())?;
        ensure!(e.then(&i).map_err(|e| e.to_string())? == ChainMap::identity(&t.complex), "case {k}: I∘E ≠ id");
        ensure!(oracle_betti(&t.complex) == cert.tot_betti, "case {k}: Tot Betti numbers disagree with the oracle");
    }
    Ok(format!("{} presheaves, P ∈ {{N, N+1}}", corpus.len()))
}

fn descent_fixtures() -> Outcome {
    let circle = simplicial_betti(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    ensure!(circle == betti(&[(0, 1), (1, 1)]), "oracle: circle has Betti {circle:?}");
    for (name, (x, cover)) in [("two arcs", triangle_two_arcs()), ("three edges", triangle_three_edges())] {
        let r = verify_descent(&x.cover_presheaf(&cover).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(r.holds && r.global_betti == circle && r.cech_betti == circle, "{name}: {r:?}");
    }
    let (x, cover) = square_complex();
    let r = verify_descent(&x.cover_presheaf(&cover).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let oracle = simplicial_betti(&[vec![0, 1, 2], vec![2, 3], vec![0, 3]]);
    ensure!(r.holds && r.cech_betti == oracle && r.global_betti == oracle, "square: {r:?} vs oracle {oracle:?}");
    let r = verify_descent(&disjoint().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(!r.holds && r.witness_degree == Some(0), "disjoint: {r:?}");
    Ok("triangle ×2, square, disjoint (witness degree 0)".into())
}

fn incl_excl() -> Outcome {
    let mut cases = 0;
    for members in [3, 4] {
        for seed in 0..6u64 {
            let f = random_presheaf(2000 + 10 * members as u64 + seed, RandomShape { members, max_cells: 4, width: 4 }).map_err(|e| e.to_string())?;
            let cert = inclusion_exclusion(&f).map_err(|e| e.to_string())?;
            ensure!(cert.passed(), "N = {members}, seed {seed}: {cert:?}");
            ensure!(cert.cech_betti == oracle_betti(cech(&f).map_err(|e| e.to_string())?.complex()), "N = {members}, seed {seed}: oracle");
            cases += 1;
        }
    }
    let (x, cover) = triangle_three_edges();
    ensure!(inclusion_exclusion(&x.cover_presheaf(&cover).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.passed(), "triangle");
    let report = induction_pipeline(&x, &cover).map_err(|e| e.to_string())?;
    ensure!(report.concluded && report.direct && report.steps.iter().all(|s| s.holds), "induction: {report:?}");
    ensure!(report.steps.iter().any(|s| s.members == 2), "induction used no two-member step");
    Ok(format!("{cases} random covers, triangle induction from 2-fold descent"))
}

fn bv_axioms() -> Outcome {
    let bv = PolyvectorBv::polynomial(2, 3);
    let basis = bv.basis();
    ensure!(basis.len() == 40, "basis has {} elements", basis.len());
    for a in &basis {
        ensure!(o_from(&a.bv_delta()) == o_divergence(&o_from(a), 2), "Δ({a}) disagrees with the divergence oracle");
        ensure!(a.bv_delta().bv_delta().is_zero(), "Δ²({a}) ≠ 0");
        for b in &basis {
            let (p, q) = (a.degree().unwrap(), b.degree().unwrap());
            let ours = o_from(&a.bracket(b).map_err(|e| e.to_string())?);
            ensure!(ours == schouten(&o_from(a), p, &o_from(b), q, 2), "[{a}, {b}] disagrees with Schouten");
        }
    }
    let report = bv_axiom_report(&bv, exec()).map_err(|e| e.to_string())?;
    ensure!(report.passed(), "{:?}", report.axioms.iter().find(|a| !a.passed));
    for axiom in ["graded Jacobi", "Leibniz in the first slot", "Leibniz in the second slot"] {
        let a = report.axioms.iter().find(|a| a.axiom == axiom).ok_or(format!("missing axiom {axiom}"))?;
        ensure!(a.checked == 64_000, "{axiom}: {} triples, expected all 40³", a.checked);
    }
    Ok("40 basis elements, 40² Schouten pairs, 40³ Leibniz/Jacobi triples".into())
}

fn p1() -> Outcome {
    let want = BTreeMap::from([(0, BTreeMap::from([(0, 1)])), (1, BTreeMap::from([(0, 3)]))]);
    for d in [4, 5] {
        let h = p1_polyvector_presheaf(d).map_err(|e| e.to_string())?.cohomology().map_err(|e| e.to_string())?;
        ensure!(h == want, "D = {d}: {h:?}");
        ensure!(p1_oracle(d, 0) == (1, 0) && p1_oracle(d, 1) == (3, 0), "D = {d}: oracle disagrees");
    }
    Ok("D = 4, 5: H⁰ = 1, H¹ = 0 (functions); H⁰ = 3, H¹ = 0 (vector fields)".into())
}

fn products() -> Outcome {
    let triangle = triangle_locally_constant().map_err(|e| e.to_string())?;
    for (name, f) in [("constant", constant_cdga(2).map_err(|e| e.to_string())?), ("triangle", triangle.clone())] {
        let alg = tw_product(&f, 2, exec()).map_err(|e| e.to_string())?;
        let comm = alg.check_commutative(2).map_err(|e| e.to_string())?;
        let assoc = alg.check_associative(2).map_err(|e| e.to_string())?;
        ensure!(comm.passed && comm.checked > 0, "{name}: commutativity {comm:?}");
        ensure!(assoc.passed && assoc.checked > 0, "{name}: associativity {assoc:?}");
    }
    let cmp = compare_products(&triangle, 2, exec()).map_err(|e| e.to_string())?;
    ensure!(cmp.passed() && cmp.agree.checked >= 4, "triangle: {cmp:?}");
    ensure!(cmp.cup_associative.passed, "cup associativity: {:?}", cmp.cup_associative);
    let w = cech_cup(&constant_cdga(2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.commutativity_witness().map_err(|e| e.to_string())?;
    let w = w.ok_or("no chain-level non-commutativity witness")?;
    let neg: Vec<_> = w.yx.iter().map(|(i, c)| (*i, -c.clone())).collect();
    ensure!(w.xy != w.yx && w.xy != neg, "witness does not witness: {w:?}");
    Ok(format!("TW commutative/associative, cup witness in degrees {:?}, {} homology products agree", w.degrees, cmp.agree.checked))
}

fn telescopes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..10 {
        let mut dg = vec![random_complex(&mut rng, 3, 3)];
        let mut ms = Vec::new();
        for _ in 0..3 {
            let next = random_complex(&mut rng, 3, 3);
            ms.push(random_chain_map(&mut rng, dg.last().unwrap(), &next));
            dg.push(next);
        }
        let t = telescope(&dg, &ms).map_err(|e| e.to_string())?;
        ensure!(t.validate().is_ok(), "case {case}: telescope d² ≠ 0");
        ensure!(oracle_betti(&t) == oracle_betti(dg.last().unwrap()), "case {case}: H(telescope) ≠ H(last)");
    }
    let ring = NovikovRing::new(1, Rational::from_int(3)).map_err(|e| e.to_string())?;
    let c = Complex::<NovikovElem>::concentrated(ring.clone(), 0, 1);
    let t = NovikovElem::parse(&ring, "T").map_err(|e| e.to_string())?;
    let tm = ChainMap::new(c.clone(), c.clone(), 0, BTreeMap::from([(0, SparseMatrix::from_triplets(1, 1, [(0, 0, t)]))])).map_err(|e| e.to_string())?;
    let (dg, ms) = (vec![c.clone(); 3], vec![tm.clone(), tm]);
    let tel = telescope(&dg, &ms).map_err(|e| e.to_string())?;
    ensure!(tel.validate().is_ok(), "Novikov telescope d² ≠ 0");
    let r = colimit_homology(&dg, &ms, exec()).map_err(|e| e.to_string())?;
    ensure!(r.is_pure_torsion(), "Novikov colimit has a valuation-0 class: {:?}", r.colimit);
    ensure!(homology(&tel).free_rank(0) == 1, "finite telescope should still see Λ");
    ensure!(complete(&tel).map_err(|e| e.to_string())?.completed_at() == Some(&Rational::from_int(3)), "completion metadata");
    Ok("10 ℚ diagrams, Novikov T-telescope (Den = 1, E = 3) pure torsion".into())
}

fn covers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..100 {
        let n = 1 + case % 2;
        let [a, b, c] = [0; 3].map(|_| random_poly_function(&mut rng, n, 3, 4));
        let br = |x: &PolyFunction, y: &PolyFunction| poisson_bracket(x, y).unwrap();
        ensure!(dense(&br(&a, &b)) == d_bracket(&dense(&a), &dense(&b), n), "case {case}: bracket disagrees with the oracle");
        ensure!(br(&a, &b) == br(&b, &a).neg(), "case {case}: antisymmetry");
        let leibniz = br(&a, &b.mul(&c).unwrap()).sub(&br(&a, &b).mul(&c).unwrap().add(&b.mul(&br(&a, &c)).unwrap()).unwrap()).unwrap();
        ensure!(leibniz.is_zero(), "case {case}: Leibniz");
        let jacobi = br(&a, &br(&b, &c)).add(&br(&b, &br(&c, &a))).unwrap().add(&br(&c, &br(&a, &b))).unwrap();
        ensure!(jacobi.is_zero(), "case {case}: Jacobi");
    }
    let axis: Vec<Rational> = (0..100).map(|k| qq(k - 50, 20)).collect();
    for delta in [q(1), qq(1, 2), qq(1, 4)] {
        for mode in [SmoothingMode::Intersection, SmoothingMode::Union] {
            let curve = SmoothingCurve::new(delta.clone(), mode).map_err(|e| e.to_string())?;
            for x in &axis {
                for y in &axis {
                    let got = smoothing_h(&curve, x, y).sign();
                    ensure!(got == region_oracle(&delta, mode, x, y), "δ = {delta}, {mode:?}: wrong sign at ({x}, {y})");
                }
            }
        }
    }
    let s2 = Surd::sqrt(&q(2));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    use rand::Rng;
    for delta in [q(1), qq(1, 2), qq(1, 4)] {
        for mode in [SmoothingMode::Intersection, SmoothingMode::Union] {
            let curve = SmoothingCurve::new(delta.clone(), mode).map_err(|e| e.to_string())?;
            for _ in 0..30 {
                let [x, y, s] = [0; 3].map(|_| qq(rng.gen_range(-60..=60), rng.gen_range(1..=12)));
                let lhs = smoothing_h(&curve, &(&x + &s), &(&y + &s));
                ensure!(lhs == smoothing_h(&curve, &x, &y).add(&s2.scale(&s)), "translation fails at ({x}, {y}) + {s}");
            }
        }
    }
    for seed in 0..20 {
        let (fs, g1, g2) = random_commuting_family(seed);
        let res = check_composition_lemma(&fs, &g1, &g2).map_err(|e| format!("seed {seed}: {e}"))?;
        let n = fs[0].dof();
        ensure!(d_bracket(&dense(&res.g1), &dense(&res.g2), n).is_empty(), "seed {seed}: composites do not commute by the oracle");
    }
    Ok("100 triples, 3 × 2 × 100² grid signs, 180 translations, 20 composition cases".into())
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 Tot ≅ Čech on 25 random presheaves", 10, Box::new(|| tot_cech(&corpus))),
        ("2 TW → Tot quasi-isomorphism, Whitney section", 60, Box::new(|| tw_tot(&corpus))),
        ("3 descent on simplicial fixtures", 10, Box::new(descent_fixtures)),
        ("4 inclusion–exclusion and induction", 10, Box::new(incl_excl)),
        ("5 BV axioms on ℚ[x₁, x₂], degree ≤ 3", 30, Box::new(bv_axioms)),
        ("6 ℙ¹ polyvector cohomology, D = 4, 5", 30, Box::new(p1)),
        ("7 product transport", 30, Box::new(products)),
        ("8 telescope and Novikov completion", 10, Box::new(telescopes)),
        ("9 Poisson brackets, smoothing, composition", 30, Box::new(covers)),
    ];
    let mut failed = 0;
    for (name, limit, run) in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took <= Duration::from_secs(*limit) {
                Ok(msg)
            } else {
                Err(format!("took {took:.2?}, limit {limit} s ({msg})"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS  {name}  [{took:.2?} / {limit} s]  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}  [{took:.2?} / {limit} s]  {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
