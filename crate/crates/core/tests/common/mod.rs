//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's elimination code.
#![allow(dead_code)]

pub mod poisson;
pub mod schouten;

use std::collections::BTreeMap;

use descentlab::complexes::{ChainMap, Complex};
use descentlab::linalg::SparseMatrix;
use descentlab::scalars::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Dense textbook Gaussian elimination.
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|i| !a[*i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].checked_div(&a[r][c]).unwrap();
                for j in 0..ncols {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

pub fn to_dense(m: &SparseMatrix<Rational>) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::zero(); m.ncols()]; m.nrows()];
    for (r, c, v) in m.entries() {
        out[r][c] = v.clone();
    }
    out
}

pub fn oracle_rank(m: &SparseMatrix<Rational>) -> usize {
    dense_rank(&to_dense(m))
}

/// Betti numbers by the dense oracle, nonzero entries only.
pub fn oracle_betti(c: &Complex<Rational>) -> BTreeMap<i32, usize> {
    c.degrees()
        .map(|n| (n, c.dim(n) - oracle_rank(&c.diff(n)) - oracle_rank(&c.diff(n - 1))))
        .filter(|(_, b)| *b > 0)
        .collect()
}

pub fn dense_mat(rows: &[&[i64]]) -> SparseMatrix<Rational> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let trip = rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, q(*v))))
        .collect::<Vec<_>>();
    SparseMatrix::from_triplets(rows.len(), ncols, trip)
}

/// A random invertible matrix with its inverse: a product of elementary
/// row operations with small integer multipliers.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> (SparseMatrix<Rational>, SparseMatrix<Rational>) {
    let mut g = SparseMatrix::identity(n, &());
    let mut ginv = SparseMatrix::identity(n, &());
    if n < 2 {
        return (g, ginv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2i64..=2);
        if c == 0 {
            continue;
        }
        let e = SparseMatrix::identity(n, &()).add(&SparseMatrix::from_triplets(n, n, [(i, j, q(c))]));
        let einv = SparseMatrix::identity(n, &()).add(&SparseMatrix::from_triplets(n, n, [(i, j, q(-c))]));
        g = e.mul(&g);
        ginv = ginv.mul(&einv);
    }
    (g, ginv)
}

/// A random complex: a sum of elementary pieces (`ℚ` in one degree, or
/// `ℚ --1--> ℚ`) scrambled by a random basis change in every degree.
pub fn random_complex(rng: &mut ChaCha8Rng, max_dim: usize, width: usize) -> Complex<Rational> {
    let lo = rng.gen_range(-2..=1);
    let mut dims = vec![0usize; width];
    let mut pairs = vec![0usize; width.saturating_sub(1)];
    for i in 0..width {
        let budget = max_dim.saturating_sub(dims[i]);
        let cyc = rng.gen_range(0..=budget.min(2));
        dims[i] += cyc;
        if i + 1 < width {
            let room = max_dim.saturating_sub(dims[i]).min(max_dim.saturating_sub(dims[i + 1]));
            let p = rng.gen_range(0..=room.min(2));
            pairs[i] = p;
            dims[i] += p;
            dims[i + 1] += p;
        }
    }
    // The pair block of d^i maps the last pairs[i] basis vectors of C^i onto
    // the first pairs[i] vectors of C^{i+1}.
    let mut diffs = Vec::new();
    for i in 0..width.saturating_sub(1) {
        let p = pairs[i];
        let trip = (0..p).map(|k| (k, dims[i] - p + k, Rational::one())).collect::<Vec<_>>();
        diffs.push(SparseMatrix::from_triplets(dims[i + 1], dims[i], trip));
    }
    // Pair targets must not overlap the pair sources in the same degree:
    // sources sit at the end, targets at the start, and dims[i] counts both.
    let c = Complex::new((), lo, dims.clone(), diffs).unwrap();
    let g: BTreeMap<i32, _> = (0..width).map(|i| (lo + i as i32, random_invertible(rng, dims[i]))).collect();
    c.conjugate(&g)
}

/// A random chain map between two random complexes: `f = d_D h + h d_C`
/// plus a map through the homology of both sides built from random cycles.
pub fn random_chain_map(rng: &mut ChaCha8Rng, c: &Complex<Rational>, d: &Complex<Rational>) -> ChainMap<Rational> {
    let mut maps = BTreeMap::new();
    let lo = c.support().map_or(0, |s| s.0).min(d.support().map_or(0, |s| s.0)) - 1;
    let hi = c.support().map_or(0, |s| s.1).max(d.support().map_or(0, |s| s.1)) + 1;
    // random null-homotopic part h: C^n → D^{n−1}
    let hs: BTreeMap<i32, SparseMatrix<Rational>> = (lo..=hi + 1)
        .map(|n| {
            let (r, cc) = (d.dim(n - 1), c.dim(n));
            let trip = (0..r)
                .flat_map(|i| (0..cc).map(move |j| (i, j)))
                .filter_map(|(i, j)| {
                    let v = rng.gen_range(-1i64..=1);
                    (v != 0).then(|| (i, j, q(v)))
                })
                .collect::<Vec<_>>();
            (n, SparseMatrix::from_triplets(r, cc, trip))
        })
        .collect();
    for n in lo..=hi {
        let a = d.diff(n - 1).mul(&hs[&n]);
        let b = hs[&(n + 1)].mul(&c.diff(n));
        let m = a.add(&b);
        if m.nrows() > 0 && m.ncols() > 0 {
            maps.insert(n, m);
        }
    }
    let mut f = ChainMap::new(c.clone(), d.clone(), 0, maps).unwrap();
    // Add a rank-one map sending a random cocycle-valued functional...
    // Use projection of C^n onto a random cycle of D^n times a functional that
    // vanishes on boundaries: pick v with v·d^{n−1} = 0 (a cocycle of the dual).
    for n in c.degrees() {
        if rng.gen_bool(0.5) {
            continue;
        }
        let zc = descentlab::linalg::kernel(&c.diff(n - 1).transpose()).basis; // functionals killing boundaries
        let zd = descentlab::linalg::kernel(&d.diff(n)).basis; // cycles of D
        if zc.ncols() == 0 || zd.ncols() == 0 {
            continue;
        }
        let a = zc.column(rng.gen_range(0..zc.ncols()));
        let b = zd.column(rng.gen_range(0..zd.ncols()));
        // functional must also vanish... f c must be a chain map: f d = d f.
        // f = b ⊗ a with a·d^{n−1} = 0 and d b = 0 gives d f = 0 and f d = 0.
        let trip = b.iter().flat_map(|(i, x)| a.iter().map(move |(j, y)| (*i, *j, x * y))).collect::<Vec<_>>();
        let extra = SparseMatrix::from_triplets(d.dim(n), c.dim(n), trip);
        let mut comps = f.components().clone();
        let cur = f.map(n);
        comps.insert(n, cur.add(&extra));
        f = ChainMap::new(c.clone(), d.clone(), 0, comps).unwrap();
    }
    f
}

/// Smith normal form over `ℚ[u]/(u^levels)` for a small matrix, returned as
/// the valuations of the diagonal (`levels` meaning zero). Matrix entries
/// are dense coefficient vectors in `u`.
pub fn truncated_snf(mut a: Vec<Vec<Vec<Rational>>>, levels: usize) -> Vec<usize> {
    let val = |p: &Vec<Rational>| p.iter().position(|c| !c.is_zero()).unwrap_or(levels);
    let mul = |p: &Vec<Rational>, r: &Vec<Rational>| {
        let mut out = vec![Rational::zero(); levels];
        for i in 0..levels {
            for j in 0..levels - i {
                out[i + j] = &out[i + j] + &(&p[i] * &r[j]);
            }
        }
        out
    };
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // entry of least valuation in the remaining block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                let v = val(&a[i][j]);
                if v < levels && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((i, j, v)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        // pivot = u^v · unit; every other entry of the block is divisible by u^v
        let unit: Vec<Rational> = (0..levels).map(|k| if k + v < levels { a[t][t][k + v].clone() } else { Rational::zero() }).collect();
        // invert unit by the geometric series
        let c0inv = unit[0].recip().unwrap();
        let mut n: Vec<Rational> = unit.iter().map(|c| -(c * &c0inv)).collect();
        n[0] = Rational::zero();
        let mut inv = vec![Rational::zero(); levels];
        inv[0] = Rational::one();
        let mut pw = inv.clone();
        for _ in 1..levels {
            pw = mul(&pw, &n);
            for k in 0..levels {
                inv[k] = &inv[k] + &pw[k];
            }
        }
        let inv: Vec<Rational> = inv.iter().map(|c| c * &c0inv).collect();
        let divide = |p: &Vec<Rational>| -> Vec<Rational> {
            // p / u^v, valid as p has valuation ≥ v
            (0..levels).map(|k| if k + v < levels { p[k + v].clone() } else { Rational::zero() }).collect()
        };
        for i in t + 1..nrows {
            if val(&a[i][t]) < levels {
                let f = mul(&divide(&a[i][t]), &inv);
                for j in t..ncols {
                    let s = mul(&f, &a[t][j]);
                    a[i][j] = a[i][j].iter().zip(&s).map(|(x, y)| x - y).collect();
                }
            }
        }
        for j in t + 1..ncols {
            if val(&a[t][j]) < levels {
                let f = mul(&divide(&a[t][j]), &inv);
                for i in t..nrows {
                    let s = mul(&f, &a[i][t]);
                    a[i][j] = a[i][j].iter().zip(&s).map(|(x, y)| x - y).collect();
                }
            }
        }
        diag.push(v);
        t += 1;
    }
    diag
}

/// Betti numbers of the simplicial cohomology of the complex generated by
/// `maximal`, from dense coboundary matrices built here from scratch.
pub fn simplicial_betti(maximal: &[Vec<usize>]) -> BTreeMap<i32, usize> {
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    for s in maximal {
        for mask in 1u32..1 << s.len() {
            let f: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            if !simplices.contains(&f) {
                simplices.push(f);
            }
        }
    }
    let top = simplices.iter().map(Vec::len).max().unwrap_or(0);
    let of_dim = |k: usize| -> Vec<Vec<usize>> { simplices.iter().filter(|s| s.len() == k + 1).cloned().collect() };
    let ranks: Vec<usize> = (0..top)
        .map(|k| {
            let (src, tgt) = (of_dim(k), of_dim(k + 1));
            let rows: Vec<Vec<Rational>> = tgt
                .iter()
                .map(|t| {
                    src.iter()
                        .map(|s| match (0..t.len()).find(|i| { let mut f = t.clone(); f.remove(*i); &f == s }) {
                            Some(i) if i % 2 == 0 => q(1),
                            Some(_) => q(-1),
                            None => q(0),
                        })
                        .collect()
                })
                .collect();
            dense_rank(&rows)
        })
        .collect();
    let mut out = BTreeMap::new();
    for k in 0..top {
        let incoming = if k == 0 { 0 } else { ranks[k - 1] };
        let outgoing = ranks.get(k).copied().unwrap_or(0);
        let b = of_dim(k).len() - incoming - outgoing;
        if b > 0 {
            out.insert(k as i32, b);
        }
    }
    out
}

/// Ranks of `C^0 → C^1` for the truncated Čech complex of degree-`k`
/// polyvectors, built from the chain rule `y = 1/x`, `∂_y = −x²∂_x`.
pub fn p1_oracle(d: i32, k: usize) -> (usize, usize) {
    let w = |a: i32| a - k as i32; // torus weight of x^a ∂_x^k
    let overlap: Vec<i32> = (-3 * d..=3 * d).filter(|a| w(*a).abs() <= d).collect();
    let chart_x: Vec<i32> = (0..=3 * d).filter(|a| w(*a).abs() <= d).collect();
    // y^b ∂_y^k = (−1)^k x^{2k−b} ∂_x^k, weight k − b
    let chart_y: Vec<i32> = (0..=3 * d).filter(|b| (k as i32 - b).abs() <= d).collect();
    let col = |a: i32| overlap.iter().position(|o| *o == a).unwrap();
    let mut rows = vec![vec![Rational::zero(); chart_x.len() + chart_y.len()]; overlap.len()];
    for (c, a) in chart_x.iter().enumerate() {
        rows[col(*a)][c] = -Rational::one();
    }
    for (c, b) in chart_y.iter().enumerate() {
        let sign = if k % 2 == 1 { -Rational::one() } else { Rational::one() };
        rows[col(2 * k as i32 - b)][chart_x.len() + c] = sign;
    }
    let r = dense_rank(&rows);
    (chart_x.len() + chart_y.len() - r, overlap.len() - r)
}
