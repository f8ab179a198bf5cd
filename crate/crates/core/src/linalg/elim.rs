//! Exact sparse elimination over ℚ.
//!
//! Pivots are chosen Markowitz-style: the shortest remaining row, and within
//! it the column touching the fewest remaining rows. This keeps fill-in low on
//! the block-structured matrices produced by the totalisation code; it has no
//! influence on ranks, and kernel bases depend only on the set of pivot
//! columns, which is itself deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use super::SparseMatrix;
use crate::scalars::Rational;

type Row = Vec<(usize, Rational)>;

struct Eliminated {
    /// `(pivot column, normalised row)`, in pivot order.
    pivots: Vec<(usize, Row)>,
}

/// `row_s - factor * row_r`.
fn axpy(target: &Row, factor: &Rational, pivot: &Row) -> Row {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        if j == pivot.len() || (i < target.len() && target[i].0 < pivot[j].0) {
            out.push(target[i].clone());
            i += 1;
        } else if i == target.len() || pivot[j].0 < target[i].0 {
            out.push((pivot[j].0, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - &(factor * &pivot[j].1);
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Gaussian elimination. With `full`, earlier pivot rows are also cleared in
/// each new pivot column, giving a reduced row echelon form.
fn eliminate(m: &SparseMatrix<Rational>, full: bool) -> Eliminated {
    let mut rows: Vec<Row> = m.rows().to_vec();
    let ncols = m.ncols();
    // column -> active rows containing it
    let mut col_active: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    // column -> finished pivot rows containing it (only maintained when `full`)
    let mut col_done: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); if full { ncols } else { 0 }];
    let mut heap = BinaryHeap::new();
    let mut finished = vec![false; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_active[*c].insert(r);
        }
        if !row.is_empty() {
            heap.push(Reverse((row.len(), r)));
        }
    }
    let mut order: Vec<(usize, usize)> = Vec::new();
    while let Some(Reverse((len, r))) = heap.pop() {
        if finished[r] || rows[r].len() != len || len == 0 {
            continue;
        }
        let (pc, pv) = rows[r]
            .iter()
            .min_by_key(|(c, _)| (col_active[*c].len(), *c))
            .map(|(c, v)| (*c, v.clone()))
            .expect("nonempty row");
        let inv = pv.recip().expect("pivot is nonzero");
        let pivot_row: Row = rows[r].iter().map(|(c, v)| (*c, v * &inv)).collect();
        finished[r] = true;
        for (c, _) in &pivot_row {
            col_active[*c].remove(&r);
            if full {
                col_done[*c].insert(r);
            }
        }
        let mut targets: Vec<usize> = col_active[pc].iter().copied().collect();
        if full {
            targets.extend(col_done[pc].iter().copied().filter(|s| *s != r));
        }
        for s in targets {
            let factor = match rows[s].binary_search_by_key(&pc, |(c, _)| *c) {
                Ok(i) => rows[s][i].1.clone(),
                Err(_) => continue,
            };
            let new_row = axpy(&rows[s], &factor, &pivot_row);
            let index = if finished[s] { &mut col_done } else { &mut col_active };
            for (c, _) in &pivot_row {
                let present = new_row.binary_search_by_key(c, |(cc, _)| *cc).is_ok();
                if present {
                    index[*c].insert(s);
                } else {
                    index[*c].remove(&s);
                }
            }
            rows[s] = new_row;
            if !finished[s] && !rows[s].is_empty() {
                heap.push(Reverse((rows[s].len(), s)));
            }
        }
        rows[r] = pivot_row;
        order.push((pc, r));
    }
    let pivots = order.into_iter().map(|(c, r)| (c, std::mem::take(&mut rows[r]))).collect();
    Eliminated { pivots }
}

/// Rank over ℚ.
pub fn rank(m: &SparseMatrix<Rational>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    // Eliminating along the shorter side is cheaper.
    if m.nrows() > 2 * m.ncols() {
        return eliminate(&m.transpose(), false).pivots.len();
    }
    eliminate(m, false).pivots.len()
}

/// A basis of the null space `{v : M v = 0}`, normalised so that the basis
/// vector attached to free column `f` has coordinate 1 at `f` and 0 at every
/// other free column. Coordinates of any kernel element are therefore its
/// entries at the free columns.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// `ncols × dim` matrix whose columns span the kernel.
    pub basis: SparseMatrix<Rational>,
    /// Free columns, ascending; basis vector `j` belongs to `free[j]`.
    pub free: Vec<usize>,
    free_pos: Vec<Option<usize>>,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of a kernel element (given as a sparse vector).
    pub fn coords(&self, v: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
        v.iter().filter_map(|(i, x)| self.free_pos[*i].map(|j| (j, x.clone()))).collect()
    }

    /// Coordinates of every column of `m` (each assumed to lie in the kernel).
    pub fn coords_matrix(&self, m: &SparseMatrix<Rational>) -> SparseMatrix<Rational> {
        let trip = m
            .entries()
            .filter_map(|(r, c, v)| self.free_pos[r].map(|j| (j, c, v.clone())))
            .collect::<Vec<_>>();
        SparseMatrix::from_triplets(self.free.len(), m.ncols(), trip)
    }
}

pub fn kernel(m: &SparseMatrix<Rational>) -> Kernel {
    let n = m.ncols();
    let elim = eliminate(m, true);
    let mut is_pivot = vec![false; n];
    for (c, _) in &elim.pivots {
        is_pivot[*c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|c| !is_pivot[*c]).collect();
    let mut free_pos = vec![None; n];
    for (j, f) in free.iter().enumerate() {
        free_pos[*f] = Some(j);
    }
    let mut trip: Vec<(usize, usize, Rational)> = free.iter().enumerate().map(|(j, f)| (*f, j, Rational::one())).collect();
    for (pc, row) in &elim.pivots {
        for (c, v) in row {
            if c != pc {
                let j = free_pos[*c].expect("reduced row has entries only in free columns");
                trip.push((*pc, j, -v));
            }
        }
    }
    let basis = SparseMatrix::from_triplets(n, free.len(), trip);
    Kernel { basis, free, free_pos }
}

/// `true` if every column of `v` lies in the column span of `a`.
pub fn in_column_span(a: &SparseMatrix<Rational>, v: &SparseMatrix<Rational>) -> bool {
    rank(&a.hstack(v)) == rank(a)
}
