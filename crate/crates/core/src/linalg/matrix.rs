use std::fmt;

use crate::scalars::Coeff;

/// Row-major sparse matrix; each row holds `(column, value)` pairs sorted by
/// column with no explicit zeros.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<S> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, S)>>,
}

impl<S: Coeff> SparseMatrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize, ring: &S::Ring) -> Self {
        Self::scalar(n, S::one_in(ring))
    }

    /// `c·I_n`.
    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for (i, row) in m.rows.iter_mut().enumerate() {
                row.push((i, c.clone()));
            }
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    ///
    /// Panics if an index is out of range.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) outside {nrows}x{ncols}");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            *row = normalize_row(std::mem::take(row));
        }
        SparseMatrix { nrows, ncols, rows }
    }

    /// Builds a matrix from already-sorted rows; zero entries are dropped.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, S)>>) -> Self {
        let nrows = rows.len();
        let rows = rows.into_iter().map(normalize_row).collect();
        SparseMatrix { nrows, ncols, rows }
    }

    /// Matrix whose columns are the given sparse vectors of length `nrows`.
    pub fn from_columns(nrows: usize, cols: &[Vec<(usize, S)>]) -> Self {
        let trip = cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v.clone())));
        Self::from_triplets(nrows, cols.len(), trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, S)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<(usize, S)>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&S> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(cc, _)| *cc).ok().map(|i| &row[i].1)
    }

    /// All nonzero entries as `(row, col, &value)`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// Column `c` as a sparse vector.
    pub fn column(&self, c: usize) -> Vec<(usize, S)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, _)| self.get(r, c).map(|v| (r, v.clone())))
            .collect()
    }

    /// `self · other`. Panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.ncols, other.nrows,
            "cannot multiply {}x{} by {}x{}",
            self.nrows, self.ncols, other.nrows, other.ncols
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, S)> = Vec::new();
                for (k, a) in row {
                    for (c, b) in &other.rows[*k] {
                        acc.push((*c, a.mul(b)));
                    }
                }
                normalize_row(acc)
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: other.ncols, rows }
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &[(usize, S)]) -> Vec<(usize, S)> {
        let dense: std::collections::HashMap<usize, &S> = v.iter().map(|(i, s)| (*i, s)).collect();
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: Option<S> = None;
            for (c, a) in row {
                if let Some(x) = dense.get(c) {
                    let t = a.mul(x);
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.add(&t),
                    });
                }
            }
            if let Some(s) = acc {
                if !s.is_zero() {
                    out.push((r, s));
                }
            }
        }
        out
    }

    /// `self + other`. Panics on a shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "cannot add matrices of different shapes");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, |x| x.clone()))
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// `self - other`. Panics on a shape mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "cannot subtract matrices of different shapes");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, |x| x.neg()))
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| v.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zeros(self.nrows, self.ncols);
        }
        self.map_values(|v| v.mul(c))
    }

    /// Applies `f` to every stored entry, dropping results that become zero.
    pub fn map_values<T: Coeff>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, f(v))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`,
    /// adding to whatever is already there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.nrows <= self.nrows && c0 + block.ncols <= self.ncols, "block out of range");
        for (r, row) in block.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let shifted: Vec<(usize, S)> = row.iter().map(|(c, v)| (c + c0, v.clone())).collect();
            let target = &mut self.rows[r0 + r];
            *target = merge_rows(target, &shifted, |x| x.clone());
        }
    }

    /// Block matrix with the given row and column block sizes.
    pub fn from_blocks(row_dims: &[usize], col_dims: &[usize], blocks: &[(usize, usize, &Self)]) -> Self {
        let row_off = offsets(row_dims);
        let col_off = offsets(col_dims);
        let mut m = Self::zeros(row_off[row_dims.len()], col_off[col_dims.len()]);
        for (bi, bj, b) in blocks {
            assert_eq!(b.nrows, row_dims[*bi], "block ({bi},{bj}) has wrong row count");
            assert_eq!(b.ncols, col_dims[*bj], "block ({bi},{bj}) has wrong column count");
            m.add_block(row_off[*bi], col_off[*bj], b);
        }
        m
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let rows = self.rows[r0..r1]
            .iter()
            .map(|row| row.iter().filter(|(c, _)| *c >= c0 && *c < c1).map(|(c, v)| (c - c0, v.clone())).collect())
            .collect();
        SparseMatrix { nrows: r1 - r0, ncols: c1 - c0, rows }
    }

    /// Columns selected (in order) by `cols`.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.ncols];
        for (j, c) in cols.iter().enumerate() {
            pos[*c] = j;
        }
        let trip = self
            .entries()
            .filter(|(_, c, _)| pos[*c] != usize::MAX)
            .map(|(r, c, v)| (r, pos[c], v.clone()))
            .collect::<Vec<_>>();
        Self::from_triplets(self.nrows, cols.len(), trip)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.nrows, other.nrows, "hstack needs equal row counts");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + self.ncols, v.clone())));
                r
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols + other.ncols, rows }
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols, "vstack needs equal column counts");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        SparseMatrix { nrows: self.nrows + other.nrows, ncols: self.ncols, rows }
    }

    /// Dense copy, for small matrices and reports.
    pub fn to_dense(&self, ring: &S::Ring) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero_in(ring); self.ncols]; self.nrows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }
}

/// Prefix sums `[0, d0, d0+d1, ...]`.
pub fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    out.push(0);
    for d in dims {
        acc += d;
        out.push(acc);
    }
    out
}

/// Sorts by column, sums duplicates, drops zeros.
pub(crate) fn normalize_row<S: Coeff>(mut row: Vec<(usize, S)>) -> Vec<(usize, S)> {
    if row.windows(2).any(|w| w[0].0 >= w[1].0) {
        row.sort_by_key(|(c, _)| *c);
        let mut merged: Vec<(usize, S)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                _ => merged.push((c, v)),
            }
        }
        row = merged;
    }
    row.retain(|(_, v)| !v.is_zero());
    row
}

/// `a + g(b)` for sorted rows, where `g` is applied to entries taken from `b`.
fn merge_rows<S: Coeff>(a: &[(usize, S)], b: &[(usize, S)], g: impl Fn(&S) -> S) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, g(&b[j].1)));
            j += 1;
        } else {
            let s = a[i].1.add(&g(&b[j].1));
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<S: Coeff> fmt::Debug for SparseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} [", self.nrows, self.ncols)?;
        for (i, (r, c, v)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r},{c})={v}")?;
        }
        write!(f, "]")
    }
}

impl<S: Coeff> SparseMatrix<S> {
    /// Kronecker product; index `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let trip = self
            .entries()
            .flat_map(|(i, j, a)| {
                other.entries().map(move |(k, l, b)| (i * other.nrows + k, j * other.ncols + l, a.mul(b)))
            })
            .collect::<Vec<_>>();
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, trip)
    }
}
