//! Compressed-row sparse matrix used as the common carrier for assembled
//! operators.

use crate::error::{Error, Result};

/// Coordinate-form accumulator. Duplicate coordinates are summed and exact
/// zeros dropped by [`TripletBuilder::finish`].
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(rows: usize, cols: usize, cap: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::with_capacity(cap),
        }
    }

    /// Adds `value` at (`row`, `col`), 0-based.
    ///
    /// # Panics
    ///
    /// If the coordinate is outside the declared shape.
    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        assert!(
            row < self.rows && col < self.cols,
            "entry ({row}, {col}) outside {}x{}",
            self.rows,
            self.cols
        );
        self.entries.push((row, col, value));
    }

    pub fn finish(mut self) -> SparseOperator {
        self.entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0usize; self.rows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_of = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_of.push(r);
                last = Some((r, c));
            }
        }
        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in row_of.into_iter().zip(col_idx).zip(values) {
            if v != 0.0 {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for r in 0..self.rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseOperator {
            rows: self.rows,
            cols: self.cols,
            row_ptr,
            col_idx: keep_cols,
            values: keep_vals,
        }
    }
}

/// Sparse matrix in CSR form with sorted, unique column indices per row and
/// no stored zeros. Element access is 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        TripletBuilder::new(rows, cols).finish()
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut b = TripletBuilder::new(rows, cols);
        for (r, c, v) in triplets {
            b.push(r, c, v);
        }
        b.finish()
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut b = TripletBuilder::new(n_rows, n_cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged dense input");
            for (c, &v) in row.iter().enumerate() {
                b.push(r, c, v);
            }
        }
        b.finish()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut b = TripletBuilder::with_capacity(self.cols, self.rows, self.nnz());
        for (r, c, v) in self.triplets() {
            b.push(c, r, v);
        }
        b.finish()
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `a·self + b·other`.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut t = TripletBuilder::with_capacity(self.rows, self.cols, self.nnz() + other.nnz());
        for (r, c, v) in self.triplets() {
            t.push(r, c, a * v);
        }
        for (r, c, v) in other.triplets() {
            t.push(r, c, b * v);
        }
        Ok(t.finish())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.linear_combination(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.linear_combination(1.0, other, -1.0)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut t = TripletBuilder::new(self.rows, other.cols);
        for (r, k, a) in self.triplets() {
            let (cols, vals) = other.row(k);
            for (&c, &b) in cols.iter().zip(vals) {
                t.push(r, c, a * b);
            }
        }
        Ok(t.finish())
    }

    /// Largest absolute entrywise difference; shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let d = self.sub(other)?;
        Ok(d.values.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    /// Lower and upper bandwidth: the largest `r - c` and `c - r` over
    /// stored entries.
    pub fn bandwidth(&self) -> (usize, usize) {
        self.triplets().fold((0, 0), |(lo, up), (r, c, _)| {
            if r > c {
                (lo.max(r - c), up)
            } else {
                (lo, up.max(c - r))
            }
        })
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .triplets()
                .all(|(r, c, v)| (v - self.get(c, r)).abs() <= tol)
    }
}
