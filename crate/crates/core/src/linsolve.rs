//! Direct solvers for the reduced space-time system.
//!
//! [`solve`] is a general left-looking sparse LU with threshold partial
//! pivoting (Gilbert–Peierls). [`solve_time_marching`] exploits the fact
//! that the assembled system never couples a time layer to a later one: it
//! walks the layers forward in physical time and solves one small dense
//! block per layer.
//!
//! Both paths sum in a fixed order (stored column order of each CSR row), so
//! results are reproducible run to run.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::assembly::AssembledSystem;
use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

/// A pivot candidate on the diagonal is kept if it is at least this fraction
/// of the largest candidate in its column.
const PIVOT_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// `‖A x - b‖_∞`, recomputed from the inputs after the solve.
    pub residual_inf_norm: f64,
    /// Stored entries of the factors (`L` and `U`, or all block factors).
    pub factor_nnz: usize,
    pub elapsed: Duration,
}

/// Compressed-column factor storage.
#[derive(Debug, Default)]
struct CscFactor {
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscFactor {
    fn with_capacity(n: usize, nnz: usize) -> Self {
        let mut col_ptr = Vec::with_capacity(n + 1);
        col_ptr.push(0);
        Self {
            col_ptr,
            row_idx: Vec::with_capacity(nnz),
            values: Vec::with_capacity(nnz),
        }
    }

    fn push(&mut self, row: usize, value: f64) {
        self.row_idx.push(row);
        self.values.push(value);
    }

    fn close_column(&mut self) {
        self.col_ptr.push(self.row_idx.len());
    }

    fn column(&self, j: usize) -> std::ops::Range<usize> {
        self.col_ptr[j]..self.col_ptr[j + 1]
    }
}

/// `P A = L U` with unit lower `L` (diagonal stored first in each column)
/// and upper `U` (diagonal stored last).
#[derive(Debug)]
pub struct SparseLu {
    n: usize,
    l: CscFactor,
    u: CscFactor,
    /// `pinv[row]` is the pivot step that chose `row`.
    pinv: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl SparseLu {
    pub fn factor(a: &SparseOperator) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                context: "LU factorization (square matrix)",
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        // rows of the transpose are the columns of `a`
        let at = a.transpose();
        let mut l = CscFactor::with_capacity(n, 4 * a.nnz() + n);
        let mut u = CscFactor::with_capacity(n, 4 * a.nnz() + n);
        let mut pinv = vec![UNSET; n];
        let mut x = vec![0.0; n];
        let mut marked = vec![false; n];
        let mut reach = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();

        for k in 0..n {
            let (a_rows, a_vals) = at.row(k);
            // rows reachable from the pattern of A(:,k) through L, in
            // topological order (reversed post-order of the DFS)
            reach.clear();
            for &start in a_rows {
                if marked[start] {
                    continue;
                }
                marked[start] = true;
                stack.push((start, 0));
                while let Some(&(node, next)) = stack.last() {
                    let col = pinv[node];
                    let children = if col == UNSET {
                        0..0
                    } else {
                        // skip the unit diagonal
                        let r = l.column(col);
                        r.start + 1..r.end
                    };
                    let unvisited =
                        (children.start + next..children.end).find(|&p| !marked[l.row_idx[p]]);
                    match unvisited {
                        Some(p) => {
                            let child = l.row_idx[p];
                            if let Some(top) = stack.last_mut() {
                                top.1 = p + 1 - children.start;
                            }
                            marked[child] = true;
                            stack.push((child, 0));
                        }
                        None => {
                            stack.pop();
                            reach.push(node);
                        }
                    }
                }
            }
            reach.reverse();

            for (&r, &v) in a_rows.iter().zip(a_vals) {
                x[r] = v;
            }
            for &i in &reach {
                let col = pinv[i];
                if col == UNSET {
                    continue;
                }
                let xi = x[i];
                if xi == 0.0 {
                    continue;
                }
                let span = l.column(col);
                for p in span.start + 1..span.end {
                    x[l.row_idx[p]] -= l.values[p] * xi;
                }
            }

            let mut pivot_row = UNSET;
            let mut best = -1.0;
            for &i in &reach {
                if pinv[i] == UNSET {
                    let t = x[i].abs();
                    if t > best {
                        best = t;
                        pivot_row = i;
                    }
                } else {
                    u.push(pinv[i], x[i]);
                }
            }
            if pivot_row == UNSET || !(best.is_finite() && best > 0.0) {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if pinv[k] == UNSET && marked[k] && x[k].abs() >= PIVOT_THRESHOLD * best {
                pivot_row = k;
            }
            let pivot = x[pivot_row];
            u.push(k, pivot);
            u.close_column();
            pinv[pivot_row] = k;
            l.push(pivot_row, 1.0);
            for &i in &reach {
                if pinv[i] == UNSET {
                    l.push(i, x[i] / pivot);
                }
                x[i] = 0.0;
                marked[i] = false;
            }
            l.close_column();
        }

        for r in l.row_idx.iter_mut() {
            *r = pinv[*r];
        }
        Ok(Self { n, l, u, pinv })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn factor_nnz(&self) -> usize {
        self.l.values.len() + self.u.values.len()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "LU solve",
                expected: self.n,
                found: b.len(),
            });
        }
        let mut x = vec![0.0; self.n];
        for (i, &v) in b.iter().enumerate() {
            x[self.pinv[i]] = v;
        }
        for j in 0..self.n {
            let xj = x[j];
            let span = self.l.column(j);
            for p in span.start + 1..span.end {
                x[self.l.row_idx[p]] -= self.l.values[p] * xj;
            }
        }
        for j in (0..self.n).rev() {
            let span = self.u.column(j);
            let diag = span.end - 1;
            x[j] /= self.u.values[diag];
            let xj = x[j];
            for p in span.start..diag {
                x[self.u.row_idx[p]] -= self.u.values[p] * xj;
            }
        }
        Ok(x)
    }
}

pub fn residual_inf_norm(a: &SparseOperator, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = a.mul_vec(x)?;
    Ok(ax
        .iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max))
}

/// Solves `A x = b` with a sparse LU factorization.
pub fn solve(a: &SparseOperator, b: &[f64]) -> Result<SolveReport> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "right-hand side",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let start = Instant::now();
    let lu = SparseLu::factor(a)?;
    let solution = lu.solve(b)?;
    let elapsed = start.elapsed();
    Ok(SolveReport {
        residual_inf_norm: residual_inf_norm(a, &solution, b)?,
        factor_nnz: lu.factor_nnz(),
        solution,
        elapsed,
    })
}

/// Solves the reduced system layer by layer in increasing physical time.
///
/// For layer `j` the right-hand side is `b_j - Σ_{j'<j} A_{j,j'} x_{j'}`,
/// accumulated in stored column order, and the diagonal block is factored
/// densely. Consecutive identical blocks reuse one factorization.
pub fn solve_time_marching(system: &AssembledSystem) -> Result<SolveReport> {
    let start = Instant::now();
    let a = &system.reduced_matrix;
    let b = &system.reduced_rhs;
    let layer_of: Vec<usize> = system.kept_nodes.iter().map(|&(_, j)| j).collect();
    let n_layers = system.grid.n();

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_layers + 1];
    let mut local = vec![0usize; layer_of.len()];
    for (idx, &j) in layer_of.iter().enumerate() {
        local[idx] = members[j].len();
        members[j].push(idx);
    }

    let mut x = vec![0.0; a.rows()];
    let mut cached: Option<(
        DMatrix<f64>,
        nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    )> = None;
    let mut factor_nnz = 0;

    for (j, rows) in members.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let size = rows.len();
        let mut block = DMatrix::<f64>::zeros(size, size);
        let mut rhs = DVector::<f64>::zeros(size);
        for (li, &r) in rows.iter().enumerate() {
            let (cols, vals) = a.row(r);
            let mut acc = b[r];
            for (&c, &v) in cols.iter().zip(vals) {
                let lc = layer_of[c];
                if lc == j {
                    block[(li, local[c])] = v;
                } else if lc < j {
                    acc -= v * x[c];
                } else {
                    return Err(Error::NonCausal {
                        layer: j,
                        later: lc,
                    });
                }
            }
            rhs[li] = acc;
        }

        let reuse = matches!(&cached, Some((prev, _)) if *prev == block);
        if !reuse {
            let lu = block.clone().lu();
            if !lu.is_invertible() {
                return Err(Error::SingularMatrix { pivot: rows[0] });
            }
            factor_nnz += size * size;
            cached = Some((block, lu));
        }
        let (_, lu) = cached.as_ref().expect("factorization cached above");
        let sol = lu
            .solve(&rhs)
            .ok_or(Error::SingularMatrix { pivot: rows[0] })?;
        for (li, &r) in rows.iter().enumerate() {
            x[r] = sol[li];
        }
    }

    let elapsed = start.elapsed();
    Ok(SolveReport {
        residual_inf_norm: residual_inf_norm(a, &x, b)?,
        factor_nnz,
        solution: x,
        elapsed,
    })
}
