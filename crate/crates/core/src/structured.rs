//! Eliminators, shifters, the Kronecker product, and shifted strip patterns.
//!
//! Eliminator row numbers and shifter offsets are 1-based, the way the
//! matrices `S_{r1,...,rk}` and `E_{N,p}^±` are usually written.

use std::collections::BTreeSet;

use crate::coeffs::CoeffVector;
use crate::error::{Error, Result};
use crate::sparse::{SparseOperator, TripletBuilder};
use crate::stripmat::Orientation;

/// The `N x N` identity with some rows struck out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eliminator {
    base_size: usize,
    omitted: Vec<usize>,
}

impl Eliminator {
    /// `omitted` holds 1-based indices in `1..=base_size`, no duplicates.
    pub fn new(base_size: usize, omitted: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in omitted {
            if r == 0 || r > base_size {
                return Err(Error::InvalidEliminator(format!(
                    "row {r} outside 1..={base_size}"
                )));
            }
            if !seen.insert(r) {
                return Err(Error::InvalidEliminator(format!("row {r} listed twice")));
            }
        }
        Ok(Self {
            base_size,
            omitted: seen.into_iter().collect(),
        })
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn omitted(&self) -> &[usize] {
        &self.omitted
    }

    /// Number of rows of the eliminator, `N - |omitted|`.
    pub fn kept_len(&self) -> usize {
        self.base_size - self.omitted.len()
    }

    /// Kept 1-based indices in ascending order.
    pub fn kept(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.kept_len());
        let mut skip = self.omitted.iter().peekable();
        for r in 1..=self.base_size {
            if skip.peek() == Some(&&r) {
                skip.next();
            } else {
                out.push(r);
            }
        }
        out
    }

    /// Maps an old 0-based index to its new 0-based index, `None` if struck.
    fn index_map(&self) -> Vec<Option<usize>> {
        let mut map = vec![None; self.base_size];
        for (new, old) in self.kept().into_iter().enumerate() {
            map[old - 1] = Some(new);
        }
        map
    }

    /// The eliminator as an explicit `(N - k) x N` matrix.
    pub fn to_operator(&self) -> SparseOperator {
        SparseOperator::from_triplets(
            self.kept_len(),
            self.base_size,
            self.kept()
                .into_iter()
                .enumerate()
                .map(|(new, old)| (new, old - 1, 1.0)),
        )
    }

    /// `S x`: keeps the entries of `x` at the retained indices.
    pub fn restrict(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len("eliminator restrict", x.len())?;
        Ok(self.kept().into_iter().map(|r| x[r - 1]).collect())
    }

    /// `Sᵀ y`: scatters a reduced vector back, zero at the struck indices.
    pub fn extend(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.kept_len() {
            return Err(Error::DimensionMismatch {
                context: "eliminator extend",
                expected: self.kept_len(),
                found: y.len(),
            });
        }
        let mut x = vec![0.0; self.base_size];
        for (v, r) in y.iter().zip(self.kept()) {
            x[r - 1] = *v;
        }
        Ok(x)
    }

    fn check_len(&self, context: &'static str, found: usize) -> Result<()> {
        if found != self.base_size {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.base_size,
                found,
            });
        }
        Ok(())
    }
}

/// `S A`: drops the omitted rows of `a`.
pub fn eliminate_rows(s: &Eliminator, a: &SparseOperator) -> Result<SparseOperator> {
    s.check_len("eliminate rows", a.rows())?;
    let map = s.index_map();
    let mut b = TripletBuilder::with_capacity(s.kept_len(), a.cols(), a.nnz());
    for (r, c, v) in a.triplets() {
        if let Some(nr) = map[r] {
            b.push(nr, c, v);
        }
    }
    Ok(b.finish())
}

/// `A Sᵀ`: drops the omitted columns of `a`.
pub fn eliminate_cols(s: &Eliminator, a: &SparseOperator) -> Result<SparseOperator> {
    s.check_len("eliminate columns", a.cols())?;
    let map = s.index_map();
    let mut b = TripletBuilder::with_capacity(a.rows(), s.kept_len(), a.nnz());
    for (r, c, v) in a.triplets() {
        if let Some(nc) = map[c] {
            b.push(r, nc, v);
        }
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `E⁺`: ones on the `p`-th superdiagonal.
    Above,
    /// `E⁻`: ones on the `p`-th subdiagonal.
    Below,
}

/// `E_{N,p}^±`, an `(N+1) x (N+1)` matrix with a single diagonal of ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shifter {
    n: usize,
    offset: usize,
    direction: ShiftDirection,
}

impl Shifter {
    /// `offset` in `0..=n`; offset zero is the identity.
    pub fn new(n: usize, offset: usize, direction: ShiftDirection) -> Result<Self> {
        if offset > n {
            return Err(Error::InvalidParameter(format!(
                "shift offset {offset} exceeds N = {n}"
            )));
        }
        Ok(Self {
            n,
            offset,
            direction,
        })
    }

    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn to_operator(&self) -> SparseOperator {
        let size = self.size();
        let p = self.offset;
        SparseOperator::from_triplets(
            size,
            size,
            (0..size - p).map(|i| match self.direction {
                ShiftDirection::Above => (i, i + p, 1.0),
                ShiftDirection::Below => (i + p, i, 1.0),
            }),
        )
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &SparseOperator, b: &SparseOperator) -> SparseOperator {
    let (p, q) = b.shape();
    let mut t = TripletBuilder::with_capacity(a.rows() * p, a.cols() * q, a.nnz() * b.nnz());
    for (i, j, av) in a.triplets() {
        for (r, s, bv) in b.triplets() {
            t.push(i * p + r, j * q + s, av * bv);
        }
    }
    t.finish()
}

/// Places `scale·ω_j` on diagonal `first_offset + j` (upper pattern) or
/// `first_offset - j` (lower pattern) of a `size x size` matrix, dropping
/// whatever falls outside.
pub(crate) fn place_diagonals(
    coeffs: &[f64],
    size: usize,
    first_offset: isize,
    orientation: Orientation,
    scale: f64,
) -> SparseOperator {
    let mut b = TripletBuilder::new(size, size);
    let n = size as isize;
    for (j, &w) in coeffs.iter().enumerate() {
        let v = scale * w;
        if v == 0.0 {
            continue;
        }
        let off = match orientation {
            Orientation::Upper => first_offset + j as isize,
            Orientation::Lower => first_offset - j as isize,
        };
        if off.abs() >= n {
            continue;
        }
        let (r0, c0) = if off >= 0 { (0, off) } else { (-off, 0) };
        for d in 0..n - off.abs() {
            b.push((r0 + d) as usize, (c0 + d) as usize, v);
        }
    }
    b.finish()
}

fn need_coeffs(coeffs: &CoeffVector, n: usize) -> Result<()> {
    if coeffs.len() < n + 2 {
        return Err(Error::InsufficientCoefficients {
            needed: n + 2,
            available: coeffs.len(),
        });
    }
    Ok(())
}

/// Upper strip pattern moved one step south-west, `(N+1) x (N+1)`:
/// `ω_0` on the first subdiagonal, `ω_1` on the main diagonal, `ω_j` on
/// superdiagonal `j - 1`. Needs `ω_0 .. ω_{N+1}`.
pub fn shift_sw(coeffs: &CoeffVector, n: usize, scale: f64) -> Result<SparseOperator> {
    need_coeffs(coeffs, n)?;
    Ok(place_diagonals(
        &coeffs.values()[..n + 2],
        n + 1,
        -1,
        Orientation::Upper,
        scale,
    ))
}

/// Strip pattern moved one step north-east, `(N+1) x (N+1)`.
///
/// Upper input: `ω_j` on superdiagonal `j + 1`. Lower input (the
/// right-sided pattern): `ω_0` on the first superdiagonal, `ω_1` on the main
/// diagonal, `ω_j` on subdiagonal `j - 1`. Needs `ω_0 .. ω_{N+1}`.
pub fn shift_ne(
    coeffs: &CoeffVector,
    n: usize,
    scale: f64,
    orientation: Orientation,
) -> Result<SparseOperator> {
    need_coeffs(coeffs, n)?;
    Ok(place_diagonals(
        &coeffs.values()[..n + 2],
        n + 1,
        1,
        orientation,
        scale,
    ))
}
