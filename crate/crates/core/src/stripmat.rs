//! Triangular strip (triangular Toeplitz) matrices.
//!
//! A strip matrix is stored as its generating polynomial `ω_0 + ω_1 z + ...`
//! plus a scalar factor. Sums and products of same-orientation strip matrices
//! are again strip matrices whose coefficients are the sum and the truncated
//! Cauchy product of the generating polynomials.

use crate::coeffs::CoeffVector;
use crate::error::{Error, Result};
use crate::sparse::{SparseOperator, TripletBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Coefficients run down the first column.
    Lower,
    /// Coefficients run along the first row.
    Upper,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Self::Lower => Self::Upper,
            Self::Upper => Self::Lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripMatrix {
    orientation: Orientation,
    coeffs: CoeffVector,
    scale: f64,
}

impl StripMatrix {
    /// Square strip matrix of size `coeffs.len()`.
    ///
    /// # Panics
    ///
    /// If `coeffs` is empty.
    pub fn new(orientation: Orientation, coeffs: CoeffVector, scale: f64) -> Self {
        assert!(
            !coeffs.is_empty(),
            "strip matrix needs at least one coefficient"
        );
        Self {
            orientation,
            coeffs,
            scale,
        }
    }

    pub fn identity(orientation: Orientation, size: usize) -> Self {
        Self::new(orientation, CoeffVector::unit(size), 1.0)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn size(&self) -> usize {
        self.coeffs.len()
    }

    /// Scaled generating coefficients, i.e. the first column (lower) or
    /// first row (upper).
    pub fn generator(&self) -> Vec<f64> {
        self.coeffs
            .values()
            .iter()
            .map(|w| w * self.scale)
            .collect()
    }

    /// Entry `(r, c)`, 0-based.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        let lag = match self.orientation {
            Orientation::Lower => r.checked_sub(c),
            Orientation::Upper => c.checked_sub(r),
        };
        lag.map_or(0.0, |j| self.scale * self.coeffs.get(j))
    }

    pub fn transpose(&self) -> Self {
        Self {
            orientation: self.orientation.flipped(),
            ..self.clone()
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.orientation != other.orientation {
            return Err(Error::OrientationMismatch);
        }
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                context: "strip matrix",
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }

    /// Sum with the scale factors folded into the coefficients.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .coeffs
            .values()
            .iter()
            .zip(other.coeffs.values())
            .map(|(a, b)| self.scale * a + other.scale * b)
            .collect();
        Ok(Self::new(
            self.orientation,
            CoeffVector::from_values(values),
            1.0,
        ))
    }

    /// Product: Cauchy product of the generating polynomials truncated at the
    /// common size, scales multiplied.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let a = self.coeffs.values();
        let b = other.coeffs.values();
        let n = a.len();
        let values = (0..n)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Ok(Self::new(
            self.orientation,
            CoeffVector::from_values(values),
            self.scale * other.scale,
        ))
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.size();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                context: "strip matrix apply",
                expected: n,
                found: v.len(),
            });
        }
        let w = self.coeffs.values();
        let out = (0..n)
            .map(|r| {
                let acc: f64 = match self.orientation {
                    Orientation::Upper => (r..n).map(|c| w[c - r] * v[c]).sum(),
                    Orientation::Lower => (0..=r).map(|c| w[r - c] * v[c]).sum(),
                };
                self.scale * acc
            })
            .collect();
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        (0..n)
            .map(|r| (0..n).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn to_sparse(&self) -> SparseOperator {
        let n = self.size();
        let w = self.coeffs.values();
        let mut b = TripletBuilder::with_capacity(n, n, n * (n + 1) / 2);
        for (j, &wj) in w.iter().enumerate() {
            let v = self.scale * wj;
            if v == 0.0 {
                continue;
            }
            for r in 0..n - j {
                match self.orientation {
                    Orientation::Upper => b.push(r, r + j, v),
                    Orientation::Lower => b.push(r + j, r, v),
                }
            }
        }
        b.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(o: Orientation, w: &[f64], s: f64) -> StripMatrix {
        StripMatrix::new(o, CoeffVector::from_values(w.to_vec()), s)
    }

    #[test]
    fn entry_law() {
        let u = strip(Orientation::Upper, &[1.0, -1.0, 0.0], 1.0);
        let expect = vec![
            vec![1.0, -1.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_eq!(u.to_dense(), expect);
        let l = strip(Orientation::Lower, &[1.0, -1.0, 0.0], 1.0);
        assert_eq!(l.to_dense(), u.transpose().to_dense());
        assert_eq!(l.transpose(), u);

        let s = strip(Orientation::Upper, &[2.0, 3.0, 5.0], 0.5);
        assert_eq!(
            s.to_dense(),
            vec![
                vec![1.0, 1.5, 2.5],
                vec![0.0, 1.0, 1.5],
                vec![0.0, 0.0, 1.0]
            ]
        );
        assert_eq!(SparseOperator::from_dense(&s.to_dense()), s.to_sparse());
    }

    #[test]
    fn addition() {
        let a = strip(Orientation::Upper, &[1.0, 0.0], 1.0);
        let b = strip(Orientation::Upper, &[0.0, 1.0], 2.0);
        let c = a.add(&b).unwrap();
        assert_eq!(c.coeffs().values(), &[1.0, 2.0]);
        assert_eq!(c.scale(), 1.0);

        let zero = strip(Orientation::Upper, &[0.0, 0.0], 1.0);
        assert_eq!(a.add(&zero).unwrap().to_dense(), a.to_dense());

        let p = strip(Orientation::Lower, &[1.0, -1.0], 1.0);
        let q = strip(Orientation::Lower, &[1.0, -1.0], -1.0);
        assert!(p.add(&q).unwrap().generator().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn multiplication() {
        let a = strip(Orientation::Upper, &[1.0, -1.0, 0.0], 1.0);
        let b = strip(Orientation::Upper, &[1.0, 1.0, 0.0], 1.0);
        // 3x3 dense product of the two matrices, first row
        let dense_first_row = {
            let (x, y) = (a.to_dense(), b.to_dense());
            (0..3)
                .map(|c| (0..3).map(|k| x[0][k] * y[k][c]).sum::<f64>())
                .collect::<Vec<_>>()
        };
        assert_eq!(dense_first_row, vec![1.0, 0.0, -1.0]);
        assert_eq!(a.mul(&b).unwrap().coeffs().values(), &[1.0, 0.0, -1.0]);

        let id = StripMatrix::identity(Orientation::Upper, 3);
        assert_eq!(a.mul(&id).unwrap().to_dense(), a.to_dense());
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn mismatches_are_rejected() {
        let a = strip(Orientation::Upper, &[1.0, 2.0], 1.0);
        let b = strip(Orientation::Lower, &[1.0, 2.0], 1.0);
        let c = strip(Orientation::Upper, &[1.0, 2.0, 3.0], 1.0);
        assert_eq!(a.add(&b), Err(Error::OrientationMismatch));
        assert!(matches!(a.mul(&c), Err(Error::DimensionMismatch { .. })));
        assert!(a.apply(&[1.0]).is_err());
    }

    #[test]
    fn apply_first_difference() {
        // descending samples of f(t) = t at t = 1, 0.5, 0
        let b = strip(Orientation::Upper, &[1.0, -1.0, 0.0], 1.0 / 0.5);
        assert_eq!(b.apply(&[2.0, 1.0, 0.0]).unwrap(), vec![2.0, 2.0, 0.0]);
        let v = [0.3, -1.2, 4.0];
        let id = StripMatrix::identity(Orientation::Lower, 3);
        assert_eq!(id.apply(&v).unwrap(), v.to_vec());
    }

    #[test]
    fn apply_is_associative_with_mul() {
        let a = strip(Orientation::Lower, &[0.5, -0.25, 0.125, 1.0], 2.0);
        let b = strip(Orientation::Lower, &[1.0, 0.3, -0.7, 0.2], -0.5);
        let v = [1.0, 2.0, -3.0, 0.5];
        let lhs = a.mul(&b).unwrap().apply(&v).unwrap();
        let rhs = a.apply(&b.apply(&v).unwrap()).unwrap();
        for (x, y) in lhs.iter().zip(&rhs) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
