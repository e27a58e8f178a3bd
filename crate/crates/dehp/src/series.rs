//! Truncated power series in a formal variable `t`, with complex scalar
//! coefficients, plus small matrices over such series.
//!
//! Arithmetic is closed at a fixed truncation order: products discard powers
//! beyond `order`, so coefficients are exact at every retained power. This
//! is what makes the order-by-order extraction of MPS expansion vectors
//! exact (numeric sampling at finite `t` would conflate orders).

use crate::linalg::{c64, C64};
use crate::{DehpError, Result};

/// Polynomial in `t` with powers 0..=order.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<C64>,
}

impl Series {
    /// Series with the given low-order coefficients, truncated or
    /// zero-padded to `order`.
    pub fn from_coeffs(order: usize, coeffs: &[C64]) -> Self {
        let mut c = vec![c64(0.0, 0.0); order + 1];
        for (i, v) in coeffs.iter().take(order + 1).enumerate() {
            c[i] = *v;
        }
        Series { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![c64(0.0, 0.0); order + 1] }
    }

    pub fn constant(order: usize, value: C64) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(order, c64(1.0, 0.0))
    }

    /// The monomial `c · t^k` (zero if `k` exceeds the order).
    pub fn monomial(order: usize, k: usize, value: C64) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = value;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| c64(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Series) -> Result<Series> {
        self.check_order(rhs)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Series) -> Result<Series> {
        self.check_order(rhs)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Series) -> Result<Series> {
        self.check_order(rhs)?;
        let n = self.order();
        let mut out = vec![c64(0.0, 0.0); n + 1];
        for i in 0..=n {
            let a = self.coeffs[i];
            if a == c64(0.0, 0.0) {
                continue;
            }
            for j in 0..=(n - i) {
                out[i + j] += a * rhs.coeffs[j];
            }
        }
        Ok(Series { coeffs: out })
    }

    pub fn scale(&self, z: C64) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| c * z).collect() }
    }

    /// Multiplicative inverse: `self · inv = 1 + O(t^{order+1})`. Requires a
    /// nonzero constant term.
    pub fn inverse(&self) -> Result<Series> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(DehpError::Series(
                "inverse of a series with vanishing constant term".into(),
            ));
        }
        let n = self.order();
        let mut inv = vec![c64(0.0, 0.0); n + 1];
        inv[0] = c64(1.0, 0.0) / c0;
        for k in 1..=n {
            let mut acc = c64(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * inv[k - j];
            }
            inv[k] = -acc / c0;
        }
        Ok(Series { coeffs: inv })
    }

    /// Evaluate at a numeric `t` (Horner).
    pub fn eval(&self, t: C64) -> C64 {
        let mut acc = c64(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    fn check_order(&self, rhs: &Series) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(DehpError::Series(format!(
                "incompatible truncation orders {} vs {}",
                self.order(),
                rhs.order()
            )));
        }
        Ok(())
    }
}

/// Square matrix whose entries are truncated series, used for bond-space
/// products of series-valued MPS tensors.
#[derive(Debug, Clone)]
pub struct SeriesMatrix {
    pub n: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn zero(n: usize, order: usize) -> Self {
        SeriesMatrix { n, entries: vec![Series::zero(order); n * n] }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        let mut m = SeriesMatrix::zero(n, order);
        for i in 0..n {
            *m.at_mut(i, i) = Series::one(order);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Series {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, rhs: &SeriesMatrix) -> Result<SeriesMatrix> {
        if self.n != rhs.n {
            return Err(DehpError::ShapeMismatch("series matrix product".into()));
        }
        let order = self.entries[0].order();
        let mut out = SeriesMatrix::zero(self.n, order);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Series::zero(order);
                for k in 0..self.n {
                    acc = acc.add(&self.at(i, k).mul(rhs.at(k, j))?)?;
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Series> {
        let order = self.entries[0].order();
        let mut acc = Series::zero(order);
        for i in 0..self.n {
            acc = acc.add(self.at(i, i))?;
        }
        Ok(acc)
    }
}
