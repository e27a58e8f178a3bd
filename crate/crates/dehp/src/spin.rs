//! Spin-S operator matrices in the Sᶻ eigenbasis.
//!
//! Basis ordering is fixed crate-wide: index 0 corresponds to the highest
//! weight |S⟩, index d−1 to |−S⟩. All model tensors and state vectors use
//! this ordering.

use crate::linalg::{c64, CMat};
use crate::{DehpError, Result};

/// The triple (Sˣ, Sʸ, Sᶻ) for spin S = `two_s`/2, dimension `two_s`+1.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub two_s: u32,
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
}

impl SpinOps {
    /// Standard angular-momentum matrices for 2S = `two_s` ≥ 1.
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(DehpError::ParameterDomain(
                "two_s = 0 has no spin degree of freedom".into(),
            ));
        }
        let d = (two_s + 1) as usize;
        let s = two_s as f64 / 2.0;
        let m_of = |i: usize| s - i as f64;

        let mut sz = CMat::zeros(d, d);
        for i in 0..d {
            sz[(i, i)] = c64(m_of(i), 0.0);
        }
        // S⁺|m⟩ = sqrt(S(S+1) − m(m+1)) |m+1⟩; |m+1⟩ sits at index i−1.
        let mut sp = CMat::zeros(d, d);
        for i in 1..d {
            let m = m_of(i);
            sp[(i - 1, i)] = c64((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let sm = sp.adjoint();
        let sx = (&sp + &sm).map(|z| z * c64(0.5, 0.0));
        let sy = (&sp - &sm).map(|z| z * c64(0.0, -0.5));
        Ok(SpinOps { two_s, sx, sy, sz })
    }

    pub fn dim(&self) -> usize {
        (self.two_s + 1) as usize
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Sˣ² + Sʸ² + Sᶻ².
    pub fn casimir(&self) -> CMat {
        &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz
    }
}
