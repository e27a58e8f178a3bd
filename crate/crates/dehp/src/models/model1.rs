//! Spin-S chain combining a generalized Rydberg density with a
//! Dzyaloshinskii–Moriya exchange:
//!
//! ```text
//! h = (1 − Sᶻ/S) ⊗ (1 − Sᶻ/S) + 4 D · (S × S′)
//! ```
//!
//! The χ = 2 tensor pair carries one free complex parameter `a`; the closed
//! form of `E` is implemented for S = 1/2, higher spins solve for `E`
//! numerically through the verifier.

use serde::{Deserialize, Serialize};

use super::{complex_pair, LocalTerm};
use crate::linalg::{c64, kron, CMat, C64};
use crate::spin::SpinOps;
use crate::tensor::SiteTensor;
use crate::{DehpError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model1Params {
    /// 2S ≥ 1.
    pub two_s: u32,
    /// Couplings (D_x, D_y, D_z); D_x and D_z must be nonzero.
    #[serde(rename = "D")]
    pub d_vec: [f64; 3],
    /// Free complex parameter of the tensor family; a ≠ 0 and a·Δ_S ≠ 1.
    #[serde(with = "complex_pair")]
    pub a: C64,
}

impl Model1Params {
    pub fn validate(&self) -> Result<()> {
        let [dx, _dy, dz] = self.d_vec;
        if self.two_s == 0 {
            return Err(DehpError::ParameterDomain("two_s must be at least 1".into()));
        }
        if dx == 0.0 {
            return Err(DehpError::ParameterDomain("D_x = 0 leaves beta undefined".into()));
        }
        if dz == 0.0 {
            return Err(DehpError::ParameterDomain("D_z = 0 leaves Delta undefined".into()));
        }
        if self.a.norm() == 0.0 {
            return Err(DehpError::ParameterDomain("a = 0".into()));
        }
        if (self.a * self.delta_s() - c64(1.0, 0.0)).norm() < 1e-12 {
            return Err(DehpError::ParameterDomain("a·Delta_S = 1 leaves b undefined".into()));
        }
        if !self.d_vec.iter().all(|x| x.is_finite()) || !self.a.is_finite() {
            return Err(DehpError::ParameterDomain("non-finite parameter".into()));
        }
        Ok(())
    }

    /// Δ = (D_y − i D_x) / D_z.
    pub fn delta(&self) -> C64 {
        let [dx, dy, dz] = self.d_vec;
        c64(dy, -dx) / c64(dz, 0.0)
    }

    /// Δ_S = Δ / √(2S).
    pub fn delta_s(&self) -> C64 {
        self.delta() / c64((self.two_s as f64).sqrt(), 0.0)
    }

    /// b = a / (1 − a Δ_S).
    pub fn b(&self) -> C64 {
        self.a / (c64(1.0, 0.0) - self.a * self.delta_s())
    }

    /// α = −(D_y + i D_x).
    pub fn alpha(&self) -> C64 {
        let [dx, dy, _] = self.d_vec;
        -c64(dy, dx)
    }

    /// β = (D_x² + D_y²) / D_x.
    pub fn beta(&self) -> f64 {
        let [dx, dy, _] = self.d_vec;
        (dx * dx + dy * dy) / dx
    }

    pub fn qudit_dim(&self) -> usize {
        (self.two_s + 1) as usize
    }
}

/// The two-site Hamiltonian density as a d²×d² matrix.
pub fn model1_density(p: &Model1Params) -> Result<LocalTerm> {
    p.validate()?;
    let ops = SpinOps::new(p.two_s)?;
    let d = p.qudit_dim();
    let s = p.two_s as f64 / 2.0;
    let id = CMat::identity(d, d);
    let ryd_site = &id - &ops.sz * c64(1.0 / s, 0.0);
    let mut h = kron(&ryd_site, &ryd_site);
    let [dx, dy, dz] = p.d_vec;
    // D · (S × S′) expanded component-wise
    h += (kron(&ops.sy, &ops.sz) - kron(&ops.sz, &ops.sy)) * c64(4.0 * dx, 0.0);
    h += (kron(&ops.sz, &ops.sx) - kron(&ops.sx, &ops.sz)) * c64(4.0 * dy, 0.0);
    h += (kron(&ops.sx, &ops.sy) - kron(&ops.sy, &ops.sx)) * c64(4.0 * dz, 0.0);
    Ok(LocalTerm::new(d, h, format!("model1(two_s={})", p.two_s)))
}

/// The tensor pair. `A` exists for 2S ∈ {1, 2, 3, 4}; the closed-form `E`
/// only for S = 1/2 (`None` otherwise — solve for it numerically).
pub fn model1_tensors(p: &Model1Params) -> Result<(SiteTensor, Option<SiteTensor>)> {
    p.validate()?;
    if !(1..=4).contains(&p.two_s) {
        return Err(DehpError::ParameterDomain(format!(
            "model1 tensors are verified for 2S in 1..=4, got {}",
            p.two_s
        )));
    }
    let d = p.qudit_dim();
    let a = p.a;
    let b = p.b();
    let i = c64(0.0, 1.0);

    // physical component 0 = |S⟩, component 1 = |S−1⟩, the rest vanish
    let mut t = SiteTensor::zeros(d, 2);
    t.block_mut(0)[(0, 0)] = c64(1.0, 0.0);
    t.block_mut(1)[(0, 0)] = i / a;
    t.block_mut(1)[(0, 1)] = c64(1.0, 0.0) / a;
    t.block_mut(1)[(1, 0)] = c64(1.0, 0.0) / a;
    t.block_mut(0)[(1, 1)] = b / a;
    t.block_mut(1)[(1, 1)] = -i / a;

    let e = if p.two_s == 1 {
        let alpha = p.alpha();
        let beta = c64(p.beta(), 0.0);
        let dz = c64(p.d_vec[2], 0.0);
        let mut e = SiteTensor::zeros(d, 2);
        e.block_mut(0)[(0, 0)] = i * alpha / a + a * beta + c64(0.0, 2.0) * dz * b / a;
        e.block_mut(1)[(0, 0)] = i * beta + alpha.conj() + c64(2.0, 0.0) * b * alpha.conj() / a;
        e.block_mut(0)[(1, 1)] = -i * alpha / a + b * beta + c64(0.0, 2.0) * dz;
        e.block_mut(1)[(1, 1)] = -i * beta + c64(2.0, 0.0) * alpha.conj() + b * alpha.conj() / a;
        e.block_mut(0)[(0, 1)] = alpha / a;
        e.block_mut(0)[(1, 0)] = alpha / a;
        e.block_mut(1)[(0, 1)] = beta;
        e.block_mut(1)[(1, 0)] = beta;
        Some(e)
    } else {
        None
    };
    Ok((t, e))
}
