//! Spin-1 chain hosting a single isolated zero-energy MPS eigenstate:
//! bilinear-biquadratic exchange plus single-ion anisotropy and a transverse
//! field,
//!
//! ```text
//! H = Σ_j (J_y−J_z)/2 [S_j·S_{j+1} − (S_j·S_{j+1})²] + 2h_y S^y_j
//!         + 2J_z[(S^x_j)² + (S^z_j)²] + 2J_y (S^y_j)² − J_y − 3J_z .
//! ```
//!
//! The single-site pieces are split symmetrically between the two sites of
//! the density: on a ring this reproduces H exactly, and it is the split
//! under which the displayed `(A, E)` pair satisfies the bond algebra
//! (attaching them to one site only does not).

use serde::{Deserialize, Serialize};

use super::LocalTerm;
use crate::linalg::{c64, kron, CMat};
use crate::spin::SpinOps;
use crate::tensor::SiteTensor;
use crate::{DehpError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model2Params {
    pub jy: f64,
    pub jz: f64,
    pub hy: f64,
}

impl Model2Params {
    pub fn validate(&self) -> Result<()> {
        if ![self.jy, self.jz, self.hy].iter().all(|x| x.is_finite()) {
            return Err(DehpError::ParameterDomain("non-finite parameter".into()));
        }
        Ok(())
    }
}

/// The 9×9 two-site density, constant shift −J_y − 3J_z included.
pub fn model2_density(p: &Model2Params) -> Result<LocalTerm> {
    p.validate()?;
    let ops = SpinOps::new(2)?;
    let id = CMat::identity(3, 3);
    let ss = kron(&ops.sx, &ops.sx) + kron(&ops.sy, &ops.sy) + kron(&ops.sz, &ops.sz);
    let mut h = (&ss - &ss * &ss) * c64((p.jy - p.jz) / 2.0, 0.0);
    let one_site = &ops.sy * c64(2.0 * p.hy, 0.0)
        + (&ops.sx * &ops.sx + &ops.sz * &ops.sz) * c64(2.0 * p.jz, 0.0)
        + (&ops.sy * &ops.sy) * c64(2.0 * p.jy, 0.0)
        - &id * c64(p.jy + 3.0 * p.jz, 0.0);
    h += (kron(&one_site, &id) + kron(&id, &one_site)) * c64(0.5, 0.0);
    Ok(LocalTerm::new(3, h, "model2"))
}

/// The χ = 2 tensors: `A` is parameter-free, `E` is proportional to h_y
/// (so h_y = 0 is the frustration-free point).
pub fn model2_tensors(hy: f64) -> (SiteTensor, SiteTensor) {
    // physical components: 0 = |1⟩, 1 = |0⟩, 2 = |−1⟩
    let mut a = SiteTensor::zeros(3, 2);
    a.block_mut(2)[(0, 0)] = c64(2f64.sqrt(), 0.0);
    a.block_mut(1)[(0, 1)] = c64(1.0, 0.0);
    a.block_mut(1)[(1, 0)] = c64(1.0, 0.0);
    a.block_mut(0)[(1, 1)] = c64(2f64.sqrt(), 0.0);

    // E = i h_y (0, −|+⟩; |+⟩, 0) with |+⟩ = (|1⟩ + |−1⟩)/√2
    let mut e = SiteTensor::zeros(3, 2);
    let c = c64(0.0, hy / 2f64.sqrt());
    e.block_mut(0)[(0, 1)] = -c;
    e.block_mut(2)[(0, 1)] = -c;
    e.block_mut(0)[(1, 0)] = c;
    e.block_mut(2)[(1, 0)] = c;
    (a, e)
}
