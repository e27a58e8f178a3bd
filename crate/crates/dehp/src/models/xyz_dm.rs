//! Spin-1 XYZ model on the square lattice with a Dzyaloshinskii–Moriya term
//! and a tuned longitudinal field,
//!
//! ```text
//! h = 𝒞·1 + Σ_α J_α SᵅSᵅ + D_xy (SˣSʸ − SʸSˣ) + h_z (Sᶻ + Sᶻ),
//! 𝒞 = J_x + J_y + J_z,   h_z = ±√((J_x+J_z)(J_y+J_z)) .
//! ```
//!
//! The tensor is assembled from 2×2 blocks B± over the y-legs; the error
//! tensors satisfy E₁ = −E₂ = E₃ = −E₄ and are proportional to D_xy. When
//! z₊ > 0 the square root √(−2 z₊) is taken as the principal complex root;
//! the tensors may then be complex, which is fine since only H must be
//! Hermitian.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LocalTerm;
use crate::linalg::{c64, kron, CMat};
use crate::spin::SpinOps;
use crate::tensor::{ErrorTensorSet, PepsTensor};
use crate::{DehpError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XyzDmParams {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub dxy: f64,
    /// Sign branch of h_z = ±√((J_x+J_z)(J_y+J_z)); must be ±1.
    pub hz_sign: i8,
}

impl XyzDmParams {
    pub fn validate(&self) -> Result<()> {
        if ![self.jx, self.jy, self.jz, self.dxy].iter().all(|x| x.is_finite()) {
            return Err(DehpError::ParameterDomain("non-finite parameter".into()));
        }
        if self.jx == self.jy {
            return Err(DehpError::ParameterDomain(
                "J_x = J_y leaves the z₊ denominator singular".into(),
            ));
        }
        if (self.jx + self.jz) * (self.jy + self.jz) < 0.0 {
            return Err(DehpError::ParameterDomain(
                "(J_x+J_z)(J_y+J_z) < 0 makes h_z complex".into(),
            ));
        }
        if self.hz_sign != 1 && self.hz_sign != -1 {
            return Err(DehpError::ParameterDomain("hz_sign must be ±1".into()));
        }
        Ok(())
    }

    pub fn hz(&self) -> f64 {
        self.hz_sign as f64 * ((self.jx + self.jz) * (self.jy + self.jz)).sqrt()
    }

    /// z₊ = [(J_x + J_y + 2 J_z) − 2 h_z] / (J_x − J_y).
    pub fn z_plus(&self) -> f64 {
        ((self.jx + self.jy + 2.0 * self.jz) - 2.0 * self.hz()) / (self.jx - self.jy)
    }
}

const D: usize = 3; // |1⟩, |0⟩, |−1⟩
const CHI: usize = 2;

/// Assemble [A]^{b_x b_y}_{a_x a_y} from the block pattern
/// `[[B₊, B₋], [B₋, −B₊]]` over (b_y, a_y), where B± hold the physical kets
/// `plus` and `minus`.
fn assemble(plus: [Complex64; D], minus: [Complex64; D]) -> PepsTensor {
    // B blocks indexed by (b_x, a_x)
    let b_plus = |bx: usize, ax: usize, s: usize| -> Complex64 {
        match (bx, ax) {
            (0, 0) => plus[s],
            (0, 1) | (1, 0) => minus[s],
            (1, 1) => -plus[s],
            _ => unreachable!(),
        }
    };
    let b_minus = |bx: usize, ax: usize, s: usize| -> Complex64 {
        match (bx, ax) {
            (0, 0) => minus[s],
            (0, 1) | (1, 0) => -plus[s],
            (1, 1) => -minus[s],
            _ => unreachable!(),
        }
    };
    let mut t = PepsTensor::zeros(D, CHI);
    for s in 0..D {
        for by in 0..CHI {
            for ay in 0..CHI {
                for bx in 0..CHI {
                    for ax in 0..CHI {
                        let v = match (by, ay) {
                            (0, 0) => b_plus(bx, ax, s),
                            (0, 1) | (1, 0) => b_minus(bx, ax, s),
                            (1, 1) => -b_plus(bx, ax, s),
                            _ => unreachable!(),
                        };
                        t.set(s, ax, bx, ay, by, v);
                    }
                }
            }
        }
    }
    t
}

/// Density, site tensor and error slots (E₁ = −E₂ = E₃ = −E₄).
pub fn xyz_dm_2d_model(p: &XyzDmParams) -> Result<(LocalTerm, PepsTensor, ErrorTensorSet)> {
    p.validate()?;
    let ops = SpinOps::new(2)?;
    let id = CMat::identity(D, D);
    let cal_c = p.jx + p.jy + p.jz;
    let mut h = CMat::identity(D * D, D * D) * c64(cal_c, 0.0);
    h += kron(&ops.sx, &ops.sx) * c64(p.jx, 0.0);
    h += kron(&ops.sy, &ops.sy) * c64(p.jy, 0.0);
    h += kron(&ops.sz, &ops.sz) * c64(p.jz, 0.0);
    h += (kron(&ops.sx, &ops.sy) - kron(&ops.sy, &ops.sx)) * c64(p.dxy, 0.0);
    h += (kron(&ops.sz, &id) + kron(&id, &ops.sz)) * c64(p.hz(), 0.0);

    let zp = p.z_plus();
    let sq = Complex64::from(-2.0 * zp).sqrt();
    let plus = [c64(zp, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)];
    let minus = [c64(0.0, 0.0), sq, c64(0.0, 0.0)];
    let a = assemble(plus, minus);

    // E₁: same block pattern with |+⟩ → −2i z₊ D_xy |1⟩, |−⟩ → −i D_xy √(−2z₊) |0⟩
    let e_plus = [c64(0.0, -2.0 * zp * p.dxy), c64(0.0, 0.0), c64(0.0, 0.0)];
    let e_minus = [c64(0.0, 0.0), c64(0.0, -p.dxy) * sq, c64(0.0, 0.0)];
    let e1 = assemble(e_plus, e_minus);
    let e2 = e1.scale(c64(-1.0, 0.0));
    let e3 = e1.clone();
    let e4 = e1.scale(c64(-1.0, 0.0));
    let set = ErrorTensorSet::TwoD { slots: Box::new([e1, e2, e3, e4]), signs: [1.0; 4] };
    Ok((LocalTerm::new(D, h, "xyz_dm_2d"), a, set))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(dxy: f64) -> XyzDmParams {
        XyzDmParams { jx: 1.0, jy: 2.0, jz: 3.0, dxy, hz_sign: 1 }
    }

    #[test]
    fn derived_couplings() {
        let p = params(0.7);
        assert!((p.hz() - 20f64.sqrt()).abs() < 1e-14);
        assert!((p.jx + p.jy + p.jz - 6.0).abs() < 1e-14);
        // z₊ = (9 − 2√20)/(1 − 2) = 2√20 − 9
        assert!((p.z_plus() - (2.0 * 20f64.sqrt() - 9.0)).abs() < 1e-14);
    }

    #[test]
    fn errors_vanish_without_dm_term() {
        let (_, _, set) = xyz_dm_2d_model(&params(0.0)).unwrap();
        if let ErrorTensorSet::TwoD { slots, .. } = set {
            for s in slots.iter() {
                assert_eq!(s.norm(), 0.0);
            }
        } else {
            panic!("expected 2D slots");
        }
    }

    #[test]
    fn error_slots_alternate() {
        let (_, _, set) = xyz_dm_2d_model(&params(0.7)).unwrap();
        if let ErrorTensorSet::TwoD { slots, .. } = set {
            let [e1, e2, e3, e4] = &*slots;
            assert!(e1.add(e2).unwrap().norm() < 1e-15);
            assert!(e1.add(&e3.scale(c64(-1.0, 0.0))).unwrap().norm() < 1e-15);
            assert!(e1.add(e4).unwrap().norm() < 1e-15);
            assert!(e1.norm() > 0.0);
        }
    }

    #[test]
    fn density_hermitian() {
        let (h, _, _) = xyz_dm_2d_model(&params(0.7)).unwrap();
        assert!(h.hermiticity_error() < 1e-13);
    }

    #[test]
    fn degenerate_exchange_rejected() {
        let p = XyzDmParams { jx: 1.0, jy: 1.0, jz: 0.5, dxy: 0.1, hz_sign: 1 };
        assert!(xyz_dm_2d_model(&p).is_err());
        let p = XyzDmParams { jx: 1.0, jy: 2.0, jz: -1.5, dxy: 0.1, hz_sign: 1 };
        assert!(xyz_dm_2d_model(&p).is_err());
    }
}
