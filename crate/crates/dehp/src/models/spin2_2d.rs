//! Spin-2 model on the square lattice: a sum of projectors onto
//! (Sᶻ_j + Sᶻ_k)-eigenstates of each link plus a longitudinal field,
//!
//! ```text
//! h = Σ_{a=0}^{4} λ_a (P^(a) + P^(ā)) + hᶻ (Sᶻ_j + Sᶻ_k) .
//! ```
//!
//! At hᶻ = 0 the χ = 2 tensor network is a frustration-free ground state;
//! the field promotes it to a scar, with all four error tensors
//! proportional to hᶻ.
//!
//! Conventions baked in here:
//! - the listed link states are unnormalized; projectors are formed from
//!   unit-normalized states so P² = P (scale differences are absorbed
//!   into λ_a);
//! - bar states are the factor-wise spin flip |m⟩ → |−m⟩;
//! - tensor tables [X^s]^{αβ}_{γδ} map to legs as (α,β) = (b_x, b_y),
//!   (γ,δ) = (a_x, a_y); coinciding index tuples in a table row are set
//!   once, not summed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{complex_pair, LocalTerm};
use crate::linalg::{c64, kron, CMat, CVec};
use crate::spin::SpinOps;
use crate::tensor::{ErrorTensorSet, PepsTensor};
use crate::{DehpError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spin2TwoDParams {
    /// Nonzero complex tensor parameter entering |1⟩-type link states as 1/a².
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    /// Nonzero complex tensor parameter entering |0⟩-type link states as 1/b².
    #[serde(with = "complex_pair")]
    pub b: Complex64,
    /// Projector weights λ_0..λ_4.
    pub lambda: [f64; 5],
    /// Longitudinal field.
    pub hz: f64,
}

impl Spin2TwoDParams {
    pub fn validate(&self) -> Result<()> {
        if self.a.norm() == 0.0 || self.b.norm() == 0.0 {
            return Err(DehpError::ParameterDomain(
                "spin2_2d requires a ≠ 0 and b ≠ 0".into(),
            ));
        }
        if !self.lambda.iter().all(|x| x.is_finite())
            || !self.hz.is_finite()
            || !self.a.is_finite()
            || !self.b.is_finite()
        {
            return Err(DehpError::ParameterDomain("non-finite parameter".into()));
        }
        Ok(())
    }
}

const D: usize = 5; // |2⟩, |1⟩, |0⟩, |−1⟩, |−2⟩ at indices 0..4
const CHI: usize = 2;

fn ket_pair(m1: i32, m2: i32) -> CVec {
    let mut v = CVec::zeros(D * D);
    v[(2 - m1) as usize * D + (2 - m2) as usize] = c64(1.0, 0.0);
    v
}

/// Factor-wise spin flip |m1, m2⟩ → |−m1, −m2⟩.
fn bar_state(v: &CVec) -> CVec {
    let mut out = CVec::zeros(D * D);
    for i in 0..D * D {
        let m1 = 2 - (i / D) as i32;
        let m2 = 2 - (i % D) as i32;
        out[(2 + m1) as usize * D + (2 + m2) as usize] = v[i];
    }
    out
}

/// The unnormalized link states |a⟩ for a = 4..0 (total Sᶻ eigenvalue a).
fn link_states(p: &Spin2TwoDParams) -> [CVec; 5] {
    let a2 = p.a * p.a;
    let b = p.b;
    let b2 = b * b;
    let s4 = ket_pair(2, 2);
    let s3 = ket_pair(1, 2) - ket_pair(2, 1);
    let s2 = ket_pair(1, 1) * (b / a2) - ket_pair(2, 0) - ket_pair(0, 2);
    let s1 = ket_pair(2, -1) - ket_pair(1, 0) * b + ket_pair(0, 1) * b - ket_pair(-1, 2);
    let s0 = (ket_pair(2, -2) + ket_pair(-2, 2)) * (c64(1.0, 0.0) / b2)
        - (ket_pair(1, -1) + ket_pair(-1, 1)) * (c64(1.0, 0.0) / a2)
        + ket_pair(0, 0);
    [s0, s1, s2, s3, s4]
}

/// Physical index of the bar partner (m → −m).
fn bar_phys(s: usize) -> usize {
    D - 1 - s
}

/// Swap upper and lower leg pairs and flip the physical index:
/// [X^ā]^{αβ}_{γδ} = [X^a]_{αβ}^{γδ}.
fn bar_tensor(t: &PepsTensor) -> PepsTensor {
    let mut out = PepsTensor::zeros(t.d, t.chi);
    for s in 0..t.d {
        for ax in 0..t.chi {
            for bx in 0..t.chi {
                for ay in 0..t.chi {
                    for by in 0..t.chi {
                        out.set(bar_phys(s), bx, ax, by, ay, t.get(s, ax, bx, ay, by));
                    }
                }
            }
        }
    }
    out
}

/// Table entry setter in upper/lower index order: physical component,
/// upper pair (α, β), lower pair (γ, δ), all 1-based bond indices.
fn set_upper_lower(t: &mut PepsTensor, s: usize, up: (usize, usize), lo: (usize, usize), v: Complex64) {
    t.set(s, lo.0 - 1, up.0 - 1, lo.1 - 1, up.1 - 1, v);
}

fn build_a(p: &Spin2TwoDParams) -> PepsTensor {
    let mut t = PepsTensor::zeros(D, CHI);
    // [A²]²²₁₁ = b
    set_upper_lower(&mut t, 0, (2, 2), (1, 1), p.b);
    // [A¹]²²_{α α̂} = [A¹]^{α α̂}₁₁ = a with α̂ = 3 − α
    for al in 1..=2 {
        let ah = 3 - al;
        set_upper_lower(&mut t, 1, (2, 2), (al, ah), p.a);
        set_upper_lower(&mut t, 1, (al, ah), (1, 1), p.a);
    }
    // [A⁰]^{αβ}_{βα} = [A⁰]^{αβ}_{αβ} = 1 (set semantics: coinciding tuples once)
    for al in 1..=2 {
        for be in 1..=2 {
            set_upper_lower(&mut t, 2, (al, be), (be, al), c64(1.0, 0.0));
            set_upper_lower(&mut t, 2, (al, be), (al, be), c64(1.0, 0.0));
        }
    }
    // components for −1, −2 from the bar symmetry
    let bar = bar_tensor(&t);
    for s in [3, 4] {
        for ax in 0..CHI {
            for bx in 0..CHI {
                for ay in 0..CHI {
                    for by in 0..CHI {
                        t.set(s, ax, bx, ay, by, bar.get(s, ax, bx, ay, by));
                    }
                }
            }
        }
    }
    t
}

fn build_e1(p: &Spin2TwoDParams) -> PepsTensor {
    let (a, b, hz) = (p.a, p.b, c64(p.hz, 0.0));
    let mut e = PepsTensor::zeros(D, CHI);
    let (s1, s1b, s0, s2b, s2) = (1usize, 3usize, 2usize, 4usize, 0usize);
    for (up, lo) in [((1, 2), (1, 1)), ((2, 1), (1, 1)), ((2, 2), (1, 2))] {
        set_upper_lower(&mut e, s1, up, lo, a * hz);
    }
    for (up, lo) in [((1, 1), (2, 1)), ((1, 2), (2, 2)), ((2, 1), (2, 2))] {
        set_upper_lower(&mut e, s1b, up, lo, c64(3.0, 0.0) * a * hz);
    }
    for (up, lo) in [((2, 1), (2, 1)), ((2, 2), (2, 2)), ((1, 2), (2, 1))] {
        set_upper_lower(&mut e, s0, up, lo, c64(4.0, 0.0) * hz);
    }
    set_upper_lower(&mut e, s2b, (1, 1), (2, 2), c64(2.0, 0.0) * b * hz);
    set_upper_lower(&mut e, s2, (2, 2), (1, 1), c64(2.0, 0.0) * b * hz);
    set_upper_lower(&mut e, s1b, (1, 1), (1, 2), -a * hz);
    set_upper_lower(&mut e, s1, (2, 2), (2, 1), c64(5.0, 0.0) * a * hz);
    e
}

/// Density, site tensor and the four error-slot tensors
/// (E⁽²⁾ and E⁽³⁾ derived from E⁽¹⁾, E⁽⁴⁾ closing the node sum).
pub fn spin2_2d_model(p: &Spin2TwoDParams) -> Result<(LocalTerm, PepsTensor, ErrorTensorSet)> {
    p.validate()?;
    let states = link_states(p);
    let mut h = CMat::zeros(D * D, D * D);
    for (a_idx, s) in states.iter().enumerate() {
        let lam = c64(p.lambda[a_idx], 0.0);
        let sn = s.norm();
        let s_unit = s / c64(sn, 0.0);
        let sb = bar_state(s);
        let sb_unit = &sb / c64(sb.norm(), 0.0);
        h += (&s_unit * s_unit.adjoint()) * lam;
        h += (&sb_unit * sb_unit.adjoint()) * lam;
    }
    let sz = SpinOps::new(4)?.sz;
    let id = CMat::identity(D, D);
    h += (kron(&sz, &id) + kron(&id, &sz)) * c64(p.hz, 0.0);

    let a = build_a(p);
    let e1 = build_e1(p);
    // [E⁽²⁾^a]^{up}_{lo} = −[E⁽¹⁾^ā]_{up}^{lo}: bar with an overall sign
    let e2 = bar_tensor(&e1).scale(c64(-1.0, 0.0));
    // [E⁽³⁾^a]^{αα'}_{ββ'} = [E⁽¹⁾^a]^{αα'}_{β'β}: swap the lower pair,
    // i.e. exchange the a_x and a_y legs
    let mut e3 = PepsTensor::zeros(D, CHI);
    for s in 0..D {
        for ax in 0..CHI {
            for bx in 0..CHI {
                for ay in 0..CHI {
                    for by in 0..CHI {
                        e3.set(s, ax, bx, ay, by, e1.get(s, ay, bx, ax, by));
                    }
                }
            }
        }
    }
    let e4 = e1.add(&e2)?.add(&e3)?.scale(c64(-1.0, 0.0));
    let set = ErrorTensorSet::TwoD {
        slots: Box::new([e1, e2, e3, e4]),
        signs: [1.0; 4],
    };
    Ok((LocalTerm::new(D, h, "spin2_2d"), a, set))
}
