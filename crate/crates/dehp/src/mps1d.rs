//! 1D matrix-product states: explicit state construction (periodic and
//! open), transfer matrices, correlation lengths, and exact finite-N
//! connected correlators.

use serde::Serialize;

use crate::linalg::{complex_eigenvalues, CMat, CVec, C64};
use crate::tensor::SiteTensor;
use crate::{DehpError, Result};

/// Cap on explicit state-vector sizes (number of amplitudes).
pub const STATE_CAP: usize = 100_000_000;

/// Boundary vectors closing an open-chain MPS: coefficient = B·A…A·C.
#[derive(Debug, Clone)]
pub struct BoundaryVectors {
    pub b: CVec,
    pub c: CVec,
}

impl BoundaryVectors {
    pub fn new(b: CVec, c: CVec) -> Result<Self> {
        if b.norm() == 0.0 || c.norm() == 0.0 {
            return Err(DehpError::ZeroInput("boundary vector".into()));
        }
        Ok(BoundaryVectors { b, c })
    }
}

fn checked_dim(d: usize, n: usize) -> Result<usize> {
    let dim = d
        .checked_pow(n as u32)
        .filter(|&x| x <= STATE_CAP)
        .ok_or_else(|| DehpError::CapExceeded(format!("d^N = {d}^{n} exceeds the state cap")))?;
    Ok(dim)
}

/// Trace MPS on an N-site ring: amplitude of |s₁…s_N⟩ is Tr(A^{s₁}…A^{s_N});
/// site 1 is the slowest index.
pub fn build_pbc(a: &SiteTensor, n: usize) -> Result<CVec> {
    let d = a.d;
    let chi = a.chi;
    let dim = checked_dim(d, n)?;
    // iterate prefix products level by level
    let mut level: Vec<CMat> = vec![CMat::identity(chi, chi)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * d);
        for m in &level {
            for s in 0..d {
                next.push(m * a.block(s));
            }
        }
        level = next;
    }
    debug_assert_eq!(level.len(), dim);
    let mut psi = CVec::zeros(dim);
    for (i, m) in level.iter().enumerate() {
        psi[i] = m.trace();
    }
    Ok(psi)
}

/// Open-chain MPS with boundary vectors.
pub fn build_obc(a: &SiteTensor, bv: &BoundaryVectors, n: usize) -> Result<CVec> {
    let d = a.d;
    let chi = a.chi;
    if bv.b.len() != chi || bv.c.len() != chi {
        return Err(DehpError::ShapeMismatch("boundary vector length != chi".into()));
    }
    let dim = checked_dim(d, n)?;
    // carry row vectors B·A^{s_1}…A^{s_k}
    let mut level: Vec<CVec> = vec![bv.b.clone()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * d);
        for v in &level {
            for s in 0..d {
                next.push(a.block(s).transpose() * v);
            }
        }
        level = next;
    }
    debug_assert_eq!(level.len(), dim);
    let mut psi = CVec::zeros(dim);
    for (i, v) in level.iter().enumerate() {
        psi[i] = v.dot(&bv.c);
    }
    Ok(psi)
}

/// T = Σ_s A^s ⊗ conj(A^s).
pub fn transfer_matrix(a: &SiteTensor) -> CMat {
    let chi = a.chi;
    let mut t = CMat::zeros(chi * chi, chi * chi);
    for s in 0..a.d {
        let b = a.block(s);
        t += b.kronecker(&b.map(|z| z.conj()));
    }
    t
}

/// Transfer operator with a single-site observable inserted:
/// Σ_{s,s'} O_{s's} A^s ⊗ conj(A^{s'}).
pub fn transfer_with_op(a: &SiteTensor, op: &CMat) -> Result<CMat> {
    if op.nrows() != a.d || op.ncols() != a.d {
        return Err(DehpError::ShapeMismatch("observable dimension != d".into()));
    }
    let chi = a.chi;
    let mut t = CMat::zeros(chi * chi, chi * chi);
    for s in 0..a.d {
        for sp in 0..a.d {
            let c = op[(sp, s)];
            if c.re != 0.0 || c.im != 0.0 {
                t += a.block(s).kronecker(&a.block(sp).map(|z| z.conj())) * c;
            }
        }
    }
    Ok(t)
}

/// Transfer-matrix eigenvalues, descending modulus.
pub fn transfer_spectrum(a: &SiteTensor) -> Result<Vec<C64>> {
    if a.norm() == 0.0 {
        return Err(DehpError::ZeroInput("transfer spectrum of the zero tensor".into()));
    }
    complex_eigenvalues(&transfer_matrix(a))
}

/// Correlation length under the convention ⟨O O⟩_c ∝ e^{−r/ξ}.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Xi {
    /// ξ = 1 / ln |λ₁/λ₂|.
    Finite { xi: f64 },
    /// |λ₂| = |λ₁|: no decay.
    Infinite,
    /// λ₂ = 0: rank-one transfer matrix, strictly zero-range correlations.
    Zero,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelationLength {
    pub xi: Xi,
    /// |λ₂/λ₁| — the convention-free decay ratio per site.
    pub ratio: f64,
    /// Phase of λ₂/λ₁; nonzero values signal oscillatory decay.
    pub subleading_phase: f64,
}

pub fn correlation_length(a: &SiteTensor) -> Result<CorrelationLength> {
    let spec = transfer_spectrum(a)?;
    let lam1 = spec[0];
    if lam1.norm() == 0.0 {
        return Err(DehpError::ZeroInput("transfer matrix has zero spectral radius".into()));
    }
    if spec.len() < 2 {
        return Ok(CorrelationLength { xi: Xi::Zero, ratio: 0.0, subleading_phase: 0.0 });
    }
    let lam2 = spec[1];
    let ratio = lam2.norm() / lam1.norm();
    let phase = (lam2 / lam1).arg();
    let xi = if ratio == 0.0 {
        Xi::Zero
    } else if (1.0 - ratio).abs() < 1e-12 {
        Xi::Infinite
    } else {
        Xi::Finite { xi: 1.0 / (1.0 / ratio).ln() }
    };
    Ok(CorrelationLength { xi, ratio, subleading_phase: phase })
}

/// Exact finite-N connected correlator
/// ⟨Ψ|O1₁ O2_{r+1}|Ψ⟩ − ⟨O1₁⟩⟨O2_{r+1}⟩ on the N-ring, including all
/// wrap-around transfer contributions.
pub fn connected_correlator(
    a: &SiteTensor,
    o1: &CMat,
    o2: &CMat,
    r: usize,
    n: usize,
) -> Result<C64> {
    if r == 0 || r >= n {
        return Err(DehpError::ShapeMismatch(format!("separation r={r} outside 1..{n}")));
    }
    let t = transfer_matrix(a);
    let t1 = transfer_with_op(a, o1)?;
    let t2 = transfer_with_op(a, o2)?;
    let pow = |k: usize| -> CMat {
        let mut acc = CMat::identity(t.nrows(), t.ncols());
        for _ in 0..k {
            acc = &acc * &t;
        }
        acc
    };
    let z = pow(n).trace();
    if z.norm() == 0.0 {
        return Err(DehpError::ZeroInput("state has zero norm on this ring".into()));
    }
    let both = (&t1 * pow(r - 1) * &t2 * pow(n - 1 - r)).trace() / z;
    let m1 = (&t1 * pow(n - 1)).trace() / z;
    let m2 = (&t2 * pow(n - 1)).trace() / z;
    Ok(both - m1 * m2)
}

/// One row of a correlator scan, serialized to CSV by the CLI.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CorrelatorSample {
    pub r: usize,
    pub re: f64,
    pub im: f64,
    pub connected_re: f64,
    pub connected_im: f64,
}

/// Scan ⟨O1₁ O2_{r+1}⟩ and its connected part for r = 1..=r_max.
pub fn correlator_scan(
    a: &SiteTensor,
    o1: &CMat,
    o2: &CMat,
    r_max: usize,
    n: usize,
) -> Result<Vec<CorrelatorSample>> {
    let t = transfer_matrix(a);
    let t1 = transfer_with_op(a, o1)?;
    let t2 = transfer_with_op(a, o2)?;
    let pow = |k: usize| -> CMat {
        let mut acc = CMat::identity(t.nrows(), t.ncols());
        for _ in 0..k {
            acc = &acc * &t;
        }
        acc
    };
    let z = pow(n).trace();
    let m1 = (&t1 * pow(n - 1)).trace() / z;
    let m2 = (&t2 * pow(n - 1)).trace() / z;
    let mut out = Vec::new();
    for r in 1..=r_max.min(n - 1) {
        let full = (&t1 * pow(r - 1) * &t2 * pow(n - 1 - r)).trace() / z;
        let conn = full - m1 * m2;
        out.push(CorrelatorSample {
            r,
            re: full.re,
            im: full.im,
            connected_re: conn.re,
            connected_im: conn.im,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::models::{model1_tensors, model2_tensors, Model1Params};

    #[test]
    fn pbc_amplitudes_by_hand_model2() {
        // N = 2: coefficient of |−1,−1⟩ = Tr(√2 e11 · √2 e11) = 2;
        // coefficient of |0,0⟩ = Tr(σx σx) = 2
        let (a, _) = model2_tensors(0.0);
        let psi = build_pbc(&a, 2).unwrap();
        // indices: |−1⟩ = 2, |0⟩ = 1; site 1 slowest, d = 3
        assert!((psi[2 * 3 + 2] - c64(2.0, 0.0)).norm() < 1e-14);
        assert!((psi[3 + 1] - c64(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pbc_single_site_is_block_trace() {
        let (a, _) = model2_tensors(0.3);
        let psi = build_pbc(&a, 1).unwrap();
        for s in 0..3 {
            assert!((psi[s] - a.block(s).trace()).norm() < 1e-14);
        }
    }

    #[test]
    fn obc_single_site_and_product_state() {
        let (a, _) = model2_tensors(0.0);
        let bv = BoundaryVectors::new(
            CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, -1.0)]),
            CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]),
        )
        .unwrap();
        let psi = build_obc(&a, &bv, 1).unwrap();
        for s in 0..3 {
            let want = (bv.b.transpose() * a.block(s) * &bv.c)[(0, 0)];
            assert!((psi[s] - want).norm() < 1e-14);
        }
        // A with a single identity block: state = |11⟩ · (B·C)
        let mut ident = SiteTensor::zeros(2, 2);
        ident.block_mut(1)[(0, 0)] = c64(1.0, 0.0);
        ident.block_mut(1)[(1, 1)] = c64(1.0, 0.0);
        let psi = build_obc(&ident, &bv, 3).unwrap();
        let bc = bv.b.dot(&bv.c);
        for (i, amp) in psi.iter().enumerate() {
            if i == 0b111 {
                assert!((amp - bc).norm() < 1e-14);
            } else {
                assert_eq!(*amp, c64(0.0, 0.0));
            }
        }
    }

    #[test]
    fn pbc_trace_cyclicity() {
        // cyclic relabeling of sites permutes amplitudes
        let p = Model1Params { two_s: 1, d_vec: [1.0, 1.0, 1.0], a: c64(2.0, 0.0) };
        let (a, _) = model1_tensors(&p).unwrap();
        for n in 3..=6 {
            let psi = build_pbc(&a, n).unwrap();
            let dim = psi.len();
            // shift: s1..sN -> s2..sN s1
            for idx in 0..dim {
                let mut digs = vec![0usize; n];
                let mut x = idx;
                for k in (0..n).rev() {
                    digs[k] = x % 2;
                    x /= 2;
                }
                let mut shifted = 0usize;
                for k in 0..n {
                    shifted = shifted * 2 + digs[(k + 1) % n];
                }
                assert!((psi[idx] - psi[shifted]).norm() < 1e-12 * psi.norm());
            }
        }
    }

    #[test]
    fn gauge_transform_preserves_state() {
        let p = Model1Params { two_s: 1, d_vec: [0.8, 1.2, 1.5], a: c64(1.3, 0.4) };
        let (a, _) = model1_tensors(&p).unwrap();
        let g = CMat::from_row_slice(2, 2, &[c64(1.0, 0.2), c64(0.3, -0.1), c64(0.0, 0.4), c64(1.5, 0.0)]);
        let g_inv = g.clone().try_inverse().unwrap();
        let ag = a.gauge(&g, &g_inv);
        let psi = build_pbc(&a, 5).unwrap();
        let psi_g = build_pbc(&ag, 5).unwrap();
        assert!((psi.clone() - psi_g).norm() / psi.norm() < 1e-10);
    }

    #[test]
    fn model2_transfer_spectrum() {
        let (a, _) = model2_tensors(0.0);
        let spec = transfer_spectrum(&a).unwrap();
        let expect = [3.0, 1.0, 1.0, -1.0];
        for (s, x) in spec.iter().zip(expect) {
            assert!((s - c64(x, 0.0)).norm() < 1e-12, "{s} vs {x}");
        }
        let cl = correlation_length(&a).unwrap();
        assert!((cl.ratio - 1.0 / 3.0).abs() < 1e-12);
        match cl.xi {
            Xi::Finite { xi } => assert!((xi - 1.0 / 3f64.ln()).abs() < 1e-12),
            _ => panic!("expected finite correlation length"),
        }
    }

    #[test]
    fn identity_tensor_infinite_xi_and_scaling() {
        let mut a = SiteTensor::zeros(2, 2);
        a.block_mut(0)[(0, 0)] = c64(1.0, 0.0);
        a.block_mut(0)[(1, 1)] = c64(1.0, 0.0);
        let spec = transfer_spectrum(&a).unwrap();
        for s in &spec {
            assert!((s - c64(1.0, 0.0)).norm() < 1e-12);
        }
        let cl = correlation_length(&a).unwrap();
        assert!(matches!(cl.xi, Xi::Infinite));
        // scaling A -> cA multiplies the spectrum by |c|^2
        let scaled = a.scale(c64(0.0, 2.0));
        let spec2 = transfer_spectrum(&scaled).unwrap();
        for s in &spec2 {
            assert!((s - c64(4.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_one_transfer_gives_zero_xi() {
        // single nonzero block of rank one
        let mut a = SiteTensor::zeros(2, 1);
        a.block_mut(0)[(0, 0)] = c64(1.0, 0.0);
        let cl = correlation_length(&a).unwrap();
        assert!(matches!(cl.xi, Xi::Zero));
    }

    #[test]
    fn connected_identity_vanishes() {
        let (a, _) = model2_tensors(0.0);
        let id = CMat::identity(3, 3);
        let c = connected_correlator(&a, &id, &id, 3, 8).unwrap();
        assert!(c.norm() < 1e-13);
    }

    #[test]
    fn transfer_correlator_matches_explicit_state() {
        // brute-force oracle: expectation values in the explicitly built state
        let p = Model1Params { two_s: 1, d_vec: [1.0, 1.0, 1.0], a: c64(2.0, 0.0) };
        let (a, _) = model1_tensors(&p).unwrap();
        let sz = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        for n in [8usize, 10] {
            let psi = build_pbc(&a, n).unwrap();
            let norm_sq = psi.dotc(&psi);
            let site_apply = |op: &CMat, j: usize, v: &CVec| -> CVec {
                let mut out = CVec::zeros(v.len());
                crate::embed::apply_single_site_into(op, j, n, 2, v, &mut out).unwrap();
                out
            };
            for r in [2usize, 3, 4] {
                let tm = connected_correlator(&a, &sz, &sz, r, n).unwrap();
                let v = site_apply(&sz, r, &site_apply(&sz, 0, &psi));
                let full = psi.dotc(&v) / norm_sq;
                let m1 = psi.dotc(&site_apply(&sz, 0, &psi)) / norm_sq;
                let m2 = psi.dotc(&site_apply(&sz, r, &psi)) / norm_sq;
                let explicit = full - m1 * m2;
                assert!((tm - explicit).norm() < 1e-10, "n={n} r={r}: {tm} vs {explicit}");
            }
        }
    }
}
