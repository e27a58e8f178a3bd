//! Exact-diagonalization oracle: assemble lattice Hamiltonians (dense up to
//! a size cap, matrix-free beyond), count certified zero-energy
//! degeneracies, resolve momentum sectors, and check the fine-tuned
//! open-boundary scar.

use serde::Serialize;

use crate::embed::{apply_single_site_into, TwoSiteOp};
use crate::lattice::Lattice;
use crate::linalg::{c64, complex_eigenvalues, hermitian_eigen, CMat, CVec, C64};
use crate::models::{model1_density, model1_tensors, LocalTerm, Model1Params};
use crate::mps1d::{build_obc, BoundaryVectors};
use crate::{DehpError, Result};

/// Dense eigensolves are limited to this Hilbert-space dimension; larger
/// systems only support matrix-free residual checks, never degeneracy
/// counts.
pub const DENSE_DIM_CAP: usize = 20_000;

/// Relative zero-eigenvalue threshold: |λ| ≤ ε·‖H‖₂ counts as zero.
pub const ZERO_EIGENVALUE_EPS: f64 = 1e-8;

/// A lattice Hamiltonian: Σ_edges h plus optional single-site boundary
/// fields.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub d: usize,
    pub lattice: Lattice,
    term: LocalTerm,
    boundary: Vec<(usize, CMat)>,
}

/// H = Σ_edges h (+ boundary). Fails on caps only when densifying.
pub fn assemble(
    h: &LocalTerm,
    lattice: &Lattice,
    boundary: Option<Vec<(usize, CMat)>>,
) -> Result<Hamiltonian> {
    let n = lattice.sites();
    if let Some(terms) = &boundary {
        for (site, op) in terms {
            if *site >= n {
                return Err(DehpError::ShapeMismatch(format!("boundary site {site} outside lattice")));
            }
            if op.nrows() != h.d || op.ncols() != h.d {
                return Err(DehpError::ShapeMismatch("boundary operator dimension".into()));
            }
        }
    }
    Ok(Hamiltonian {
        d: h.d,
        lattice: *lattice,
        term: h.clone(),
        boundary: boundary.unwrap_or_default(),
    })
}

impl Hamiltonian {
    pub fn dim(&self) -> Result<usize> {
        self.d
            .checked_pow(self.lattice.sites() as u32)
            .ok_or_else(|| DehpError::CapExceeded("Hilbert dimension overflows".into()))
    }

    /// Matrix-free application H|ψ⟩.
    pub fn apply(&self, psi: &CVec) -> Result<CVec> {
        let n = self.lattice.sites();
        let mut out = CVec::zeros(psi.len());
        for edge in self.lattice.edges() {
            let op = TwoSiteOp::new(self.term.matrix.clone(), edge, n, self.d)?;
            op.apply_into(psi, &mut out)?;
        }
        for (site, op) in &self.boundary {
            apply_single_site_into(op, *site, n, self.d, psi, &mut out)?;
        }
        Ok(out)
    }

    /// Dense matrix; capped at `DENSE_DIM_CAP`.
    pub fn dense(&self) -> Result<CMat> {
        let dim = self.dim()?;
        if dim > DENSE_DIM_CAP {
            return Err(DehpError::CapExceeded(format!(
                "dense assembly of dimension {dim} exceeds cap {DENSE_DIM_CAP}"
            )));
        }
        let n = self.lattice.sites();
        let d = self.d;
        let mut mat = CMat::zeros(dim, dim);
        for edge in self.lattice.edges() {
            let stride_i = d.pow((n - 1 - edge.a) as u32);
            let stride_j = d.pow((n - 1 - edge.b) as u32);
            for col in 0..dim {
                let di = (col / stride_i) % d;
                let dj = (col / stride_j) % d;
                let base = col - di * stride_i - dj * stride_j;
                for ti in 0..d {
                    for tj in 0..d {
                        let c = self.term.matrix[(ti * d + tj, di * d + dj)];
                        if c.re != 0.0 || c.im != 0.0 {
                            mat[(base + ti * stride_i + tj * stride_j, col)] += c;
                        }
                    }
                }
            }
        }
        for (site, op) in &self.boundary {
            let stride = d.pow((n - 1 - site) as u32);
            for col in 0..dim {
                let di = (col / stride) % d;
                let base = col - di * stride;
                for t in 0..d {
                    let c = op[(t, di)];
                    if c.re != 0.0 || c.im != 0.0 {
                        mat[(base + t * stride, col)] += c;
                    }
                }
            }
        }
        Ok(mat)
    }
}

/// Zero-eigenspace census of a Hermitian spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub zero_count: usize,
    /// Smallest |λ| above the zero threshold.
    pub gap: f64,
    /// The absolute threshold ε·‖H‖₂ that was applied.
    pub threshold: f64,
    /// True when gap ≥ 10× threshold, making the integer count robust.
    pub certified: bool,
}

/// Zero-space of a Hamiltonian: report plus the zero eigenvectors and the
/// full spectrum.
#[derive(Debug, Clone)]
pub struct ZeroSpace {
    pub report: SpectrumReport,
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<CVec>,
}

/// Full dense eigensolve with the zero-count certification rule.
pub fn zero_space(hamiltonian: &Hamiltonian, eps: f64) -> Result<ZeroSpace> {
    let mat = hamiltonian.dense()?;
    let (vals, vecs) = hermitian_eigen(&mat, 1e-10)?;
    let dim = vals.len();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = eps * scale.max(f64::MIN_POSITIVE);
    let mut zero_idx = Vec::new();
    let mut gap = f64::INFINITY;
    for (i, v) in vals.iter().enumerate() {
        if v.abs() <= threshold {
            zero_idx.push(i);
        } else {
            gap = gap.min(v.abs());
        }
    }
    let vectors = zero_idx.iter().map(|&i| CVec::from(vecs.column(i))).collect();
    let certified = gap.is_finite() && gap >= 10.0 * threshold;
    Ok(ZeroSpace {
        report: SpectrumReport { dim, zero_count: zero_idx.len(), gap, threshold, certified },
        eigenvalues: vals,
        vectors,
    })
}

/// Index permutation of the one-site translation s₁s₂…s_N → s₂…s_N s₁:
/// `output[i] = input[perm[i]]`.
pub fn translation_permutation(n: usize, d: usize) -> Vec<usize> {
    let dim = d.pow(n as u32);
    let lead = d.pow((n - 1) as u32);
    (0..dim)
        .map(|idx| {
            let first = idx / lead;
            let rest = idx % lead;
            rest * d + first
        })
        .collect()
}

/// Apply the translation operator (gather by the permutation).
pub fn translate(psi: &CVec, n: usize, d: usize) -> CVec {
    let perm = translation_permutation(n, d);
    CVec::from_fn(psi.len(), |i, _| psi[perm[i]])
}

/// Momentum census of a translation-invariant subspace: counts of
/// translation eigenvalues e^{2πik/N} per k = 0..N.
pub fn momentum_filter(states: &[CVec], n: usize, d: usize) -> Result<Vec<usize>> {
    if states.is_empty() {
        return Ok(vec![0; n]);
    }
    let dim = states[0].len();
    let m = states.len();
    // orthonormalize the span (QR by modified Gram-Schmidt)
    let mut basis: Vec<CVec> = Vec::with_capacity(m);
    for s in states {
        let mut v = s.clone();
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-10 {
            basis.push(v / c64(norm, 0.0));
        }
    }
    let k = basis.len();
    // restricted translation M = V† T V and closure check ‖TV − VM‖
    let mut tv: Vec<CVec> = basis.iter().map(|v| translate(v, n, d)).collect();
    let mut restricted = CMat::zeros(k, k);
    for (j, tvj) in tv.iter().enumerate() {
        for (i, bi) in basis.iter().enumerate() {
            restricted[(i, j)] = bi.dotc(tvj);
        }
    }
    let mut closure_sq = 0.0;
    for (j, tvj) in tv.iter_mut().enumerate() {
        let mut recon = CVec::zeros(dim);
        for (i, bi) in basis.iter().enumerate() {
            recon += bi * restricted[(i, j)];
        }
        closure_sq += (tvj.clone() - recon).norm_squared();
    }
    let closure = closure_sq.sqrt();
    if closure > 1e-8 * (k as f64).sqrt() {
        return Err(DehpError::NotTranslationInvariant(closure));
    }
    let eigs = complex_eigenvalues(&restricted)?;
    let mut counts = vec![0usize; n];
    for lam in eigs {
        // translation acts unitarily on the span: eigenvalues on the unit circle
        let theta = lam.arg();
        let kf = theta * n as f64 / std::f64::consts::TAU;
        let kk = ((kf.round() as i64).rem_euclid(n as i64)) as usize;
        counts[kk] += 1;
    }
    Ok(counts)
}

/// Fine-tuned boundary fields for the open-chain scar, with the free
/// components (h₁ᶻ, h_Nˣ) and the predicted eigenvalue.
#[derive(Debug, Clone, Serialize)]
pub struct ObcSetup {
    pub d_vec: [f64; 3],
    pub hz1: f64,
    pub hx_n: f64,
    pub hy_n: f64,
    pub hz_n: f64,
    pub hx1: f64,
    pub hy1: f64,
    /// Predicted non-degenerate eigenvalue.
    pub energy: f64,
    /// The tensor parameter is pinned to a = 2/Δ.
    pub a: C64,
}

impl ObcSetup {
    pub fn new(d_vec: [f64; 3], hz1: f64, hx_n: f64) -> Result<Self> {
        let [dx, dy, dz] = d_vec;
        if dx == 0.0 || dz == 0.0 {
            return Err(DehpError::ParameterDomain("open-chain setup needs D_x, D_z ≠ 0".into()));
        }
        let delta = c64(dy, -dx) / c64(dz, 0.0);
        let a = c64(2.0, 0.0) / delta;
        let beta = (dx * dx + dy * dy) / dx;
        let hy_n = beta + dy * hx_n / dx;
        let hz_n = -(dx * dx + dy * dy - dz * dz) * (dy + hx_n) / (2.0 * dx * dz);
        let d_sq = dx * dx + dy * dy + dz * dz;
        let energy = (dy * dz / (2.0 * dx)) * (1.0 + delta.norm_sqr()) + hz1
            + hx_n * d_sq / (2.0 * dx * dz);
        Ok(ObcSetup {
            d_vec,
            hz1,
            hx_n,
            hy_n,
            hz_n,
            hx1: -dy,
            hy1: dx,
            energy,
            a,
        })
    }

    /// 𝐡·σ boundary operators for the first and last site (Pauli basis).
    pub fn boundary_operators(&self) -> (CMat, CMat) {
        let pauli_x = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let pauli_y = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)]);
        let pauli_z = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        let first = &pauli_x * c64(self.hx1, 0.0) + &pauli_y * c64(self.hy1, 0.0) + &pauli_z * c64(self.hz1, 0.0);
        let last = &pauli_x * c64(self.hx_n, 0.0) + &pauli_y * c64(self.hy_n, 0.0) + &pauli_z * c64(self.hz_n, 0.0);
        (first, last)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObcScarReport {
    pub residual: f64,
    pub energy_predicted: f64,
    pub energy_measured: f64,
    /// Eigenvalues within the zero threshold of the predicted energy
    /// (1 = non-degenerate), when the dense path ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<usize>,
    /// Distance from the predicted energy to the nearest other eigenvalue.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

/// Build Ψ = B·A…A·C on the open chain, assemble H with the derived
/// boundary fields, and report ‖(H − E)Ψ‖/‖Ψ‖. For small chains also
/// confirm non-degeneracy of E by dense diagonalization.
pub fn obc_scar_check(setup: &ObcSetup, n: usize, dense_confirm: bool) -> Result<ObcScarReport> {
    let params = Model1Params { two_s: 1, d_vec: setup.d_vec, a: setup.a };
    let (a_tensor, _) = model1_tensors(&params)?;
    let bv = BoundaryVectors::new(
        CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, -1.0)]),
        CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]),
    )?;
    let psi = build_obc(&a_tensor, &bv, n)?;
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(DehpError::ZeroInput("open-chain state vanished".into()));
    }
    let lattice = Lattice::OpenChain { n };
    let h = model1_density(&params)?;
    let (b_first, b_last) = setup.boundary_operators();
    let ham = assemble(&h, &lattice, Some(vec![(0, b_first), (n - 1, b_last)]))?;
    let h_psi = ham.apply(&psi)?;
    let energy_measured = (psi.dotc(&h_psi) / c64(norm * norm, 0.0)).re;
    let residual = (&h_psi - &psi * c64(setup.energy, 0.0)).norm() / norm;

    let (degeneracy, gap) = if dense_confirm {
        let mat = ham.dense()?;
        let (vals, _) = hermitian_eigen(&mat, 1e-10)?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let close = vals.iter().filter(|v| (*v - setup.energy).abs() <= 1e-8 * scale).count();
        let gap = vals
            .iter()
            .map(|v| (v - setup.energy).abs())
            .filter(|g| *g > 1e-8 * scale)
            .fold(f64::INFINITY, f64::min);
        (Some(close), Some(gap))
    } else {
        (None, None)
    };
    Ok(ObcScarReport {
        residual,
        energy_predicted: setup.energy,
        energy_measured,
        degeneracy,
        gap,
    })
}
