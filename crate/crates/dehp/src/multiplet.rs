//! The degenerate scar multiplet of the Rydberg-DM chain, extracted two
//! independent ways: order-by-order from a truncated-series MPS in t = 1/a,
//! and from explicit generalized spin-lowering operator formulas (n ≤ 5).
//!
//! The expansion works because the tensor splits as
//! `A = A₁ + (b/a) A₂ + (1/a) A₀` with nilpotent bond products
//! `A₁A₂ = A₂A₁ = A₀A₀ = 0`, which confines every order to the subspace
//! with no two adjacent overturned spins.

use crate::linalg::{c64, rank_with_tol, CMat, CVec, C64};
use crate::series::{Series, SeriesMatrix};
use crate::tensor::SiteTensor;
use crate::{DehpError, Result};

pub use crate::linalg::collinearity;

/// Threshold (relative to the top singular value) for the multiplet rank.
pub const RANK_TOL: f64 = 1e-8;

/// χ = 2 MPS tensor whose entries are truncated series in t = 1/a, for the
/// Rydberg-DM chain at spin S = `two_s`/2. Substituting a numeric t
/// reproduces the numeric tensor family to the truncation order.
#[derive(Debug, Clone)]
pub struct SeriesMps {
    pub d: usize,
    pub chi: usize,
    pub order: usize,
    /// blocks[s]: χ×χ matrix of series; only s = 0 (|S⟩) and s = 1 (|S−1⟩)
    /// are nonzero.
    blocks: Vec<SeriesMatrix>,
}

impl SeriesMps {
    /// Build the series tensor from the couplings. `b` is expanded as
    /// b·t = −Σ_{n≥1} tⁿ Δ_S⁻ⁿ, so every coefficient is exact.
    pub fn new(two_s: u32, d_vec: [f64; 3], order: usize) -> Result<Self> {
        if two_s == 0 {
            return Err(DehpError::ParameterDomain("two_s must be at least 1".into()));
        }
        let [dx, dy, dz] = d_vec;
        if dx == 0.0 || dz == 0.0 {
            return Err(DehpError::ParameterDomain("D_x and D_z must be nonzero".into()));
        }
        let d = (two_s + 1) as usize;
        let delta = c64(dy, -dx) / c64(dz, 0.0);
        let delta_s = delta / c64((two_s as f64).sqrt(), 0.0);

        let mut blocks = vec![SeriesMatrix::zero(2, order); d];
        // |S⟩ component: e11 + e22 · (b t), with b t = −Σ_{n≥1} tⁿ Δ_S⁻ⁿ
        let mut pow = c64(1.0, 0.0);
        let mut bt_coeffs = vec![c64(0.0, 0.0); order + 1];
        for coeff in bt_coeffs.iter_mut().skip(1) {
            pow /= delta_s;
            *coeff = -pow;
        }
        let bt = Series::from_coeffs(order, &bt_coeffs);
        *blocks[0].at_mut(0, 0) = Series::one(order);
        *blocks[0].at_mut(1, 1) = bt;
        // |S−1⟩ component: t · (σˣ + iσᶻ)
        *blocks[1].at_mut(0, 0) = Series::monomial(order, 1, c64(0.0, 1.0));
        *blocks[1].at_mut(0, 1) = Series::monomial(order, 1, c64(1.0, 0.0));
        *blocks[1].at_mut(1, 0) = Series::monomial(order, 1, c64(1.0, 0.0));
        *blocks[1].at_mut(1, 1) = Series::monomial(order, 1, c64(0.0, -1.0));
        Ok(SeriesMps { d, chi: 2, order, blocks })
    }

    /// Numeric tensor at a given t (for cross-checks against the exact
    /// family; agreement is up to the truncation order of b).
    pub fn eval(&self, t: C64) -> SiteTensor {
        let mut out = SiteTensor::zeros(self.d, self.chi);
        for s in 0..self.d {
            for r in 0..self.chi {
                for c in 0..self.chi {
                    out.block_mut(s)[(r, c)] = self.blocks[s].at(r, c).eval(t);
                }
            }
        }
        out
    }

    /// Trace contraction on an N-ring carried out in series arithmetic;
    /// returns the raw coefficient vectors |v₀⟩ … |v_order⟩ (unnormalized,
    /// in the d^N-dimensional Hilbert space).
    pub fn pbc_expansion(&self, n: usize) -> Result<Vec<CVec>> {
        let d = self.d;
        let dim = d
            .checked_pow(n as u32)
            .filter(|&x| x <= crate::mps1d::STATE_CAP)
            .ok_or_else(|| DehpError::CapExceeded(format!("d^{n} exceeds the state cap")))?;
        let mut vs = vec![CVec::zeros(dim); self.order + 1];
        // only the two retained physical components contribute
        let mut stack: Vec<(usize, usize, SeriesMatrix)> =
            vec![(0, 0, SeriesMatrix::identity(self.chi, self.order))];
        while let Some((depth, idx, mat)) = stack.pop() {
            if depth == n {
                let tr = mat.trace()?;
                for (k, v) in vs.iter_mut().enumerate() {
                    v[idx] = tr.coeff(k);
                }
                continue;
            }
            for s in 0..2usize {
                let next = mat.mul(&self.blocks[s])?;
                stack.push((depth + 1, idx * d + s, next));
            }
        }
        Ok(vs)
    }
}

/// Basis of expansion vectors with their Gram matrix and numerical rank.
#[derive(Debug, Clone)]
pub struct MultipletBasis {
    /// Normalized |v_n⟩, n = 0..=n_max (unit norm, first nonzero amplitude
    /// real positive).
    pub vectors: Vec<CVec>,
    pub gram: CMat,
    pub rank: usize,
}

/// Extract the multiplet from the series expansion of the trace MPS.
/// Requires even N and n_max ≤ N/2 (orders beyond N/2 are not guaranteed
/// independent and are not characterized here).
pub fn expand_multiplet(
    two_s: u32,
    d_vec: [f64; 3],
    n: usize,
    n_max: usize,
) -> Result<MultipletBasis> {
    if !n.is_multiple_of(2) {
        return Err(DehpError::ParameterDomain("multiplet expansion needs even N".into()));
    }
    if n_max > n / 2 {
        return Err(DehpError::ParameterDomain(format!(
            "n_max = {n_max} exceeds N/2 = {}",
            n / 2
        )));
    }
    let mps = SeriesMps::new(two_s, d_vec, n_max)?;
    let raw = mps.pbc_expansion(n)?;
    let vectors: Vec<CVec> = raw.into_iter().map(normalize_with_phase).collect::<Result<_>>()?;
    let k = vectors.len();
    let mut gram = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = vectors[i].dotc(&vectors[j]);
        }
    }
    let rank = rank_of(&vectors, RANK_TOL);
    Ok(MultipletBasis { vectors, gram, rank })
}

fn normalize_with_phase(v: CVec) -> Result<CVec> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(DehpError::ZeroInput("expansion produced a zero coefficient vector".into()));
    }
    let first = v.iter().find(|z| z.norm() > 1e-14 * norm).copied().unwrap_or(c64(1.0, 0.0));
    let phase = first / c64(first.norm(), 0.0);
    Ok(v.map(|z| z / (phase * c64(norm, 0.0))))
}

/// Numerical rank of a stacked basis at a relative singular-value threshold.
pub fn rank_of(vectors: &[CVec], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].len();
    let mut m = CMat::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    rank_with_tol(&m, rel_tol)
}

/// Projector onto configurations with no two adjacent overturned spins
/// (ring adjacency). A site is overturned when it is not in the top state
/// |S⟩; the density's diagonal term penalizes exactly those pairs.
#[derive(Debug, Clone)]
pub struct RydbergProjector {
    pub n: usize,
    pub d: usize,
    keep: Vec<bool>,
}

impl RydbergProjector {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let dim = d
            .checked_pow(n as u32)
            .filter(|&x| x <= crate::mps1d::STATE_CAP)
            .ok_or_else(|| DehpError::CapExceeded("projector dimension".into()))?;
        let mut keep = vec![true; dim];
        for (idx, k) in keep.iter_mut().enumerate() {
            let mut digs = vec![0usize; n];
            let mut x = idx;
            for slot in digs.iter_mut().rev() {
                *slot = x % d;
                x /= d;
            }
            for j in 0..n {
                if digs[j] > 0 && digs[(j + 1) % n] > 0 {
                    *k = false;
                    break;
                }
            }
        }
        Ok(RydbergProjector { n, d, keep })
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        CVec::from_fn(v.len(), |i, _| if self.keep[i] { v[i] } else { c64(0.0, 0.0) })
    }

    /// Relative weight of v outside the projected subspace.
    pub fn violation(&self, v: &CVec) -> f64 {
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut sq = 0.0;
        for (i, z) in v.iter().enumerate() {
            if !self.keep[i] {
                sq += z.norm_sqr();
            }
        }
        sq.sqrt() / norm
    }

    pub fn rank(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }
}

/// Apply the local lowering matrix e²¹ (top → first overturned state) at
/// one site of |⇑⟩-sector vectors; spin-1/2 layout (d = 2).
fn apply_lower_at(site: usize, n: usize, v: &CVec) -> CVec {
    let stride = 1usize << (n - 1 - site);
    let mut out = CVec::zeros(v.len());
    for idx in 0..v.len() {
        if (idx / stride).is_multiple_of(2) {
            out[idx + stride] += v[idx];
        }
    }
    out
}

fn sum_lower(n: usize, v: &CVec) -> CVec {
    let mut out = CVec::zeros(v.len());
    for j in 0..n {
        out += apply_lower_at(j, n, v);
    }
    out
}

/// 𝒮⁻_{2,m} = Σ_j e²¹_j e²¹_{j+m+1}.
fn sum_lower_pair(n: usize, m: usize, v: &CVec) -> CVec {
    let mut out = CVec::zeros(v.len());
    for j in 0..n {
        out += apply_lower_at((j + m + 1) % n, n, &apply_lower_at(j, n, v));
    }
    out
}

/// 𝒮⁻_{3,1} = Σ_j e²¹_{j−2} e²¹_j e²¹_{j+2}.
fn sum_lower_triple(n: usize, v: &CVec) -> CVec {
    let mut out = CVec::zeros(v.len());
    for j in 0..n {
        let w = apply_lower_at((j + n - 2) % n, n, v);
        let w = apply_lower_at(j, n, &w);
        out += apply_lower_at((j + 2) % n, n, &w);
    }
    out
}

/// Closed-form multiplet vectors from the generalized lowering operators,
/// n = 1..=5, at spin 1/2. `delta` is the DM anisotropy combination
/// Δ = (D_y − i D_x)/D_z.
pub fn vn_formula(n_sites: usize, delta: C64, n: usize) -> Result<CVec> {
    if !(1..=5).contains(&n) {
        return Err(DehpError::ParameterDomain(format!("vn_formula defined for n in 1..=5, got {n}")));
    }
    // the longest-range term is a pair at separation n − 2 ≤ N/2, so the
    // formulas stay valid down to N = 2n (verified against the series
    // extraction at the boundary)
    if !n_sites.is_multiple_of(2) || n_sites < 2 * n {
        return Err(DehpError::ParameterDomain(format!(
            "need even N ≥ {}, got {n_sites}",
            2 * n
        )));
    }
    let dim = 1usize << n_sites;
    let mut up = CVec::zeros(dim);
    up[0] = c64(1.0, 0.0);
    let proj = RydbergProjector::new(n_sites, 2)?;
    let i = c64(0.0, 1.0);
    let s1 = |v: &CVec| sum_lower(n_sites, v);
    let v = match n {
        1 => s1(&up),
        2 => proj.apply(&s1(&s1(&up))),
        3 => {
            let t1 = s1(&s1(&s1(&up))) * (i / c64(6.0, 0.0));
            let t2 = sum_lower_pair(n_sites, 1, &up) * (c64(1.0, 0.0) / delta);
            proj.apply(&(t1 + t2))
        }
        4 => {
            let t1 = s1(&s1(&s1(&s1(&up)))) * c64(1.0 / 24.0, 0.0);
            let t2 = s1(&sum_lower_pair(n_sites, 1, &up)) * (-i / delta);
            let t3 = (sum_lower_pair(n_sites, 2, &up) - sum_lower_pair(n_sites, 1, &up))
                * (c64(1.0, 0.0) / (delta * delta));
            proj.apply(&(t1 + t2 + t3))
        }
        5 => {
            let d2 = delta * delta;
            let d3 = d2 * delta;
            let t1 = s1(&s1(&s1(&s1(&s1(&up))))) * (i / c64(120.0, 0.0));
            let t2 = s1(&s1(&sum_lower_pair(n_sites, 1, &up))) * (c64(0.5, 0.0) / delta);
            let t3 = (s1(&(sum_lower_pair(n_sites, 2, &up) - sum_lower_pair(n_sites, 1, &up)))
                - sum_lower_triple(n_sites, &up))
                * (i / d2);
            let t4 = (sum_lower_pair(n_sites, 1, &up)
                - sum_lower_pair(n_sites, 2, &up) * c64(2.0, 0.0)
                + sum_lower_pair(n_sites, 3, &up))
                * (-c64(1.0, 0.0) / d3);
            proj.apply(&(t1 + t2 + t3 + t4))
        }
        _ => unreachable!(),
    };
    Ok(v)
}
