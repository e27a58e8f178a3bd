//! Numerical discovery of `(A, E)` representations of the bond algebra for
//! an arbitrary two-site density: seeded multistart damped least squares on
//! the 2dχ² complex unknowns.
//!
//! The residual `h(A∘A) − (E∘A − A∘E)` is holomorphic in the tensor entries
//! (bilinear in A, bilinear in (E, A)), so the Gauss–Newton step can be
//! assembled and solved directly in complex arithmetic; the damping is
//! adapted by accept/reject on the residual norm. Gauge freedoms (scale,
//! phase, E → E + λA) are fixed after every step, otherwise the normal
//! equations are singular along the gauge orbits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{c64, CMat, CVec, C64};
use crate::models::LocalTerm;
use crate::mps1d::{build_pbc, transfer_spectrum};
use crate::tensor::SiteTensor;
use crate::verifier::{check_link_1d, Residual};
use crate::{DehpError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveOptions {
    pub chi: usize,
    pub multistarts: usize,
    pub max_iterations: usize,
    /// Stop a start once the relative link residual reaches this target.
    pub residual_target: f64,
    pub seed: u64,
    /// Optional sparsity masks (length d·χ² each, entry order (s, row, col));
    /// masked-out entries are pinned to zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask_a: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask_e: Option<Vec<bool>>,
    /// Attach the per-iteration residual trace to serialized results.
    pub record_trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            chi: 2,
            multistarts: 50,
            max_iterations: 200,
            residual_target: 1e-10,
            seed: 1,
            mask_a: None,
            mask_e: None,
            record_trace: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.chi == 0 {
            return Err(DehpError::ParameterDomain("chi must be positive".into()));
        }
        if self.multistarts == 0 {
            return Err(DehpError::ParameterDomain("multistarts must be at least 1".into()));
        }
        if self.residual_target.is_nan() || self.residual_target <= 0.0 {
            return Err(DehpError::ParameterDomain("residual_target must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub a: SiteTensor,
    pub e: SiteTensor,
    pub residual: Residual,
    pub iterations: usize,
    pub start_index: usize,
    pub converged: bool,
    /// Relative residual after each accepted step (monotone non-increasing).
    pub trace: Vec<f64>,
}

/// Serializable form: tensors as nested arrays of [re, im] pairs.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResultRecord {
    pub start_index: usize,
    pub iterations: usize,
    pub converged: bool,
    pub residual_abs: f64,
    pub residual_rel: f64,
    pub a: Vec<Vec<Vec<[f64; 2]>>>,
    pub e: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_trace: Option<Vec<f64>>,
}

impl SolveResult {
    pub fn to_record(&self, with_trace: bool) -> SolveResultRecord {
        let dump = |t: &SiteTensor| -> Vec<Vec<Vec<[f64; 2]>>> {
            (0..t.d)
                .map(|s| {
                    (0..t.chi)
                        .map(|r| {
                            (0..t.chi)
                                .map(|c| {
                                    let z = t.block(s)[(r, c)];
                                    [z.re, z.im]
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        };
        SolveResultRecord {
            start_index: self.start_index,
            iterations: self.iterations,
            converged: self.converged,
            residual_abs: self.residual.absolute,
            residual_rel: self.residual.relative,
            a: dump(&self.a),
            e: dump(&self.e),
            residual_trace: if with_trace { Some(self.trace.clone()) } else { None },
        }
    }
}

struct Workspace<'h> {
    h: &'h LocalTerm,
    d: usize,
    chi: usize,
    n_t: usize, // d·χ² entries per tensor
}

impl<'h> Workspace<'h> {
    fn residual_vec(&self, a: &SiteTensor, e: &SiteTensor) -> CVec {
        let (d, chi) = (self.d, self.chi);
        let mut r = CVec::zeros(d * d * chi * chi);
        let mut prods = Vec::with_capacity(d * d);
        for t1 in 0..d {
            for t2 in 0..d {
                prods.push(a.block(t1) * a.block(t2));
            }
        }
        let mut k = 0;
        for s1 in 0..d {
            for s2 in 0..d {
                let mut blk = CMat::zeros(chi, chi);
                for (col, prod) in prods.iter().enumerate() {
                    let c = self.h.matrix[(s1 * d + s2, col)];
                    if c.re != 0.0 || c.im != 0.0 {
                        blk += prod * c;
                    }
                }
                blk -= e.block(s1) * a.block(s2) - a.block(s1) * e.block(s2);
                for al in 0..chi {
                    for be in 0..chi {
                        r[k] = blk[(al, be)];
                        k += 1;
                    }
                }
            }
        }
        r
    }

    /// Complex Jacobian of the residual w.r.t. (vec A, vec E); columns
    /// 0..n_t are A entries, n_t..2n_t are E entries.
    fn jacobian(&self, a: &SiteTensor, e: &SiteTensor) -> CMat {
        let (d, chi) = (self.d, self.chi);
        let rows = d * d * chi * chi;
        let mut jac = CMat::zeros(rows, 2 * self.n_t);
        let row_of = |s1: usize, s2: usize, al: usize, be: usize| ((s1 * d + s2) * chi + al) * chi + be;
        let col_of = |s: usize, r: usize, c: usize| (s * chi + r) * chi + c;
        for s1 in 0..d {
            for s2 in 0..d {
                // h(A∘A) part: ∂/∂A[t1][α,k] adds h·A[t2][k,β], and
                // ∂/∂A[t2][k,β] adds h·A[t1][α,k]
                for t1 in 0..d {
                    for t2 in 0..d {
                        let c = self.h.matrix[(s1 * d + s2, t1 * d + t2)];
                        if c.re == 0.0 && c.im == 0.0 {
                            continue;
                        }
                        for al in 0..chi {
                            for k in 0..chi {
                                for be in 0..chi {
                                    let row = row_of(s1, s2, al, be);
                                    jac[(row, col_of(t1, al, k))] += c * a.block(t2)[(k, be)];
                                    jac[(row, col_of(t2, k, be))] += c * a.block(t1)[(al, k)];
                                }
                            }
                        }
                    }
                }
                // −(E^{s1}A^{s2} − A^{s1}E^{s2}) part
                for al in 0..chi {
                    for k in 0..chi {
                        for be in 0..chi {
                            let row = row_of(s1, s2, al, be);
                            jac[(row, self.n_t + col_of(s1, al, k))] -= a.block(s2)[(k, be)];
                            jac[(row, col_of(s2, k, be))] -= e.block(s1)[(al, k)];
                            jac[(row, col_of(s1, al, k))] += e.block(s2)[(k, be)];
                            jac[(row, self.n_t + col_of(s2, k, be))] += a.block(s1)[(al, k)];
                        }
                    }
                }
            }
        }
        jac
    }
}

/// Fix scale (‖A‖ = 1), overall phase (first nonzero entry of the first
/// physical block real positive) and the E → E + λA freedom.
fn gauge_fix(a: &SiteTensor, e: &SiteTensor, opts: &SolveOptions) -> Result<(SiteTensor, SiteTensor)> {
    let norm = a.norm();
    if norm == 0.0 {
        return Err(DehpError::ZeroInput("gauge fixing a zero tensor".into()));
    }
    let mut scale = c64(1.0 / norm, 0.0);
    let flat = a.to_flat();
    if let Some(first) = flat.iter().find(|z| z.norm() > 1e-14 * norm) {
        let phase = first / c64(first.norm(), 0.0);
        scale /= phase;
    }
    let mut a2 = a.scale(scale);
    let mut e2 = e.scale(scale);
    let denom = a2.inner(&a2);
    if denom.norm() > 0.0 {
        let lam = a2.inner(&e2) / denom;
        e2 = e2.sub(&a2.scale(lam))?;
    }
    apply_masks(&mut a2, &mut e2, opts)?;
    Ok((a2, e2))
}

fn apply_masks(a: &mut SiteTensor, e: &mut SiteTensor, opts: &SolveOptions) -> Result<()> {
    let n_t = a.d * a.chi * a.chi;
    for (tensor, mask) in [(&mut *a, &opts.mask_a), (&mut *e, &opts.mask_e)] {
        if let Some(m) = mask {
            if m.len() != n_t {
                return Err(DehpError::ShapeMismatch(format!(
                    "mask length {} != d·chi² = {n_t}",
                    m.len()
                )));
            }
            let mut flat = tensor.to_flat();
            for (z, keep) in flat.iter_mut().zip(m) {
                if !keep {
                    *z = c64(0.0, 0.0);
                }
            }
            *tensor = SiteTensor::from_flat(tensor.d, tensor.chi, &flat)?;
        }
    }
    Ok(())
}

/// Multistart damped least squares. Deterministic for a fixed seed: start
/// k draws from ChaCha8(seed, stream = k), runs single-threaded, and the
/// results are returned sorted by residual (stable in start index).
pub fn solve_dehp_1d(h: &LocalTerm, opts: &SolveOptions) -> Result<Vec<SolveResult>> {
    opts.validate()?;
    let d = h.d;
    let chi = opts.chi;
    let n_t = d * chi * chi;
    let ws = Workspace { h, d, chi, n_t };
    let h_norm = h.matrix.norm();
    let mut results = Vec::with_capacity(opts.multistarts);

    for start in 0..opts.multistarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(start as u64);
        let draw = |rng: &mut ChaCha8Rng| -> SiteTensor {
            let mut t = SiteTensor::zeros(d, chi);
            for s in 0..d {
                for r in 0..chi {
                    for c in 0..chi {
                        // unit-variance complex entries
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        t.block_mut(s)[(r, c)] = c64(re, im) * c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    }
                }
            }
            t
        };
        let (mut a, mut e) = gauge_fix(&draw(&mut rng), &draw(&mut rng), opts)?;
        let mut r = ws.residual_vec(&a, &e);
        let mut fr = r.norm();
        let mut damping = 1e-3;
        let norm_scale = h_norm.max(f64::MIN_POSITIVE);
        let mut trace = vec![fr / norm_scale];
        let mut iterations = 0;
        // ‖A‖ = 1 after gauge fixing, so the relative target maps to this
        let target_abs = opts.residual_target * h_norm;

        'iter: for it in 0..opts.max_iterations {
            iterations = it;
            if fr <= target_abs || fr < 1e-15 {
                break;
            }
            let jac = ws.jacobian(&a, &e);
            let jtj = jac.adjoint() * &jac;
            let grad = jac.adjoint() * &r;
            let mut accepted = false;
            for _ in 0..40 {
                let mut lhs = jtj.clone();
                for i in 0..lhs.nrows() {
                    lhs[(i, i)] += c64(damping, 0.0);
                }
                let delta = match lhs.lu().solve(&(-&grad)) {
                    Some(x) => x,
                    None => {
                        damping *= 3.0;
                        continue;
                    }
                };
                let a_flat = a.to_flat();
                let e_flat = e.to_flat();
                let a_new: Vec<C64> = a_flat.iter().enumerate().map(|(i, z)| z + delta[i]).collect();
                let e_new: Vec<C64> =
                    e_flat.iter().enumerate().map(|(i, z)| z + delta[n_t + i]).collect();
                let cand = gauge_fix(
                    &SiteTensor::from_flat(d, chi, &a_new)?,
                    &SiteTensor::from_flat(d, chi, &e_new)?,
                    opts,
                );
                let (a_c, e_c) = match cand {
                    Ok(pair) => pair,
                    Err(_) => {
                        damping *= 3.0;
                        continue;
                    }
                };
                let r_c = ws.residual_vec(&a_c, &e_c);
                let fr_c = r_c.norm();
                if fr_c < fr {
                    a = a_c;
                    e = e_c;
                    r = r_c;
                    fr = fr_c;
                    damping = (damping * 0.5).max(1e-14);
                    trace.push(fr / norm_scale);
                    accepted = true;
                    break;
                }
                damping *= 3.0;
            }
            if !accepted {
                break 'iter;
            }
        }
        let residual = check_link_1d(h, &a, &e)?;
        results.push(SolveResult {
            converged: residual.relative <= opts.residual_target,
            a,
            e,
            residual,
            iterations,
            start_index: start,
            trace,
        });
    }
    results.sort_by(|x, y| {
        x.residual
            .relative
            .total_cmp(&y.residual.relative)
            .then(x.start_index.cmp(&y.start_index))
    });
    Ok(results)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SameState,
    Different,
    Inconclusive,
}

/// Compare two solutions as physical states: overlap of normalized trace
/// states at N = 3, 4, 5 plus scale-normalized transfer spectra. Gauge
/// transforms and E-shifts map to `SameState`.
pub fn equivalence_probe(r1: &SolveResult, r2: &SolveResult) -> Result<Verdict> {
    r1.a.check_same_shape(&r2.a)?;
    if r1.a.norm() == 0.0 || r2.a.norm() == 0.0 {
        return Err(DehpError::ZeroInput("equivalence probe of a zero tensor".into()));
    }
    let mut min_overlap = 1.0f64;
    let mut usable = 0;
    for n in [3usize, 4, 5] {
        let p1 = build_pbc(&r1.a, n)?;
        let p2 = build_pbc(&r2.a, n)?;
        let (q1, q2) = (p1.norm(), p2.norm());
        if q1 < 1e-12 * r1.a.norm().powi(n as i32) || q2 < 1e-12 * r2.a.norm().powi(n as i32) {
            continue; // trace state vanishes at this N; no information
        }
        usable += 1;
        let ov = p1.dotc(&p2).norm() / (q1 * q2);
        min_overlap = min_overlap.min(ov);
    }
    // transfer spectra compared as ratios to the leading eigenvalue:
    // invariant under gauge transforms and overall rescaling. Matched as
    // multisets since equal-modulus eigenvalues sort unstably.
    let s1 = transfer_spectrum(&r1.a)?;
    let s2 = transfer_spectrum(&r2.a)?;
    let spec_diff = if s1[0].norm() > 0.0 && s2[0].norm() > 0.0 {
        let ratios1: Vec<C64> = s1.iter().map(|z| z / s1[0]).collect();
        let mut ratios2: Vec<C64> = s2.iter().map(|z| z / s2[0]).collect();
        let mut worst = 0.0f64;
        for r in &ratios1 {
            let (best_idx, best_dist) = ratios2
                .iter()
                .enumerate()
                .map(|(i, q)| (i, (r - q).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((0, f64::INFINITY));
            worst = worst.max(best_dist);
            if best_idx < ratios2.len() {
                ratios2.remove(best_idx);
            }
        }
        worst
    } else {
        f64::INFINITY
    };
    if usable == 0 {
        return Ok(Verdict::Inconclusive);
    }
    if min_overlap >= 1.0 - 1e-8 && spec_diff < 1e-6 {
        Ok(Verdict::SameState)
    } else if min_overlap < 1.0 - 1e-3 {
        Ok(Verdict::Different)
    } else {
        Ok(Verdict::Inconclusive)
    }
}
