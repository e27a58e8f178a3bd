//! Matrix-free embedding of a two-site operator into a many-body Hilbert
//! space: apply `op2` on the qudits of one edge, identity elsewhere.

use crate::lattice::Edge;
use crate::linalg::{CMat, CVec};
use crate::{DehpError, Result};

/// Descriptor for a d²×d² operator acting on sites `(i, j)` of an
/// `n_sites`-qudit chain; supports matrix-free application.
#[derive(Debug, Clone)]
pub struct TwoSiteOp {
    pub d: usize,
    pub n_sites: usize,
    pub i: usize,
    pub j: usize,
    op: CMat,
}

impl TwoSiteOp {
    pub fn new(op2: CMat, edge: Edge, n_sites: usize, d: usize) -> Result<Self> {
        let d2 = d * d;
        if op2.nrows() != d2 || op2.ncols() != d2 {
            return Err(DehpError::ShapeMismatch(format!(
                "two-site operator is {}x{}, expected {}x{}",
                op2.nrows(),
                op2.ncols(),
                d2,
                d2
            )));
        }
        if edge.a >= n_sites || edge.b >= n_sites || edge.a == edge.b {
            return Err(DehpError::ShapeMismatch(format!(
                "edge ({}, {}) invalid on {} sites",
                edge.a, edge.b, n_sites
            )));
        }
        Ok(TwoSiteOp { d, n_sites, i: edge.a, j: edge.b, op: op2 })
    }

    /// Hilbert-space dimension d^n.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n_sites as u32)
    }

    /// Accumulate `op |psi⟩` into `out` (both of dimension d^n). Site 0 is
    /// the slowest-varying index.
    pub fn apply_into(&self, psi: &CVec, out: &mut CVec) -> Result<()> {
        let dim = self.dim();
        if psi.len() != dim || out.len() != dim {
            return Err(DehpError::ShapeMismatch(format!(
                "state of length {} on {} sites of dimension {}",
                psi.len(),
                self.n_sites,
                self.d
            )));
        }
        let d = self.d;
        let stride_i = d.pow((self.n_sites - 1 - self.i) as u32);
        let stride_j = d.pow((self.n_sites - 1 - self.j) as u32);
        for idx in 0..dim {
            let di = (idx / stride_i) % d;
            let dj = (idx / stride_j) % d;
            let row = di * d + dj;
            let base = idx - di * stride_i - dj * stride_j;
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for ti in 0..d {
                for tj in 0..d {
                    let c = self.op[(row, ti * d + tj)];
                    if c.re != 0.0 || c.im != 0.0 {
                        acc += c * psi[base + ti * stride_i + tj * stride_j];
                    }
                }
            }
            out[idx] += acc;
        }
        Ok(())
    }

    pub fn apply(&self, psi: &CVec) -> Result<CVec> {
        let mut out = CVec::zeros(psi.len());
        self.apply_into(psi, &mut out)?;
        Ok(out)
    }
}

/// Accumulate a single-site operator on site `i` into `out`.
pub fn apply_single_site_into(
    op: &CMat,
    site: usize,
    n_sites: usize,
    d: usize,
    psi: &CVec,
    out: &mut CVec,
) -> Result<()> {
    if op.nrows() != d || op.ncols() != d {
        return Err(DehpError::ShapeMismatch("single-site operator dimension".into()));
    }
    let dim = d.pow(n_sites as u32);
    if psi.len() != dim {
        return Err(DehpError::ShapeMismatch("state dimension".into()));
    }
    let stride = d.pow((n_sites - 1 - site) as u32);
    for idx in 0..dim {
        let di = (idx / stride) % d;
        let base = idx - di * stride;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for t in 0..d {
            let c = op[(di, t)];
            if c.re != 0.0 || c.im != 0.0 {
                acc += c * psi[base + t * stride];
            }
        }
        out[idx] += acc;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Direction;
    use crate::linalg::{c64, CMat, CVec};

    fn edge(a: usize, b: usize) -> Edge {
        Edge { a, b, direction: Direction::Chain }
    }

    #[test]
    fn identity_acts_as_identity() {
        let op = CMat::identity(4, 4);
        let e = TwoSiteOp::new(op, edge(0, 2), 3, 2).unwrap();
        let psi = CVec::from_fn(8, |i, _| c64(i as f64 + 1.0, -(i as f64)));
        let out = e.apply(&psi).unwrap();
        assert!((out - psi).norm() < 1e-15);
    }

    #[test]
    fn sigma_z_sigma_z_on_all_up() {
        // d=2, N=3, σz⊗σz on edge (1,2) applied to |↑↑↑⟩ gives +|↑↑↑⟩
        let sz = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        let zz = sz.kronecker(&sz);
        let e = TwoSiteOp::new(zz, edge(1, 2), 3, 2).unwrap();
        let mut psi = CVec::zeros(8);
        psi[0] = c64(1.0, 0.0);
        let out = e.apply(&psi).unwrap();
        assert!((out - psi).norm() < 1e-15);
    }

    #[test]
    fn relabeling_commutes() {
        // applying on edge (i,j) then permuting sites equals permuting then
        // applying on the permuted edge; permutation = cyclic shift by 1
        let d = 2;
        let n = 4;
        let dim = 16;
        let mut op = CMat::zeros(4, 4);
        // a generic non-symmetric two-site operator
        for r in 0..4 {
            for c in 0..4 {
                op[(r, c)] = c64((r * 4 + c) as f64 * 0.17 - 1.0, 0.31 * (r as f64 - c as f64));
            }
        }
        let psi = CVec::from_fn(dim, |i, _| c64((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()));
        // permutation p: site k -> site (k+1) % n; index map
        let perm_index = |idx: usize| -> usize {
            let mut digs = [0usize; 4];
            let mut x = idx;
            for k in (0..n).rev() {
                digs[k] = x % d;
                x /= d;
            }
            let mut out = 0;
            for k in 0..n {
                out = out * d + digs[(k + n - 1) % n];
            }
            out
        };
        let permute = |v: &CVec| CVec::from_fn(dim, |i, _| v[perm_index(i)]);
        for (i, j) in [(0usize, 1usize), (2, 3), (1, 3)] {
            let e1 = TwoSiteOp::new(op.clone(), edge(i, j), n, d).unwrap();
            let e2 =
                TwoSiteOp::new(op.clone(), edge((i + n - 1) % n, (j + n - 1) % n), n, d).unwrap();
            let lhs = permute(&e1.apply(&psi).unwrap());
            let rhs = e2.apply(&permute(&psi)).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let op = CMat::identity(3, 3);
        assert!(TwoSiteOp::new(op, edge(0, 1), 2, 2).is_err());
    }
}
