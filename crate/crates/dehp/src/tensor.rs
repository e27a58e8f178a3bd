//! MPS and PEPS site tensors and the error-tensor sets attached to node
//! edge slots.

use crate::linalg::{c64, CMat, C64};
use crate::{DehpError, Result};

/// 1D site tensor: for each physical state `s` a χ×χ bond matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTensor {
    pub d: usize,
    pub chi: usize,
    blocks: Vec<CMat>,
}

impl SiteTensor {
    pub fn zeros(d: usize, chi: usize) -> Self {
        SiteTensor { d, chi, blocks: vec![CMat::zeros(chi, chi); d] }
    }

    pub fn from_blocks(blocks: Vec<CMat>) -> Result<Self> {
        let d = blocks.len();
        if d == 0 {
            return Err(DehpError::ShapeMismatch("site tensor with no physical components".into()));
        }
        let chi = blocks[0].nrows();
        for b in &blocks {
            if b.nrows() != chi || b.ncols() != chi {
                return Err(DehpError::ShapeMismatch("site tensor blocks differ in shape".into()));
            }
        }
        Ok(SiteTensor { d, chi, blocks })
    }

    pub fn block(&self, s: usize) -> &CMat {
        &self.blocks[s]
    }

    pub fn block_mut(&mut self, s: usize) -> &mut CMat {
        &mut self.blocks[s]
    }

    /// Frobenius norm over all components.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    /// Full-tensor inner product ⟨self, other⟩ (conjugate-linear in self).
    pub fn inner(&self, other: &SiteTensor) -> C64 {
        let mut acc = c64(0.0, 0.0);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            for (x, y) in a.iter().zip(b.iter()) {
                acc += x.conj() * y;
            }
        }
        acc
    }

    pub fn scale(&self, z: C64) -> SiteTensor {
        SiteTensor {
            d: self.d,
            chi: self.chi,
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    pub fn add(&self, other: &SiteTensor) -> Result<SiteTensor> {
        self.check_same_shape(other)?;
        Ok(SiteTensor {
            d: self.d,
            chi: self.chi,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &SiteTensor) -> Result<SiteTensor> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    /// Gauge transform A ↦ G A G⁻¹ applied block-wise.
    pub fn gauge(&self, g: &CMat, g_inv: &CMat) -> SiteTensor {
        SiteTensor {
            d: self.d,
            chi: self.chi,
            blocks: self.blocks.iter().map(|b| g * b * g_inv).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(crate::linalg::all_finite)
    }

    pub fn check_same_shape(&self, other: &SiteTensor) -> Result<()> {
        if self.d != other.d || self.chi != other.chi {
            return Err(DehpError::ShapeMismatch(format!(
                "site tensors d={},chi={} vs d={},chi={}",
                self.d, other.d, self.chi, other.chi
            )));
        }
        Ok(())
    }

    /// Flatten to entries ordered (s, row, col); used by the linear solver.
    pub fn to_flat(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.d * self.chi * self.chi);
        for b in &self.blocks {
            for r in 0..self.chi {
                for c in 0..self.chi {
                    v.push(b[(r, c)]);
                }
            }
        }
        v
    }

    pub fn from_flat(d: usize, chi: usize, flat: &[C64]) -> Result<Self> {
        if flat.len() != d * chi * chi {
            return Err(DehpError::ShapeMismatch("flat tensor length".into()));
        }
        let mut t = SiteTensor::zeros(d, chi);
        let mut k = 0;
        for s in 0..d {
            for r in 0..chi {
                for c in 0..chi {
                    t.blocks[s][(r, c)] = flat[k];
                    k += 1;
                }
            }
        }
        Ok(t)
    }
}

/// 2D site tensor: for each physical state, a rank-4 block with legs
/// ordered `(a_x, b_x, a_y, b_y)` (incoming/outgoing in each direction).
#[derive(Debug, Clone, PartialEq)]
pub struct PepsTensor {
    pub d: usize,
    pub chi: usize,
    /// blocks[s] is a flat array of length chi^4 with strides for
    /// (a_x, b_x, a_y, b_y), a_x slowest.
    blocks: Vec<Vec<C64>>,
}

impl PepsTensor {
    pub fn zeros(d: usize, chi: usize) -> Self {
        PepsTensor { d, chi, blocks: vec![vec![c64(0.0, 0.0); chi.pow(4)]; d] }
    }

    #[inline]
    fn idx(&self, ax: usize, bx: usize, ay: usize, by: usize) -> usize {
        ((ax * self.chi + bx) * self.chi + ay) * self.chi + by
    }

    pub fn get(&self, s: usize, ax: usize, bx: usize, ay: usize, by: usize) -> C64 {
        self.blocks[s][self.idx(ax, bx, ay, by)]
    }

    pub fn set(&mut self, s: usize, ax: usize, bx: usize, ay: usize, by: usize, v: C64) {
        let i = self.idx(ax, bx, ay, by);
        self.blocks[s][i] = v;
    }

    pub fn block(&self, s: usize) -> &[C64] {
        &self.blocks[s]
    }

    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, z: C64) -> PepsTensor {
        PepsTensor {
            d: self.d,
            chi: self.chi,
            blocks: self.blocks.iter().map(|b| b.iter().map(|x| x * z).collect()).collect(),
        }
    }

    pub fn add(&self, other: &PepsTensor) -> Result<PepsTensor> {
        self.check_same_shape(other)?;
        Ok(PepsTensor {
            d: self.d,
            chi: self.chi,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    pub fn check_same_shape(&self, other: &PepsTensor) -> Result<()> {
        if self.d != other.d || self.chi != other.chi {
            return Err(DehpError::ShapeMismatch(format!(
                "peps tensors d={},chi={} vs d={},chi={}",
                self.d, other.d, self.chi, other.chi
            )));
        }
        Ok(())
    }

    /// Swap the x and y leg pairs: (a_x, b_x) ↔ (a_y, b_y).
    pub fn transpose_xy(&self) -> PepsTensor {
        let mut out = PepsTensor::zeros(self.d, self.chi);
        for s in 0..self.d {
            for ax in 0..self.chi {
                for bx in 0..self.chi {
                    for ay in 0..self.chi {
                        for by in 0..self.chi {
                            out.set(s, ay, by, ax, bx, self.get(s, ax, bx, ay, by));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Edge slots of a node's error tensors, with the per-slot signs used in
/// the link equations. The signed slot sum must vanish for the global
/// telescoping cancellation.
#[derive(Debug, Clone)]
pub enum ErrorTensorSet {
    /// 1D: the same bond algebra attaches `right` to the edge leaving the
    /// node and `left` to the edge entering it.
    OneD { right: SiteTensor, left: SiteTensor, signs: [f64; 2] },
    /// 2D square lattice: slots ordered (y_out = E1, y_in = E2,
    /// x_out = E3, x_in = E4).
    TwoD { slots: Box<[PepsTensor; 4]>, signs: [f64; 4] },
}

/// Slot labels for reports.
pub const TWO_D_SLOT_NAMES: [&str; 4] = ["y_out", "y_in", "x_out", "x_in"];
