//! Lattice geometries and their oriented edge lists.
//!
//! Site indexing: 1D sites are `0..n`; on the torus site `(x, y)` has index
//! `y * lx + x`. Site 0 is always the slowest-varying index of a state
//! vector. A direction of length 2 lists both wrap edges explicitly, so a
//! Hamiltonian summed over `edges()` doubles those bonds — the per-edge
//! algebra holds edge-by-edge, which keeps zero-energy statements intact.

use serde::{Deserialize, Serialize};

/// Which lattice axis an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Chain,
    X,
    Y,
}

/// An oriented edge: `a` is the first site (the one the Hamiltonian
/// density's first physical slot acts on).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lattice {
    Ring { n: usize },
    OpenChain { n: usize },
    Torus { lx: usize, ly: usize },
}

impl Lattice {
    pub fn sites(&self) -> usize {
        match *self {
            Lattice::Ring { n } | Lattice::OpenChain { n } => n,
            Lattice::Torus { lx, ly } => lx * ly,
        }
    }

    /// Oriented nearest-neighbour edges. Rings with n = 2 and length-2 torus
    /// directions contain doubled edges by construction.
    pub fn edges(&self) -> Vec<Edge> {
        match *self {
            Lattice::Ring { n } => {
                if n < 2 {
                    return Vec::new();
                }
                (0..n)
                    .map(|i| Edge { a: i, b: (i + 1) % n, direction: Direction::Chain })
                    .collect()
            }
            Lattice::OpenChain { n } => (0..n.saturating_sub(1))
                .map(|i| Edge { a: i, b: i + 1, direction: Direction::Chain })
                .collect(),
            Lattice::Torus { lx, ly } => {
                let mut edges = Vec::with_capacity(2 * lx * ly);
                for y in 0..ly {
                    for x in 0..lx {
                        let i = y * lx + x;
                        edges.push(Edge { a: i, b: y * lx + (x + 1) % lx, direction: Direction::X });
                        edges.push(Edge { a: i, b: ((y + 1) % ly) * lx + x, direction: Direction::Y });
                    }
                }
                edges
            }
        }
    }

    /// Human-readable identifier used in reports.
    pub fn label(&self) -> String {
        match *self {
            Lattice::Ring { n } => format!("ring({n})"),
            Lattice::OpenChain { n } => format!("open_chain({n})"),
            Lattice::Torus { lx, ly } => format!("torus({lx}x{ly})"),
        }
    }
}
