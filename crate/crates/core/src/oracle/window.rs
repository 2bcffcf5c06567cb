//! Finite Fourier-lattice windows.

use crate::symbol::BaseManifold;
use serde::Serialize;

/// Lattice dimension of the boundary manifold's Fourier basis: one for
/// `S^1` (point base), two for `S^1 x S^1` (circle base).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WindowDim {
    One,
    Two,
}

impl WindowDim {
    pub fn from_base(base: BaseManifold) -> Self {
        match base {
            BaseManifold::Point => WindowDim::One,
            BaseManifold::Circle => WindowDim::Two,
        }
    }
}

/// The symmetric window `{ m : |m| <= R }` (d = 1) or
/// `{ (m, n) : |m| <= R, |n| <= R }` (d = 2), enumerated in lexicographic
/// order with k components per lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationWindow {
    pub radius: usize,
    pub dim: WindowDim,
}

impl TruncationWindow {
    pub fn new(radius: usize, dim: WindowDim) -> Self {
        assert!(radius >= 1, "truncation radius must be positive");
        TruncationWindow { radius, dim }
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn site_count(&self) -> usize {
        match self.dim {
            WindowDim::One => self.side(),
            WindowDim::Two => self.side() * self.side(),
        }
    }

    pub fn matrix_dim(&self, k: usize) -> usize {
        k * self.site_count()
    }

    pub fn contains(&self, site: (i64, i64)) -> bool {
        let r = self.radius as i64;
        match self.dim {
            WindowDim::One => site.0.abs() <= r && site.1 == 0,
            WindowDim::Two => site.0.abs() <= r && site.1.abs() <= r,
        }
    }

    /// Position of a site in the enumeration, if inside the window.
    pub fn index_of(&self, site: (i64, i64)) -> Option<usize> {
        if !self.contains(site) {
            return None;
        }
        let r = self.radius as i64;
        Some(match self.dim {
            WindowDim::One => (site.0 + r) as usize,
            WindowDim::Two => ((site.0 + r) * self.side() as i64 + (site.1 + r)) as usize,
        })
    }

    pub fn sites(&self) -> Vec<(i64, i64)> {
        let r = self.radius as i64;
        match self.dim {
            WindowDim::One => (-r..=r).map(|m| (m, 0)).collect(),
            WindowDim::Two => {
                let mut out = Vec::with_capacity(self.site_count());
                for m in -r..=r {
                    for n in -r..=r {
                        out.push((m, n));
                    }
                }
                out
            }
        }
    }
}
