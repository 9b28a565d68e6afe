//! Parameter rectangles and deterministic sampling grids.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Closed rectangle `[u0, u1] × [v0, v1]`. Also used for domains in ℂ with `w = u + iv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        let r = Rect { u0, u1, v0, v1 };
        if !(u0.is_finite() && u1.is_finite() && v0.is_finite() && v1.is_finite()) || u1 <= u0 || v1 <= v0 {
            return Err(Error::InvalidArgument("domain must satisfy u0 < u1 and v0 < v1"));
        }
        Ok(r)
    }

    /// `[-1, 1]²`.
    pub const fn unit_square() -> Self {
        Rect { u0: -1.0, u1: 1.0, v0: -1.0, v1: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.u1 - self.u0
    }

    pub fn height(&self) -> f64 {
        self.v1 - self.v0
    }

    pub fn extent(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u0 + self.u1), 0.5 * (self.v0 + self.v1))
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        u >= self.u0 && u <= self.u1 && v >= self.v0 && v <= self.v1
    }

    /// Contains with a slack proportional to the extent.
    pub fn contains_loose(&self, u: f64, v: f64, rel: f64) -> bool {
        let s = rel * self.extent();
        u >= self.u0 - s && u <= self.u1 + s && v >= self.v0 - s && v <= self.v1 + s
    }

    /// Distance from an interior point to the boundary (0 outside).
    pub fn boundary_distance(&self, u: f64, v: f64) -> f64 {
        if !self.contains(u, v) {
            return 0.0;
        }
        (u - self.u0).min(self.u1 - u).min(v - self.v0).min(self.v1 - v)
    }

    /// Shrinks by `margin` on every side.
    pub fn inset(&self, margin: f64) -> Result<Self> {
        Rect::new(self.u0 + margin, self.u1 - margin, self.v0 + margin, self.v1 - margin)
    }

    /// Default finite-difference step: `5e-4` of the extent.
    pub fn default_step(&self) -> f64 {
        5e-4 * self.extent()
    }
}

/// Where the samples of a [`Sampling`] sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `nu × nv` nodes including the boundary (mesh vertices).
    Nodes,
    /// Centers of an `nu × nv` partition into cells; never touches the boundary.
    Cells,
}

/// A rectangular grid of parameter samples, visited row-major (`v` outer, `u` inner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub rect: Rect,
    pub nu: usize,
    pub nv: usize,
    pub layout: Layout,
}

impl Sampling {
    pub fn nodes(rect: Rect, nu: usize, nv: usize) -> Result<Self> {
        Self::with_layout(rect, nu, nv, Layout::Nodes)
    }

    pub fn cells(rect: Rect, nu: usize, nv: usize) -> Result<Self> {
        Self::with_layout(rect, nu, nv, Layout::Cells)
    }

    pub fn with_layout(rect: Rect, nu: usize, nv: usize, layout: Layout) -> Result<Self> {
        let min = match layout {
            Layout::Nodes => 2,
            Layout::Cells => 1,
        };
        if nu < min || nv < min {
            return Err(Error::InvalidArgument("grid too small"));
        }
        Ok(Sampling { rect, nu, nv, layout })
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u_at(&self, i: usize) -> f64 {
        let r = &self.rect;
        match self.layout {
            Layout::Nodes if i + 1 == self.nu => r.u1,
            Layout::Nodes => r.u0 + r.width() * i as f64 / (self.nu - 1) as f64,
            Layout::Cells => r.u0 + r.width() * (i as f64 + 0.5) / self.nu as f64,
        }
    }

    pub fn v_at(&self, j: usize) -> f64 {
        let r = &self.rect;
        match self.layout {
            Layout::Nodes if j + 1 == self.nv => r.v1,
            Layout::Nodes => r.v0 + r.height() * j as f64 / (self.nv - 1) as f64,
            Layout::Cells => r.v0 + r.height() * (j as f64 + 0.5) / self.nv as f64,
        }
    }

    /// Spacing between neighbouring samples along `u` and `v`.
    pub fn spacing(&self) -> (f64, f64) {
        match self.layout {
            Layout::Nodes => (
                self.rect.width() / (self.nu - 1) as f64,
                self.rect.height() / (self.nv - 1) as f64,
            ),
            Layout::Cells => (self.rect.width() / self.nu as f64, self.rect.height() / self.nv as f64),
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    /// All sample points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nv).flat_map(move |j| (0..self.nu).map(move |i| (self.u_at(i), self.v_at(j))))
    }

    pub fn to_vec(&self) -> Vec<(f64, f64)> {
        self.points().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_grid_hits_corners() {
        let s = Sampling::nodes(Rect::unit_square(), 64, 64).unwrap();
        assert_eq!(s.u_at(0), -1.0);
        assert_eq!(s.u_at(63), 1.0);
        assert_eq!(s.len(), 4096);
    }

    #[test]
    fn cell_grid_stays_inside() {
        let s = Sampling::cells(Rect::unit_square(), 4, 4).unwrap();
        assert!(s.points().all(|(u, v)| u.abs() < 1.0 && v.abs() < 1.0));
        assert!((s.u_at(0) + 0.75).abs() < 1e-15);
    }

    #[test]
    fn degenerate_rect_rejected() {
        assert!(Rect::new(1.0, 1.0, 0.0, 1.0).is_err());
    }
}
