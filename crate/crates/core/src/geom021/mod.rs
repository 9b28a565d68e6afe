//! Geometry of ℝ^{0,2,1}: ℝ³ with the degenerate metric `dx² + dy²`.
//!
//! The `z` direction is metrically invisible. The constant field
//! [`XI`] `= (0, 0, 1)` spans every normal space and splits second
//! derivatives of an immersion into a tangential part and the second
//! fundamental form `h`.

mod brioschi;
mod curve;
mod diff;
mod forms;
mod isometry;

use alloc::sync::Arc;
use core::ops::{Add, Mul, Neg, Sub};

// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Rect, Result};

pub use brioschi::brioschi_curvature;
pub use curve::{arc_length_admissible, curve_speed, is_null_curve, Admissibility, Curve, NullCurveWitness};
pub(crate) use diff::{first_partials, jet};
pub use forms::{
    classify_point, codazzi_residual, codazzi_residual_field, fundamental_forms, h_lambda, intrinsic_curvature,
    is_degenerate, mean_curvature, relative_gauss_curvature, FundamentalForms, PointClass, DEGENERACY_TOL,
};
pub use isometry::{apply_isometry, AffineIsometry, Transformed};

/// A vector (or point) of ℝ^{0,2,1}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec021 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The transversal field `ξ = (0, 0, 1)`.
pub const XI: Vec021 = Vec021 { x: 0.0, y: 0.0, z: 1.0 };

impl Vec021 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec021 { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec021::new(a[0], a[1], a[2])
    }

    /// Degenerate norm `√(x² + y²)`; ignores `z`.
    pub fn deg_norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// `x + y + z`, the contraction used by `L_λ`.
    pub fn component_sum(self) -> f64 {
        self.x + self.y + self.z
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for Vec021 {
    type Output = Vec021;
    fn add(self, o: Vec021) -> Vec021 {
        Vec021::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec021 {
    type Output = Vec021;
    fn sub(self, o: Vec021) -> Vec021 {
        Vec021::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec021 {
    type Output = Vec021;
    fn neg(self) -> Vec021 {
        Vec021::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec021 {
    type Output = Vec021;
    fn mul(self, s: f64) -> Vec021 {
        Vec021::new(self.x * s, self.y * s, self.z * s)
    }
}

/// The degenerate inner product `v.x w.x + v.y w.y`.
pub fn deg_inner(v: Vec021, w: Vec021) -> f64 {
    v.x * w.x + v.y * w.y
}

/// How a patch was produced; some operations need flat graph coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchKind {
    ClosedForm,
    Weierstrass,
    /// `(u, v, F(u, v))`: the induced metric is exactly `du² + dv²`.
    Graph,
}

/// A parametrized surface `(u, v) ↦ ℝ^{0,2,1}` over a rectangle.
pub trait Patch: Send + Sync {
    fn domain(&self) -> Rect;
    fn kind(&self) -> PatchKind;
    fn point(&self, u: f64, v: f64) -> Result<Vec021>;
}

impl<P: Patch + ?Sized> Patch for &P {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn kind(&self) -> PatchKind {
        (**self).kind()
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        (**self).point(u, v)
    }
}

impl<P: Patch + ?Sized> Patch for alloc::boxed::Box<P> {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn kind(&self) -> PatchKind {
        (**self).kind()
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        (**self).point(u, v)
    }
}

impl<P: Patch + ?Sized> Patch for Arc<P> {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn kind(&self) -> PatchKind {
        (**self).kind()
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        (**self).point(u, v)
    }
}

type SurfaceFn = dyn Fn(f64, f64) -> Vec021 + Send + Sync;

/// A patch given by a closed-form Rust closure.
#[derive(Clone)]
pub struct FnPatch {
    f: Arc<SurfaceFn>,
    domain: Rect,
    kind: PatchKind,
}

impl FnPatch {
    pub fn new(domain: Rect, kind: PatchKind, f: impl Fn(f64, f64) -> Vec021 + Send + Sync + 'static) -> Self {
        FnPatch { f: Arc::new(f), domain, kind }
    }

    /// The graph `(u, v, height(u, v))`.
    pub fn graph(domain: Rect, height: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        FnPatch::new(domain, PatchKind::Graph, move |u, v| Vec021::new(u, v, height(u, v)))
    }
}

impl core::fmt::Debug for FnPatch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FnPatch").field("domain", &self.domain).field("kind", &self.kind).finish()
    }
}

impl Patch for FnPatch {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn kind(&self) -> PatchKind {
        self.kind
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        let p = (self.f)(u, v);
        if p.x.is_finite() && p.y.is_finite() && p.z.is_finite() {
            Ok(p)
        } else {
            Err(crate::Error::Overflow)
        }
    }
}

/// Graph of a real expression in `u`, `v`.
#[derive(Debug, Clone)]
pub struct ExprGraph {
    height: crate::cxparse::Expr,
    domain: Rect,
}

impl ExprGraph {
    pub fn new(height: crate::cxparse::Expr, domain: Rect) -> Self {
        ExprGraph { height, domain }
    }

    pub fn parse(src: &str, domain: Rect) -> Result<Self> {
        Ok(ExprGraph::new(crate::cxparse::parse_real(src)?, domain))
    }

    pub fn height(&self) -> &crate::cxparse::Expr {
        &self.height
    }
}

impl Patch for ExprGraph {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn kind(&self) -> PatchKind {
        PatchKind::Graph
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        Ok(Vec021::new(u, v, crate::cxparse::eval_real(&self.height, &[u, v])?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deg_inner_examples() {
        assert_eq!(deg_inner(Vec021::new(1.0, 2.0, 3.0), Vec021::new(4.0, 5.0, 6.0)), 14.0);
        assert_eq!(deg_inner(Vec021::new(0.0, 0.0, 7.0), Vec021::new(0.0, 0.0, 7.0)), 0.0);
        assert_eq!(deg_inner(Vec021::new(1.0, 0.0, 0.0), Vec021::new(0.0, 1.0, 9.0)), 0.0);
    }

    #[test]
    fn xi_is_null() {
        assert_eq!(XI.deg_norm(), 0.0);
    }
}
