// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use super::{Patch, PatchKind, Vec021};
use crate::{Error, Rect, Result};

/// An element of `O(0, 2, 1) ⋉ ℝ³`:
/// `(x, y, z) ↦ (T(x, y), a x + b y + c z) + translation` with `T ∈ O(2)`, `c ≠ 0`.
///
/// Preserves the degenerate metric and the canonical connection; maps `ξ` to `c ξ`,
/// so `h` of an image scales by `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineIsometry {
    t: [[f64; 2]; 2],
    a: f64,
    b: f64,
    c: f64,
    translation: Vec021,
}

impl AffineIsometry {
    pub fn new(t: [[f64; 2]; 2], a: f64, b: f64, c: f64, translation: Vec021) -> Result<Self> {
        let col0 = (t[0][0], t[1][0]);
        let col1 = (t[0][1], t[1][1]);
        let e00 = col0.0 * col0.0 + col0.1 * col0.1 - 1.0;
        let e11 = col1.0 * col1.0 + col1.1 * col1.1 - 1.0;
        let e01 = col0.0 * col1.0 + col0.1 * col1.1;
        if e00.abs().max(e11.abs()).max(e01.abs()) > 1e-12 {
            return Err(Error::InvalidIsometry("T is not orthogonal"));
        }
        if c == 0.0 || !c.is_finite() || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidIsometry("c must be finite and non-zero"));
        }
        Ok(AffineIsometry { t, a, b, c, translation })
    }

    pub fn identity() -> Self {
        AffineIsometry { t: [[1.0, 0.0], [0.0, 1.0]], a: 0.0, b: 0.0, c: 1.0, translation: Vec021::default() }
    }

    /// Rotation of the xy-plane by `angle`, optionally composed with `y ↦ −y`.
    pub fn planar(angle: f64, reflect: bool, a: f64, b: f64, c: f64, translation: Vec021) -> Result<Self> {
        let (s, co) = angle.sin_cos();
        let sign = if reflect { -1.0 } else { 1.0 };
        AffineIsometry::new([[co, -s * sign], [s, co * sign]], a, b, c, translation)
    }

    pub fn scale_c(&self) -> f64 {
        self.c
    }

    pub fn apply(&self, p: Vec021) -> Vec021 {
        let t = &self.t;
        Vec021::new(
            t[0][0] * p.x + t[0][1] * p.y,
            t[1][0] * p.x + t[1][1] * p.y,
            self.a * p.x + self.b * p.y + self.c * p.z,
        ) + self.translation
    }
}

/// Image of a patch under an affine isometry, on the same parameter domain.
#[derive(Debug, Clone)]
pub struct Transformed<P> {
    iso: AffineIsometry,
    inner: P,
}

impl<P> Transformed<P> {
    pub fn isometry(&self) -> &AffineIsometry {
        &self.iso
    }
}

impl<P: Patch> Patch for Transformed<P> {
    fn domain(&self) -> Rect {
        self.inner.domain()
    }
    fn kind(&self) -> PatchKind {
        // A graph stays a graph only when the xy-part is the identity.
        match self.inner.kind() {
            PatchKind::Graph if self.iso.t == [[1.0, 0.0], [0.0, 1.0]] && self.iso.translation.x == 0.0 && self.iso.translation.y == 0.0 => {
                PatchKind::Graph
            }
            PatchKind::Weierstrass => PatchKind::Weierstrass,
            _ => PatchKind::ClosedForm,
        }
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        self.inner.point(u, v).map(|p| self.iso.apply(p))
    }
}

pub fn apply_isometry<P: Patch>(iso: AffineIsometry, s: P) -> Transformed<P> {
    Transformed { iso, inner: s }
}
