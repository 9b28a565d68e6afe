//! The isometric embedding `ι(x, y, z) = (z, x, y, z)` of ℝ^{0,2,1} into
//! Minkowski space ℝ⁴₁ and verification of flat zero-mean-curvature images.
//!
//! `ι` lands in the degenerate hyperplane `x₁ = x₄`; its image of a
//! d-minimal surface is spacelike, flat, and has `H⃗ = ½Δφ (1, 0, 0, 1) = 0`.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cxparse::{eval_real, parse_real, Expr};
use crate::geom021::{brioschi_curvature, first_partials, fundamental_forms, jet, Patch, PatchKind, Vec021};
use crate::{Error, Layout, Rect, Result, Sampling};

/// Leading-minor threshold of the spacelike test.
pub const SPACELIKE_TOL: f64 = 1e-10;

/// A vector of ℝ⁴₁ with `⟨v, v⟩₁ = −x₁² + x₂² + x₃² + x₄²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec4M {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec4M {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4M { x1, x2, x3, x4 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4M::new(a[0], a[1], a[2], a[3])
    }

    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs()).max(self.x4.abs())
    }
}

impl Add for Vec4M {
    type Output = Vec4M;
    fn add(self, o: Vec4M) -> Vec4M {
        Vec4M::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Vec4M {
    type Output = Vec4M;
    fn sub(self, o: Vec4M) -> Vec4M {
        Vec4M::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Mul<f64> for Vec4M {
    type Output = Vec4M;
    fn mul(self, s: f64) -> Vec4M {
        Vec4M::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }
}

pub fn lorentz_inner(v: Vec4M, w: Vec4M) -> f64 {
    // Grouped so that on ι's image the x₁/x₄ terms cancel exactly first.
    (v.x2 * w.x2 + v.x3 * w.x3) + (v.x4 * w.x4 - v.x1 * w.x1)
}

pub fn iota_embed(p: Vec021) -> Vec4M {
    Vec4M::new(p.z, p.x, p.y, p.z)
}

/// A parametrized surface in ℝ⁴₁.
pub trait MinkPatch: Send + Sync {
    fn domain(&self) -> Rect;
    fn point(&self, u: f64, v: f64) -> Result<Vec4M>;
}

impl<M: MinkPatch + ?Sized> MinkPatch for &M {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec4M> {
        (**self).point(u, v)
    }
}

/// `ι ∘ f`.
#[derive(Debug, Clone)]
pub struct Embedded<P>(pub P);

impl<P: Patch> MinkPatch for Embedded<P> {
    fn domain(&self) -> Rect {
        self.0.domain()
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec4M> {
        self.0.point(u, v).map(iota_embed)
    }
}

pub fn embed<P: Patch>(p: P) -> Embedded<P> {
    Embedded(p)
}

/// Four real expressions in `u`, `v`.
#[derive(Debug, Clone)]
pub struct ExprMinkSurface {
    comps: [Expr; 4],
    domain: Rect,
}

impl ExprMinkSurface {
    pub fn parse(x1: &str, x2: &str, x3: &str, x4: &str, domain: Rect) -> Result<Self> {
        Ok(ExprMinkSurface { comps: [parse_real(x1)?, parse_real(x2)?, parse_real(x3)?, parse_real(x4)?], domain })
    }
}

impl MinkPatch for ExprMinkSurface {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec4M> {
        let mut out = [0.0; 4];
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = eval_real(c, &[u, v])?;
        }
        Ok(Vec4M::from_array(out))
    }
}

/// A closure-backed surface in ℝ⁴₁.
pub struct FnMink<F> {
    f: F,
    domain: Rect,
}

impl<F: Fn(f64, f64) -> Vec4M + Send + Sync> FnMink<F> {
    pub fn new(domain: Rect, f: F) -> Self {
        FnMink { f, domain }
    }
}

impl<F: Fn(f64, f64) -> Vec4M + Send + Sync> MinkPatch for FnMink<F> {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec4M> {
        Ok((self.f)(u, v))
    }
}

fn spacelike(g: [f64; 3]) -> bool {
    g[0] > SPACELIKE_TOL && g[0] * g[2] - g[1] * g[1] > SPACELIKE_TOL
}

fn gram(a: Vec4M, b: Vec4M) -> [f64; 3] {
    [lorentz_inner(a, a), lorentz_inner(a, b), lorentz_inner(b, b)]
}

/// `H⃗ = ½ g^{ij} (f_ij)^⊥`, the tangential part removed with the Lorentz Gram matrix.
pub fn mean_curvature_vector<M: MinkPatch + ?Sized>(s: &M, u: f64, v: f64, step: f64) -> Result<Vec4M> {
    let j = jet(|a, b| s.point(a, b).map(Vec4M::to_array), u, v, step)?;
    let (fu, fv) = (Vec4M::from_array(j.du), Vec4M::from_array(j.dv));
    let g = gram(fu, fv);
    if !spacelike(g) {
        return Err(Error::NonSpacelike { u, v });
    }
    let det = g[0] * g[2] - g[1] * g[1];
    let normal = |x: Vec4M| {
        let (b1, b2) = (lorentz_inner(x, fu), lorentz_inner(x, fv));
        let c1 = (g[2] * b1 - g[1] * b2) / det;
        let c2 = (g[0] * b2 - g[1] * b1) / det;
        x - fu * c1 - fv * c2
    };
    let (nuu, nuv, nvv) = (normal(Vec4M::from_array(j.duu)), normal(Vec4M::from_array(j.duv)), normal(Vec4M::from_array(j.dvv)));
    // g^{-1} = [g22, −g12; −g12, g11] / det
    Ok((nuu * g[2] - nuv * (2.0 * g[1]) + nvv * g[0]) * (0.5 / det))
}

/// Gaussian curvature of the induced metric (Brioschi). `step` is the outer
/// difference; the metric uses a step ten times smaller.
pub fn gaussian_curvature_induced<M: MinkPatch + ?Sized>(s: &M, u: f64, v: f64, step: f64) -> Result<f64> {
    let inner = 0.1 * step;
    let metric = |a: f64, b: f64| -> Result<[f64; 3]> {
        let (fu, fv) = first_partials(|x, y| s.point(x, y).map(Vec4M::to_array), a, b, inner)?;
        let g = gram(Vec4M::from_array(fu), Vec4M::from_array(fv));
        if !spacelike(g) {
            return Err(Error::NonSpacelike { u: a, v: b });
        }
        Ok(g)
    };
    brioschi_curvature(metric, u, v, step)
}

/// Outcome of [`verify_flat_zmc`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlatZmcReport {
    pub max_mean_curvature: f64,
    pub max_mean_curvature_at: (f64, f64),
    pub max_gauss_curvature: f64,
    pub max_gauss_curvature_at: (f64, f64),
    /// Samples where the induced metric is not positive definite.
    pub non_spacelike: Vec<(f64, f64)>,
    pub samples: usize,
    pub tol: f64,
    pub pass: bool,
}

impl FlatZmcReport {
    pub fn is_zmc(&self) -> bool {
        self.max_mean_curvature <= self.tol
    }
    pub fn is_flat(&self) -> bool {
        self.max_gauss_curvature <= self.tol
    }
}

/// Checks `‖H⃗‖∞ ≤ tol` and `|K| ≤ tol` at every sample of `grid`.
pub fn verify_flat_zmc<M: MinkPatch + ?Sized>(s: &M, grid: &Sampling, tol: f64) -> FlatZmcReport {
    let ext = grid.rect.extent();
    let (h_step, k_step) = (grid.rect.default_step(), 5e-3 * ext);
    let mut r = FlatZmcReport {
        max_mean_curvature: 0.0,
        max_mean_curvature_at: grid.rect.center(),
        max_gauss_curvature: 0.0,
        max_gauss_curvature_at: grid.rect.center(),
        non_spacelike: Vec::new(),
        samples: grid.len(),
        tol,
        pass: false,
    };
    for (u, v) in grid.points() {
        let h = mean_curvature_vector(s, u, v, h_step).map(Vec4M::max_abs);
        let k = gaussian_curvature_induced(s, u, v, k_step).map(f64::abs);
        match (h, k) {
            (Ok(h), Ok(k)) => {
                // NaN compares false; keep it visible as an infinite maximum.
                let h = if h.is_nan() { f64::INFINITY } else { h };
                let k = if k.is_nan() { f64::INFINITY } else { k };
                if h > r.max_mean_curvature {
                    r.max_mean_curvature = h;
                    r.max_mean_curvature_at = (u, v);
                }
                if k > r.max_gauss_curvature {
                    r.max_gauss_curvature = k;
                    r.max_gauss_curvature_at = (u, v);
                }
            }
            _ => r.non_spacelike.push((u, v)),
        }
    }
    r.pass = r.non_spacelike.is_empty() && r.is_zmc() && r.is_flat();
    r
}

/// A connected set of samples where `h` vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct ECluster {
    /// Grid samples (indices) with `‖h‖∞ < tol`.
    pub nodes: Vec<(usize, usize)>,
    /// Representative point: the refined zero of `h` when one was found.
    pub center: (f64, f64),
    pub refined: bool,
    /// Small and at least five cells away from any other cluster.
    pub isolated: bool,
}

/// The vanishing locus `E = {h = 0}` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ELocus {
    pub clusters: Vec<ECluster>,
}

impl ELocus {
    /// Clusters that are not isolated points: totally geodesic region suspects.
    pub fn suspicious(&self) -> impl Iterator<Item = &ECluster> {
        self.clusters.iter().filter(|c| !c.isolated)
    }

    pub fn is_discrete(&self) -> bool {
        self.clusters.iter().all(|c| c.isolated)
    }
}

fn h_at<P: Patch + ?Sized>(s: &P, u: f64, v: f64, step: f64) -> Result<[f64; 3]> {
    fundamental_forms(s, u, v, step).map(|f| f.h())
}

fn sup(h: [f64; 3]) -> f64 {
    h[0].abs().max(h[1].abs()).max(h[2].abs())
}

// Gauss–Newton on the overdetermined system h(u, v) = 0.
fn refine_h<P: Patch + ?Sized>(s: &P, start: (f64, f64), step: f64, delta: f64) -> Option<(f64, f64)> {
    let (mut u, mut v) = start;
    for _ in 0..30 {
        let r = h_at(s, u, v, step).ok()?;
        let du = h_at(s, u + delta, v, step).ok()?;
        let dum = h_at(s, u - delta, v, step).ok()?;
        let dv = h_at(s, u, v + delta, step).ok()?;
        let dvm = h_at(s, u, v - delta, step).ok()?;
        let ju: [f64; 3] = core::array::from_fn(|k| (du[k] - dum[k]) / (2.0 * delta));
        let jv: [f64; 3] = core::array::from_fn(|k| (dv[k] - dvm[k]) / (2.0 * delta));
        let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let (a, b, c) = (dot(&ju, &ju), dot(&ju, &jv), dot(&jv, &jv));
        let det = a * c - b * b;
        if !(det > 1e-14 * (a * c).max(1e-300)) {
            return None;
        }
        let (g1, g2) = (dot(&ju, &r), dot(&jv, &r));
        let su = (c * g1 - b * g2) / det;
        let sv = (a * g2 - b * g1) / det;
        u -= su;
        v -= sv;
        if su.hypot(sv) <= 1e-13 * (1.0 + u.hypot(v)) {
            break;
        }
    }
    Some((u, v))
}

/// Samples of `grid` with `‖h‖∞ < tol`, grouped into 8-connected clusters.
/// Local minima of `‖h‖∞` whose linear estimate reaches zero within two
/// cells are refined by Gauss–Newton, so isolated zeros between samples are
/// found too. Clusters larger than 2×2 samples or within five cells of
/// another cluster are flagged as not isolated.
pub fn vanishing_h_locus<P: Patch + ?Sized>(s: &P, grid: &Sampling, tol: f64) -> Result<ELocus> {
    let g = grid;
    let step = g.rect.default_step();
    let mut vals = Vec::with_capacity(g.len());
    for (u, v) in g.points() {
        vals.push(sup(h_at(s, u, v, step)?));
    }
    let (du, dv) = g.spacing();
    let marked: Vec<bool> = vals.iter().map(|x| *x < tol).collect();

    // Clusters of marked samples.
    let mut label = alloc::vec![usize::MAX; g.len()];
    let mut clusters: Vec<ECluster> = Vec::new();
    for start in 0..g.len() {
        if !marked[start] || label[start] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let mut stack = alloc::vec![start];
        label[start] = id;
        let mut nodes = Vec::new();
        while let Some(k) = stack.pop() {
            let (i, j) = (k % g.nu, k / g.nu);
            nodes.push((i, j));
            for jj in j.saturating_sub(1)..=(j + 1).min(g.nv - 1) {
                for ii in i.saturating_sub(1)..=(i + 1).min(g.nu - 1) {
                    let n = g.index(ii, jj);
                    if marked[n] && label[n] == usize::MAX {
                        label[n] = id;
                        stack.push(n);
                    }
                }
            }
        }
        nodes.sort_unstable_by_key(|&(i, j)| (j, i));
        let m = nodes.len() as f64;
        let cu = nodes.iter().map(|&(i, _)| g.u_at(i)).sum::<f64>() / m;
        let cv = nodes.iter().map(|&(_, j)| g.v_at(j)).sum::<f64>() / m;
        clusters.push(ECluster { nodes, center: (cu, cv), refined: false, isolated: false });
    }

    // Seeds between samples.
    let diag = du.hypot(dv);
    let delta = 0.1 * du.min(dv);
    for j in 0..g.nv {
        for i in 0..g.nu {
            let k = g.index(i, j);
            if marked[k] || !vals[k].is_finite() {
                continue;
            }
            let neighbours = (j.saturating_sub(1)..=(j + 1).min(g.nv - 1))
                .flat_map(|jj| (i.saturating_sub(1)..=(i + 1).min(g.nu - 1)).map(move |ii| (ii, jj)));
            if !neighbours.clone().all(|(ii, jj)| vals[g.index(ii, jj)] >= vals[k]) {
                continue;
            }
            // Steepest neighbouring rise estimates the gradient of ‖h‖∞.
            let slope = neighbours
                .map(|(ii, jj)| {
                    let d = (g.u_at(ii) - g.u_at(i)).hypot(g.v_at(jj) - g.v_at(j));
                    if d > 0.0 { (vals[g.index(ii, jj)] - vals[k]) / d } else { 0.0 }
                })
                .fold(0.0, f64::max);
            if !(slope > 0.0 && vals[k] / slope <= 2.0 * diag) {
                continue;
            }
            let seed = (g.u_at(i), g.v_at(j));
            let Some(z) = refine_h(s, seed, step, delta) else { continue };
            let near = (z.0 - seed.0).hypot(z.1 - seed.1) <= 2.0 * diag;
            if !near || !g.rect.contains(z.0, z.1) || h_at(s, z.0, z.1, step).map(sup).unwrap_or(f64::INFINITY) >= tol {
                continue;
            }
            let dup = clusters.iter_mut().find(|c| (c.center.0 - z.0).abs() <= du && (c.center.1 - z.1).abs() <= dv);
            match dup {
                Some(c) => {
                    if c.nodes.len() <= 4 {
                        c.center = z;
                        c.refined = true;
                    }
                }
                None => clusters.push(ECluster { nodes: Vec::new(), center: z, refined: true, isolated: false }),
            }
        }
    }

    let n = clusters.len();
    for a in 0..n {
        let small = clusters[a].nodes.len() <= 4;
        let (ua, va) = clusters[a].center;
        let alone = (0..n).filter(|&b| b != a).all(|b| {
            let (ub, vb) = clusters[b].center;
            ((ua - ub) / du).abs().max(((va - vb) / dv).abs()) > 5.0
        });
        clusters[a].isolated = small && alone;
    }
    clusters.sort_by(|a, b| a.center.1.total_cmp(&b.center.1).then(a.center.0.total_cmp(&b.center.0)));
    Ok(ELocus { clusters })
}

/// `(x₁, x₂, x₃, x₄) ↦ (x₂, x₃, x₄)` on a surface in the slice `x₁ = x₄`.
#[derive(Debug, Clone)]
pub struct SlicePatch<M> {
    inner: M,
    kind: PatchKind,
}

impl<M: MinkPatch> Patch for SlicePatch<M> {
    fn domain(&self) -> Rect {
        self.inner.domain()
    }
    fn kind(&self) -> PatchKind {
        self.kind
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        let p = self.inner.point(u, v)?;
        Ok(Vec021::new(p.x2, p.x3, p.x4))
    }
}

/// Inverse of `ι` on its image, after checking `|x₁ − x₄| ≤ tol` on a 17×17
/// grid. The result is graph-kind when `(x₂, x₃) = (u, v)` at every check sample.
pub fn slice_project<M: MinkPatch>(s: M, tol: f64) -> Result<SlicePatch<M>> {
    let grid = Sampling::with_layout(s.domain(), 17, 17, Layout::Nodes)?;
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut graph = true;
    for (u, v) in grid.points() {
        let p = s.point(u, v)?;
        let gap = (p.x1 - p.x4).abs();
        if gap > tol && worst.is_none_or(|w| gap > w.2) {
            worst = Some((u, v, gap));
        }
        graph &= p.x2 == u && p.x3 == v;
    }
    if let Some((u, v, gap)) = worst {
        return Err(Error::NotInSlice { u, v, gap });
    }
    Ok(SlicePatch { inner: s, kind: if graph { PatchKind::Graph } else { PatchKind::ClosedForm } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom021::{deg_inner, ExprGraph, FnPatch};

    fn sq() -> Rect {
        Rect::unit_square()
    }

    #[test]
    fn inner_products() {
        let e1 = Vec4M::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(lorentz_inner(e1, e1), -1.0);
        let l = Vec4M::new(1.0, 0.0, 0.0, 1.0);
        assert_eq!(lorentz_inner(l, l), 0.0);
        let w = Vec4M::new(0.0, 1.0, 2.0, 3.0);
        assert_eq!(lorentz_inner(w, w), 14.0);
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota_embed(Vec021::new(1.0, 2.0, 3.0)), Vec4M::new(3.0, 1.0, 2.0, 3.0));
        assert_eq!(iota_embed(Vec021::default()), Vec4M::default());
        let (a, b) = (Vec021::new(0.3, -1.2, 7.0), Vec021::new(2.0, 0.5, -4.0));
        let d = a - b;
        assert_eq!(deg_inner(d, d), lorentz_inner(iota_embed(a) - iota_embed(b), iota_embed(a) - iota_embed(b)));
    }

    #[test]
    fn mean_curvature_vectors() {
        let step = sq().default_step();
        for src in ["u^3-3*u*v^2", "u*v"] {
            let s = embed(ExprGraph::parse(src, sq()).unwrap());
            for (u, v) in [(0.2, 0.3), (-0.6, 0.1), (0.8, -0.7)] {
                assert!(mean_curvature_vector(&s, u, v, step).unwrap().max_abs() < 1e-6);
            }
        }
        let bowl = ExprMinkSurface::parse("0", "u", "v", "u^2+v^2", sq()).unwrap();
        let h = mean_curvature_vector(&bowl, 0.0, 0.0, step).unwrap();
        assert!((h - Vec4M::new(0.0, 0.0, 0.0, 2.0)).max_abs() < 1e-6, "{h:?}");
    }

    #[test]
    fn lightlike_mean_curvature_direction() {
        let s = embed(FnPatch::graph(sq(), |u, v| u * u + v * v));
        let h = mean_curvature_vector(&s, 0.3, -0.4, sq().default_step()).unwrap();
        assert!((h - Vec4M::new(2.0, 0.0, 0.0, 2.0)).max_abs() < 1e-6, "{h:?}");
    }

    #[test]
    fn induced_curvature() {
        let s = embed(FnPatch::new(sq(), PatchKind::ClosedForm, |u, v| {
            Vec021::new((u + 2.0) * v.cos(), (u + 2.0) * v.sin(), u * v)
        }));
        assert!(gaussian_curvature_induced(&s, 0.1, 0.2, 1e-2).unwrap().abs() < 1e-5);
        let plane = ExprMinkSurface::parse("0", "u", "v", "0", sq()).unwrap();
        assert!(gaussian_curvature_induced(&plane, 0.1, 0.2, 1e-2).unwrap().abs() < 1e-12);
        let r = 3.0;
        let sphere = FnMink::new(Rect::new(0.5, 2.5, -1.0, 1.0).unwrap(), move |a: f64, b: f64| {
            Vec4M::new(0.0, r * a.sin() * b.cos(), r * a.sin() * b.sin(), r * a.cos())
        });
        let k = gaussian_curvature_induced(&sphere, 1.5, 0.0, 1e-2).unwrap();
        assert!((k * r * r - 1.0).abs() < 0.02);
    }

    #[test]
    fn timelike_is_rejected() {
        let s = ExprMinkSurface::parse("2*u", "u", "v", "0", sq()).unwrap();
        assert!(matches!(mean_curvature_vector(&s, 0.0, 0.0, 1e-3), Err(Error::NonSpacelike { .. })));
    }

    #[test]
    fn flat_zmc_verdicts() {
        let grid = Sampling::cells(sq(), 8, 8).unwrap();
        let ok = verify_flat_zmc(&embed(ExprGraph::parse("u^3-3*u*v^2", sq()).unwrap()), &grid, 1e-5);
        assert!(ok.pass, "{ok:?}");
        let bowl = verify_flat_zmc(&ExprMinkSurface::parse("0", "u", "v", "u^2+v^2", sq()).unwrap(), &grid, 1e-5);
        assert!(!bowl.pass && !bowl.is_zmc());
        let par = verify_flat_zmc(&embed(ExprGraph::parse("u^2+v^2", sq()).unwrap()), &grid, 1e-5);
        assert!(!par.pass && par.is_flat() && (par.max_mean_curvature - 2.0).abs() < 1e-5);
    }

    #[test]
    fn e_locus() {
        let grid = Sampling::cells(sq(), 32, 32).unwrap();
        let cubic = vanishing_h_locus(&ExprGraph::parse("u^3-3*u*v^2", sq()).unwrap(), &grid, 1e-6).unwrap();
        assert_eq!(cubic.clusters.len(), 1, "{cubic:?}");
        let c = &cubic.clusters[0];
        assert!(c.isolated && c.refined && c.center.0.abs() < 1e-8 && c.center.1.abs() < 1e-8);
        let saddle = vanishing_h_locus(&ExprGraph::parse("u*v", sq()).unwrap(), &grid, 1e-6).unwrap();
        assert!(saddle.clusters.is_empty());
        let plane = vanishing_h_locus(&ExprGraph::parse("0", sq()).unwrap(), &grid, 1e-6).unwrap();
        assert_eq!(plane.clusters.len(), 1);
        assert_eq!(plane.clusters[0].nodes.len(), grid.len());
        assert!(!plane.is_discrete());
    }

    #[test]
    fn slices() {
        let g = ExprGraph::parse("u^3-3*u*v^2", sq()).unwrap();
        let back = slice_project(embed(g.clone()), 1e-12).unwrap();
        assert_eq!(back.kind(), PatchKind::Graph);
        assert_eq!(back.point(0.3, 0.4).unwrap(), g.point(0.3, 0.4).unwrap());
        let direct = ExprMinkSurface::parse("u^3-3*u*v^2", "u", "v", "u^3-3*u*v^2", sq()).unwrap();
        let p = slice_project(direct, 1e-12).unwrap();
        assert_eq!(p.point(0.5, -0.5).unwrap(), Vec021::new(0.5, -0.5, 0.125 - 0.375));
        let off = ExprMinkSurface::parse("0", "u", "v", "u", sq()).unwrap();
        assert!(matches!(slice_project(off, 1e-9), Err(Error::NotInSlice { gap, .. }) if gap == 1.0));
    }
}
