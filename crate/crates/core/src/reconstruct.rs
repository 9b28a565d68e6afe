//! Graph surfaces from a prescribed second fundamental form.
//!
//! With `g = du² + dv²` fixed, a symmetric `h` satisfying the Codazzi
//! equations `(h11)_v = (h12)_u`, `(h22)_u = (h12)_v` is the Hessian of a
//! function `F`, and `(u, v, F(u, v))` realizes it. `F` is unique up to
//! `F + Au + Bv + C`, i.e. up to affine isometry.

use alloc::vec::Vec;

// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cxparse::{differentiate_wrt, eval_real, parse_real, Expr};
use crate::geom021::{Patch, PatchKind, Vec021};
use crate::quad::fixed_real;
use crate::{Error, Layout, Rect, Result, Sampling};

const PANELS: usize = 4;

/// Prescribed `h11, h12, h22` over a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub enum PrescribedForms {
    /// Real expressions in `u`, `v`.
    Expressions { h: [Expr; 3], domain: Rect },
    /// Samples on a node grid, row-major (`v` outer).
    Grid { sampling: Sampling, h: [Vec<f64>; 3] },
}

impl PrescribedForms {
    pub fn parse(h11: &str, h12: &str, h22: &str, domain: Rect) -> Result<Self> {
        Ok(PrescribedForms::Expressions { h: [parse_real(h11)?, parse_real(h12)?, parse_real(h22)?], domain })
    }

    pub fn from_grid(sampling: Sampling, h11: Vec<f64>, h12: Vec<f64>, h22: Vec<f64>) -> Result<Self> {
        let sampling = Sampling { layout: Layout::Nodes, ..sampling };
        if sampling.nu < 3 || sampling.nv < 3 {
            return Err(Error::InvalidArgument("grid forms need at least 3×3 nodes"));
        }
        if [&h11, &h12, &h22].iter().any(|h| h.len() != sampling.len()) {
            return Err(Error::InvalidArgument("grid forms must have one value per node"));
        }
        if [&h11, &h12, &h22].iter().any(|h| h.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidArgument("grid forms must be finite"));
        }
        Ok(PrescribedForms::Grid { sampling, h: [h11, h12, h22] })
    }

    pub fn domain(&self) -> Rect {
        match self {
            PrescribedForms::Expressions { domain, .. } => *domain,
            PrescribedForms::Grid { sampling, .. } => sampling.rect,
        }
    }
}

/// Affine freedom `(F0, Fu0, Fv0)` at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Seed {
    pub f0: f64,
    pub fu0: f64,
    pub fv0: f64,
}

/// Outcome of [`codazzi_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodazziReport {
    /// `max |(h11)_v − (h12)_u|`.
    pub residual_1: f64,
    /// `max |(h22)_u − (h12)_v|`.
    pub residual_2: f64,
    pub worst_at: (f64, f64),
    pub tol: f64,
    pub pass: bool,
}

impl CodazziReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_1.max(self.residual_2)
    }
}

// Second-order finite difference of grid values along one axis.
fn grid_partial(vals: &[f64], s: &Sampling, i: usize, j: usize, along_u: bool) -> f64 {
    let (n, k, d) = if along_u { (s.nu, i, s.spacing().0) } else { (s.nv, j, s.spacing().1) };
    let at = |m: usize| if along_u { vals[s.index(m, j)] } else { vals[s.index(i, m)] };
    if k == 0 {
        (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * d)
    } else if k == n - 1 {
        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * d)
    } else {
        (at(k + 1) - at(k - 1)) / (2.0 * d)
    }
}

/// Maximum Codazzi residuals. Expressions are differentiated symbolically and
/// checked on `grid`; sampled forms use finite differences on their own grid.
pub fn codazzi_check(p: &PrescribedForms, grid: &Sampling, tol: f64) -> Result<CodazziReport> {
    let mut report = CodazziReport { residual_1: 0.0, residual_2: 0.0, worst_at: grid.rect.center(), tol, pass: true };
    let mut worst = -1.0;
    let mut record = |r1: f64, r2: f64, at: (f64, f64)| {
        report.residual_1 = report.residual_1.max(r1);
        report.residual_2 = report.residual_2.max(r2);
        if r1.max(r2) > worst {
            worst = r1.max(r2);
            report.worst_at = at;
        }
    };
    match p {
        PrescribedForms::Expressions { h, .. } => {
            let h11_v = differentiate_wrt(&h[0], 1);
            let h12_u = differentiate_wrt(&h[1], 0);
            let h12_v = differentiate_wrt(&h[1], 1);
            let h22_u = differentiate_wrt(&h[2], 0);
            for (u, v) in grid.points() {
                let x = [u, v];
                let r1 = (eval_real(&h11_v, &x)? - eval_real(&h12_u, &x)?).abs();
                let r2 = (eval_real(&h22_u, &x)? - eval_real(&h12_v, &x)?).abs();
                record(r1, r2, (u, v));
            }
        }
        PrescribedForms::Grid { sampling: s, h } => {
            for j in 0..s.nv {
                for i in 0..s.nu {
                    let r1 = (grid_partial(&h[0], s, i, j, false) - grid_partial(&h[1], s, i, j, true)).abs();
                    let r2 = (grid_partial(&h[2], s, i, j, true) - grid_partial(&h[1], s, i, j, false)).abs();
                    record(r1, r2, (s.u_at(i), s.v_at(j)));
                }
            }
        }
    }
    report.pass = report.residual_1.is_finite() && report.residual_2.is_finite() && report.max_residual() <= tol;
    Ok(report)
}

/// `F` and its gradient on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSamples {
    pub sampling: Sampling,
    pub f: Vec<f64>,
    pub fu: Vec<f64>,
    pub fv: Vec<f64>,
}

/// Evaluates `F` for expression forms by integrating along L-shaped paths.
#[derive(Debug, Clone)]
struct LPath {
    h: [Expr; 3],
    base: (f64, f64),
    seed: Seed,
}

impl LPath {
    fn h(&self, k: usize, u: f64, v: f64) -> Result<f64> {
        eval_real(&self.h[k], &[u, v])
    }

    /// `(F, F_u, F_v)` at `(u, v)`, walking first along `u` (`u_first`) or `v`.
    fn jet(&self, u: f64, v: f64, u_first: bool) -> Result<[f64; 3]> {
        let (u0, v0) = self.base;
        let Seed { f0, fu0, fv0 } = self.seed;
        // Swap the roles of the coordinates for the v-first order.
        let (a0, b0, a, b, fa0, fb0, kaa, kbb) =
            if u_first { (u0, v0, u, v, fu0, fv0, 0, 2) } else { (v0, u0, v, u, fv0, fu0, 2, 0) };
        let hk = |k: usize, x: f64, y: f64| if u_first { self.h(k, x, y) } else { self.h(k, y, x) };
        let leg1_f = f0 + fa0 * (a - a0) + fixed_real(|s| Ok((a - s) * hk(kaa, s, b0)?), a0, a, PANELS)?;
        let leg1_fa = fa0 + fixed_real(|s| hk(kaa, s, b0), a0, a, PANELS)?;
        let leg1_fb = fb0 + fixed_real(|s| hk(1, s, b0), a0, a, PANELS)?;
        let f = leg1_f + leg1_fb * (b - b0) + fixed_real(|t| Ok((b - t) * hk(kbb, a, t)?), b0, b, PANELS)?;
        let fa = leg1_fa + fixed_real(|t| hk(1, a, t), b0, b, PANELS)?;
        let fb = leg1_fb + fixed_real(|t| hk(kbb, a, t), b0, b, PANELS)?;
        Ok(if u_first { [f, fa, fb] } else { [f, fb, fa] })
    }
}

fn snap(s: &Sampling, base: (f64, f64)) -> (usize, usize) {
    let (du, dv) = s.spacing();
    let i = ((base.0 - s.rect.u0) / du).round().clamp(0.0, (s.nu - 1) as f64) as usize;
    let j = ((base.1 - s.rect.v0) / dv).round().clamp(0.0, (s.nv - 1) as f64) as usize;
    (i, j)
}

// Prefix integrals of `g` along a line of nodes starting at index `k0`; with
// `dg` the endpoint-corrected trapezoid rule (exact for cubics).
fn prefix(g: &[f64], dg: Option<&[f64]>, k0: usize, d: f64, start: f64) -> Vec<f64> {
    let n = g.len();
    let mut out = alloc::vec![0.0; n];
    out[k0] = start;
    let piece = |a: usize, b: usize| {
        let mut x = 0.5 * d * (g[a] + g[b]);
        if let Some(dg) = dg {
            x -= d * d / 12.0 * (dg[b] - dg[a]);
        }
        x
    };
    for k in k0 + 1..n {
        out[k] = out[k - 1] + piece(k - 1, k);
    }
    for k in (0..k0).rev() {
        out[k] = out[k + 1] - piece(k, k + 1);
    }
    out
}

fn grid_orders(s: &Sampling, h: &[Vec<f64>; 3], base: (usize, usize), seed: Seed, u_first: bool) -> GraphSamples {
    let (du, dv) = s.spacing();
    let n = s.len();
    let (mut f, mut fu, mut fv) = (alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n]);
    let row = |vals: &[f64], j: usize| (0..s.nu).map(|i| vals[s.index(i, j)]).collect::<Vec<_>>();
    let col = |vals: &[f64], i: usize| (0..s.nv).map(|j| vals[s.index(i, j)]).collect::<Vec<_>>();
    let (i0, j0) = base;
    if u_first {
        let fu_r = prefix(&row(&h[0], j0), None, i0, du, seed.fu0);
        let fv_r = prefix(&row(&h[1], j0), None, i0, du, seed.fv0);
        let f_r = prefix(&fu_r, Some(&row(&h[0], j0)), i0, du, seed.f0);
        for i in 0..s.nu {
            let fv_c = prefix(&col(&h[2], i), None, j0, dv, fv_r[i]);
            let fu_c = prefix(&col(&h[1], i), None, j0, dv, fu_r[i]);
            let f_c = prefix(&fv_c, Some(&col(&h[2], i)), j0, dv, f_r[i]);
            for j in 0..s.nv {
                let k = s.index(i, j);
                (f[k], fu[k], fv[k]) = (f_c[j], fu_c[j], fv_c[j]);
            }
        }
    } else {
        let fv_c = prefix(&col(&h[2], i0), None, j0, dv, seed.fv0);
        let fu_c = prefix(&col(&h[1], i0), None, j0, dv, seed.fu0);
        let f_c = prefix(&fv_c, Some(&col(&h[2], i0)), j0, dv, seed.f0);
        for j in 0..s.nv {
            let fu_r = prefix(&row(&h[0], j), None, i0, du, fu_c[j]);
            let fv_r = prefix(&row(&h[1], j), None, i0, du, fv_c[j]);
            let f_r = prefix(&fu_r, Some(&row(&h[0], j)), i0, du, f_c[j]);
            for i in 0..s.nu {
                let k = s.index(i, j);
                (f[k], fu[k], fv[k]) = (f_r[i], fu_r[i], fv_r[i]);
            }
        }
    }
    GraphSamples { sampling: *s, f, fu, fv }
}

fn compare(a: &[f64], b: &[f64], limit: f64) -> Result<()> {
    let discrepancy = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if discrepancy > limit || !discrepancy.is_finite() {
        return Err(Error::Compatibility { discrepancy, limit });
    }
    Ok(())
}

fn require_codazzi(p: &PrescribedForms, grid: &Sampling, tol: f64) -> Result<()> {
    let report = codazzi_check(p, grid, tol)?;
    if !report.pass {
        return Err(Error::CodazziFailure { residual: report.max_residual(), tol });
    }
    Ok(())
}

/// Integrates the prescribed Hessian to `F` on the nodes of `grid`
/// (sampled forms: on their own grid, with the base snapped to a node).
/// Both L-path orders are computed and must agree within `10·tol`.
pub fn integrate_hessian(p: &PrescribedForms, base: (f64, f64), seed: Seed, grid: &Sampling, tol: f64) -> Result<GraphSamples> {
    require_codazzi(p, grid, tol)?;
    let limit = 10.0 * tol;
    match p {
        PrescribedForms::Expressions { h, domain } => {
            if !domain.contains(base.0, base.1) {
                return Err(Error::InvalidArgument("base point must lie in the domain"));
            }
            let lp = LPath { h: h.clone(), base, seed };
            let s = Sampling { layout: Layout::Nodes, ..*grid };
            let mut out = GraphSamples { sampling: s, f: Vec::new(), fu: Vec::new(), fv: Vec::new() };
            let mut other = Vec::with_capacity(s.len());
            for (u, v) in s.points() {
                let [f, fu, fv] = lp.jet(u, v, true)?;
                out.f.push(f);
                out.fu.push(fu);
                out.fv.push(fv);
                other.push(lp.jet(u, v, false)?[0]);
            }
            compare(&out.f, &other, limit)?;
            Ok(out)
        }
        PrescribedForms::Grid { sampling, h } => {
            let b = snap(sampling, base);
            let a = grid_orders(sampling, h, b, seed, true);
            compare(&a.f, &grid_orders(sampling, h, b, seed, false).f, limit)?;
            Ok(a)
        }
    }
}

#[derive(Debug, Clone)]
enum Source {
    Exact(LPath),
    // Hermite bicubic data: F, F_u, F_v on nodes plus the cross term h12.
    Hermite(GraphSamples, Vec<f64>),
}

/// The graph `(u, v, F(u, v))` realizing prescribed forms.
#[derive(Debug, Clone)]
pub struct ReconstructedSurface {
    source: Source,
    domain: Rect,
}

impl ReconstructedSurface {
    /// `F(u, v)`.
    pub fn height(&self, u: f64, v: f64) -> Result<f64> {
        match &self.source {
            Source::Exact(lp) => Ok(lp.jet(u, v, true)?[0]),
            Source::Hermite(g, fuv) => Ok(hermite(g, fuv, u, v)),
        }
    }
}

fn hermite(g: &GraphSamples, fuv: &[f64], u: f64, v: f64) -> f64 {
    let s = &g.sampling;
    let (du, dv) = s.spacing();
    let cell = |x: f64, x0: f64, d: f64, n: usize| {
        let t = ((x - x0) / d).clamp(0.0, (n - 1) as f64);
        let k = (t.floor() as usize).min(n - 2);
        (k, t - k as f64)
    };
    let (i, a) = cell(u, s.rect.u0, du, s.nu);
    let (j, b) = cell(v, s.rect.v0, dv, s.nv);
    let basis = |t: f64| {
        let (t2, t3) = (t * t, t * t * t);
        // [value at 0, value at 1], [slope at 0, slope at 1]
        ([2.0 * t3 - 3.0 * t2 + 1.0, -2.0 * t3 + 3.0 * t2], [t3 - 2.0 * t2 + t, t3 - t2])
    };
    let (pa, sa) = basis(a);
    let (pb, sb) = basis(b);
    let mut acc = 0.0;
    for (ci, ii) in [i, i + 1].into_iter().enumerate() {
        for (cj, jj) in [j, j + 1].into_iter().enumerate() {
            let k = s.index(ii, jj);
            acc += g.f[k] * pa[ci] * pb[cj]
                + du * g.fu[k] * sa[ci] * pb[cj]
                + dv * g.fv[k] * pa[ci] * sb[cj]
                + du * dv * fuv[k] * sa[ci] * sb[cj];
        }
    }
    acc
}

impl Patch for ReconstructedSurface {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn kind(&self) -> PatchKind {
        PatchKind::Graph
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        if !self.domain.contains_loose(u, v, 1e-2) {
            return Err(Error::OutOfDomain { u, v });
        }
        Ok(Vec021::new(u, v, self.height(u, v)?))
    }
}

/// Reconstructs the graph surface after checking Codazzi compatibility on
/// `grid` and the agreement of both integration orders. Expression forms give
/// an exactly integrated patch; sampled forms a Hermite bicubic interpolant.
pub fn surface_from_forms(p: &PrescribedForms, base: (f64, f64), seed: Seed, grid: &Sampling, tol: f64) -> Result<ReconstructedSurface> {
    let samples = integrate_hessian(p, base, seed, grid, tol)?;
    let domain = p.domain();
    let source = match p {
        PrescribedForms::Expressions { h, .. } => Source::Exact(LPath { h: h.clone(), base, seed }),
        PrescribedForms::Grid { h, .. } => Source::Hermite(samples, h[1].clone()),
    };
    Ok(ReconstructedSurface { source, domain })
}
