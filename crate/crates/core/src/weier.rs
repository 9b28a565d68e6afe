//! Weierstrass-type representation of d-minimal surfaces.
//!
//! Data `(F, G)` on a rectangle `U ⊂ ℂ` generate
//! `f_θ(u, v) = Re ∫_{w₀}^{w} e^{−iθ}(F, −iF, G) dw`, a d-minimal surface with
//! isothermal coordinates and induced metric `|F|² (du² + dv²)`. Integrals run
//! along the straight segment from the base point; rectangles are convex, so
//! the segment never leaves the domain.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cxparse::{differentiate, eval, parse_expr, Expr};
use crate::geom021::{FundamentalForms, Patch, PatchKind, Vec021};
use crate::quad::{segment_integral, QuadConfig};
use crate::{Error, Rect, Result, Sampling};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Below this `|F|` the closed-form second fundamental form is refused.
pub const NEAR_ZERO_F: f64 = 1e-10;

/// Generating data `(F, G)` with base point and domain.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassData {
    pub f: Expr,
    pub g: Expr,
    pub base: Complex64,
    pub domain: Rect,
    /// Values of the primitives `∫F`, `∫G` at the base point (integration
    /// constants; zero by default). Changing them translates the surface.
    pub primitive_at_base: [Complex64; 2],
}

impl WeierstrassData {
    pub fn new(f: Expr, g: Expr, base: Complex64, domain: Rect) -> Result<Self> {
        if !domain.contains(base.re, base.im) {
            return Err(Error::InvalidArgument("base point must lie in the domain"));
        }
        Ok(WeierstrassData { f, g, base, domain, primitive_at_base: [ZERO; 2] })
    }

    /// Parses `F` and `G`; the base point defaults to the domain center.
    pub fn parse(f: &str, g: &str, base: Option<Complex64>, domain: Rect) -> Result<Self> {
        let (cu, cv) = domain.center();
        WeierstrassData::new(parse_expr(f)?, parse_expr(g)?, base.unwrap_or(Complex64::new(cu, cv)), domain)
    }

    pub fn with_primitives(mut self, at_base_f: Complex64, at_base_g: Complex64) -> Self {
        self.primitive_at_base = [at_base_f, at_base_g];
        self
    }

    fn triple(&self) -> [Expr; 3] {
        [self.f.clone(), self.f.scaled(-I), self.g.clone()]
    }

    fn triple_primitives(&self) -> [Complex64; 3] {
        let [pf, pg] = self.primitive_at_base;
        [pf, -I * pf, pg]
    }
}

/// Angle of the associated family, reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyAngle(f64);

impl FamilyAngle {
    pub fn new(theta: f64) -> Self {
        let r = theta % TAU;
        let t = if r < 0.0 { r + TAU } else { r };
        FamilyAngle(if t >= TAU { 0.0 } else { t })
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub const ZERO: FamilyAngle = FamilyAngle(0.0);

    /// `θ = π/2`, the conjugate surface.
    pub fn conjugate() -> Self {
        FamilyAngle(core::f64::consts::FRAC_PI_2)
    }
}

/// Holomorphic integrands `(φ₁, φ₂, φ₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTriple {
    pub phi: [Expr; 3],
}

impl PhiTriple {
    pub fn new(phi1: Expr, phi2: Expr, phi3: Expr) -> Self {
        PhiTriple { phi: [phi1, phi2, phi3] }
    }

    pub fn parse(phi1: &str, phi2: &str, phi3: &str) -> Result<Self> {
        Ok(PhiTriple::new(parse_expr(phi1)?, parse_expr(phi2)?, parse_expr(phi3)?))
    }
}

/// `(u, v) ↦ Re e^{−iθ} (c + ∫_{w₀}^{u+iv} φ dw)`, coordinate-wise.
#[derive(Debug, Clone)]
pub struct HolomorphicSurface {
    integrands: [Expr; 3],
    primitives: [Complex64; 3],
    rotation: Complex64,
    base: Complex64,
    domain: Rect,
    quad: QuadConfig,
}

impl HolomorphicSurface {
    pub fn with_quadrature(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    fn integrals(&self, from: Complex64, to: Complex64) -> Result<[Complex64; 3]> {
        let mut out = [ZERO; 3];
        for (o, phi) in out.iter_mut().zip(self.integrands.iter()) {
            *o = integrate_holomorphic(phi, from, to, &self.quad)?;
        }
        Ok(out)
    }

    fn realize(&self, acc: &[Complex64; 3]) -> Vec021 {
        let c = |k: usize| (self.rotation * (self.primitives[k] + acc[k])).re;
        Vec021::new(c(0), c(1), c(2))
    }

    /// Evaluates on every sample. Integrals are carried along each row from
    /// its first sample, so each step integrates one short segment.
    pub fn sample_grid(&self, sampling: &Sampling) -> Result<Vec<Vec021>> {
        let mut out = Vec::with_capacity(sampling.len());
        for j in 0..sampling.nv {
            out.extend(self.sample_row(sampling, j)?);
        }
        Ok(out)
    }

    /// Row `j` of [`sample_grid`](Self::sample_grid). Rows are independent.
    pub fn sample_row(&self, sampling: &Sampling, j: usize) -> Result<Vec<Vec021>> {
        let mut out = Vec::with_capacity(sampling.nu);
        let v = sampling.v_at(j);
        let mut prev = Complex64::new(sampling.u_at(0), v);
        let mut acc = self.integrals(self.base, prev)?;
        out.push(self.realize(&acc));
        for i in 1..sampling.nu {
            let next = Complex64::new(sampling.u_at(i), v);
            let step = self.integrals(prev, next)?;
            for k in 0..3 {
                acc[k] += step[k];
            }
            out.push(self.realize(&acc));
            prev = next;
        }
        Ok(out)
    }
}

impl Patch for HolomorphicSurface {
    fn domain(&self) -> Rect {
        self.domain
    }
    fn kind(&self) -> PatchKind {
        PatchKind::Weierstrass
    }
    fn point(&self, u: f64, v: f64) -> Result<Vec021> {
        // Finite-difference stencils may poke slightly past the boundary.
        if !self.domain.contains_loose(u, v, 1e-2) {
            return Err(Error::OutOfDomain { u, v });
        }
        let acc = self.integrals(self.base, Complex64::new(u, v))?;
        Ok(self.realize(&acc))
    }
}

/// `∫ ast dw` along the segment `[w0, w]`.
pub fn integrate_holomorphic(ast: &Expr, w0: Complex64, w: Complex64, quad: &QuadConfig) -> Result<Complex64> {
    segment_integral(|z| eval(ast, z), w0, w, quad)
}

/// The associated-family member `f_θ` of the data.
pub fn surface_from_data(data: &WeierstrassData, theta: FamilyAngle) -> HolomorphicSurface {
    HolomorphicSurface {
        integrands: data.triple(),
        primitives: data.triple_primitives(),
        rotation: Complex64::from_polar(1.0, -theta.radians()),
        base: data.base,
        domain: data.domain,
        quad: QuadConfig::default(),
    }
}

/// `(x, y, z) = Re ∫ (φ₁, φ₂, φ₃)`, after checking `φ₁² + φ₂² = 0` and
/// `|φ₁|² + |φ₂|² > 0` on a 16×16 validation grid.
pub fn surface_from_phi(phi: &PhiTriple, base: Complex64, domain: Rect) -> Result<HolomorphicSurface> {
    if !domain.contains(base.re, base.im) {
        return Err(Error::InvalidArgument("base point must lie in the domain"));
    }
    let grid = Sampling::cells(domain, 16, 16)?;
    let mut worst: Option<(Complex64, f64, f64)> = None;
    for (u, v) in grid.points() {
        let w = Complex64::new(u, v);
        let p1 = eval(&phi.phi[0], w)?;
        let p2 = eval(&phi.phi[1], w)?;
        let residual = (p1 * p1 + p2 * p2).norm();
        let mass = p1.norm_sqr() + p2.norm_sqr();
        let rel = if mass > 0.0 { residual / mass } else { f64::INFINITY };
        if worst.is_none_or(|(_, r, _)| rel > r) {
            worst = Some((w, rel, residual));
        }
    }
    if let Some((w, rel, residual)) = worst {
        if rel > 1e-9 {
            return Err(Error::Data2Violation { re: w.re, im: w.im, residual });
        }
    }
    Ok(HolomorphicSurface {
        integrands: phi.phi.clone(),
        primitives: [ZERO; 3],
        rotation: Complex64::new(1.0, 0.0),
        base,
        domain,
        quad: QuadConfig::default(),
    })
}

/// `(−iF, −iG)`: generates `Im ∫ (F, −iF, G) dw`, the conjugate surface.
pub fn conjugate(data: &WeierstrassData) -> WeierstrassData {
    let [pf, pg] = data.primitive_at_base;
    WeierstrassData {
        f: data.f.scaled(-I),
        g: data.g.scaled(-I),
        base: data.base,
        domain: data.domain,
        primitive_at_base: [-I * pf, -I * pg],
    }
}

/// Induced metric factor `|F(w)|²`.
pub fn metric_at(data: &WeierstrassData, w: Complex64) -> Result<f64> {
    Ok(eval(&data.f, w)?.norm_sqr())
}

/// A grid cell flagged by [`validate_data`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularCell {
    pub i: usize,
    pub j: usize,
    pub center: Complex64,
    /// Winding number of `F` around the cell, `None` when `F` vanished on its boundary.
    pub winding: Option<i32>,
}

/// Outcome of [`validate_data`].
#[derive(Debug, Clone, PartialEq)]
pub struct DataReport {
    pub min_abs_f: f64,
    pub min_abs_f_at: Complex64,
    pub singular_cells: Vec<SingularCell>,
    /// `φ₁² + φ₂² = F² + (−iF)²` vanishes identically for this construction.
    pub data2_exact: bool,
    /// Largest `|F² + (−iF)²|` seen on the grid (zero up to rounding).
    pub data2_residual: f64,
    /// Points where evaluating `F` or `G` failed.
    pub eval_failures: Vec<Complex64>,
    /// Midpoints of grid edges across which `F` or `G` jumps (branch cut suspects).
    pub cut_suspects: Vec<Complex64>,
}

impl DataReport {
    pub fn is_immersion(&self) -> bool {
        self.singular_cells.is_empty() && self.eval_failures.is_empty() && self.cut_suspects.is_empty()
    }
}

// Refinement of the node lines used for winding numbers and jump detection.
const LINE_REFINE: usize = 4;

struct LineSamples {
    // rows[j][k]: value at u-index k (refined) on node row j.
    rows: Vec<Vec<Option<Complex64>>>,
    // cols[i][k]: value at v-index k (refined) on node column i.
    cols: Vec<Vec<Option<Complex64>>>,
}

fn refined(sampling: &Sampling, n: usize, k: usize, along_u: bool) -> f64 {
    let r = &sampling.rect;
    let (a, b) = if along_u { (r.u0, r.u1) } else { r_v(r) };
    let m = (n - 1) * LINE_REFINE;
    if k == m {
        b
    } else {
        a + (b - a) * k as f64 / m as f64
    }
}

fn r_v(r: &Rect) -> (f64, f64) {
    (r.v0, r.v1)
}

fn sample_lines(ast: &Expr, s: &Sampling, failures: &mut Vec<Complex64>) -> LineSamples {
    let mut at = |w: Complex64| match eval(ast, w) {
        Ok(z) => Some(z),
        Err(_) => {
            failures.push(w);
            None
        }
    };
    let mu = (s.nu - 1) * LINE_REFINE + 1;
    let mv = (s.nv - 1) * LINE_REFINE + 1;
    let rows = (0..s.nv)
        .map(|j| (0..mu).map(|k| at(Complex64::new(refined(s, s.nu, k, true), s.v_at(j)))).collect())
        .collect();
    let cols = (0..s.nu)
        .map(|i| (0..mv).map(|k| at(Complex64::new(s.u_at(i), refined(s, s.nv, k, false)))).collect())
        .collect();
    LineSamples { rows, cols }
}

fn winding(boundary: &[Option<Complex64>], tol: f64) -> Option<i32> {
    let mut total = 0.0;
    for k in 0..boundary.len() {
        let a = boundary[k]?;
        let b = boundary[(k + 1) % boundary.len()]?;
        if a.norm() <= tol || b.norm() <= tol {
            return None;
        }
        total += (b / a).arg();
    }
    Some((total / TAU).round() as i32)
}

fn cell_boundary(lines: &LineSamples, i: usize, j: usize) -> Vec<Option<Complex64>> {
    let r = LINE_REFINE;
    let mut b = Vec::with_capacity(4 * r);
    // Counter-clockwise: bottom row left→right, right column up, top row right→left, left column down.
    for k in 0..r {
        b.push(lines.rows[j][i * r + k]);
    }
    for k in 0..r {
        b.push(lines.cols[i + 1][j * r + k]);
    }
    for k in 0..r {
        b.push(lines.rows[j + 1][(i + 1) * r - k]);
    }
    for k in 0..r {
        b.push(lines.cols[i][(j + 1) * r - k]);
    }
    b
}

fn jumps(ast: &Expr, s: &Sampling, lines: &LineSamples, out: &mut Vec<Complex64>) {
    let d = differentiate(ast);
    let check = |a: (Complex64, Option<Complex64>), b: (Complex64, Option<Complex64>), out: &mut Vec<Complex64>| {
        let (Some(fa), Some(fb)) = (a.1, b.1) else { return };
        let slope = |w: Complex64| eval(&d, w).map(|z| z.norm()).unwrap_or(f64::INFINITY);
        let bound = 10.0 * slope(a.0).max(slope(b.0)) * (b.0 - a.0).norm() + 1e-9 * (1.0 + fa.norm());
        if (fb - fa).norm() > bound {
            out.push((a.0 + b.0) * 0.5);
        }
    };
    for (j, row) in lines.rows.iter().enumerate() {
        let v = s.v_at(j);
        for k in 1..row.len() {
            let wa = Complex64::new(refined(s, s.nu, k - 1, true), v);
            let wb = Complex64::new(refined(s, s.nu, k, true), v);
            check((wa, row[k - 1]), (wb, row[k]), out);
        }
    }
    for (i, col) in lines.cols.iter().enumerate() {
        let u = s.u_at(i);
        for k in 1..col.len() {
            let wa = Complex64::new(u, refined(s, s.nv, k - 1, false));
            let wb = Complex64::new(u, refined(s, s.nv, k, false));
            check((wa, col[k - 1]), (wb, col[k]), out);
        }
    }
}

/// Scans the data on the node grid `sampling`: smallest `|F|`, cells where
/// `F` has a zero (non-zero winding, or `|F| ≤ tol` on the cell boundary),
/// evaluation failures and suspected branch-cut crossings of `F` and `G`.
pub fn validate_data(data: &WeierstrassData, sampling: &Sampling, tol: f64) -> DataReport {
    let s = Sampling { layout: crate::Layout::Nodes, ..*sampling };
    let mut eval_failures = Vec::new();
    let lines = sample_lines(&data.f, &s, &mut eval_failures);
    let mut g_failures = Vec::new();
    let g_lines = sample_lines(&data.g, &s, &mut g_failures);
    eval_failures.extend(g_failures);

    let mut min_abs_f = f64::INFINITY;
    let mut min_abs_f_at = data.base;
    let mut data2_residual: f64 = 0.0;
    for (j, row) in lines.rows.iter().enumerate() {
        for (k, val) in row.iter().enumerate() {
            if let Some(fv) = val {
                if fv.norm() < min_abs_f {
                    min_abs_f = fv.norm();
                    min_abs_f_at = Complex64::new(refined(&s, s.nu, k, true), s.v_at(j));
                }
                let p2 = -I * fv;
                data2_residual = data2_residual.max((fv * fv + p2 * p2).norm());
            }
        }
    }

    let mut singular_cells = Vec::new();
    for j in 0..s.nv - 1 {
        for i in 0..s.nu - 1 {
            let w = winding(&cell_boundary(&lines, i, j), tol);
            if w != Some(0) {
                let center = Complex64::new(0.5 * (s.u_at(i) + s.u_at(i + 1)), 0.5 * (s.v_at(j) + s.v_at(j + 1)));
                singular_cells.push(SingularCell { i, j, center, winding: w });
            }
        }
    }

    let mut cut_suspects = Vec::new();
    jumps(&data.f, &s, &lines, &mut cut_suspects);
    jumps(&data.g, &s, &g_lines, &mut cut_suspects);

    DataReport {
        min_abs_f,
        min_abs_f_at,
        singular_cells,
        data2_exact: true,
        data2_residual,
        eval_failures,
        cut_suspects,
    }
}

struct DataJet {
    f: Complex64,
    df: Complex64,
    g: Complex64,
    dg: Complex64,
}

fn data_jet(data: &WeierstrassData, w: Complex64) -> Result<DataJet> {
    let f = eval(&data.f, w)?;
    if f.norm() <= NEAR_ZERO_F {
        return Err(Error::NearZeroF { re: w.re, im: w.im, abs: f.norm() });
    }
    Ok(DataJet { f, df: eval(&differentiate(&data.f), w)?, g: eval(&data.g, w)?, dg: eval(&differentiate(&data.g), w)? })
}

// (|X|_u, |X|_v) from X and X' for holomorphic X.
fn abs_gradient(x: Complex64, dx: Complex64) -> (f64, f64) {
    let a = x.norm();
    let p = dx * x.conj();
    (p.re / a, -p.im / a)
}

/// `g` and `h` of `f₀` at `w` in closed form from `(F, G)`:
/// `h = {(ReG)_u − (|F|_u/|F|) ReG − (|F|_v/|F|) ImG}(du² − dv²)
///    + {(ReG)_v − (|F|_v/|F|) ReG + (|F|_u/|F|) ImG}(2 du dv)`.
pub fn second_form_from_data(data: &WeierstrassData, w: Complex64) -> Result<FundamentalForms> {
    let j = data_jet(data, w)?;
    let abs_f = j.f.norm();
    let (fu, fv) = abs_gradient(j.f, j.df);
    let (re_g_u, re_g_v) = (j.dg.re, -j.dg.im);
    let h11 = re_g_u - fu / abs_f * j.g.re - fv / abs_f * j.g.im;
    let h12 = re_g_v - fv / abs_f * j.g.re + fu / abs_f * j.g.im;
    let metric = abs_f * abs_f;
    Ok(FundamentalForms { g11: metric, g12: 0.0, g22: metric, h11, h12, h22: -h11 })
}

/// `det h` by the closed-form expression in `|F|`, `|G|` and their gradients:
/// `−((|G|_u)² + (|G|_v)²) − |G/F|²((|F|_u)² + (|F|_v)²) + 2|G/F|(|F|_u|G|_u + |F|_v|G|_v)`.
pub fn det_h_from_data(data: &WeierstrassData, w: Complex64) -> Result<f64> {
    let j = data_jet(data, w)?;
    let abs_f = j.f.norm();
    let abs_g = j.g.norm();
    let (fu, fv) = abs_gradient(j.f, j.df);
    let ratio = abs_g / abs_f;
    if abs_g == 0.0 {
        // |G| is not differentiable at its zeros; the gradient norm has limit |G'|
        // and the cross term vanishes with |G|.
        return Ok(-j.dg.norm_sqr());
    }
    let (gu, gv) = abs_gradient(j.g, j.dg);
    Ok(-(gu * gu + gv * gv) - ratio * ratio * (fu * fu + fv * fv) + 2.0 * ratio * (fu * gu + fv * gv))
}
