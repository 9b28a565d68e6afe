//! Singular points of Weierstrass-generated surfaces.
//!
//! The metric `|F|²(du² + dv²)` degenerates exactly at the zeros of `F`. There
//! `f_u = (0, 0, Re G)` and `f_v = (0, 0, −Im G)`, so the Jacobian has rank 1
//! when `G(w₀) ≠ 0` and rank 0 otherwise.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::cxparse::{differentiate, eval, Expr};
use crate::quad::{segment_integral, QuadConfig};
use crate::weier::WeierstrassData;
use crate::{Error, Layout, Rect, Result, Sampling};

/// Default refinement tolerance on `|F|`.
pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 60;

/// An isolated zero of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub w: Complex64,
    pub multiplicity: u32,
    /// Rank of the Jacobian of `f` at `w`: 1, or 0 when `G` vanishes as well.
    pub rank: u8,
    /// False when Newton refinement did not converge; `w` is then the grid candidate.
    pub refined: bool,
    pub g_vanishes: bool,
}

/// Result of [`find_zeros`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroScan {
    /// Refined zeros, `|F| < tol`, pairwise separated.
    pub zeros: Vec<Complex64>,
    /// Candidates where refinement failed to converge.
    pub unrefined: Vec<Complex64>,
}

struct Holo {
    f: Expr,
    d1: Expr,
    d2: Expr,
}

impl Holo {
    fn new(ast: &Expr) -> Self {
        let d1 = differentiate(ast);
        let d2 = differentiate(&d1);
        Holo { f: ast.clone(), d1, d2 }
    }

    /// Newton with the multiplicity-robust correction `F F′ / (F′² − F F″)`,
    /// falling back to the plain step where that denominator vanishes.
    fn refine(&self, start: Complex64, domain: &Rect, tol: f64) -> Option<Complex64> {
        let slack = 0.05 * domain.extent();
        let mut w = start;
        for _ in 0..MAX_ITER {
            let f = eval(&self.f, w).ok()?;
            if f == Complex64::new(0.0, 0.0) {
                return Some(w);
            }
            let d1 = eval(&self.d1, w).ok()?;
            let d2 = eval(&self.d2, w).ok()?;
            let denom = d1 * d1 - f * d2;
            let step = if denom.norm() > 0.0 && denom.is_finite() {
                f * d1 / denom
            } else if d1.norm() > 0.0 {
                f / d1
            } else {
                return None;
            };
            if !step.is_finite() {
                return None;
            }
            w -= step;
            if !domain.contains_loose(w.re, w.im, slack / domain.extent()) {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + w.norm()) {
                break;
            }
        }
        let f = eval(&self.f, w).ok()?;
        (f.norm() < tol).then_some(w)
    }
}

fn merge_radius(tol: f64, w: Complex64) -> f64 {
    (10.0 * tol).max(1e-7 * (1.0 + w.norm()))
}

fn push_unique(list: &mut Vec<Complex64>, w: Complex64, radius: f64) {
    if list.iter().all(|z| (z - w).norm() > radius) {
        list.push(w);
    }
}

/// Zeros of `ast` in `domain`: local minima of `|F|` on the node grid whose
/// Newton estimate `|F/F′|` is within two cell diagonals are refined to
/// `|F| < tol`. Refined zeros closer than `10·tol` (or a few ulps of the
/// location) are merged.
pub fn find_zeros(ast: &Expr, domain: Rect, grid: &Sampling, tol: f64) -> Result<ZeroScan> {
    let s = Sampling { rect: domain, layout: Layout::Nodes, ..*grid };
    if s.nu < 2 || s.nv < 2 {
        return Err(Error::InvalidArgument("zero scan needs at least 2×2 samples"));
    }
    let holo = Holo::new(ast);
    let mut mags = Vec::with_capacity(s.len());
    for (u, v) in s.points() {
        mags.push(eval(ast, Complex64::new(u, v)).map(|z| z.norm()).unwrap_or(f64::INFINITY));
    }
    let (du, dv) = s.spacing();
    let diag = du.hypot(dv);

    let mut candidates = Vec::new();
    for j in 0..s.nv {
        for i in 0..s.nu {
            let m = mags[s.index(i, j)];
            if !m.is_finite() {
                continue;
            }
            let is_min = (j.saturating_sub(1)..=(j + 1).min(s.nv - 1))
                .flat_map(|jj| (i.saturating_sub(1)..=(i + 1).min(s.nu - 1)).map(move |ii| (ii, jj)))
                .all(|(ii, jj)| mags[s.index(ii, jj)] >= m);
            if !is_min {
                continue;
            }
            let w = Complex64::new(s.u_at(i), s.v_at(j));
            let close = m == 0.0
                || eval(&holo.d1, w).map(|d| m / d.norm() <= 2.0 * diag).unwrap_or(false);
            if close {
                candidates.push(w);
            }
        }
    }

    let mut scan = ZeroScan::default();
    for c in candidates {
        match holo.refine(c, &domain, tol) {
            Some(z) if domain.contains(z.re, z.im) => push_unique(&mut scan.zeros, z, merge_radius(tol, z)),
            Some(_) => {}
            None => push_unique(&mut scan.unrefined, c, diag),
        }
    }
    // Drop unrefined candidates that sit next to a refined zero.
    scan.unrefined.retain(|c| scan.zeros.iter().all(|z| (z - c).norm() > 2.0 * diag));
    sort_by_modulus(&mut scan.zeros);
    sort_by_modulus(&mut scan.unrefined);
    Ok(scan)
}

fn sort_by_modulus(list: &mut [Complex64]) {
    list.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
}

/// Order of the zero at `w0` by the argument principle: the trapezoidal rule
/// for `(1/2πi) ∮ F′/F dw` on the circle `|w − w0| = radius`.
pub fn zero_multiplicity(ast: &Expr, w0: Complex64, radius: f64, samples: usize) -> Result<u32> {
    if !(radius > 0.0) || samples < 8 {
        return Err(Error::InvalidArgument("contour needs a positive radius and at least 8 samples"));
    }
    let d = differentiate(ast);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..samples {
        let offset = Complex64::from_polar(radius, TAU * k as f64 / samples as f64);
        let w = w0 + offset;
        let f = eval(ast, w)?;
        if f.norm() <= 1e-14 {
            return Err(Error::ContourThroughZero { abs: f.norm() });
        }
        sum += eval(&d, w)? / f * offset;
    }
    let raw = sum / samples as f64;
    let n = raw.re.round();
    if (raw.re - n).abs() > 0.1 || raw.im.abs() > 0.1 || n < 0.0 {
        return Err(Error::NonIntegerWinding { value: raw.re });
    }
    Ok(n as u32)
}

/// Contour radius for a candidate: half the distance to the nearest other
/// candidate, capped by the distance to the domain boundary.
pub fn default_radius(w0: Complex64, others: &[Complex64], domain: &Rect) -> f64 {
    let nearest = others
        .iter()
        .filter(|z| **z != w0)
        .map(|z| (z - w0).norm())
        .fold(f64::INFINITY, f64::min);
    let alone = 0.25 * domain.width().min(domain.height());
    let r = if nearest.is_finite() { 0.5 * nearest } else { alone };
    // A zero on the boundary itself still gets a usable contour.
    r.min(domain.boundary_distance(w0.re, w0.im).max(1e-2 * domain.extent()))
}

fn jacobian_fd(data: &WeierstrassData, w0: Complex64, h: f64) -> Result<[[f64; 3]; 2]> {
    let quad = QuadConfig::default();
    let phi = |z: Complex64| -> Result<[Complex64; 3]> {
        let f = eval(&data.f, z)?;
        Ok([f, Complex64::new(0.0, -1.0) * f, eval(&data.g, z)?])
    };
    // f(b) − f(a) = Re ∫_a^b φ dw; short segments keep quadrature noise out of the quotient.
    let central = |dir: Complex64, h: f64| -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (k, o) in out.iter_mut().enumerate() {
            let int = segment_integral(|z| phi(z).map(|p| p[k]), w0 - dir * h, w0 + dir * h, &quad)?;
            *o = int.re / (2.0 * h);
        }
        Ok(out)
    };
    let mut rows = [[0.0; 3]; 2];
    for (row, dir) in rows.iter_mut().zip([Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]) {
        let (coarse, fine) = (central(dir, h)?, central(dir, 0.5 * h)?);
        for k in 0..3 {
            row[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
        }
    }
    Ok(rows)
}

/// Singular values of a 2×3 matrix, largest first.
fn singular_values(j: &[[f64; 3]; 2]) -> (f64, f64) {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (a, b, c) = (dot(&j[0], &j[0]), dot(&j[0], &j[1]), dot(&j[1], &j[1]));
    let tr = a + c;
    let det = (a * c - b * b).max(0.0);
    let lmax = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
    let lmin = if lmax > 0.0 { det / lmax } else { 0.0 };
    (lmax.sqrt(), lmin.sqrt())
}

/// Rank of the Jacobian of `f₀` at `w0`: 2 if `|F| > tol`, 1 if `|F| ≤ tol < |G|`,
/// 0 if both vanish. Cross-checked against the singular values of a
/// finite-difference Jacobian; a clear disagreement is an internal error.
pub fn jacobian_rank_at(data: &WeierstrassData, w0: Complex64, tol: f64) -> Result<u8> {
    if !data.domain.contains(w0.re, w0.im) {
        return Err(Error::OutOfDomain { u: w0.re, v: w0.im });
    }
    let f = eval(&data.f, w0)?.norm();
    let g = eval(&data.g, w0)?.norm();
    let analytic = if f > tol {
        2
    } else if g > tol {
        1
    } else {
        0
    };

    let h = 1e-4 * data.domain.extent();
    let (smax, smin) = singular_values(&jacobian_fd(data, w0, h)?);
    // Finite-difference noise floor; values inside the band around tol are ties.
    let noise = 1e-8 * (1.0 + smax);
    let clearly_above = |s: f64| s > 2.0 * tol + noise;
    let clearly_below = |s: f64| s < 0.5 * tol - noise;
    let consistent = match analytic {
        2 => !clearly_below(smin),
        1 => !clearly_above(smin) && !clearly_below(smax),
        _ => !clearly_above(smax),
    };
    if !consistent {
        return Err(Error::InternalConsistency(format!(
            "analytic rank {analytic} but singular values ({smax:e}, {smin:e}) at {w0}"
        )));
    }
    Ok(analytic)
}

/// Settings for [`singular_report_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub nu: usize,
    pub nv: usize,
    pub tol: f64,
    pub contour_samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { nu: 64, nv: 64, tol: DEFAULT_TOL, contour_samples: 256 }
    }
}

/// All zeros of `F` in `domain` with multiplicity and Jacobian rank, sorted by `|w|`.
pub fn singular_report(data: &WeierstrassData, domain: Rect) -> Result<Vec<SingularPoint>> {
    singular_report_with(data, domain, &ScanConfig::default())
}

pub fn singular_report_with(data: &WeierstrassData, domain: Rect, cfg: &ScanConfig) -> Result<Vec<SingularPoint>> {
    let grid = Sampling::nodes(domain, cfg.nu, cfg.nv)?;
    let scan = find_zeros(&data.f, domain, &grid, cfg.tol)?;
    let all: Vec<Complex64> = scan.zeros.iter().chain(scan.unrefined.iter()).copied().collect();
    let g_holo = Holo::new(&data.g);
    let restricted = WeierstrassData { domain, ..data.clone() };

    let mut out = Vec::new();
    for (k, &w) in all.iter().enumerate() {
        let refined = k < scan.zeros.len();
        let radius = default_radius(w, &all, &domain);
        let multiplicity = zero_multiplicity(&data.f, w, radius, cfg.contour_samples)?;
        if multiplicity == 0 {
            continue;
        }
        let g_abs = eval(&data.g, w)?.norm();
        let g_vanishes = if g_abs <= cfg.tol {
            true
        } else if refined && g_abs <= cfg.tol.sqrt() {
            // Near-tie: refine G's own zero and see whether it is the same point.
            g_holo
                .refine(w, &domain, cfg.tol)
                .is_some_and(|zg| (zg - w).norm() <= merge_radius(cfg.tol, w))
        } else {
            false
        };
        if refined {
            let r = jacobian_rank_at(&restricted, w, cfg.tol)?;
            if r == 2 {
                return Err(Error::InternalConsistency(format!("refined zero {w} has full rank")));
            }
        }
        out.push(SingularPoint { w, multiplicity, rank: if g_vanishes { 0 } else { 1 }, refined, g_vanishes });
    }
    out.sort_by(|a, b| a.w.norm().total_cmp(&b.w.norm()).then(a.w.re.total_cmp(&b.w.re)).then(a.w.im.total_cmp(&b.w.im)));
    Ok(out)
}
