//! Gauss–Legendre quadrature on segments, real and complex.

use num_complex::Complex64;

use crate::{Error, Result};

/// Nodes of the 16-point Gauss–Legendre rule on `[-1, 1]`.
pub const GL16_NODES: [f64; 16] = [
    -0.9894009349916499,
    -0.9445750230732326,
    -0.8656312023878318,
    -0.755404408355003,
    -0.6178762444026438,
    -0.45801677765722737,
    -0.2816035507792589,
    -0.09501250983763745,
    0.09501250983763745,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];

pub const GL16_WEIGHTS: [f64; 16] = [
    0.027152459411754037,
    0.062253523938647706,
    0.09515851168249259,
    0.12462897125553403,
    0.14959598881657676,
    0.16915651939500262,
    0.1826034150449236,
    0.18945061045506859,
    0.18945061045506859,
    0.1826034150449236,
    0.16915651939500262,
    0.14959598881657676,
    0.12462897125553403,
    0.09515851168249259,
    0.062253523938647706,
    0.027152459411754037,
];

/// Adaptive quadrature settings for segment integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance per unit segment length.
    pub abs_tol: f64,
    /// Maximum halving depth.
    pub max_depth: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-10, max_depth: 24 }
    }
}

/// 16-point rule on the parameter interval `[t0, t1]` of `f`.
fn gl16<F>(f: &mut F, t0: f64, t1: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let half = 0.5 * (t1 - t0);
    let mid = 0.5 * (t1 + t0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
        acc += f(mid + half * x)? * *w;
    }
    Ok(acc * half)
}

fn adapt<F>(f: &mut F, t0: f64, t1: f64, whole: Complex64, tol: f64, depth: usize, cfg: &QuadConfig) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mid = 0.5 * (t0 + t1);
    let left = gl16(f, t0, mid)?;
    let right = gl16(f, mid, t1)?;
    let halves = left + right;
    if (halves - whole).norm() <= tol {
        return Ok(halves);
    }
    if depth >= cfg.max_depth {
        return Err(Error::QuadratureNonConvergence { subdivisions: depth });
    }
    let l = adapt(f, t0, mid, left, 0.5 * tol, depth + 1, cfg)?;
    let r = adapt(f, mid, t1, right, 0.5 * tol, depth + 1, cfg)?;
    Ok(l + r)
}

/// `∫ f(w) dw` along the straight segment from `a` to `b`.
///
/// Adaptive 16-point Gauss–Legendre with interval halving; each accepted
/// panel is the sum of its two halves.
pub fn segment_integral<F>(mut f: F, a: Complex64, b: Complex64, cfg: &QuadConfig) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Parametrize by t ∈ [0, 1]: dw = d dt.
    let mut g = |t: f64| f(a + d * t).map(|v| v * d);
    let whole = gl16(&mut g, 0.0, 1.0)?;
    let r = adapt(&mut g, 0.0, 1.0, whole, cfg.abs_tol * len.max(1e-300), 0, cfg)?;
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow)
    }
}

/// Composite fixed 16-point rule over `panels` equal panels of `[a, b]`.
///
/// The node set moves continuously with `a` and `b`, so the result is a
/// smooth function of the endpoints; finite differences of it stay clean.
pub fn fixed_real<F>(mut f: F, a: f64, b: f64, panels: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let t0 = a + h * p as f64;
        let mid = t0 + 0.5 * h;
        for (x, w) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
            acc += w * f(mid + 0.5 * h * x)?;
        }
    }
    Ok(acc * 0.5 * h)
}
