//! Named closed-form surfaces with their expected geometric flags.

use alloc::format;
use alloc::string::{String, ToString};
use core::f64::consts::PI;

// Float supplies libm-backed math when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::geom021::{fundamental_forms, mean_curvature, relative_gauss_curvature, FnPatch, Patch, PatchKind, Vec021};
use crate::{Error, Layout, Rect, Result, Sampling};

/// Stable identifiers accepted by [`get`]. `dlambda_geodesic` takes an
/// optional parameter, e.g. `dlambda_geodesic(0.5)`; the default is `λ = 1`.
pub const NAMES: [&str; 8] = [
    "plane",
    "paraboloid",
    "helicoid2",
    "hyp_paraboloid_uv",
    "hyp_paraboloid_diff",
    "rotational_log",
    "dlambda_geodesic",
    "cubic_harmonic",
];

pub fn names() -> &'static [&'static str] {
    &NAMES
}

/// Flags an entry is known to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub is_d_minimal: bool,
    /// `h = λ g` for a constant `λ` (planes included, with `λ = 0`).
    pub is_umbilical: bool,
    /// Sign of the relative Gaussian curvature where it does not vanish.
    pub k_sign: i8,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub patch: FnPatch,
    pub expected: Expected,
    /// Canonical sampling, avoiding singular parameter lines.
    pub sampling: Sampling,
}

impl CatalogEntry {
    pub fn domain(&self) -> Rect {
        self.sampling.rect
    }
}

fn square(r: f64) -> Rect {
    Rect { u0: -r, u1: r, v0: -r, v1: r }
}

fn entry(name: &str, patch: FnPatch, expected: Expected) -> Result<CatalogEntry> {
    let sampling = Sampling::with_layout(patch.domain(), 24, 24, Layout::Cells)?;
    Ok(CatalogEntry { name: name.to_string(), patch, expected, sampling })
}

fn flags(is_d_minimal: bool, is_umbilical: bool, k_sign: i8) -> Expected {
    Expected { is_d_minimal, is_umbilical, k_sign }
}

fn parse_lambda(name: &str) -> Result<Option<f64>> {
    let Some(rest) = name.strip_prefix("dlambda_geodesic") else { return Ok(None) };
    if rest.is_empty() {
        return Ok(Some(1.0));
    }
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))?;
    let lambda: f64 = inner.trim().parse().map_err(|_| Error::UnknownCatalogEntry(name.to_string()))?;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument("dlambda_geodesic needs a finite non-zero λ"));
    }
    Ok(Some(lambda))
}

/// The d^λ-totally geodesic graph `F = (1/λ) log|λu + 1| − u − v` on the
/// side `u > −1/λ` of its singular line.
pub fn dlambda_geodesic(lambda: f64) -> Result<CatalogEntry> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument("dlambda_geodesic needs a finite non-zero λ"));
    }
    let u0 = -1.0 / lambda + 0.1;
    let u1 = if 3.0 - u0 >= 0.5 { 3.0 } else { u0 + 2.9 };
    let domain = Rect::new(u0, u1, -1.0, 1.0)?;
    let patch = FnPatch::graph(domain, move |u, v| (lambda * u + 1.0).abs().ln() / lambda - u - v);
    entry(&format!("dlambda_geodesic({lambda})"), patch, flags(false, false, 0))
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    if let Some(lambda) = parse_lambda(name)? {
        return dlambda_geodesic(lambda);
    }
    match name {
        "plane" => entry(name, FnPatch::graph(square(1.0), |_, _| 0.0), flags(true, true, 0)),
        "paraboloid" => entry(name, FnPatch::graph(square(1.0), |u, v| u * u + v * v), flags(false, true, 1)),
        "helicoid2" => {
            let domain = Rect::new(-PI, PI, 0.5, 2.0)?;
            let p = FnPatch::new(domain, PatchKind::ClosedForm, |u, v| Vec021::new(v * u.cos(), v * u.sin(), u));
            entry(name, p, flags(true, false, -1))
        }
        "hyp_paraboloid_uv" => entry(name, FnPatch::graph(square(1.0), |u, v| u * v), flags(true, false, -1)),
        "hyp_paraboloid_diff" => {
            entry(name, FnPatch::graph(square(1.0), |u, v| 0.5 * (u * u - v * v)), flags(true, false, -1))
        }
        "rotational_log" => {
            let p = FnPatch::new(square(1.0), PatchKind::ClosedForm, |u, v| {
                Vec021::new(u.exp() * v.cos(), u.exp() * v.sin(), u)
            });
            entry(name, p, flags(true, false, -1))
        }
        "cubic_harmonic" => {
            entry(name, FnPatch::graph(square(1.0), |u, v| u * u * u - 3.0 * u * v * v), flags(true, false, -1))
        }
        _ => Err(Error::UnknownCatalogEntry(name.to_string())),
    }
}

/// What the geometry kernel measures on an entry's canonical sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub max_abs_mean_curvature: f64,
    pub min_k: f64,
    pub max_k: f64,
    /// `max |h − c g|` for the best constant `c` (`c` from the first sample).
    pub umbilic_defect: f64,
    pub umbilic_factor: f64,
}

impl Measured {
    pub fn is_d_minimal(&self, tol: f64) -> bool {
        self.max_abs_mean_curvature < tol
    }

    pub fn k_sign(&self, tol: f64) -> Option<i8> {
        match (self.min_k < -tol, self.max_k > tol) {
            (false, false) => Some(0),
            (true, false) => Some(-1),
            (false, true) => Some(1),
            (true, true) => None,
        }
    }

    pub fn is_umbilical(&self, tol: f64) -> bool {
        self.umbilic_defect < tol
    }

    /// Compares against the expected flags with the usual tolerances
    /// (`|H| < 1e-6`, umbilic defect `< 1e-6`). `𝒦` counts as zero within
    /// `1e-9·(1 + max|H|²)`: where `det h` vanishes, the noise in `𝒦` grows
    /// with the size of `h`.
    pub fn matches(&self, e: &Expected) -> bool {
        let k_tol = 1e-9 * (1.0 + self.max_abs_mean_curvature * self.max_abs_mean_curvature);
        self.is_d_minimal(1e-6) == e.is_d_minimal
            && self.is_umbilical(1e-6) == e.is_umbilical
            && self.k_sign(k_tol) == Some(e.k_sign)
    }
}

/// Measures `H`, `𝒦` and umbilicity at every sample of `sampling`.
pub fn measure(entry: &CatalogEntry, sampling: &Sampling) -> Result<Measured> {
    let step = entry.domain().default_step();
    let mut m = Measured {
        max_abs_mean_curvature: 0.0,
        min_k: f64::INFINITY,
        max_k: f64::NEG_INFINITY,
        umbilic_defect: 0.0,
        umbilic_factor: f64::NAN,
    };
    for (u, v) in sampling.points() {
        let f = fundamental_forms(&entry.patch, u, v, step)?;
        m.max_abs_mean_curvature = m.max_abs_mean_curvature.max(mean_curvature(&f)?.abs());
        let k = relative_gauss_curvature(&f)?;
        m.min_k = m.min_k.min(k);
        m.max_k = m.max_k.max(k);
        if m.umbilic_factor.is_nan() {
            m.umbilic_factor = f.h11 / f.g11;
        }
        let c = m.umbilic_factor;
        let defect = (f.h11 - c * f.g11).abs().max((f.h12 - c * f.g12).abs()).max((f.h22 - c * f.g22).abs());
        m.umbilic_defect = m.umbilic_defect.max(defect);
    }
    Ok(m)
}

/// Integrates the profile equation `y'' = −y'/x` with classical RK4 from the
/// left end of `x_range` and returns the largest deviation from
/// `C₁ log x + C₂` over the steps.
pub fn rotational_profile_check(c1: f64, c2: f64, x_range: (f64, f64), steps: usize) -> Result<f64> {
    let (a, b) = x_range;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::RangeCrossesZero(a, b));
    }
    if steps == 0 || !(b > a) {
        return Err(Error::InvalidArgument("profile check needs an increasing range and at least one step"));
    }
    let exact = |x: f64| c1 * x.ln() + c2;
    let rhs = |x: f64, s: [f64; 2]| [s[1], -s[1] / x];
    let h = (b - a) / steps as f64;
    let mut s = [exact(a), c1 / a];
    let mut worst: f64 = 0.0;
    for k in 0..steps {
        let x = a + h * k as f64;
        let k1 = rhs(x, s);
        let k2 = rhs(x + 0.5 * h, [s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(x + 0.5 * h, [s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(x + h, [s[0] + h * k3[0], s[1] + h * k3[1]]);
        for i in 0..2 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let x_next = if k + 1 == steps { b } else { a + h * (k + 1) as f64 };
        worst = worst.max((s[0] - exact(x_next)).abs());
    }
    Ok(worst)
}
