use alloc::sync::Arc;


use super::Vec021;

/// A curve `t ↦ ℝ^{0,2,1}` on `[t0, t1]`.
#[derive(Clone)]
pub struct Curve {
    f: Arc<dyn Fn(f64) -> Vec021 + Send + Sync>,
    pub t0: f64,
    pub t1: f64,
}

impl core::fmt::Debug for Curve {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Curve").field("t0", &self.t0).field("t1", &self.t1).finish()
    }
}

impl Curve {
    pub fn new(t0: f64, t1: f64, f: impl Fn(f64) -> Vec021 + Send + Sync + 'static) -> Self {
        Curve { f: Arc::new(f), t0, t1 }
    }

    pub fn at(&self, t: f64) -> Vec021 {
        (self.f)(t)
    }

    fn derivative(&self, t: f64, step: f64) -> Vec021 {
        let d = |h: f64| (self.at(t + h) - self.at(t - h)) * (0.5 / h);
        let (coarse, fine) = (d(step), d(0.5 * step));
        fine * (4.0 / 3.0) - coarse * (1.0 / 3.0)
    }

    fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        (0..n).map(move |k| self.t0 + (self.t1 - self.t0) * k as f64 / (n - 1) as f64)
    }
}

/// `|c'(t)|` in the degenerate norm.
pub fn curve_speed(c: &Curve, t: f64, step: f64) -> f64 {
    c.derivative(t, step).deg_norm()
}

/// Outcome of [`is_null_curve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullCurveWitness {
    pub is_null: bool,
    pub max_speed: f64,
    /// For null curves: whether x and y stayed constant (the curve is a
    /// vertical line). `None` when the curve is not null.
    pub xy_constant: Option<bool>,
}

impl NullCurveWitness {
    /// A null curve whose xy-projection moved: contradicts the classification.
    pub fn alarm(&self) -> bool {
        self.xy_constant == Some(false)
    }
}

/// A curve is null when its degenerate speed vanishes at every sample; null
/// curves are vertical lines, which is checked as well.
pub fn is_null_curve(c: &Curve, samples: usize, tol: f64) -> NullCurveWitness {
    let step = 1e-3 * (c.t1 - c.t0).abs().max(1e-6);
    let max_speed = c.samples(samples).map(|t| curve_speed(c, t, step)).fold(0.0, f64::max);
    let is_null = max_speed < tol;
    let xy_constant = is_null.then(|| {
        let p0 = c.at(c.t0);
        c.samples(samples).all(|t| {
            let p = c.at(t);
            (p.x - p0.x).abs().max((p.y - p0.y).abs()) <= tol.max(1e-12) * (c.t1 - c.t0).abs().max(1.0)
        })
    });
    NullCurveWitness { is_null, max_speed, xy_constant }
}

/// Outcome of [`arc_length_admissible`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub min_speed: f64,
    /// First sample where the projected speed dropped below tolerance.
    pub first_failure: Option<f64>,
}

/// An arc-length parameter exists iff the xy-projection is regular.
pub fn arc_length_admissible(c: &Curve, samples: usize, tol: f64) -> Admissibility {
    let step = 1e-3 * (c.t1 - c.t0).abs().max(1e-6);
    let mut min_speed = f64::INFINITY;
    let mut first_failure = None;
    for t in c.samples(samples) {
        let s = curve_speed(c, t, step);
        min_speed = min_speed.min(s);
        if s <= tol && first_failure.is_none() {
            first_failure = Some(t);
        }
    }
    Admissibility { admissible: first_failure.is_none(), min_speed, first_failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speeds() {
        let circle = Curve::new(0.0, 6.0, |t| Vec021::new(t.cos(), t.sin(), t * t));
        for t in [0.5, 2.0, 4.5] {
            assert!((curve_speed(&circle, t, 1e-3) - 1.0).abs() < 1e-10);
        }
        let vertical = Curve::new(-1.0, 1.0, |t| Vec021::new(0.0, 0.0, t));
        assert_eq!(curve_speed(&vertical, 0.3, 1e-3), 0.0);
        let line = Curve::new(-1.0, 1.0, |t| Vec021::new(2.0 * t, 0.0, 5.0));
        assert!((curve_speed(&line, 0.1, 1e-3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn null_curves_are_vertical_lines() {
        let w = is_null_curve(&Curve::new(-1.0, 1.0, |t| Vec021::new(0.0, 0.0, t)), 51, 1e-9);
        assert!(w.is_null && w.xy_constant == Some(true) && !w.alarm());
        let w = is_null_curve(&Curve::new(0.0, 6.0, |t| Vec021::new(t.cos(), t.sin(), 0.0)), 51, 1e-9);
        assert!(!w.is_null && w.xy_constant.is_none());
        let w = is_null_curve(&Curve::new(-1.0, 1.0, |t| Vec021::new(t, 0.0, t)), 51, 1e-9);
        assert!(!w.is_null && (w.max_speed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arc_length_parameter_existence() {
        let ok = arc_length_admissible(&Curve::new(0.0, 6.0, |t| Vec021::new(t.cos(), t.sin(), t * t)), 101, 1e-9);
        assert!(ok.admissible);
        let cusp = arc_length_admissible(&Curve::new(-1.0, 1.0, |t| Vec021::new(t * t, 0.0, t)), 101, 1e-9);
        assert!(!cusp.admissible);
        assert_eq!(cusp.first_failure, Some(0.0));
        let vertical = arc_length_admissible(&Curve::new(-1.0, 1.0, |t| Vec021::new(0.0, 0.0, t)), 11, 1e-9);
        assert!(!vertical.admissible);
    }
}
