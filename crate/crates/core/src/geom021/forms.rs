
use super::{brioschi_curvature, first_partials, jet, Patch, PatchKind, Vec021};
use crate::{Error, Result};

/// A point is singular when `det g ≤ DEGENERACY_TOL · max(1, g11 g22)`.
pub const DEGENERACY_TOL: f64 = 1e-10;

pub fn is_degenerate(g11: f64, g12: f64, g22: f64) -> bool {
    let det = g11 * g22 - g12 * g12;
    !(det > DEGENERACY_TOL * (g11 * g22).max(1.0))
}

/// Induced metric `g` and second fundamental form `h` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FundamentalForms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl FundamentalForms {
    pub fn det_g(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn det_h(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    pub fn h(&self) -> [f64; 3] {
        [self.h11, self.h12, self.h22]
    }

    pub fn g(&self) -> [f64; 3] {
        [self.g11, self.g12, self.g22]
    }

    /// `max |h_ij|`.
    pub fn h_sup(&self) -> f64 {
        self.h11.abs().max(self.h12.abs()).max(self.h22.abs())
    }

    fn checked_det_g(&self) -> Result<f64> {
        if is_degenerate(self.g11, self.g12, self.g22) {
            Err(Error::SingularForms { det: self.det_g() })
        } else {
            Ok(self.det_g())
        }
    }
}

/// Elliptic / hyperbolic / parabolic by the sign of the relative curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl PointClass {
    pub fn name(self) -> &'static str {
        match self {
            PointClass::Elliptic => "elliptic",
            PointClass::Hyperbolic => "hyperbolic",
            PointClass::Parabolic => "parabolic",
        }
    }
}

// Tangential/normal split of a second derivative: solve the xy-system
// second = a·fu + b·fv in x, y and return the ξ-component.
fn normal_part(fu: Vec021, fv: Vec021, second: Vec021) -> f64 {
    let det = fu.x * fv.y - fv.x * fu.y;
    let a = (second.x * fv.y - fv.x * second.y) / det;
    let b = (fu.x * second.y - second.x * fu.y) / det;
    second.z - a * fu.z - b * fv.z
}

fn to_vec(a: [f64; 3]) -> Vec021 {
    Vec021::from_array(a)
}

fn check_domain<P: Patch + ?Sized>(s: &P, u: f64, v: f64) -> Result<()> {
    if s.domain().contains(u, v) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { u, v })
    }
}

struct Frame {
    fu: Vec021,
    fv: Vec021,
    forms: FundamentalForms,
}

fn frame<P: Patch + ?Sized>(s: &P, u: f64, v: f64, step: f64) -> Result<Frame> {
    check_domain(s, u, v)?;
    let j = jet(|a, b| s.point(a, b).map(Vec021::to_array), u, v, step)?;
    let (fu, fv) = (to_vec(j.du), to_vec(j.dv));
    let g11 = super::deg_inner(fu, fu);
    let g12 = super::deg_inner(fu, fv);
    let g22 = super::deg_inner(fv, fv);
    if is_degenerate(g11, g12, g22) {
        return Err(Error::DegenerateMetric { u, v, det: g11 * g22 - g12 * g12 });
    }
    let forms = FundamentalForms {
        g11,
        g12,
        g22,
        h11: normal_part(fu, fv, to_vec(j.duu)),
        h12: normal_part(fu, fv, to_vec(j.duv)),
        h22: normal_part(fu, fv, to_vec(j.dvv)),
    };
    Ok(Frame { fu, fv, forms })
}

/// `g` and `h` of a patch at `(u, v)` by Richardson-extrapolated central differences.
pub fn fundamental_forms<P: Patch + ?Sized>(s: &P, u: f64, v: f64, step: f64) -> Result<FundamentalForms> {
    frame(s, u, v, step).map(|f| f.forms)
}

/// `ℋ = ½ tr_g h`.
pub fn mean_curvature(forms: &FundamentalForms) -> Result<f64> {
    let det = forms.checked_det_g()?;
    let f = forms;
    Ok(0.5 * (f.g22 * f.h11 - 2.0 * f.g12 * f.h12 + f.g11 * f.h22) / det)
}

/// `𝒦 = det h / det g`.
pub fn relative_gauss_curvature(forms: &FundamentalForms) -> Result<f64> {
    let det = forms.checked_det_g()?;
    Ok(forms.det_h() / det)
}

pub fn classify_point(k: f64, tol: f64) -> PointClass {
    if k > tol {
        PointClass::Elliptic
    } else if k < -tol {
        PointClass::Hyperbolic
    } else {
        PointClass::Parabolic
    }
}

/// Codazzi residual `max(|(h11)_v − (h12)_u|, |(h22)_u − (h12)_v|)` of an
/// arbitrary field `(u, v) ↦ (h11, h12, h22)`, by central differences.
pub fn codazzi_residual_field<F>(h: F, u: f64, v: f64, step: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<[f64; 3]>,
{
    let e = h(u + step, v)?;
    let w = h(u - step, v)?;
    let n = h(u, v + step)?;
    let s = h(u, v - step)?;
    let d = 2.0 * step;
    let r1 = (n[0] - s[0]) / d - (e[1] - w[1]) / d;
    let r2 = (e[2] - w[2]) / d - (n[1] - s[1]) / d;
    Ok(r1.abs().max(r2.abs()))
}

/// Codazzi residual of a graph patch. `step` is the outer difference; the
/// forms themselves use a step ten times smaller.
pub fn codazzi_residual<P: Patch + ?Sized>(s: &P, u: f64, v: f64, step: f64) -> Result<f64> {
    if s.kind() != PatchKind::Graph {
        return Err(Error::InvalidArgument("Codazzi residual needs a graph-kind patch (flat coordinates)"));
    }
    let inner = 0.1 * step;
    codazzi_residual_field(|a, b| fundamental_forms(s, a, b, inner).map(|f| f.h()), u, v, step)
}

/// Second fundamental form of the deformed connection `d^λ = d + L_λ ξ`
/// where `L_λ(X, Y) = λ σ(X) σ(Y)` and `σ` sums the components.
pub fn h_lambda<P: Patch + ?Sized>(s: &P, lambda: f64, u: f64, v: f64, step: f64) -> Result<FundamentalForms> {
    let Frame { fu, fv, forms } = frame(s, u, v, step)?;
    let (su, sv) = (fu.component_sum(), fv.component_sum());
    Ok(FundamentalForms {
        h11: forms.h11 + lambda * su * su,
        h12: forms.h12 + lambda * su * sv,
        h22: forms.h22 + lambda * sv * sv,
        ..forms
    })
}

/// Gaussian curvature of the induced metric `g` (Brioschi). Vanishes for
/// every non-degenerate patch since `g` is flat.
pub fn intrinsic_curvature<P: Patch + ?Sized>(s: &P, u: f64, v: f64, step: f64) -> Result<f64> {
    check_domain(s, u, v)?;
    let inner = 0.1 * step;
    let metric = |a: f64, b: f64| -> Result<[f64; 3]> {
        let (fu, fv) = first_partials(|x, y| s.point(x, y).map(Vec021::to_array), a, b, inner)?;
        let (fu, fv) = (to_vec(fu), to_vec(fv));
        Ok([super::deg_inner(fu, fu), super::deg_inner(fu, fv), super::deg_inner(fv, fv)])
    };
    brioschi_curvature(metric, u, v, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom021::FnPatch;
    use crate::Rect;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn helicoid() -> FnPatch {
        FnPatch::new(Rect::new(-3.0, 3.0, 0.5, 2.0).unwrap(), PatchKind::ClosedForm, |u, v| {
            Vec021::new(v * u.cos(), v * u.sin(), u)
        })
    }

    #[test]
    fn helicoid_forms_at_unit_radius() {
        let f = fundamental_forms(&helicoid(), 0.0, 1.0, 1e-3).unwrap();
        for (got, want) in f.g().iter().zip([1.0, 0.0, 1.0]) {
            assert!(close(*got, want, 1e-10), "{f:?}");
        }
        for (got, want) in f.h().iter().zip([0.0, -1.0, 0.0]) {
            assert!(close(*got, want, 1e-8), "{f:?}");
        }
        assert!(mean_curvature(&f).unwrap().abs() < 1e-8);
        assert!(close(relative_gauss_curvature(&f).unwrap(), -1.0, 1e-8));
    }

    #[test]
    fn paraboloid_is_umbilical_with_factor_two() {
        let p = FnPatch::graph(Rect::unit_square(), |u, v| u * u + v * v);
        for (u, v) in [(0.1, 0.2), (-0.7, 0.4), (0.9, -0.9)] {
            let f = fundamental_forms(&p, u, v, 1e-3).unwrap();
            assert!(close(f.h11, 2.0 * f.g11, 1e-8) && close(f.h12, 0.0, 1e-8) && close(f.h22, 2.0 * f.g22, 1e-8));
            assert!(close(mean_curvature(&f).unwrap(), 2.0, 1e-8));
            assert!(close(relative_gauss_curvature(&f).unwrap(), 4.0, 1e-7));
            assert_eq!(classify_point(4.0, 1e-9), PointClass::Elliptic);
        }
    }

    #[test]
    fn saddle_uv_at_three_five() {
        let p = FnPatch::graph(Rect::new(0.0, 10.0, 0.0, 10.0).unwrap(), |u, v| u * v);
        let f = fundamental_forms(&p, 3.0, 5.0, 1e-3).unwrap();
        assert!(close(f.g11, 1.0, 1e-10) && close(f.g12, 0.0, 1e-10) && close(f.g22, 1.0, 1e-10));
        assert!(close(f.h11, 0.0, 1e-7) && close(f.h12, 1.0, 1e-7) && close(f.h22, 0.0, 1e-7));
    }

    #[test]
    fn classification_band() {
        assert_eq!(classify_point(-1.0, 1e-9), PointClass::Hyperbolic);
        assert_eq!(classify_point(0.0, 1e-9), PointClass::Parabolic);
        assert_eq!(classify_point(5e-10, 1e-9), PointClass::Parabolic);
    }

    #[test]
    fn plane_has_zero_relative_curvature() {
        let p = FnPatch::graph(Rect::unit_square(), |_, _| 0.0);
        let f = fundamental_forms(&p, 0.3, 0.3, 1e-3).unwrap();
        assert_eq!(relative_gauss_curvature(&f).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_point_is_rejected() {
        // x-y projection collapses along v at v = 0.
        let p = FnPatch::new(Rect::unit_square(), PatchKind::ClosedForm, |u, v| Vec021::new(u, v * v * v, v));
        assert!(matches!(fundamental_forms(&p, 0.0, 0.0, 1e-3), Err(Error::DegenerateMetric { .. })));
        let bad = FundamentalForms { g11: 1.0, g12: 1.0, g22: 1.0, ..Default::default() };
        assert!(matches!(mean_curvature(&bad), Err(Error::SingularForms { .. })));
    }

    #[test]
    fn codazzi_examples() {
        let uv = FnPatch::graph(Rect::unit_square(), |u, v| u * v);
        assert!(codazzi_residual(&uv, 0.2, -0.3, 1e-2).unwrap() < 1e-7);
        let cubic = FnPatch::graph(Rect::unit_square(), |u, v| u * u * u - 3.0 * u * v * v);
        assert!(codazzi_residual(&cubic, 0.4, 0.5, 1e-2).unwrap() < 1e-5);
        let synthetic = |_u: f64, v: f64| Ok([v, 0.0, 0.0]);
        assert!(close(codazzi_residual_field(synthetic, 0.1, 0.2, 1e-3).unwrap(), 1.0, 1e-9));
        assert!(codazzi_residual(&helicoid(), 0.0, 1.0, 1e-2).is_err());
    }

    #[test]
    fn h_lambda_examples() {
        let plane = FnPatch::graph(Rect::unit_square(), |_, _| 0.0);
        let hl = h_lambda(&plane, 1.0, 0.2, 0.1, 1e-3).unwrap();
        assert!(close(hl.h11, 1.0, 1e-9) && close(hl.h12, 1.0, 1e-9) && close(hl.h22, 1.0, 1e-9));
        let same = h_lambda(&helicoid(), 0.0, 0.3, 1.2, 1e-3).unwrap();
        assert_eq!(same, fundamental_forms(&helicoid(), 0.3, 1.2, 1e-3).unwrap());
        let lam = 1.0;
        let dl = FnPatch::graph(Rect::new(-0.9, 3.0, -1.0, 1.0).unwrap(), move |u, v| {
            (lam * u + 1.0).abs().ln() / lam - u - v
        });
        let hl = h_lambda(&dl, lam, 1.0, 0.0, 1e-3).unwrap();
        assert!(hl.h_sup() < 1e-8, "{hl:?}");
    }

    #[test]
    fn induced_metric_is_flat() {
        let k = intrinsic_curvature(&helicoid(), 0.3, 1.2, 1e-2).unwrap();
        assert!(k.abs() < 1e-6, "{k}");
    }
}
