use super::jet;
use crate::{Error, Result};

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Gaussian curvature of a Riemannian metric `(E, F, G)` given pointwise,
/// by the Brioschi formula with finite-difference metric derivatives.
pub fn brioschi_curvature<M>(metric: M, u: f64, v: f64, step: f64) -> Result<f64>
where
    M: Fn(f64, f64) -> Result<[f64; 3]>,
{
    let j = jet(metric, u, v, step)?;
    let [e, f, g] = j.value;
    let [e_u, f_u, g_u] = j.du;
    let [e_v, f_v, g_v] = j.dv;
    let denom = e * g - f * f;
    if !(denom > 0.0) {
        return Err(Error::SingularForms { det: denom });
    }
    let a = [
        [-0.5 * j.dvv[0] + j.duv[1] - 0.5 * j.duu[2], 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ];
    let b = [[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]];
    Ok((det3(a) - det3(b)) / (denom * denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_plane_is_flat() {
        let k = brioschi_curvature(|r, _| Ok([1.0, 0.0, r * r]), 1.3, 0.2, 1e-2).unwrap();
        assert!(k.abs() < 1e-9);
    }

    #[test]
    fn round_sphere() {
        let radius = 2.5;
        let k = brioschi_curvature(
            |t, _| Ok([radius * radius, 0.0, radius * radius * t.sin() * t.sin()]),
            1.0,
            0.4,
            1e-2,
        )
        .unwrap();
        assert!((k - 1.0 / (radius * radius)).abs() < 1e-8, "{k}");
    }

    #[test]
    fn hyperbolic_plane() {
        // Poincaré half-plane, K = -1.
        let k = brioschi_curvature(|_, y| Ok([1.0 / (y * y), 0.0, 1.0 / (y * y)]), 0.0, 1.5, 1e-2).unwrap();
        assert!((k + 1.0).abs() < 1e-7, "{k}");
    }
}
