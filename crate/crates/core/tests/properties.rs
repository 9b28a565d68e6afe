//! Property tests for the invariants the modules promise.

use dmin_core::cxparse::{
    cauchy_riemann_residual, differentiate, differentiate_wrt, eval, eval_real, parse_expr, parse_real, Expr, Grammar,
};
use dmin_core::geom021::{deg_inner, fundamental_forms, AffineIsometry, ExprGraph, Vec021};
use dmin_core::mink4::{iota_embed, lorentz_inner, vanishing_h_locus};
use dmin_core::reconstruct::{surface_from_forms, PrescribedForms, Seed};
use dmin_core::singular::{default_radius, find_zeros, jacobian_rank_at, zero_multiplicity, DEFAULT_TOL};
use dmin_core::weier::WeierstrassData;
use dmin_core::{Complex64, Rect, Sampling};
use proptest::prelude::*;

fn square() -> Rect {
    Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()
}

// Entire functions only, so every sample point is regular.
fn holo_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("z".to_string()),
        (-2.0..2.0f64).prop_map(|c| format!("({c:?})")),
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| format!("({a:?}+({b:?})*i)")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}+{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}-{b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}*{b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
            (inner.clone(), prop::sample::select(vec!["exp", "sin", "cos", "sinh", "cosh"]))
                .prop_map(|(a, f)| format!("{f}({a})")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

fn point(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(u, v)| Complex64::new(u, v))
}

fn vec021() -> impl Strategy<Value = Vec021> {
    (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y, z)| Vec021::new(x, y, z))
}

// Hessian of a random quartic, so the Codazzi equations hold exactly.
fn quartic_hessian() -> impl Strategy<Value = [Expr; 3]> {
    prop::collection::vec(-1.0..1.0f64, 12).prop_map(|c| {
        let mut terms = Vec::new();
        let mut k = 0;
        for a in 0..=4 {
            for b in 0..=(4 - a) {
                if a + b >= 2 {
                    terms.push(format!("({:?})*u^{a}*v^{b}", c[k]));
                    k += 1;
                }
            }
        }
        let phi = parse_real(&terms.join("+")).unwrap();
        let (pu, pv) = (differentiate_wrt(&phi, 0), differentiate_wrt(&phi, 1));
        [differentiate_wrt(&pu, 0), differentiate_wrt(&pu, 1), differentiate_wrt(&pv, 1)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivative_matches_difference_quotient(src in holo_source(), w in point(0.8)) {
        let ast = parse_expr(&src).unwrap();
        let exact = eval(&differentiate(&ast), w).unwrap();
        let h = 1e-5;
        let fd = (eval(&ast, w + h).unwrap() - eval(&ast, w - h).unwrap()) / (2.0 * h);
        let scale = 1.0 + exact.norm() + eval(&ast, w).unwrap().norm();
        prop_assert!((exact - fd).norm() < 1e-6 * scale, "{src} at {w}: {exact} vs {fd}");
    }

    #[test]
    fn iota_preserves_inner_products_exactly(p in vec021(), q in vec021()) {
        prop_assert_eq!(lorentz_inner(iota_embed(p), iota_embed(q)), deg_inner(p, q));
    }

    #[test]
    fn isometries_preserve_degenerate_metric(
        p in vec021(), q in vec021(),
        angle in -3.2..3.2f64, reflect in any::<bool>(),
        a in -2.0..2.0f64, b in -2.0..2.0f64, c in 0.1..3.0f64, t in vec021(),
    ) {
        let iso = AffineIsometry::planar(angle, reflect, a, b, c, t).unwrap();
        let before = deg_inner(p - q, p - q);
        let after = deg_inner(iso.apply(p) - iso.apply(q), iso.apply(p) - iso.apply(q));
        prop_assert!((before - after).abs() <= 1e-12 * (1.0 + before));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn holomorphic_expressions_satisfy_cauchy_riemann(src in holo_source(), w in point(0.8)) {
        let ast = parse_expr(&src).unwrap();
        let scale = 1.0 + eval(&differentiate(&ast), w).unwrap().norm();
        prop_assert!(cauchy_riemann_residual(&ast, w, 1e-5).unwrap() < 1e-6 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn printing_then_parsing_is_identity(src in holo_source()) {
        let ast = parse_expr(&src).unwrap();
        let printed = ast.display(&Grammar::COMPLEX).to_string();
        let back = parse_expr(&printed).unwrap();
        prop_assert_eq!(&back, &ast, "{} printed as {}", src, printed);
    }

    #[test]
    fn planted_roots_are_found_with_multiplicity(
        roots in prop::collection::vec(((-0.8..0.8f64, -0.8..0.8f64), 1u32..=2), 1..=2)
            .prop_filter("separated", |r| r.len() < 2 || {
                let (a, b) = (r[0].0, r[1].0);
                (a.0 - b.0).hypot(a.1 - b.1) >= 0.15
            })
    ) {
        let src = roots.iter().map(|((x, y), m)| format!("(z-({x:?}+({y:?})*i))^{m}")).collect::<Vec<_>>().join("*");
        let ast = parse_expr(&src).unwrap();
        let grid = Sampling::nodes(square(), 64, 64).unwrap();
        let scan = find_zeros(&ast, square(), &grid, DEFAULT_TOL).unwrap();
        prop_assert_eq!(scan.zeros.len(), roots.len(), "{}", src);
        let centers: Vec<Complex64> = roots.iter().map(|((x, y), _)| Complex64::new(*x, *y)).collect();
        for (r, (_, m)) in centers.iter().zip(&roots) {
            let e = scan.zeros.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(e < 1e-8, "{src}: root {r} missed by {e:e}");
            let radius = default_radius(*r, &centers, &square());
            prop_assert_eq!(zero_multiplicity(&ast, *r, radius, 256).unwrap(), *m);
        }
    }

    #[test]
    fn cubic_vanishing_locus_is_one_point(
        a in -1.0..1.0f64, b in -1.0..1.0f64, cu in -0.6..0.6f64, cv in -0.6..0.6f64,
        l0 in -1.0..1.0f64, l1 in -1.0..1.0f64,
    ) {
        prop_assume!(a.hypot(b) > 0.2);
        // Re((a − ib)(w − c)³) plus an affine part: h vanishes only at c.
        let (x, y) = (format!("(u-({cu:?}))"), format!("(v-({cv:?}))"));
        let src = format!(
            "({a:?})*({x}^3-3*{x}*{y}^2)+({b:?})*(3*{x}^2*{y}-{y}^3)+({l0:?})*u+({l1:?})*v"
        );
        let g = ExprGraph::parse(&src, square()).unwrap();
        let grid = Sampling::cells(square(), 32, 32).unwrap();
        let locus = vanishing_h_locus(&g, &grid, 1e-6).unwrap();
        prop_assert!(locus.is_discrete(), "{src}: {locus:?}");
        prop_assert_eq!(locus.clusters.len(), 1);
        let c = locus.clusters[0].center;
        prop_assert!((c.0 - cu).hypot(c.1 - cv) < 1e-6, "{src}: center {c:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // At regular points the finite-difference Jacobian must agree with the
    // analytic rank; a disagreement surfaces as an error.
    #[test]
    fn jacobian_rank_is_two_at_regular_points(
        c in prop::collection::vec(-1.0..1.0f64, 4), w in point(0.9),
    ) {
        let f = format!("({:?})+({:?})*z+({:?})*z^2", c[0] + 2.0, c[1], c[2]);
        let g = format!("exp(({:?})*z)", c[3]);
        let data = WeierstrassData::parse(&f, &g, None, square()).unwrap();
        prop_assume!(eval(&data.f, w).unwrap().norm() > 0.1);
        prop_assert_eq!(jacobian_rank_at(&data, w, DEFAULT_TOL).unwrap(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reconstruction_round_trips_and_seed_only_adds_affine_part(
        h in quartic_hessian(), f0 in -2.0..2.0f64, fu0 in -2.0..2.0f64, fv0 in -2.0..2.0f64,
    ) {
        let grid = Sampling::nodes(square(), 17, 17).unwrap();
        let forms = PrescribedForms::Expressions { h: h.clone(), domain: square() };
        let plain = surface_from_forms(&forms, (0.0, 0.0), Seed::default(), &grid, 1e-7).unwrap();
        let seeded = surface_from_forms(&forms, (0.0, 0.0), Seed { f0, fu0, fv0 }, &grid, 1e-7).unwrap();
        let step = square().default_step();
        for (u, v) in Sampling::cells(square(), 4, 4).unwrap().points() {
            let got = fundamental_forms(&plain, u, v, step).unwrap().h();
            for k in 0..3 {
                let want = eval_real(&h[k], &[u, v]).unwrap();
                prop_assert!((got[k] - want).abs() < 1e-5, "h{k} at ({u},{v}): {} vs {want}", got[k]);
            }
            let shift = seeded.height(u, v).unwrap() - plain.height(u, v).unwrap();
            prop_assert!((shift - (f0 + fu0 * u + fv0 * v)).abs() < 1e-9);
        }
    }
}
