//! Property tests for the linear-algebra identities, the metric-projection
//! characterization, the subgradient machinery and the stepsize bounds.

#![allow(clippy::type_complexity)]

use proptest::prelude::*;
use sep_core::*;
use std::sync::Arc;

fn v(e: &[f64]) -> Vector {
    Vector::from_slice(e).unwrap()
}

fn finite_coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(finite_coord(), 3)
}

proptest! {
    #[test]
    fn adjoint_identity_holds_on_random_operators(
        entries in proptest::collection::vec(finite_coord(), 12),
        u in vec3(),
        w in proptest::collection::vec(finite_coord(), 4),
    ) {
        // 4x3 operator: <Au, w> == <u, A*w> up to roundoff.
        let a = DenseOperator::new(4, 3, entries).unwrap();
        let u = v(&u);
        let w = v(&w);
        let lhs = inner(&a.apply(&u).unwrap(), &w).unwrap();
        let rhs = inner(&u, &a.adjoint_apply(&w).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn squared_norm_convexity_identity(
        x in vec3(),
        y in vec3(),
        kappa in 0.0..1.0f64,
    ) {
        // |k x + (1-k) y|^2 == k |x|^2 + (1-k) |y|^2 - k (1-k) |x - y|^2
        let x = v(&x);
        let y = v(&y);
        let mix = combine(kappa, &x, 1.0 - kappa, &y).unwrap();
        let lhs = norm_sq(&mix).unwrap();
        let rhs = kappa * norm_sq(&x).unwrap() + (1.0 - kappa) * norm_sq(&y).unwrap()
            - kappa * (1.0 - kappa) * norm_sq(&combine(1.0, &x, -1.0, &y).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn combine_identity_is_bitwise(x in vec3(), y in vec3()) {
        let x = v(&x);
        let y = v(&y);
        let c = combine(1.0, &x, 0.0, &y).unwrap();
        for (a, b) in c.as_slice().iter().zip(x.as_slice()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

/// The shipped projectable sets, each paired with an independent generator
/// of member points used by the variational-inequality and distance checks.
fn shipped_sets() -> Vec<(&'static str, Arc<dyn ProjectableSet>, Box<dyn Fn(&[f64]) -> Vector>)> {
    let halfspace = HalfSpace::new(v(&[3.0, -1.0, 2.0]), 1.5).unwrap();
    let ball = BallSet::new(v(&[0.5, -0.5, 1.0]), 2.0).unwrap();
    let boxset = BoxSet::new(v(&[-1.0, 0.0, -2.0]), v(&[1.0, 2.0, -0.5])).unwrap();
    vec![
        (
            "halfspace",
            Arc::new(halfspace),
            Box::new(|r: &[f64]| {
                // Reflect the positive-side part of a random point across
                // the bounding hyperplane, then push strictly inside.
                let a = [3.0, -1.0, 2.0];
                let b = 1.5;
                let s = a[0] * r[0] + a[1] * r[1] + a[2] * r[2];
                let nn = 14.0;
                let shift = ((s - b).max(0.0) + r[0].abs() * 0.1) / nn;
                v(&[r[0] - shift * a[0], r[1] - shift * a[1], r[2] - shift * a[2]])
            }),
        ),
        (
            "cylinder",
            Arc::new(CylinderSet),
            Box::new(|r: &[f64]| {
                // (free, s cos t, s sin t) with s in [0, 1].
                let s = (r[0].abs() / 10.0).min(1.0);
                let t = r[1];
                v(&[r[2], s * t.cos(), s * t.sin()])
            }),
        ),
        (
            "parabolic",
            Arc::new(ParabolicSet),
            Box::new(|r: &[f64]| {
                // (t, t^2 + 5 + slack, free)
                let t = r[0];
                v(&[t, t * t + 5.0 + r[1].abs(), r[2]])
            }),
        ),
        (
            "ball",
            Arc::new(ball),
            Box::new(|r: &[f64]| {
                let d = [r[0], r[1], r[2]];
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt().max(1e-9);
                let s = 2.0 * (r[0].abs() / 10.0).min(1.0) / n;
                v(&[0.5 + s * d[0], -0.5 + s * d[1], 1.0 + s * d[2]])
            }),
        ),
        (
            "box",
            Arc::new(boxset),
            Box::new(|r: &[f64]| {
                v(&[
                    r[0].clamp(-1.0, 1.0),
                    r[1].clamp(0.0, 2.0),
                    r[2].clamp(-2.0, -0.5),
                ])
            }),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projections_are_idempotent(x in vec3()) {
        let x = v(&x);
        for (name, set, _) in shipped_sets() {
            let p1 = set.project(&x).unwrap();
            let p2 = set.project(&p1).unwrap();
            let gap = norm(&combine(1.0, &p2, -1.0, &p1).unwrap()).unwrap();
            prop_assert!(gap <= 1e-9, "{} idempotence gap {}", name, gap);
            prop_assert!(set.violation(&p1).unwrap() <= 1e-9, "{} membership", name);
        }
    }

    #[test]
    fn projections_satisfy_the_variational_inequality(x in vec3(), m in vec3()) {
        // <P(x) - x, P(x) - y> <= 0 for every member y.
        for (name, set, member) in shipped_sets() {
            let x = v(x.as_slice());
            let y = member(m.as_slice());
            prop_assert!(set.violation(&y).unwrap() <= 1e-9, "{} member gen", name);
            let px = set.project(&x).unwrap();
            let lhs = inner(
                &combine(1.0, &px, -1.0, &x).unwrap(),
                &combine(1.0, &px, -1.0, &y).unwrap(),
            )
            .unwrap();
            prop_assert!(lhs <= 1e-9, "{} variational inequality: {}", name, lhs);
        }
    }

    #[test]
    fn projections_are_distance_optimal(x in vec3(), m in vec3()) {
        for (name, set, member) in shipped_sets() {
            let x = v(x.as_slice());
            let y = member(m.as_slice());
            let px = set.project(&x).unwrap();
            let d_proj = norm(&combine(1.0, &x, -1.0, &px).unwrap()).unwrap();
            let d_member = norm(&combine(1.0, &x, -1.0, &y).unwrap()).unwrap();
            prop_assert!(d_proj <= d_member + 1e-9, "{}: {} > {}", name, d_proj, d_member);
        }
    }

    #[test]
    fn level_sets_are_convex_with_valid_subgradients(x in vec3(), y in vec3()) {
        let fns: Vec<(&str, Arc<dyn LevelSetFunction>)> = vec![
            ("cylinder", Arc::new(CylinderSet)),
            ("parabolic", Arc::new(ParabolicSet)),
            ("ball", Arc::new(BallSet::new(v(&[0.5, -0.5, 1.0]), 2.0).unwrap())),
            ("box", Arc::new(BoxSet::new(v(&[-1.0, 0.0, -2.0]), v(&[1.0, 2.0, -0.5])).unwrap())),
            ("halfspace", Arc::new(HalfSpace::new(v(&[3.0, -1.0, 2.0]), 1.5).unwrap())),
        ];
        let x = v(&x);
        let y = v(&y);
        for (name, f) in fns {
            // Midpoint convexity.
            let mid = combine(0.5, &x, 0.5, &y).unwrap();
            let lhs = f.value(&mid).unwrap();
            let rhs = 0.5 * f.value(&x).unwrap() + 0.5 * f.value(&y).unwrap();
            prop_assert!(lhs <= rhs + 1e-9, "{} convexity: {} > {}", name, lhs, rhs);
            // Subgradient inequality f(y) >= f(x) + <g, y - x>.
            let g = f.subgradient(&x).unwrap();
            let bound = f.value(&x).unwrap()
                + inner(&g, &combine(1.0, &y, -1.0, &x).unwrap()).unwrap();
            prop_assert!(f.value(&y).unwrap() >= bound - 1e-9, "{} subgradient", name);
        }
    }

    #[test]
    fn relaxed_halfspace_contains_the_sublevel_set(x in vec3(), m in vec3()) {
        // Any point with f(m) <= 0 lies in the half-space linearized at x.
        let fns: Vec<(Arc<dyn LevelSetFunction>, Box<dyn Fn(&[f64]) -> Vector>)> = vec![
            (
                Arc::new(CylinderSet),
                Box::new(|r: &[f64]| {
                    let s = (r[0].abs() / 10.0).min(1.0);
                    v(&[r[2], s * r[1].cos(), s * r[1].sin()])
                }),
            ),
            (
                Arc::new(ParabolicSet),
                Box::new(|r: &[f64]| v(&[r[0], r[0] * r[0] + 5.0 + r[1].abs(), r[2]])),
            ),
        ];
        for (f, member) in fns {
            let at = v(x.as_slice());
            let inside = member(m.as_slice());
            prop_assert!(f.value(&inside).unwrap() <= 1e-12);
            let h = relaxed_halfspace(f.as_ref(), &at).unwrap();
            prop_assert!(h.violation(&inside).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn self_adaptive_stepsize_respects_the_descent_inequality(
        x in vec3(),
        y in vec3(),
        alpha in 0.05..0.95f64,
    ) {
        // gamma E - gamma^2 (|A* r|^2 + |B* r|^2) >= 0 and gamma in (0, 1).
        let a = DenseOperator::diagonal(&[5.0_f64.sqrt(), 5.0, 1.0]).unwrap();
        let b = DenseOperator::identity(3).unwrap();
        let c = SetHandle::with_both(Arc::new(CylinderSet), Arc::new(CylinderSet)).unwrap();
        let q = SetHandle::with_both(Arc::new(ParabolicSet), Arc::new(ParabolicSet)).unwrap();
        let p = SepProblem::new(a, b, c, q).unwrap();
        let x = v(&x);
        let y = v(&y);
        let gamma = self_adaptive_stepsize(&p, &x, &y, alpha).unwrap();
        prop_assert!(gamma > 0.0 && gamma < 1.0);
        let r = p.equality_residual(&x, &y).unwrap();
        let e = norm_sq(&r).unwrap();
        let denom = norm_sq(&p.a().adjoint_apply(&r).unwrap()).unwrap()
            + norm_sq(&p.b().adjoint_apply(&r).unwrap()).unwrap();
        prop_assert!(gamma * e - gamma * gamma * denom >= -1e-12);
    }
}
