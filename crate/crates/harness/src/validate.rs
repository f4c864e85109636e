//! Runtime validation battery: every invariant the library promises,
//! checked against independent oracles on seeded random inputs.
//!
//! The same checks back both the `validate` CLI command and the
//! acceptance test suite, so the oracles here (grid searches, finite
//! differences, line-by-line recursion transcripts) deliberately avoid
//! the code paths they audit.

use std::sync::Arc;

use sep_core::{
    combine, inner, norm, norm_sq, relaxed_halfspace, residual_map, step_shcqa, step_srhcqa,
    step_srvcqa, step_svcqa, AlphaSchedule, AnchorSchedule, AnchorSequence, BallSet, BoxSet,
    ContractionPair, CylinderSet, DeltaSchedule, DenseOperator, HalfSpace, IterateState,
    LevelSetFunction, ParabolicSet, ProjectableSet, StepsizePolicy, Vector, N_START,
};

use crate::paper::{builtin_paper_problem, builtin_solution};
use crate::prng::SplitMix64;

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn from_result(name: &'static str, result: Result<String, String>) -> Self {
        match result {
            Ok(detail) => Self::pass(name, detail),
            Err(detail) => Self {
                name,
                passed: false,
                detail,
            },
        }
    }
}

fn rand_vec(rng: &mut SplitMix64, dim: usize, lo: f64, hi: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.next_in(lo, hi)).collect()).expect("finite samples")
}

type MemberGen = Box<dyn Fn(&mut SplitMix64) -> Vector>;

/// Run every check with randomness derived from `seed`.
pub fn run_full_suite(seed: u64) -> Vec<CheckOutcome> {
    vec![
        check_adjoint_identity(seed ^ 0x01),
        check_norm_convexity_identity(seed ^ 0x02),
        check_projection_laws(seed ^ 0x03),
        check_cylinder_closed_form(seed ^ 0x04),
        check_parabolic_against_grid_oracle(seed ^ 0x05, 1000),
        check_relaxed_halfspace_containment(seed ^ 0x06),
        check_subgradients_against_finite_differences(seed ^ 0x07),
        check_residual_map_at_solution(),
        check_spectral_norms(),
        check_anchor_limits(),
        check_iteration_invariants(seed ^ 0x08, 10, 500),
        check_equivalence_reductions(seed ^ 0x09),
        check_run_determinism(seed ^ 0x0a),
    ]
}

/// `<Au, w> == <u, A* w>` for random operators and vectors.
pub fn check_adjoint_identity(seed: u64) -> CheckOutcome {
    let name = "adjoint-identity";
    let mut rng = SplitMix64::new(seed);
    for trial in 0..100 {
        let (rows, cols) = (2 + (rng.next_u64() % 4) as usize, 2 + (rng.next_u64() % 4) as usize);
        let entries = (0..rows * cols).map(|_| rng.next_in(-5.0, 5.0)).collect();
        let op = DenseOperator::new(rows, cols, entries).expect("finite operator");
        let u = rand_vec(&mut rng, cols, -5.0, 5.0);
        let w = rand_vec(&mut rng, rows, -5.0, 5.0);
        let lhs = inner(&op.apply(&u).unwrap(), &w).unwrap();
        let rhs = inner(&u, &op.adjoint_apply(&w).unwrap()).unwrap();
        if (lhs - rhs).abs() > 1e-12 * (1.0 + lhs.abs()) {
            return CheckOutcome::from_result(
                name,
                Err(format!("trial {trial}: <Au,w>={lhs:e} vs <u,A*w>={rhs:e}")),
            );
        }
    }
    CheckOutcome::pass(name, "100 random operators")
}

/// `|k x + (1-k) y|^2 = k|x|^2 + (1-k)|y|^2 - k(1-k)|x-y|^2`.
pub fn check_norm_convexity_identity(seed: u64) -> CheckOutcome {
    let name = "norm-convexity-identity";
    let mut rng = SplitMix64::new(seed);
    for trial in 0..500 {
        let x = rand_vec(&mut rng, 3, -10.0, 10.0);
        let y = rand_vec(&mut rng, 3, -10.0, 10.0);
        let k = rng.next_f64();
        let lhs = norm_sq(&combine(k, &x, 1.0 - k, &y).unwrap()).unwrap();
        let rhs = k * norm_sq(&x).unwrap() + (1.0 - k) * norm_sq(&y).unwrap()
            - k * (1.0 - k) * norm_sq(&combine(1.0, &x, -1.0, &y).unwrap()).unwrap();
        if (lhs - rhs).abs() > 1e-10 * (1.0 + lhs.abs()) {
            return CheckOutcome::from_result(name, Err(format!("trial {trial}: {lhs} vs {rhs}")));
        }
    }
    CheckOutcome::pass(name, "500 random triples")
}

struct NamedSet {
    name: &'static str,
    set: Arc<dyn ProjectableSet>,
    member: MemberGen,
}

fn shipped_sets() -> Vec<NamedSet> {
    vec![
        NamedSet {
            name: "halfspace",
            set: Arc::new(HalfSpace::new(Vector::from_slice(&[3.0, -1.0, 2.0]).unwrap(), 1.5).unwrap()),
            member: Box::new(|rng| {
                // Start anywhere, walk along -normal until strictly inside.
                let a = [3.0, -1.0, 2.0];
                let z = rand_vec(rng, 3, -8.0, 8.0);
                let s = 3.0 * z[0] - z[1] + 2.0 * z[2];
                let excess = (s - 1.5).max(0.0) / 14.0 + rng.next_f64() * 0.5;
                Vector::from_slice(&[
                    z[0] - excess * a[0],
                    z[1] - excess * a[1],
                    z[2] - excess * a[2],
                ])
                .unwrap()
            }),
        },
        NamedSet {
            name: "cylinder",
            set: Arc::new(CylinderSet),
            member: Box::new(|rng| {
                let s = rng.next_f64();
                let t = rng.next_in(0.0, std::f64::consts::TAU);
                Vector::from_slice(&[rng.next_in(-8.0, 8.0), s * t.cos(), s * t.sin()]).unwrap()
            }),
        },
        NamedSet {
            name: "parabolic",
            set: Arc::new(ParabolicSet),
            member: Box::new(|rng| {
                let t = rng.next_in(-3.0, 3.0);
                Vector::from_slice(&[
                    t,
                    t * t + 5.0 + rng.next_in(0.0, 4.0),
                    rng.next_in(-8.0, 8.0),
                ])
                .unwrap()
            }),
        },
        NamedSet {
            name: "ball",
            set: Arc::new(BallSet::new(Vector::from_slice(&[0.5, -0.5, 1.0]).unwrap(), 2.0).unwrap()),
            member: Box::new(|rng| {
                let d = rand_vec(rng, 3, -1.0, 1.0);
                let n = norm(&d).unwrap().max(1e-9);
                let r = 2.0 * rng.next_f64() / n;
                combine(1.0, &Vector::from_slice(&[0.5, -0.5, 1.0]).unwrap(), r, &d).unwrap()
            }),
        },
        NamedSet {
            name: "box",
            set: Arc::new(
                BoxSet::new(
                    Vector::from_slice(&[-1.0, 0.0, -2.0]).unwrap(),
                    Vector::from_slice(&[1.0, 2.0, -0.5]).unwrap(),
                )
                .unwrap(),
            ),
            member: Box::new(|rng| {
                Vector::from_slice(&[
                    rng.next_in(-1.0, 1.0),
                    rng.next_in(0.0, 2.0),
                    rng.next_in(-2.0, -0.5),
                ])
                .unwrap()
            }),
        },
    ]
}

/// Idempotence, the variational inequality and distance optimality for
/// every shipped projectable set, 500 samples each.
pub fn check_projection_laws(seed: u64) -> CheckOutcome {
    let name = "projection-laws";
    let mut rng = SplitMix64::new(seed);
    for s in shipped_sets() {
        for trial in 0..500 {
            let x = rand_vec(&mut rng, 3, -10.0, 10.0);
            let px = match s.set.project(&x) {
                Ok(px) => px,
                Err(e) => {
                    return CheckOutcome::from_result(
                        name,
                        Err(format!("{} projection failed: {e}", s.name)),
                    )
                }
            };
            // Membership of the projection.
            let viol = s.set.violation(&px).unwrap();
            if viol > 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("{} trial {trial}: projection violates by {viol:e}", s.name)),
                );
            }
            // Idempotence.
            let pp = s.set.project(&px).unwrap();
            let gap = norm(&combine(1.0, &pp, -1.0, &px).unwrap()).unwrap();
            if gap > 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("{} trial {trial}: idempotence gap {gap:e}", s.name)),
                );
            }
            // Variational inequality and distance optimality against a
            // sampled member.
            let y = (s.member)(&mut rng);
            debug_assert!(s.set.violation(&y).unwrap() <= 1e-9);
            let vi = inner(
                &combine(1.0, &px, -1.0, &x).unwrap(),
                &combine(1.0, &px, -1.0, &y).unwrap(),
            )
            .unwrap();
            if vi > 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("{} trial {trial}: variational inequality {vi:e}", s.name)),
                );
            }
            let d_proj = norm(&combine(1.0, &x, -1.0, &px).unwrap()).unwrap();
            let d_mem = norm(&combine(1.0, &x, -1.0, &y).unwrap()).unwrap();
            if d_proj > d_mem + 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!(
                        "{} trial {trial}: projection distance {d_proj} exceeds member distance {d_mem}",
                        s.name
                    )),
                );
            }
        }
    }
    CheckOutcome::pass(name, "5 sets x 500 samples")
}

/// The cylinder projection must equal its radial closed form bit for bit.
pub fn check_cylinder_closed_form(seed: u64) -> CheckOutcome {
    let name = "cylinder-closed-form";
    let mut rng = SplitMix64::new(seed);
    for trial in 0..500 {
        let x = rand_vec(&mut rng, 3, -10.0, 10.0);
        let got = CylinderSet.project(&x).unwrap();
        let r_sq = x[1] * x[1] + x[2] * x[2];
        let want = if r_sq <= 1.0 {
            [x[0], x[1], x[2]]
        } else {
            let r = r_sq.sqrt();
            [x[0], x[1] / r, x[2] / r]
        };
        for i in 0..3 {
            if got[i].to_bits() != want[i].to_bits() {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("trial {trial} coordinate {i}: {} vs {}", got[i], want[i])),
                );
            }
        }
    }
    CheckOutcome::pass(name, "500 samples, bitwise")
}

/// Nearest point of the parabolic set found by brute force: a fine grid
/// over the admissible parameter window followed by bisection in each
/// sign-change cell; the distance-minimizing candidate wins.
pub fn parabolic_grid_oracle(y: &Vector) -> Vector {
    let (y1, y2, y3) = (y[0], y[1], y[2]);
    if y1 * y1 - y2 + 5.0 <= 0.0 {
        return y.clone();
    }
    let p = 11.0 - 2.0 * y2;
    let c = |t: f64| 2.0 * t * t * t + p * t - y1;
    let dist_sq = |t: f64| {
        let s = t * t + 5.0;
        (t - y1) * (t - y1) + (s - y2) * (s - y2)
    };
    // All real roots lie within the coefficient bound; pad the window so
    // the grid brackets roots sitting close to it.
    let bound = 2.0 + y1.abs() + y2.max(0.0).sqrt();
    let cells = 40_000usize;
    let mut best: Option<f64> = None;
    let mut consider = |t: f64| {
        best = Some(match best {
            Some(b) if dist_sq(b) <= dist_sq(t) => b,
            _ => t,
        });
    };
    let mut prev_t = -bound;
    let mut prev_c = c(prev_t);
    for i in 1..=cells {
        let t = -bound + 2.0 * bound * i as f64 / cells as f64;
        let ct = c(t);
        if prev_c == 0.0 {
            consider(prev_t);
        } else if prev_c.signum() != ct.signum() {
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if c(mid).signum() == c(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            consider(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_c = ct;
    }
    let t = best.expect("an exterior point has a nearest boundary point");
    Vector::from_slice(&[t, t * t + 5.0, y3]).expect("finite projection")
}

/// Library parabolic projection against the grid + bisection oracle.
pub fn check_parabolic_against_grid_oracle(seed: u64, samples: usize) -> CheckOutcome {
    let name = "parabolic-grid-oracle";
    let mut rng = SplitMix64::new(seed);
    for trial in 0..samples {
        let y = rand_vec(&mut rng, 3, -10.0, 10.0);
        let got = match ParabolicSet.project(&y) {
            Ok(p) => p,
            Err(e) => return CheckOutcome::from_result(name, Err(format!("trial {trial}: {e}"))),
        };
        let viol = ParabolicSet.violation(&got).unwrap();
        if viol > 1e-9 {
            return CheckOutcome::from_result(
                name,
                Err(format!("trial {trial}: projection violates by {viol:e}")),
            );
        }
        let oracle = parabolic_grid_oracle(&y);
        let d_got = norm(&combine(1.0, &y, -1.0, &got).unwrap()).unwrap();
        let d_oracle = norm(&combine(1.0, &y, -1.0, &oracle).unwrap()).unwrap();
        if d_got > d_oracle + 1e-6 {
            return CheckOutcome::from_result(
                name,
                Err(format!(
                    "trial {trial}: distance {d_got:.12} vs oracle {d_oracle:.12} at y = {:?}",
                    y.as_slice()
                )),
            );
        }
    }
    CheckOutcome::pass(name, format!("{samples} samples within 1e-6"))
}

/// Half-space relaxations contain the sublevel sets they linearize.
pub fn check_relaxed_halfspace_containment(seed: u64) -> CheckOutcome {
    let name = "relaxed-halfspace-containment";
    let mut rng = SplitMix64::new(seed);
    let level_sets: Vec<(&str, Arc<dyn LevelSetFunction>, MemberGen)> = vec![
        (
            "cylinder",
            Arc::new(CylinderSet),
            Box::new(|rng: &mut SplitMix64| {
                let s = rng.next_f64();
                let t = rng.next_in(0.0, std::f64::consts::TAU);
                Vector::from_slice(&[rng.next_in(-8.0, 8.0), s * t.cos(), s * t.sin()]).unwrap()
            }),
        ),
        (
            "parabolic",
            Arc::new(ParabolicSet),
            Box::new(|rng: &mut SplitMix64| {
                let t = rng.next_in(-3.0, 3.0);
                Vector::from_slice(&[t, t * t + 5.0 + rng.next_in(0.0, 4.0), rng.next_in(-8.0, 8.0)])
                    .unwrap()
            }),
        ),
    ];
    for (set_name, f, member) in &level_sets {
        for trial in 0..500 {
            let at = rand_vec(&mut rng, 3, -10.0, 10.0);
            let h = match relaxed_halfspace(f.as_ref(), &at) {
                Ok(h) => h,
                Err(e) => {
                    return CheckOutcome::from_result(
                        name,
                        Err(format!("{set_name} trial {trial}: {e}")),
                    )
                }
            };
            let inside = member(&mut rng);
            let v = h.violation(&inside).unwrap();
            if v > 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("{set_name} trial {trial}: member escapes by {v:e}")),
                );
            }
        }
    }
    CheckOutcome::pass(name, "2 level sets x 500 members")
}

/// Analytic subgradients against central finite differences.
pub fn check_subgradients_against_finite_differences(seed: u64) -> CheckOutcome {
    let name = "subgradients-finite-differences";
    let mut rng = SplitMix64::new(seed);
    let h = 1e-6;
    let smooth: Vec<(&str, Arc<dyn LevelSetFunction>)> = vec![
        ("cylinder", Arc::new(CylinderSet)),
        ("parabolic", Arc::new(ParabolicSet)),
        (
            "ball",
            Arc::new(BallSet::new(Vector::from_slice(&[0.5, -0.5, 1.0]).unwrap(), 2.0).unwrap()),
        ),
    ];
    for (set_name, f) in &smooth {
        for trial in 0..100 {
            let x = rand_vec(&mut rng, 3, -8.0, 8.0);
            let g = f.subgradient(&x).unwrap();
            for i in 0..3 {
                let mut hi = x.as_slice().to_vec();
                let mut lo = hi.clone();
                hi[i] += h;
                lo[i] -= h;
                let fd = (f.value(&Vector::new(hi).unwrap()).unwrap()
                    - f.value(&Vector::new(lo).unwrap()).unwrap())
                    / (2.0 * h);
                if (g[i] - fd).abs() > 1e-6 {
                    return CheckOutcome::from_result(
                        name,
                        Err(format!(
                            "{set_name} trial {trial} coordinate {i}: {} vs fd {fd}",
                            g[i]
                        )),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(name, "3 smooth functions x 100 points")
}

/// Fixed-point residuals vanish at the benchmark solution.
pub fn check_residual_map_at_solution() -> CheckOutcome {
    let name = "residual-map-at-solution";
    let p = builtin_paper_problem();
    let (xs, ys) = builtin_solution();
    let (rx, ry) = residual_map(&p, &xs, &ys).expect("benchmark residual map");
    let (nx, ny) = (norm(&rx).unwrap(), norm(&ry).unwrap());
    if nx <= 1e-12 && ny <= 1e-12 {
        CheckOutcome::pass(name, format!("component norms {nx:e}, {ny:e}"))
    } else {
        CheckOutcome::from_result(name, Err(format!("component norms {nx:e}, {ny:e}")))
    }
}

/// Power iteration reproduces the benchmark operator norms.
pub fn check_spectral_norms() -> CheckOutcome {
    let name = "spectral-norms";
    let p = builtin_paper_problem();
    let a_sq = sep_core::spectral_norm_sq(p.a()).expect("power iteration");
    let b_sq = sep_core::spectral_norm_sq(p.b()).expect("power iteration");
    if (a_sq - 25.0).abs() < 1e-9 && (b_sq - 1.0).abs() < 1e-9 {
        CheckOutcome::pass(name, format!("|A|^2 = {a_sq}, |B|^2 = {b_sq}"))
    } else {
        CheckOutcome::from_result(name, Err(format!("|A|^2 = {a_sq}, |B|^2 = {b_sq}")))
    }
}

/// Anchor schedules approach their targets.
pub fn check_anchor_limits() -> CheckOutcome {
    let name = "anchor-limits";
    let target = Vector::from_slice(&[1.0, -2.0, 0.5]).unwrap();
    let tol = 1e-4 * (1.0 + norm(&target).unwrap());
    for schedule in [
        AnchorSchedule::Constant,
        AnchorSchedule::DecreasingRatio,
        AnchorSchedule::IncreasingRatio,
        AnchorSchedule::Alternating,
    ] {
        let seq = AnchorSequence::new(target.clone(), schedule);
        let u = seq.eval(1_000_000).expect("anchor at large index");
        let gap = norm(&combine(1.0, &u, -1.0, &target).unwrap()).unwrap();
        if gap > tol {
            return CheckOutcome::from_result(
                name,
                Err(format!("{schedule:?} still {gap:e} away at n = 1e6")),
            );
        }
    }
    CheckOutcome::pass(name, "4 schedules at n = 1e6")
}

enum AdaptiveVariant {
    Shcqa(AnchorSchedule),
    Svcqa(f64),
    Srhcqa(AnchorSchedule),
    Srvcqa(f64),
}

/// Per-iteration invariants of the self-adaptive engines over seeded
/// random runs:
///
/// - `gamma_n` in (0, 1) and the descent inequality
///   `gamma E - gamma^2 (|A* r|^2 + |B* r|^2) >= 0`;
/// - nonnegativity of the per-step decrease certificate
///   `2 gamma (1-gamma)(|(I-P_C)x|^2 + |(I-P_Q)y|^2) + 2 gamma E -
///   2 gamma^2 (|A* r|^2 + |B* r|^2)` (with the relaxed projections for
///   the relaxed variants);
/// - the intermediate pair never moves away from the known solution;
/// - boundedness of `|x_n - x*|^2 + |y_n - y*|^2` by the anchor-dependent
///   constant for the Halpern-type runs.
pub fn check_iteration_invariants(seed: u64, runs: usize, iters: u64) -> CheckOutcome {
    let name = "iteration-invariants";
    let mut rng = SplitMix64::new(seed);
    let p = builtin_paper_problem();
    let (xs, ys) = builtin_solution();
    let variants = [
        AdaptiveVariant::Shcqa(AnchorSchedule::Constant),
        AdaptiveVariant::Shcqa(AnchorSchedule::DecreasingRatio),
        AdaptiveVariant::Shcqa(AnchorSchedule::IncreasingRatio),
        AdaptiveVariant::Shcqa(AnchorSchedule::Alternating),
        AdaptiveVariant::Svcqa(0.0),
        AdaptiveVariant::Svcqa(0.3),
        AdaptiveVariant::Svcqa(0.6),
        AdaptiveVariant::Srhcqa(AnchorSchedule::Constant),
        AdaptiveVariant::Srhcqa(AnchorSchedule::DecreasingRatio),
        AdaptiveVariant::Srvcqa(0.6),
    ];
    let delta = DeltaSchedule::one_over_n_plus(50.0).expect("static schedule");
    let policy = StepsizePolicy::SelfAdaptive {
        alpha: AlphaSchedule::ramp(3.0).expect("static schedule"),
    };

    let mut run_count = 0usize;
    for (vi, variant) in variants.iter().enumerate().cycle().take(runs.max(variants.len())) {
        run_count += 1;
        let x0 = rand_vec(&mut rng, 3, 0.0, 1.0);
        let y0 = rand_vec(&mut rng, 3, 0.0, 1.0);
        let anchors = (
            AnchorSequence::new(
                rand_vec(&mut rng, 3, 0.0, 1.0),
                match variant {
                    AdaptiveVariant::Shcqa(s) | AdaptiveVariant::Srhcqa(s) => *s,
                    _ => AnchorSchedule::Constant,
                },
            ),
            AnchorSequence::new(
                rand_vec(&mut rng, 3, 0.0, 1.0),
                match variant {
                    AdaptiveVariant::Shcqa(s) | AdaptiveVariant::Srhcqa(s) => *s,
                    _ => AnchorSchedule::Constant,
                },
            ),
        );

        // Boundedness constant for the Halpern-type runs: coefficients of
        // the anchor schedules range over a closed interval, and the
        // squared distance to the solution is convex in the coefficient,
        // so the supremum sits at an endpoint.
        let sup_dist_sq = |anchor: &AnchorSequence, star: &Vector| -> f64 {
            let (lo, hi) = anchor.coefficient_range();
            [lo, hi]
                .iter()
                .map(|&c| {
                    norm_sq(&combine(c, anchor.target(), -1.0, star).unwrap()).unwrap()
                })
                .fold(0.0, f64::max)
        };
        let g_bound = 2.0 * sup_dist_sq(&anchors.0, &xs).max(sup_dist_sq(&anchors.1, &ys));

        let mut state = IterateState::initial(&p, x0, y0, N_START).expect("initial state");
        let theta_bound = {
            let theta0 = norm_sq(&combine(1.0, &state.x, -1.0, &xs).unwrap()).unwrap()
                + norm_sq(&combine(1.0, &state.y, -1.0, &ys).unwrap()).unwrap();
            theta0.max(g_bound) * (1.0 + 1e-6)
        };

        for _ in 0..iters {
            let prev = state.clone();
            let next = match variant {
                AdaptiveVariant::Shcqa(_) => {
                    step_shcqa(&p, &prev, &anchors, delta.eval(prev.n), &policy)
                }
                AdaptiveVariant::Srhcqa(_) => {
                    step_srhcqa(&p, &prev, &anchors, delta.eval(prev.n), &policy)
                }
                AdaptiveVariant::Svcqa(lambda) => step_svcqa(
                    &p,
                    &prev,
                    &ContractionPair::scaling(*lambda, 3, 3).expect("valid lambda"),
                    delta.eval(prev.n),
                    &policy,
                ),
                AdaptiveVariant::Srvcqa(lambda) => step_srvcqa(
                    &p,
                    &prev,
                    &ContractionPair::scaling(*lambda, 3, 3).expect("valid lambda"),
                    delta.eval(prev.n),
                    &policy,
                ),
            }
            .expect("step engines do not fail on the benchmark");

            let gamma = next.gamma;
            if !(gamma > 0.0 && gamma < 1.0) {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("variant {vi}: gamma {gamma} outside (0,1) at n {}", prev.n)),
                );
            }
            let da = norm_sq(&p.a().adjoint_apply(&prev.residual).unwrap()).unwrap();
            let db = norm_sq(&p.b().adjoint_apply(&prev.residual).unwrap()).unwrap();
            let descent = gamma * prev.e - gamma * gamma * (da + db);
            if descent < -1e-12 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!("variant {vi}: descent inequality {descent:e} at n {}", prev.n)),
                );
            }

            let relaxed = matches!(
                variant,
                AdaptiveVariant::Srhcqa(_) | AdaptiveVariant::Srvcqa(_)
            );
            let (cx, qy) = if relaxed {
                let cn = relaxed_halfspace(p.c().level_set().unwrap(), &prev.x).unwrap();
                let qn = relaxed_halfspace(p.q().level_set().unwrap(), &prev.y).unwrap();
                (cn.project(&prev.x).unwrap(), qn.project(&prev.y).unwrap())
            } else {
                (
                    p.c().projector().unwrap().project(&prev.x).unwrap(),
                    p.q().projector().unwrap().project(&prev.y).unwrap(),
                )
            };
            let ipc = norm_sq(&combine(1.0, &prev.x, -1.0, &cx).unwrap()).unwrap();
            let ipq = norm_sq(&combine(1.0, &prev.y, -1.0, &qy).unwrap()).unwrap();
            let certificate =
                2.0 * gamma * (1.0 - gamma) * (ipc + ipq) + 2.0 * descent;
            if certificate < -1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!(
                        "variant {vi}: decrease certificate {certificate:e} at n {}",
                        prev.n
                    )),
                );
            }

            // The intermediate pair does not move away from the solution.
            let theta_prev = norm_sq(&combine(1.0, &prev.x, -1.0, &xs).unwrap()).unwrap()
                + norm_sq(&combine(1.0, &prev.y, -1.0, &ys).unwrap()).unwrap();
            let theta_hat = norm_sq(&combine(1.0, &next.x_hat, -1.0, &xs).unwrap()).unwrap()
                + norm_sq(&combine(1.0, &next.y_hat, -1.0, &ys).unwrap()).unwrap();
            if theta_hat > theta_prev + 1e-9 {
                return CheckOutcome::from_result(
                    name,
                    Err(format!(
                        "variant {vi}: intermediate pair moved away ({theta_hat} > {theta_prev}) at n {}",
                        prev.n
                    )),
                );
            }

            // Boundedness along the Halpern-type runs.
            if matches!(
                variant,
                AdaptiveVariant::Shcqa(_) | AdaptiveVariant::Srhcqa(_)
            ) {
                let theta_next = norm_sq(&combine(1.0, &next.x, -1.0, &xs).unwrap()).unwrap()
                    + norm_sq(&combine(1.0, &next.y, -1.0, &ys).unwrap()).unwrap();
                if theta_next > theta_bound {
                    return CheckOutcome::from_result(
                        name,
                        Err(format!(
                            "variant {vi}: theta {theta_next} exceeds bound {theta_bound} at n {}",
                            next.n
                        )),
                    );
                }
            }

            state = next;
        }
    }
    CheckOutcome::pass(
        name,
        format!("{run_count} runs x {iters} iterations across 10 variant settings"),
    )
}

/// Viscosity engines with constant contraction maps reproduce the
/// constant-anchor Halpern engines to within 1e-15 per iterate.
pub fn check_equivalence_reductions(seed: u64) -> CheckOutcome {
    let name = "equivalence-reductions";
    let mut rng = SplitMix64::new(seed);
    let p = builtin_paper_problem();
    let delta = DeltaSchedule::one_over_n_plus(50.0).expect("static schedule");
    let policy = StepsizePolicy::SelfAdaptive {
        alpha: AlphaSchedule::ramp(3.0).expect("static schedule"),
    };
    for relaxed in [false, true] {
        let u = rand_vec(&mut rng, 3, -1.0, 1.0);
        let v = rand_vec(&mut rng, 3, -1.0, 1.0);
        let x0 = rand_vec(&mut rng, 3, 0.0, 1.0);
        let y0 = rand_vec(&mut rng, 3, 0.0, 1.0);
        let anchors = (
            AnchorSequence::constant(u.clone()),
            AnchorSequence::constant(v.clone()),
        );
        let contractions = ContractionPair::new(
            sep_core::AffineContraction::constant(u),
            sep_core::AffineContraction::constant(v),
        );
        let mut h = IterateState::initial(&p, x0.clone(), y0.clone(), N_START).unwrap();
        let mut w = IterateState::initial(&p, x0, y0, N_START).unwrap();
        for _ in 0..100 {
            (h, w) = if relaxed {
                (
                    step_srhcqa(&p, &h, &anchors, delta.eval(h.n), &policy).unwrap(),
                    step_srvcqa(&p, &w, &contractions, delta.eval(w.n), &policy).unwrap(),
                )
            } else {
                (
                    step_shcqa(&p, &h, &anchors, delta.eval(h.n), &policy).unwrap(),
                    step_svcqa(&p, &w, &contractions, delta.eval(w.n), &policy).unwrap(),
                )
            };
            for i in 0..3 {
                if (h.x[i] - w.x[i]).abs() > 1e-15 || (h.y[i] - w.y[i]).abs() > 1e-15 {
                    return CheckOutcome::from_result(
                        name,
                        Err(format!(
                            "relaxed={relaxed}: iterates diverge at n {} (gap {:e})",
                            h.n,
                            (h.x[i] - w.x[i]).abs().max((h.y[i] - w.y[i]).abs())
                        )),
                    );
                }
            }
        }
    }
    CheckOutcome::pass(name, "plain and relaxed reductions over 100 iterations")
}

/// Identical configurations produce identical records.
pub fn check_run_determinism(seed: u64) -> CheckOutcome {
    let name = "run-determinism";
    let mut rng = SplitMix64::new(seed);
    let p = builtin_paper_problem();
    let x0 = rand_vec(&mut rng, 3, 0.0, 1.0);
    let y0 = rand_vec(&mut rng, 3, 0.0, 1.0);
    let stop = sep_core::StoppingRule::new(1e-4, 3000).with_thresholds(vec![1e-2, 1e-3, 1e-4]);
    for cfg in crate::paper::table1_algorithms() {
        let a = sep_core::solve(&p, &cfg, x0.clone(), y0.clone(), &stop).expect("benchmark run");
        let b = sep_core::solve(&p, &cfg, x0.clone(), y0.clone(), &stop).expect("benchmark run");
        if a != b {
            return CheckOutcome::from_result(name, Err(format!("{} records differ", cfg.label)));
        }
    }
    CheckOutcome::pass(name, "4 algorithms re-run bit-identically")
}

/// Convenience: true iff every outcome passed.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}
