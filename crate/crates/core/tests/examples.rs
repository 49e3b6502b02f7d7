use std::f64::consts::PI;

use rhombus_saw::enumerate::{c_tilde, LengthRule, Walk};
use rhombus_saw::geometry::{LatticeAngle, MidEdge, ParallelogramDomain};
use rhombus_saw::loops::{on_observable_with, yang_baxter_residual};
use rhombus_saw::observable::{boundary_coefficients, max_cr_residual, observable, strip_sums};
use rhombus_saw::series::{series_report, series_report_from};
use rhombus_saw::weights::{
    critical_weights, local_residuals, on_weights, sigma_one_family, solve_local_system, WeightSet,
};

fn th(p: i32, q: i32) -> LatticeAngle {
    LatticeAngle::pi_fraction(p, q).unwrap()
}

fn bumped(w: &WeightSet, k: usize, by: f64) -> WeightSet {
    let mut x = w.as_array();
    x[k] += by;
    WeightSet::custom(x)
}

#[test]
fn perturbed_u1_breaks_local_relations() {
    let theta = th(1, 2);
    let r = local_residuals(&bumped(&critical_weights(theta), 0, 0.01), 0.625, theta).max_abs();
    assert!(r > 1e-4, "{r:e}");
}

#[test]
fn sigma_one_family_is_exact_at_any_angle() {
    for theta in LatticeAngle::grid(7) {
        assert!(local_residuals(&sigma_one_family(0.3), 1.0, theta).max_abs() < 1e-12);
    }
}

#[test]
fn solver_at_critical_spin_has_zero_residual() {
    let sol = solve_local_system(0.625, th(1, 2));
    assert!(sol.residual_norm < 1e-12);
    assert_eq!(sol.nullity(), 0);
}

#[test]
fn solver_finds_the_spin_one_family() {
    let sol = solve_local_system(1.0, th(1, 2));
    assert_eq!(sol.null_space.len(), 1);
    let n = sol.null_space[0];
    let unit = [1.0, -1.0, 0.0, 1.0, -1.0].map(|x: f64| x / 2.0);
    let dot: f64 = n.iter().zip(unit).map(|(a, b)| a * b).sum();
    assert!((dot.abs() - 1.0).abs() < 1e-9, "null vector {n:?}");
    let [u1, u2, v, w1, w2] = sol.least_squares;
    assert!((u1 + u2 - 1.0).abs() < 1e-9 && v.abs() < 1e-9 && (w1 - u1).abs() < 1e-9 && (w2 - u2).abs() < 1e-9);
}

#[test]
fn generic_spin_has_no_solution_with_straights() {
    let sol = solve_local_system(0.7, th(1, 2));
    assert!(sol.residual_norm > 1e-6 || sol.least_squares[2].abs() < 1e-9, "{sol:?}");
    assert!(sol.solution.is_none() || sol.least_squares[2].abs() < 1e-9);
}

#[test]
fn one_step_series_coefficient() {
    let w = critical_weights(th(1, 2));
    let c1 = c_tilde(1, th(1, 2), LengthRule::unit()).unwrap();
    assert!((c1 - 2.0 * (w.u1 + w.u2 + w.v) / w.u1).abs() < 1e-12);
}

#[test]
fn perturbed_weights_break_the_contour_relation() {
    let theta = th(1, 2);
    let d = ParallelogramDomain::new(2, 0, 1).unwrap();
    let t = observable(d, theta, 0.625, &bumped(&critical_weights(theta), 0, 0.01)).unwrap();
    assert!(max_cr_residual(&t) > 1e-5);
}

#[test]
fn parallelogram_identity_needs_the_critical_fugacity() {
    let theta = th(1, 2);
    let s = strip_sums(2, 1, 0.9 * critical_weights(theta).u1, theta).unwrap();
    assert!(s.identity_defect(theta).abs() > 1e-3);
}

#[test]
fn boundary_coefficients_are_positive_and_sums_bounded() {
    for theta in LatticeAngle::grid(9) {
        let (a, d, e) = boundary_coefficients(theta);
        assert!(a > 0.0 && d > 0.0 && e > 0.0);
        let s = strip_sums(2, 1, critical_weights(theta).u1, theta).unwrap();
        for x in [s.a, s.b, s.d, s.e] {
            assert!(x >= 0.0);
        }
        assert!(s.a <= 1.0 && s.b <= 1.0);
    }
}

#[test]
fn perturbed_straight_weight_breaks_the_loop_observable() {
    let theta = th(5, 12);
    let d = ParallelogramDomain::new(2, 0, 1).unwrap();
    let (w, n) = on_weights(theta, -0.5).unwrap();
    assert_eq!(n, 1.0);
    let ok = on_observable_with(d, theta, 0.5, &w, n).unwrap();
    assert!(max_cr_residual(&ok) < 1e-10);
    let broken = on_observable_with(d, theta, 0.5, &bumped(&w, 2, 0.01), n).unwrap();
    assert!(max_cr_residual(&broken) > 1e-5);
}

#[test]
fn yang_baxter_holds_for_non_integer_loop_weight() {
    assert!(yang_baxter_residual(PI / 4.0, -0.4).unwrap() < 1e-10);
}

#[test]
fn origin_orientation_keeps_the_trend() {
    let theta = th(1, 2);
    let h = series_report_from(MidEdge::h(0, 0), theta, LengthRule::unit(), 10).unwrap();
    let v = series_report_from(MidEdge::v(0, 0), theta, LengthRule::unit(), 10).unwrap();
    for r in [&h, &v] {
        assert!(r.lower_bound_holds() && r.roots_bracketed() && r.submultiplicative());
        let roots = &r.root_estimates;
        assert!(roots.last().unwrap() < &roots[0]);
    }
}

#[test]
fn supplementary_series_target() {
    let a = series_report(th(2, 3), LengthRule::unit(), 2).unwrap();
    let u2 = critical_weights(th(1, 3)).u2;
    assert!((a.target - 1.0 / u2).abs() < 1e-12);
}

#[test]
fn other_length_rules_keep_the_brackets() {
    let theta = th(1, 2);
    for rule in [LengthRule::honeycomb(), LengthRule::new(1, 3, 2).unwrap()] {
        let r = series_report(theta, rule, 8).unwrap();
        assert!(r.lower_bound_holds() && r.roots_bracketed(), "{rule}");
        assert!((r.target - 1.0 / critical_weights(theta).u1).abs() < 1e-12);
    }
}

#[test]
fn mixed_fixture_walk() {
    let text = include_str!("fixtures/mixed_walk.txt");
    let line = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let walk = Walk::parse_dump(line).unwrap();
    assert_eq!(walk.monomial().0, [5, 1, 4, 1, 0]);
    assert_eq!(walk.length(&LengthRule::unit()), 12);
    assert_eq!(walk.to_dump(), line);
    let w = critical_weights(th(1, 2));
    let expect = w.u1.powi(5) * w.u2 * w.v.powi(4) * w.w1;
    assert!((walk.weight(&w) - expect).abs() < 1e-15);
}
