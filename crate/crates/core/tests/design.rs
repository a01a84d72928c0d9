mod common;

use magtoffoli::analytics::{half_period_flip, periods_numeric};
use magtoffoli::design::{
    angle_condition_residual, design_collinear_a0, design_collinear_aniso, design_noncollinear, parity_obstruction,
    pole_stability, search_collinear_a0, to_physical_units_with, Scheme,
};
use magtoffoli::dynamics::CollinearModel;
use magtoffoli::Error;
use proptest::prelude::*;

#[test]
fn parity_never_has_solutions() {
    for bound in [1, 2, 7, 30, 64] {
        let cert = parity_obstruction(bound).unwrap();
        assert!(cert.no_solution() && cert.lhs_always_even && cert.rhs_always_odd);
    }
}

#[test]
fn search_is_sorted_by_residual() {
    let all = search_collinear_a0(5, 40);
    assert!(!all.is_empty());
    assert!(all.windows(2).all(|w| w[0].residual <= w[1].residual));
    assert!(all.iter().all(|d| d.scheme == Scheme::CollinearA0));
}

#[test]
fn residual_shrinks_with_m() {
    let r: Vec<f64> = (1..=50).map(|m| design_collinear_a0(0, m).unwrap().residual).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn noncollinear_quadrature_residual() {
    for (n, m, a) in [(1, 1, 0.5), (1, 1, 1.0), (1, 1, 1.5), (0, 1, 0.8), (2, 2, 1.2)] {
        let d = design_noncollinear(n, m, a).unwrap();
        let c4 = 4.0 * d.phi.unwrap().cos();
        let r = (2 * n + 1) as f64 / c4 * common::k_norm_quad(a / c4) - m as f64 * common::k_norm_quad(a / 2.0);
        assert!(r.abs() < 1e-10, "({n},{m},{a}): {r}");
        assert!((d.t_gate - 2.0 * m as f64 * half_period_flip(2.0, a).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn noncollinear_infeasible_cases() {
    assert!(matches!(design_noncollinear(2, 1, 0.0), Err(Error::Infeasible(_))));
    assert!(matches!(design_noncollinear(1, 1, 2.5), Err(Error::Infeasible(_))));
}

#[test]
fn aniso_design_uses_flip_periods() {
    let model = CollinearModel::new(2.5, -2.0, 2.7, 0.0).unwrap();
    let d = design_collinear_aniso(&model, 0).unwrap();
    let p = periods_numeric(&model, 1.0).unwrap();
    assert!((d.t_gate - 0.5 * p.t11).abs() < 1e-12);
    assert!(d.residual.is_finite() && d.residual >= 0.0);
}

#[test]
fn physical_units_override_anisotropy() {
    let base = to_physical_units_with(1.0, 4.0, 2.0, 10.0, None).unwrap();
    let five = to_physical_units_with(1.0, 4.0, 2.0, 10.0, Some(5.0)).unwrap();
    assert!((five.h_perp_min_tesla / base.h_perp_min_tesla - 2.5).abs() < 1e-12);
    assert_eq!(base.h_par_tesla, five.h_par_tesla);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn a0_design_satisfies_first_condition(n in 0u32..60, extra in 1u32..200) {
        let m = n + extra;
        let d = design_collinear_a0(n, m).unwrap();
        let h = d.h_perp.unwrap();
        let lhs = (1.0 + 4.0 / (h * h)).sqrt();
        prop_assert!((lhs - 2.0 * m as f64 / (2 * n + 1) as f64).abs() < 1e-12 * lhs);
    }

    #[test]
    fn isotropic_noncollinear_ratio_exact(n in 0u32..20, m in 1u32..20) {
        prop_assume!(2 * n + 1 < 4 * m);
        let d = design_noncollinear(n, m, 0.0).unwrap();
        let ratio = common::noncollinear_freq_ratio(d.phi.unwrap());
        prop_assert!((ratio - (2 * n + 1) as f64 / (2 * m) as f64).abs() < 1e-12);
    }

    #[test]
    fn anisotropic_noncollinear_root(a in 0.01..1.95f64, n in 0u32..3, m in 1u32..3) {
        prop_assume!(2 * n + 1 < 4 * m);
        if let Ok(d) = design_noncollinear(n, m, a) {
            let r = angle_condition_residual(n, m, a, d.phi.unwrap()).unwrap();
            prop_assert!(r.abs() < 1e-10);
        }
    }

    #[test]
    fn stability_iff_window(a in 0.0..5.0f64, h in -10.0..10.0f64, eta in 0.001..0.5f64) {
        let r = pole_stability(a, h, eta);
        prop_assert_eq!(r.both_stable, 2.0 * a > h.abs());
        for p in [r.north, r.south] {
            let ev = common::pole_eigenvalues_fd(a, h, eta, p.z);
            let re = ev[0].0 * (1.0 + eta * eta);
            prop_assert!((re - p.real_parts[1]).abs() < 1e-6);
            prop_assert_eq!(p.stable, p.real_parts[1] < 0.0);
        }
    }
}
