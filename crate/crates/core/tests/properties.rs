use std::f64::consts::PI;

use drp_core::drp::{integrated_error, optimize_drp, SpatialCoefficients};
use drp_core::matrix_form::{build_system, matrix_residual, pointwise_residual};
use drp_core::simulator::tridiagonal_solve;
use drp_core::{run, svd, Discretization, GridField, Preset, SchemeCoefficients, SimulationConfig};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn field_from(values: &[f64], n_x: usize, n_t: usize) -> GridField {
    let mut k = 0;
    let mut f = GridField::from_fn(n_x, n_t, |_, _| {
        k += 1;
        values[k % values.len()]
    });
    f.left_boundary[0] = f.initial_row[0];
    f.right_boundary[0] = f.initial_row[n_x];
    f
}

fn lax_baseline_disc() -> Discretization {
    let h = 1.0 / 32.0;
    Discretization::new(h, 0.9 * h, 64, 36, 1.0).unwrap()
}

#[test]
fn lax_golden_baseline() {
    let d = lax_baseline_disc();
    let s = SchemeCoefficients::preset(Preset::Lax, d.h, d.tau).unwrap();
    let r = run(&SimulationConfig::new(s, d, PI)).unwrap();
    assert_eq!(r.errors.per_step.len(), 36);
    assert!(r.errors.per_step.iter().all(|e| e.is_finite() && *e >= 0.0));
    let golden = 2.650_279_600_484_488e-2;
    assert!(
        (r.errors.final_error - golden).abs() <= 1e-12 * golden,
        "{:e}",
        r.errors.final_error
    );
}

#[test]
fn leapfrog_odd_space_matrix_factorizes() {
    for n_x in [4, 6, 8, 10] {
        let s = SchemeCoefficients::preset(Preset::Leapfrog, 0.1, 0.1).unwrap();
        let d = Discretization::new(0.1, 0.1, n_x, 4, 1.0).unwrap();
        let sys = build_system(&s, &d, &GridField::zeros(n_x, 4)).unwrap();
        let f = svd(&sys.m1);
        let eye = DMatrix::<f64>::identity(n_x - 1, n_x - 1);
        assert!((f.left.transpose() * &f.left - &eye).amax() < 1e-12);
        assert!((f.reconstruct() - &sys.m1).amax() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_form_matches_stencil(
        w in prop::collection::vec(-10.0..10.0f64, 9),
        data in prop::collection::vec(-3.0..3.0f64, 7..40),
        n_x in 4usize..9,
        n_t in 3usize..7,
    ) {
        let s = SchemeCoefficients::from_weights(w[0], w[1], w[2], w[3], w[4], w[5], w[6], w[7], w[8]);
        let d = Discretization::new(0.1, 0.1, n_x, n_t, 1.0).unwrap();
        let u = field_from(&data, n_x, n_t);
        let sys = build_system(&s, &d, &u).unwrap();
        let res = matrix_residual(&sys, &u).unwrap();
        let pw = pointwise_residual(&s, &u);
        prop_assert!((res.columns(0, n_t - 1) - pw).amax() < 1e-12);
    }

    #[test]
    fn svd_of_low_rank_products(
        a in prop::collection::vec(-1.0..1.0f64, 1..40),
        m in 1usize..9,
        n in 1usize..9,
        r in 1usize..4,
    ) {
        let left = DMatrix::from_fn(m, r, |i, j| a[(i * 7 + j) % a.len()] + 0.1 * i as f64);
        let right = DMatrix::from_fn(r, n, |i, j| a[(i * 3 + j * 5) % a.len()] - 0.05 * j as f64);
        let x = left * right;
        let f = svd(&x);
        let eye_m = DMatrix::<f64>::identity(m, m);
        let eye_n = DMatrix::<f64>::identity(n, n);
        prop_assert!((f.left.transpose() * &f.left - eye_m).amax() < 1e-10);
        prop_assert!((f.right.transpose() * &f.right - eye_n).amax() < 1e-10);
        prop_assert!((f.reconstruct() - &x).amax() <= 1e-10 * x.amax().max(1.0));
        prop_assert!(f.rank() <= r.min(m).min(n));
    }

    #[test]
    fn drp_optimum_beats_perturbations(
        h in 0.05..4.0f64,
        db in -0.5..0.5f64,
        dd in -0.5..0.5f64,
        de in -0.5..0.5f64,
    ) {
        let opt = optimize_drp(h).unwrap();
        let e0 = integrated_error(&opt).value;
        let near = SpatialCoefficients::new(
            opt.beta_x + db / h,
            opt.delta_x + dd / h,
            opt.epsilon_x + de / h,
            h,
        ).unwrap();
        prop_assert!(integrated_error(&near).value >= e0 - 1e-12);
        prop_assert!((e0 - (PI.powi(3) / 12.0 - 8.0 / PI)).abs() < 1e-9);
    }

    #[test]
    fn tridiagonal_residual_bound(
        sub in prop::collection::vec(-1.0..1.0f64, 1..30),
        seed in prop::collection::vec(-5.0..5.0f64, 3),
    ) {
        let n = sub.len() + 1;
        let sup: Vec<f64> = sub.iter().rev().copied().collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.5 + (seed[0] * i as f64).sin().abs()).collect();
        let rhs: Vec<f64> = (0..n).map(|i| seed[1] * (i as f64 + seed[2]).cos()).collect();
        let x = tridiagonal_solve(&sub, &diag, &sup, &rhs).unwrap();
        let rhs_inf = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            let mut r = diag[i] * x[i] - rhs[i];
            if i > 0 { r += sub[i - 1] * x[i - 1]; }
            if i + 1 < n { r += sup[i] * x[i + 1]; }
            prop_assert!(r.abs() <= 1e-12 * (1.0 + rhs_inf));
        }
    }

    #[test]
    fn amplitude_linearity(a in 0.1..5.0f64, k in 0.5..6.0f64) {
        let d = Discretization::new(0.1, 0.08, 20, 15, 1.0).unwrap();
        let s = SchemeCoefficients::preset(Preset::LaxWendroff, 0.1, 0.08).unwrap();
        let mut cfg = SimulationConfig::new(s, d, k);
        cfg.amplitude = a;
        let one = run(&cfg).unwrap();
        cfg.amplitude = 2.0 * a;
        let two = run(&cfg).unwrap();
        prop_assert!((&two.field.interior - &one.field.interior * 2.0).amax() <= 1e-12 * a.max(1.0));
    }
}
