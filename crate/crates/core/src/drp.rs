//! Wavenumber analysis of the three-point first-derivative stencil
//! `u_x(l) ~ beta_x u_l + delta_x u_{l+1} + epsilon_x u_{l-1}` and its
//! dispersion-relation-preserving optimization over `kappa in [-pi/2, pi/2]`
//! (waves longer than four cells).

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Simpson panels used by [`integrated_error`] before the doubling check.
pub const DEFAULT_PANELS: usize = 2048;

/// Relative change under panel doubling accepted by [`integrated_error`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

const MAX_PANELS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialCoefficients {
    pub beta_x: f64,
    pub delta_x: f64,
    pub epsilon_x: f64,
    pub h: f64,
}

impl SpatialCoefficients {
    pub fn new(beta_x: f64, delta_x: f64, epsilon_x: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "h must be positive, got {h}"
            )));
        }
        if ![beta_x, delta_x, epsilon_x].iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidArgument(
                "stencil weights must be finite".into(),
            ));
        }
        Ok(Self {
            beta_x,
            delta_x,
            epsilon_x,
            h,
        })
    }

    /// Second-order central difference `(u_{l+1} - u_{l-1}) / 2h`.
    pub fn central(h: f64) -> Result<Self> {
        Self::new(0.0, 0.5 / h, -0.5 / h, h)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.beta_x, self.delta_x, self.epsilon_x]
    }

    /// Same weights with every component multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            beta_x: self.beta_x * factor,
            delta_x: self.delta_x * factor,
            epsilon_x: self.epsilon_x * factor,
            h: self.h,
        }
    }
}

/// Value of the integrated wavenumber error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberError {
    pub value: f64,
    pub integration_panels: usize,
}

/// Stencil wavenumber `-j (beta_x + delta_x e^{j kappa} + epsilon_x e^{-j kappa})`.
pub fn scheme_wavenumber(sc: &SpatialCoefficients, kappa: f64) -> Complex64 {
    let sum = sc.beta_x
        + sc.delta_x * Complex64::from_polar(1.0, kappa)
        + sc.epsilon_x * Complex64::from_polar(1.0, -kappa);
    -Complex64::i() * sum
}

fn error_integrand(sc: &SpatialCoefficients, kappa: f64) -> f64 {
    let stencil = sc.beta_x
        + sc.delta_x * Complex64::from_polar(1.0, kappa)
        + sc.epsilon_x * Complex64::from_polar(1.0, -kappa);
    (kappa + Complex64::i() * sc.h * stencil).norm_sqr()
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1;
    let step = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let v = f(a + k as f64 * step);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    step / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// `E = int_{-pi/2}^{pi/2} |kappa + j h (beta_x + delta_x e^{j kappa} + epsilon_x e^{-j kappa})|^2 d kappa`.
///
/// Starts at [`DEFAULT_PANELS`] and doubles until two successive estimates
/// agree to [`QUADRATURE_TOLERANCE`] relative.
pub fn integrated_error(sc: &SpatialCoefficients) -> WavenumberError {
    let f = |k: f64| error_integrand(sc, k);
    let mut panels = DEFAULT_PANELS;
    let mut coarse = simpson(f, -FRAC_PI_2, FRAC_PI_2, panels);
    loop {
        let fine = simpson(f, -FRAC_PI_2, FRAC_PI_2, 2 * panels);
        panels *= 2;
        let converged =
            (fine - coarse).abs() <= QUADRATURE_TOLERANCE * fine.abs().max(f64::MIN_POSITIVE);
        if converged || panels >= MAX_PANELS {
            return WavenumberError {
                value: fine.max(0.0),
                integration_panels: panels,
            };
        }
        coarse = fine;
    }
}

/// Normal equations `G w = r` of the quadratic form `E(w)` at mesh size `h`,
/// with entries integrated numerically from the basis functions
/// `j`, `j e^{j kappa}`, `j e^{-j kappa}` of the stencil symbol.
pub fn drp_normal_equations(h: f64) -> (Matrix3<f64>, Vector3<f64>) {
    let basis = |k: f64| {
        [
            Complex64::i(),
            Complex64::i() * Complex64::from_polar(1.0, k),
            Complex64::i() * Complex64::from_polar(1.0, -k),
        ]
    };
    let mut gram = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for p in 0..3 {
        for q in p..3 {
            let g = simpson(
                |k| {
                    let b = basis(k);
                    (b[p].conj() * b[q]).re
                },
                -FRAC_PI_2,
                FRAC_PI_2,
                DEFAULT_PANELS,
            );
            gram[(p, q)] = h * h * g;
            gram[(q, p)] = h * h * g;
        }
        rhs[p] = -h
            * simpson(
                |k| k * basis(k)[p].re,
                -FRAC_PI_2,
                FRAC_PI_2,
                DEFAULT_PANELS,
            );
    }
    (gram, rhs)
}

/// Minimizer of [`integrated_error`] at mesh size `h`.
pub fn optimize_drp(h: f64) -> Result<SpatialCoefficients> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    let (gram, rhs) = drp_normal_equations(h);
    let w = gram
        .cholesky()
        .ok_or_else(|| {
            Error::SingularSystem("DRP normal equations are not positive definite".into())
        })?
        .solve(&rhs);
    SpatialCoefficients::new(w[0], w[1], w[2], h)
}

/// Closed-form coefficients as printed:
/// `beta_x = pi / (h (pi^2 - 8))`, `delta_x = 1/2 - 2 / (h (pi^2 - 8))`,
/// `epsilon_x = -2 / (h (pi^2 - 8))`.
///
/// These are not the minimizer of [`integrated_error`]; see [`optimize_drp`].
pub fn paper_drp_closed_form(h: f64) -> Result<SpatialCoefficients> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    let denom = h * (PI * PI - 8.0);
    SpatialCoefficients::new(PI / denom, 0.5 - 2.0 / denom, -2.0 / denom, h)
}

/// The printed 3x3 system, in `(beta, delta, epsilon)` order.
pub fn paper_drp_system(h: f64) -> (Matrix3<f64>, Vector3<f64>) {
    let a = Matrix3::new(
        2.0 * PI * h,
        4.0 * h,
        4.0 * h,
        4.0 * h,
        2.0 * PI,
        0.0,
        4.0 * h,
        0.0,
        2.0 * PI * h,
    );
    (a, Vector3::new(4.0, PI, 0.0))
}

/// Solves the printed system
/// `2 pi h b + 4 (h d + h e - 1) = 0`, `4 h b + pi (2 d - 1) = 0`,
/// `4 h b + 2 pi h e = 0`.
///
/// The determinant is `8 pi h^2 (pi^2 - 4 - 4h)`, which vanishes at
/// `h = (pi^2 - 4) / 4`.
pub fn paper_drp_linear_system(h: f64) -> Result<SpatialCoefficients> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "h must be positive, got {h}"
        )));
    }
    let (a, b) = paper_drp_system(h);
    let scale = a.norm().powi(3);
    let det = a.determinant();
    if det.abs() <= 1e-12 * scale {
        return Err(Error::SingularSystem(format!(
            "printed DRP system is singular at h = {h} (det = {det:e})"
        )));
    }
    let w = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SingularSystem(format!("printed DRP system at h = {h}")))?;
    SpatialCoefficients::new(w[0], w[1], w[2], h)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// E as a quadratic form, built from
    /// int k sin k = 2, int sin^2 = int cos^2 = pi/2, int cos = 2 over [-pi/2, pi/2].
    fn analytic_error(b: f64, d: f64, e: f64, h: f64) -> f64 {
        let diff = d - e;
        let sum = d + e;
        PI.powi(3) / 12.0 - 4.0 * h * diff
            + h * h * diff * diff * PI / 2.0
            + h * h * (b * b * PI + 4.0 * b * sum + sum * sum * PI / 2.0)
    }

    #[test]
    fn wavenumber_of_central_difference_is_real_sine() {
        let h = 0.25;
        let sc = SpatialCoefficients::central(h).unwrap();
        for &k in &[-1.3, 0.2, 0.9, FRAC_PI_2] {
            let w = scheme_wavenumber(&sc, k);
            assert_relative_eq!(w.re, k.sin() / h, max_relative = 1e-14);
            assert!(w.im.abs() < 1e-14);
        }
    }

    #[test]
    fn wavenumber_edge_cases() {
        let sc = SpatialCoefficients::new(-0.5, 0.25, 0.25, 1.0).unwrap();
        assert!(scheme_wavenumber(&sc, 0.0).norm() < 1e-16);
        let single = SpatialCoefficients::new(1.0, 0.0, 0.0, 1.0).unwrap();
        for &k in &[0.0, 1.0, -2.0] {
            assert_eq!(scheme_wavenumber(&single, k), Complex64::new(0.0, -1.0));
        }
    }

    #[test]
    fn integrated_error_reference_values() {
        let zero = SpatialCoefficients::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let e = integrated_error(&zero);
        assert_relative_eq!(e.value, PI.powi(3) / 12.0, max_relative = 1e-12);
        assert_relative_eq!(e.value, 2.583_856_390_024_985, max_relative = 1e-12);
        assert!(e.integration_panels >= DEFAULT_PANELS);

        let central = integrated_error(&SpatialCoefficients::central(1.0).unwrap()).value;
        assert_relative_eq!(
            central,
            PI.powi(3) / 12.0 - 4.0 + PI / 2.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(central, 0.154_652_716_819_881_6, max_relative = 1e-11);

        let best = SpatialCoefficients::new(0.0, 2.0 / PI, -2.0 / PI, 1.0).unwrap();
        let v = integrated_error(&best).value;
        assert_relative_eq!(v, PI.powi(3) / 12.0 - 8.0 / PI, max_relative = 1e-10);
        assert_relative_eq!(v, 0.037_377_300_554_659_64, max_relative = 1e-10);
    }

    #[test]
    fn quadrature_matches_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (b, d, e) = (
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            );
            let h = rng.gen_range(0.1..2.0);
            let sc = SpatialCoefficients::new(b, d, e, h).unwrap();
            let expected = analytic_error(b, d, e, h);
            assert_relative_eq!(integrated_error(&sc).value, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn optimum_at_unit_mesh() {
        let w = optimize_drp(1.0).unwrap();
        assert!(w.beta_x.abs() < 1e-12);
        assert_relative_eq!(w.delta_x, 2.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(w.epsilon_x, -2.0 / PI, max_relative = 1e-12);
    }

    #[test]
    fn optimum_scales_inversely_with_h() {
        let w = optimize_drp(0.5).unwrap();
        assert_relative_eq!(w.delta_x, 4.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(w.epsilon_x, -4.0 / PI, max_relative = 1e-12);
        let unit = optimize_drp(1.0).unwrap();
        for &h in &[0.01, 0.3, 2.0, 17.0] {
            let w = optimize_drp(h).unwrap();
            let reference = unit.scaled(1.0 / h);
            let magnitude = reference.delta_x.abs();
            for (a, b) in w.as_array().iter().zip(reference.as_array()) {
                assert!((a - b).abs() <= 1e-10 * magnitude, "h = {h}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn optimum_beats_grid_neighbours_and_central() {
        let w = optimize_drp(1.0).unwrap();
        let e0 = analytic_error(w.beta_x, w.delta_x, w.epsilon_x, 1.0);
        for db in [-1e-3, 0.0, 1e-3] {
            for dd in [-1e-3, 0.0, 1e-3] {
                for de in [-1e-3, 0.0, 1e-3] {
                    let e = analytic_error(w.beta_x + db, w.delta_x + dd, w.epsilon_x + de, 1.0);
                    assert!(e >= e0 - 1e-15);
                }
            }
        }
        let central = integrated_error(&SpatialCoefficients::central(1.0).unwrap()).value;
        assert!(integrated_error(&w).value < central);
    }

    #[test]
    fn finite_difference_gradient_vanishes_at_optimum() {
        let w = optimize_drp(1.0).unwrap();
        let step = 1e-6;
        for axis in 0..3 {
            let mut plus = w.as_array();
            let mut minus = w.as_array();
            plus[axis] += step;
            minus[axis] -= step;
            let ep = integrated_error(
                &SpatialCoefficients::new(plus[0], plus[1], plus[2], 1.0).unwrap(),
            )
            .value;
            let em = integrated_error(
                &SpatialCoefficients::new(minus[0], minus[1], minus[2], 1.0).unwrap(),
            )
            .value;
            assert!(((ep - em) / (2.0 * step)).abs() < 1e-6);
        }
    }

    #[test]
    fn random_perturbations_increase_error() {
        let w = optimize_drp(1.0).unwrap();
        let e0 = integrated_error(&w).value;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let dir: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
            let p = dir.map(|c| 1e-2 * c / n);
            let sc = SpatialCoefficients::new(
                w.beta_x + p[0],
                w.delta_x + p[1],
                w.epsilon_x + p[2],
                1.0,
            )
            .unwrap();
            assert!(integrated_error(&sc).value > e0);
        }
    }

    #[test]
    fn printed_closed_form_values() {
        let w = paper_drp_closed_form(1.0).unwrap();
        let d = PI * PI - 8.0;
        assert_eq!(w.beta_x, PI / d);
        assert_eq!(w.delta_x, 0.5 - 2.0 / d);
        assert_eq!(w.epsilon_x, -2.0 / d);
        assert_relative_eq!(w.beta_x, 1.680_351_550_177_828, max_relative = 1e-12);
        assert_relative_eq!(w.delta_x, -0.569_745_021_371_721_2, max_relative = 1e-12);
        assert_relative_eq!(w.epsilon_x, -1.069_745_021_371_721_2, max_relative = 1e-12);

        let w2 = paper_drp_closed_form(2.0).unwrap();
        assert_relative_eq!(w2.beta_x, 0.840_175_775_088_913_9, max_relative = 1e-12);
        assert_relative_eq!(w2.delta_x, -0.034_872_510_685_860_61, max_relative = 1e-11);
        assert_relative_eq!(w2.epsilon_x, -0.534_872_510_685_860_6, max_relative = 1e-12);
    }

    #[test]
    fn printed_system_matches_closed_form_at_unit_mesh() {
        let sys = paper_drp_linear_system(1.0).unwrap();
        let closed = paper_drp_closed_form(1.0).unwrap();
        for (a, b) in sys.as_array().iter().zip(closed.as_array()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn printed_system_residuals() {
        for &h in &[0.05, 0.5, 1.0, 2.0, 3.7] {
            let w = paper_drp_linear_system(h).unwrap();
            let (b, d, e) = (w.beta_x, w.delta_x, w.epsilon_x);
            let r1 = 2.0 * PI * h * b + 4.0 * (h * d + h * e - 1.0);
            let r2 = 4.0 * h * b + PI * (2.0 * d - 1.0);
            let r3 = 4.0 * h * b + 2.0 * PI * h * e;
            for r in [r1, r2, r3] {
                assert!(r.abs() < 1e-12, "h = {h}, residual {r}");
            }
        }
    }

    #[test]
    fn printed_system_is_singular_at_one_mesh_size() {
        let h = (PI * PI - 4.0) / 4.0;
        assert!(matches!(
            paper_drp_linear_system(h),
            Err(Error::SingularSystem(_))
        ));
        let (a, _) = paper_drp_system(1.3);
        let expected = 8.0 * PI * 1.3 * 1.3 * (PI * PI - 4.0 - 4.0 * 1.3);
        assert_relative_eq!(a.determinant(), expected, max_relative = 1e-12);
    }

    #[test]
    fn printed_coefficients_are_not_optimal() {
        let closed = paper_drp_closed_form(1.0).unwrap();
        let e = integrated_error(&closed).value;
        assert_relative_eq!(e, 3.049_606_103_600_261, max_relative = 1e-10);
        assert!(e > integrated_error(&optimize_drp(1.0).unwrap()).value);
    }

    #[test]
    fn rejects_bad_mesh() {
        assert!(optimize_drp(0.0).is_err());
        assert!(paper_drp_closed_form(-1.0).is_err());
        assert!(paper_drp_linear_system(f64::INFINITY).is_err());
        assert!(SpatialCoefficients::new(f64::NAN, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert_relative_eq!(v, 4.0 - 4.0 + 2.0, max_relative = 1e-15);
    }
}
