//! Time stepping of the nine-point scheme on `u_t + c u_x = 0` with Dirichlet
//! data taken from the travelling wave `a cos(k (x - c t))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{dims, Error, Result};
use crate::matrix_form::{sinusoid_field, GridField};
use crate::scheme::{Discretization, SchemeCoefficients};

/// Any `|u|` above this halts the run.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

/// Relative pivot size below which [`tridiagonal_solve`] reports a singular
/// system.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// How a three-level scheme obtains `u^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Startup {
    /// Sample the exact solution.
    #[default]
    ExactSeed,
    /// One Lax step from `u^0` at the run's Courant number.
    SingleStepLax,
}

impl Startup {
    pub fn label(self) -> &'static str {
        match self {
            Startup::ExactSeed => "exact-seed",
            Startup::SingleStepLax => "single-step-lax",
        }
    }
}

impl fmt::Display for Startup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Startup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact-seed" => Ok(Startup::ExactSeed),
            "single-step-lax" => Ok(Startup::SingleStepLax),
            other => Err(Error::InvalidArgument(format!(
                "unknown startup `{other}` (expected exact-seed or single-step-lax)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub scheme: SchemeCoefficients,
    pub disc: Discretization,
    pub wave_number: f64,
    pub amplitude: f64,
    pub startup: Startup,
}

impl SimulationConfig {
    pub fn new(scheme: SchemeCoefficients, disc: Discretization, wave_number: f64) -> Self {
        Self {
            scheme,
            disc,
            wave_number,
            amplitude: 1.0,
            startup: Startup::ExactSeed,
        }
    }
}

/// Discrete L2 error per time level.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    /// Entry `n - 1` is the error at level `n`.
    pub per_step: Vec<f64>,
    /// Last entry of `per_step` (zero when empty).
    pub final_error: f64,
}

impl ErrorSeries {
    pub fn from_steps(per_step: Vec<f64>) -> Self {
        let final_error = per_step.last().copied().unwrap_or(0.0);
        Self {
            per_step,
            final_error,
        }
    }

    pub fn max(&self) -> f64 {
        self.per_step.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRun {
    pub field: GridField,
    pub exact: GridField,
    pub errors: ErrorSeries,
    /// Startup actually used; `None` for two-level schemes.
    pub startup: Option<Startup>,
}

/// Thomas algorithm for `sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
///
/// `sub` and `sup` have one entry fewer than `diag`.
pub fn tridiagonal_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(Error::DimensionMismatch {
            what: "tridiagonal bands",
            expected: format!("diag {n}, off-diagonals {}, rhs {n}", n.saturating_sub(1)),
            actual: format!("sub {}, sup {}, rhs {}", sub.len(), sup.len(), rhs.len()),
        });
    }
    let scale = diag
        .iter()
        .chain(sub)
        .chain(sup)
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = PIVOT_TOLERANCE * scale.max(f64::MIN_POSITIVE);

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() <= tol {
        return Err(Error::SingularSystem("vanishing pivot at row 0".into()));
    }
    if n > 1 {
        c[0] = sup[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot.abs() <= tol {
            return Err(Error::SingularSystem(format!("vanishing pivot at row {i}")));
        }
        if i + 1 < n {
            c[i] = sup[i] / pivot;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// `per_step[n - 1] = sqrt(h sum_i (u_i^n - exact_i^n)^2)` over interior nodes.
pub fn l2_error_series(u: &GridField, exact: &GridField, h: f64) -> Result<ErrorSeries> {
    if u.interior.shape() != exact.interior.shape() {
        return Err(Error::DimensionMismatch {
            what: "error series fields",
            expected: dims(exact.interior.nrows(), exact.interior.ncols()),
            actual: dims(u.interior.nrows(), u.interior.ncols()),
        });
    }
    let diff = &u.interior - &exact.interior;
    let per_step = diff
        .column_iter()
        .map(|col| (h * col.norm_squared()).sqrt())
        .collect();
    Ok(ErrorSeries::from_steps(per_step))
}

/// Advances the configured scheme `n_t` steps from the exact initial data.
pub fn run(cfg: &SimulationConfig) -> Result<SimulationRun> {
    let s = &cfg.scheme;
    let d = &cfg.disc;
    if !cfg.wave_number.is_finite() || !cfg.amplitude.is_finite() {
        return Err(Error::InvalidArgument(
            "wave number and amplitude must be finite".into(),
        ));
    }
    if s.is_explicit() && s.alpha == 0.0 {
        return Err(Error::Precondition(
            "explicit update needs alpha != 0".into(),
        ));
    }
    let exact = sinusoid_field(cfg.wave_number, cfg.amplitude, d);
    let (n_x, n_t) = (d.n_x, d.n_t);

    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(n_t + 1);
    levels.push(exact.initial_row.clone());

    let startup = if s.is_two_level() {
        None
    } else {
        let first = match cfg.startup {
            Startup::ExactSeed => (0..=n_x).map(|i| exact.value(i, 1)).collect(),
            Startup::SingleStepLax => {
                let u0 = &levels[0];
                let sigma = d.sigma;
                let mut u1 = vec![0.0; n_x + 1];
                u1[0] = exact.value(0, 1);
                u1[n_x] = exact.value(n_x, 1);
                for i in 1..n_x {
                    u1[i] = 0.5 * (1.0 - sigma) * u0[i + 1] + 0.5 * (1.0 + sigma) * u0[i - 1];
                }
                u1
            }
        };
        levels.push(first);
        Some(cfg.startup)
    };

    let mut rhs = vec![0.0; n_x - 1];
    while levels.len() <= n_t {
        let n = levels.len() - 1;
        let next_level = n + 1;
        let cur = &levels[n];
        let prev = if n >= 1 { Some(&levels[n - 1]) } else { None };
        for i in 1..n_x {
            let mut acc = s.beta * cur[i] + s.delta * cur[i + 1] + s.epsilon * cur[i - 1];
            if let Some(p) = prev {
                acc += s.gamma * p[i] + s.eta * p[i - 1] + s.vartheta * p[i + 1];
            }
            rhs[i - 1] = -acc;
        }
        let left = exact.value(0, next_level);
        let right = exact.value(n_x, next_level);

        let interior = if s.is_explicit() {
            rhs.iter().map(|r| r / s.alpha).collect::<Vec<_>>()
        } else {
            rhs[0] -= s.theta * left;
            rhs[n_x - 2] -= s.zeta * right;
            let m = n_x - 1;
            tridiagonal_solve(
                &vec![s.theta; m - 1],
                &vec![s.alpha; m],
                &vec![s.zeta; m - 1],
                &rhs,
            )
            .map_err(|e| Error::StepSolve {
                step: next_level,
                source: Box::new(e),
            })?
        };

        let mut next = Vec::with_capacity(n_x + 1);
        next.push(left);
        next.extend(interior);
        next.push(right);
        if next
            .iter()
            .any(|v| !v.is_finite() || v.abs() > BLOWUP_THRESHOLD)
        {
            let partial = partial_errors(&levels, &exact, d.h);
            return Err(Error::BlowUp {
                step: next_level,
                partial: Box::new(partial),
            });
        }
        levels.push(next);
    }

    let field = GridField::from_fn(n_x, n_t, |i, n| levels[n][i]);
    let errors = l2_error_series(&field, &exact, d.h)?;
    Ok(SimulationRun {
        field,
        exact,
        errors,
        startup,
    })
}

fn partial_errors(levels: &[Vec<f64>], exact: &GridField, h: f64) -> ErrorSeries {
    let n_x = exact.n_x();
    let per_step = levels
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, level)| {
            let sum: f64 = (1..n_x)
                .map(|i| (level[i] - exact.value(i, n)).powi(2))
                .sum();
            (h * sum).sqrt()
        })
        .collect();
    ErrorSeries::from_steps(per_step)
}

/// `(h, tau)` halved `levels - 1` times at fixed Courant number and final
/// time; returns the final error of each level.
pub fn refinement_study(
    scheme_for: impl Fn(f64, f64) -> Result<SchemeCoefficients>,
    base: &Discretization,
    wave_number: f64,
    levels: usize,
) -> Result<Vec<f64>> {
    (0..levels)
        .map(|l| {
            let f = (1usize << l) as f64;
            let d = Discretization::new(
                base.h / f,
                base.tau / f,
                base.n_x << l,
                base.n_t << l,
                base.c,
            )?;
            let cfg = SimulationConfig::new(scheme_for(d.h, d.tau)?, d, wave_number);
            Ok(run(&cfg)?.errors.final_error)
        })
        .collect()
}
