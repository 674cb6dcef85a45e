//! The nine-coefficient space-time stencil family.
//!
//! A scheme advances the advection equation `u_t + c u_x = 0` through the
//! relation
//!
//! ```text
//! alpha u_i^{n+1} + beta u_i^n + gamma u_i^{n-1}
//!   + delta u_{i+1}^n + epsilon u_{i-1}^n
//!   + zeta u_{i+1}^{n+1} + eta u_{i-1}^{n-1}
//!   + theta u_{i-1}^{n+1} + vartheta u_{i+1}^{n-1} = 0
//! ```
//!
//! The five central-row weights (`alpha` .. `epsilon`) carry an additive split
//! into an `_x` part (terms that depend on the mesh size) and a `_t` part
//! (terms that depend only on the time step).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Named rows of the classic scheme table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Leapfrog,
    Lax,
    LaxWendroff,
    CrankNicolson,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Leapfrog,
        Preset::Lax,
        Preset::LaxWendroff,
        Preset::CrankNicolson,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Preset::Leapfrog => "Leapfrog",
            Preset::Lax => "Lax",
            Preset::LaxWendroff => "LaxWendroff",
            Preset::CrankNicolson => "CrankNicolson",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(char::to_lowercase)
            .collect();
        match key.as_str() {
            "leapfrog" => Ok(Preset::Leapfrog),
            "lax" | "laxfriedrichs" => Ok(Preset::Lax),
            "laxwendroff" => Ok(Preset::LaxWendroff),
            "cranknicolson" => Ok(Preset::CrankNicolson),
            _ => Err(Error::UnknownPreset {
                name: s.to_string(),
            }),
        }
    }
}

/// Stencil weights of the nine-point scheme together with the space/time
/// split of the central-row weights.
///
/// The full weights `alpha` .. `epsilon` are kept consistent with their parts
/// by [`SchemeCoefficients::assemble`]; the four corner weights have no split.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SchemeCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub eta: f64,
    pub theta: f64,
    pub vartheta: f64,

    pub alpha_x: f64,
    pub alpha_t: f64,
    pub beta_x: f64,
    pub beta_t: f64,
    pub gamma_x: f64,
    pub gamma_t: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub epsilon_x: f64,
    pub epsilon_t: f64,

    pub name: Option<String>,
}

impl SchemeCoefficients {
    /// All weights zero.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Full weights with no split: everything is placed in the `_x` part.
    #[allow(clippy::too_many_arguments)]
    pub fn from_weights(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        zeta: f64,
        eta: f64,
        theta: f64,
        vartheta: f64,
    ) -> Self {
        Self {
            alpha_x: alpha,
            beta_x: beta,
            gamma_x: gamma,
            delta_x: delta,
            epsilon_x: epsilon,
            zeta,
            eta,
            theta,
            vartheta,
            ..Self::default()
        }
        .assemble()
    }

    /// Recompute the five split weights from their `_x` and `_t` parts.
    pub fn assemble(mut self) -> Self {
        self.alpha = self.alpha_x + self.alpha_t;
        self.beta = self.beta_x + self.beta_t;
        self.gamma = self.gamma_x + self.gamma_t;
        self.delta = self.delta_x + self.delta_t;
        self.epsilon = self.epsilon_x + self.epsilon_t;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Table row for `preset` at unit advection speed.
    pub fn preset(preset: Preset, h: f64, tau: f64) -> Result<Self> {
        Self::preset_for_speed(preset, h, tau, 1.0)
    }

    /// Same as [`SchemeCoefficients::preset`] but parsing the preset label.
    pub fn preset_named(name: &str, h: f64, tau: f64) -> Result<Self> {
        Self::preset(name.parse()?, h, tau)
    }

    /// Table row for `preset` with the spatial terms scaled by the advection
    /// speed `c`. At `c = 1` this is the table exactly as printed.
    ///
    /// Terms involving `h` go to the `_x` part, terms in `tau` alone go to the
    /// `_t` part. The Crank-Nicolson row is reproduced as printed (it carries
    /// no speed and its `eta`/`theta` corners do not form the usual
    /// trapezoidal stencil).
    pub fn preset_for_speed(preset: Preset, h: f64, tau: f64, c: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "preset needs h > 0 and tau > 0 (got h = {h}, tau = {tau})"
            )));
        }
        let sigma = courant_number(c, h, tau);
        let mut s = Self::zero();
        match preset {
            Preset::Leapfrog => {
                s.alpha_t = 1.0 / (2.0 * tau);
                s.gamma_t = -1.0 / (2.0 * tau);
                s.delta_x = c / (2.0 * h);
                s.epsilon_x = -c / (2.0 * h);
            }
            Preset::Lax => {
                s.alpha_t = 1.0 / tau;
                s.delta_x = c / (2.0 * h);
                s.delta_t = -1.0 / (2.0 * tau);
                s.epsilon_x = -c / (2.0 * h);
                s.epsilon_t = -1.0 / (2.0 * tau);
            }
            Preset::LaxWendroff => {
                s.alpha_t = 1.0 / tau;
                s.beta_x = c * c * tau / (h * h);
                s.beta_t = -1.0 / tau;
                s.delta_x = c * (1.0 - sigma) / (2.0 * h);
                s.epsilon_x = -c * (1.0 + sigma) / (2.0 * h);
            }
            Preset::CrankNicolson => {
                let inv_h2 = 1.0 / (h * h);
                s.alpha_x = inv_h2;
                s.alpha_t = 1.0 / tau;
                s.beta_x = inv_h2;
                s.beta_t = -1.0 / tau;
                s.delta_x = -inv_h2;
                s.epsilon_x = -inv_h2;
                s.eta = -inv_h2;
                s.theta = -inv_h2;
            }
        }
        Ok(s.assemble().with_name(preset.label()))
    }

    /// No `n-1` level is referenced.
    pub fn is_two_level(&self) -> bool {
        self.gamma == 0.0 && self.eta == 0.0 && self.vartheta == 0.0
    }

    /// No unknown neighbour at level `n+1`; the update divides by `alpha` only.
    pub fn is_explicit(&self) -> bool {
        self.zeta == 0.0 && self.theta == 0.0
    }

    /// Whether the corner-weight shift operator is identically zero.
    pub fn shift_operator_vanishes(&self) -> bool {
        self.zeta == 0.0 && self.eta == 0.0 && self.theta == 0.0 && self.vartheta == 0.0
    }

    /// The nine weights in stencil order
    /// `(alpha, beta, gamma, delta, epsilon, zeta, eta, theta, vartheta)`.
    pub fn weights(&self) -> [f64; 9] {
        [
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon,
            self.zeta,
            self.eta,
            self.theta,
            self.vartheta,
        ]
    }

    /// Each weight paired with its `(space, time)` offset relative to
    /// `u_i^n`.
    pub fn stencil(&self) -> [(f64, isize, isize); 9] {
        [
            (self.alpha, 0, 1),
            (self.beta, 0, 0),
            (self.gamma, 0, -1),
            (self.delta, 1, 0),
            (self.epsilon, -1, 0),
            (self.zeta, 1, 1),
            (self.eta, -1, -1),
            (self.theta, -1, 1),
            (self.vartheta, 1, -1),
        ]
    }

    /// Von Neumann amplification factors of the mode `e^{j i kappa_h}`.
    ///
    /// Substituting `u_i^n = g^n e^{j i kappa_h}` gives `a g^2 + b g + c = 0`
    /// with
    /// `a = alpha + zeta e^{j k} + theta e^{-j k}`,
    /// `b = beta + delta e^{j k} + epsilon e^{-j k}`,
    /// `c = gamma + eta e^{-j k} + vartheta e^{j k}`.
    /// Two-level schemes return the single root `-b / a`.
    pub fn amplification_roots(&self, kappa_h: f64) -> Result<Vec<AmplificationRoot>> {
        let fwd = Complex64::from_polar(1.0, kappa_h);
        let back = fwd.conj();
        let a = self.alpha + self.zeta * fwd + self.theta * back;
        let b = self.beta + self.delta * fwd + self.epsilon * back;
        let c = self.gamma + self.eta * back + self.vartheta * fwd;

        let scale = self
            .weights()
            .iter()
            .fold(0.0_f64, |m, w| m.max(w.abs()))
            .max(f64::MIN_POSITIVE);
        if a.norm() <= 1e-14 * scale {
            return Err(Error::SingularMode { kappa_h });
        }

        if self.is_two_level() {
            return Ok(vec![AmplificationRoot {
                value: -b / a,
                multiplicity: 1,
            }]);
        }

        let disc = b * b - 4.0 * a * c;
        if disc.norm() <= 1e-14 * (b.norm_sqr() + 4.0 * a.norm() * c.norm()) {
            return Ok(vec![AmplificationRoot {
                value: -b / (2.0 * a),
                multiplicity: 2,
            }]);
        }
        let mut sq = disc.sqrt();
        if (b.conj() * sq).re < 0.0 {
            sq = -sq;
        }
        let q = -0.5 * (b + sq);
        Ok(vec![
            AmplificationRoot {
                value: q / a,
                multiplicity: 1,
            },
            AmplificationRoot {
                value: c / q,
                multiplicity: 1,
            },
        ])
    }

    /// Largest root modulus over `samples` equispaced modes in `[-pi, pi]`.
    pub fn max_amplification(&self, samples: usize) -> Result<f64> {
        let samples = samples.max(2);
        let mut worst = 0.0_f64;
        for k in 0..samples {
            let kappa = -PI + 2.0 * PI * k as f64 / (samples - 1) as f64;
            for r in self.amplification_roots(kappa)? {
                worst = worst.max(r.value.norm());
            }
        }
        Ok(worst)
    }
}

/// One root of the amplification polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationRoot {
    pub value: Complex64,
    pub multiplicity: u8,
}

/// Courant number `c tau / h`.
pub fn courant_number(c: f64, h: f64, tau: f64) -> f64 {
    c * tau / h
}

/// Uniform space-time grid on `[0, n_x h] x [0, n_t tau]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    pub h: f64,
    pub tau: f64,
    pub n_x: usize,
    pub n_t: usize,
    pub c: f64,
    pub sigma: f64,
}

impl Discretization {
    pub fn new(h: f64, tau: f64, n_x: usize, n_t: usize, c: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidDiscretization(format!(
                "h must be positive, got {h}"
            )));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidDiscretization(format!(
                "tau must be positive, got {tau}"
            )));
        }
        if n_x < 3 {
            return Err(Error::InvalidDiscretization(format!(
                "n_x must be >= 3, got {n_x}"
            )));
        }
        if n_t < 2 {
            return Err(Error::InvalidDiscretization(format!(
                "n_t must be >= 2, got {n_t}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidDiscretization(format!(
                "c must be finite, got {c}"
            )));
        }
        let d = Self {
            h,
            tau,
            n_x,
            n_t,
            c,
            sigma: courant_number(c, h, tau),
        };
        if !(d.length().is_finite() && d.duration().is_finite()) {
            return Err(Error::InvalidDiscretization(
                "domain extent overflows".into(),
            ));
        }
        Ok(d)
    }

    /// Domain length `n_x h`.
    pub fn length(&self) -> f64 {
        self.n_x as f64 * self.h
    }

    /// Final time `n_t tau`.
    pub fn duration(&self) -> f64 {
        self.n_t as f64 * self.tau
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }
}
