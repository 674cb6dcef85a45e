//! Minimum-norm analysis of the error equation `M1 E + E M2 = F` (shift
//! operator absent).
//!
//! With `M1 = U1 S1 V1^T` and `M2 = U2 S2 V2^T`, multiplying by `U1^T` on the
//! left and `V2` on the right gives
//! `S1 (V1^T E V2) + (U1^T E U2) S2 = U1^T F V2`. Treating the two rotated
//! copies of `E` as independent unknowns and splitting at the ranks of `M1`
//! and `M2` decouples the problem into the blocks solved below. Blocks that
//! no equation constrains are set to zero, which is what minimum norm asks
//! for.

use nalgebra::DMatrix;

use crate::drp::{optimize_drp, paper_drp_closed_form, SpatialCoefficients};
use crate::error::{dims, Error, Result};
use crate::matrix_form::SylvesterSystem;
use crate::scheme::{Discretization, SchemeCoefficients};
use crate::svd::{svd, SvdFactorization};

/// Blocks of `U1^T F V2` split at `(rank1, rank2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedRhs {
    pub f11: DMatrix<f64>,
    pub f12: DMatrix<f64>,
    pub f21: DMatrix<f64>,
    pub f22: DMatrix<f64>,
}

impl PartitionedRhs {
    /// Reassembles `U1^T F V2`.
    pub fn full(&self) -> DMatrix<f64> {
        let (r1, r2) = self.f11.shape();
        let m = r1 + self.f21.nrows();
        let n = r2 + self.f12.ncols();
        let mut out = DMatrix::zeros(m, n);
        out.view_mut((0, 0), (r1, r2)).copy_from(&self.f11);
        out.view_mut((0, r2), (r1, n - r2)).copy_from(&self.f12);
        out.view_mut((r1, 0), (m - r1, r2)).copy_from(&self.f21);
        out.view_mut((r1, r2), (m - r1, n - r2))
            .copy_from(&self.f22);
        out
    }
}

/// The three tuning objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValues {
    /// `sqrt(2 beta^2 + delta^2 + epsilon^2)`
    pub f1: f64,
    /// `sqrt(alpha^2 + gamma^2)`
    pub f2: f64,
    /// Frobenius norm of `M0`.
    pub f3: f64,
}

/// Closed-form spectra of the 2x2 Gram blocks, as printed.
///
/// These are eigenvalues of the 2x2 blocks `[[b^2 + d^2, b (d + e)], [b (d + e), e^2 + b^2]]`
/// and `diag(gamma^2, alpha^2)`. `M1^T M1` and `M2^T M2` are not block
/// diagonal (they carry `delta epsilon` and `alpha gamma` two places off the
/// diagonal), so these are not the exact squared singular values; compare
/// [`exact_singular_values`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramSpectrum {
    /// `1/2 (2b^2 + d^2 + e^2 -/+ (d + e) sqrt(4b^2 + d^2 + e^2 - 2de))`
    pub m1_values: [f64; 2],
    /// `(n_x - 1) / 2`
    pub m1_multiplicity: usize,
    /// `[alpha^2, gamma^2]`
    pub m2_values: [f64; 2],
    /// `n_t / 2`
    pub m2_multiplicity: usize,
}

/// The printed pair of `M1` block values (no multiplicity requirement).
pub fn paper_m1_block_values(s: &SchemeCoefficients) -> [f64; 2] {
    let (b, d, e) = (s.beta, s.delta, s.epsilon);
    let trace = 2.0 * b * b + d * d + e * e;
    // 4b^2 + d^2 + e^2 - 2de = 4b^2 + (d - e)^2 >= 0
    let root = (4.0 * b * b + (d - e) * (d - e)).sqrt();
    [
        0.5 * (trace - (d + e) * root),
        0.5 * (trace + (d + e) * root),
    ]
}

/// Printed Gram-block spectra; both `n_x - 1` and `n_t` must be even for the
/// multiplicities to be integers.
pub fn block_gram_spectrum(s: &SchemeCoefficients, n_x: usize, n_t: usize) -> Result<GramSpectrum> {
    if n_x < 1 || !(n_x - 1).is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "block spectrum needs an even number of interior nodes, n_x - 1 = {}",
            n_x.saturating_sub(1)
        )));
    }
    if !n_t.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "block spectrum needs an even number of time levels, n_t = {n_t}"
        )));
    }
    Ok(GramSpectrum {
        m1_values: paper_m1_block_values(s),
        m1_multiplicity: (n_x - 1) / 2,
        m2_values: [s.alpha * s.alpha, s.gamma * s.gamma],
        m2_multiplicity: n_t / 2,
    })
}

/// Singular values of the assembled `M1` and `M2`.
pub fn exact_singular_values(sys: &SylvesterSystem) -> (Vec<f64>, Vec<f64>) {
    (svd(&sys.m1).singular_values, svd(&sys.m2).singular_values)
}

/// `U1^T F V2` split after `rank1` rows and `rank2` columns.
pub fn partition_rhs(
    u1: &DMatrix<f64>,
    f: &DMatrix<f64>,
    v2: &DMatrix<f64>,
    rank1: usize,
    rank2: usize,
) -> Result<PartitionedRhs> {
    let (m, n) = f.shape();
    if u1.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            what: "left orthogonal factor",
            expected: dims(m, m),
            actual: dims(u1.nrows(), u1.ncols()),
        });
    }
    if v2.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            what: "right orthogonal factor",
            expected: dims(n, n),
            actual: dims(v2.nrows(), v2.ncols()),
        });
    }
    if rank1 > m || rank2 > n {
        return Err(Error::DimensionMismatch {
            what: "rank split",
            expected: format!("at most {}", dims(m, n)),
            actual: dims(rank1, rank2),
        });
    }
    let t = u1.transpose() * f * v2;
    Ok(PartitionedRhs {
        f11: t.view((0, 0), (rank1, rank2)).into_owned(),
        f12: t.view((0, rank2), (rank1, n - rank2)).into_owned(),
        f21: t.view((rank1, 0), (m - rank1, rank2)).into_owned(),
        f22: t.view((rank1, rank2), (m - rank1, n - rank2)).into_owned(),
    })
}

/// Entrywise minimum-norm split of `f11[i,j] = m1[i] x + m2[j] y`:
/// `x = m1[i] f / (m1[i]^2 + m2[j]^2)`, `y = m2[j] f / (m1[i]^2 + m2[j]^2)`.
pub fn min_norm_entries(
    m1_diag: &[f64],
    m2_diag: &[f64],
    f11: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if f11.shape() != (m1_diag.len(), m2_diag.len()) {
        return Err(Error::DimensionMismatch {
            what: "f11 block",
            expected: dims(m1_diag.len(), m2_diag.len()),
            actual: dims(f11.nrows(), f11.ncols()),
        });
    }
    let (rows, cols) = f11.shape();
    let mut e = DMatrix::zeros(rows, cols);
    let mut ee = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let (a, b, f) = (m1_diag[i], m2_diag[j], f11[(i, j)]);
            let denom = a * a + b * b;
            if denom == 0.0 {
                if f != 0.0 {
                    return Err(Error::InfeasibleEntry {
                        row: i,
                        col: j,
                        rhs: f,
                    });
                }
                continue;
            }
            e[(i, j)] = a * f / denom;
            ee[(i, j)] = b * f / denom;
        }
    }
    Ok((e, ee))
}

/// `E12 = diag(m1)^-1 f12` and `EE21 = f21 diag(m2)^-1`.
pub fn offdiag_blocks(
    m1_diag: &[f64],
    m2_diag: &[f64],
    f12: &DMatrix<f64>,
    f21: &DMatrix<f64>,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if f12.nrows() != m1_diag.len() {
        return Err(Error::DimensionMismatch {
            what: "f12 rows",
            expected: m1_diag.len().to_string(),
            actual: f12.nrows().to_string(),
        });
    }
    if f21.ncols() != m2_diag.len() {
        return Err(Error::DimensionMismatch {
            what: "f21 columns",
            expected: m2_diag.len().to_string(),
            actual: f21.ncols().to_string(),
        });
    }
    if let Some(index) = m1_diag.iter().position(|d| *d == 0.0) {
        return Err(Error::SingularFactor { index });
    }
    if let Some(index) = m2_diag.iter().position(|d| *d == 0.0) {
        return Err(Error::SingularFactor { index });
    }
    let mut e12 = f12.clone();
    for (i, d) in m1_diag.iter().enumerate() {
        e12.row_mut(i).unscale_mut(*d);
    }
    let mut ee21 = f21.clone();
    for (j, d) in m2_diag.iter().enumerate() {
        ee21.column_mut(j).unscale_mut(*d);
    }
    Ok((e12, ee21))
}

/// Everything produced by the partitioned minimum-norm solve.
#[derive(Debug, Clone)]
pub struct MinNormSolution {
    pub svd1: SvdFactorization,
    pub svd2: SvdFactorization,
    pub rank1: usize,
    pub rank2: usize,
    pub rhs: PartitionedRhs,
    /// `V1^T E V2 = [[E11, E12], [0, 0]]`
    pub e_tilde: DMatrix<f64>,
    /// `U1^T E U2 = [[EE11, 0], [EE21, 0]]`
    pub e_double_tilde: DMatrix<f64>,
}

impl MinNormSolution {
    /// `S1 E~ + E~~ S2 - U1^T F V2`. Zero except in the `f22` block, which no
    /// choice of unknowns can reach.
    pub fn diagonal_residual(&self) -> DMatrix<f64> {
        self.svd1.sigma() * &self.e_tilde + &self.e_double_tilde * self.svd2.sigma()
            - self.rhs.full()
    }

    /// Frobenius norm of the unreachable `f22` block.
    pub fn unresolved_norm(&self) -> f64 {
        self.rhs.f22.norm()
    }

    /// `sum e~^2 + e~~^2`.
    pub fn squared_norm(&self) -> f64 {
        self.e_tilde.norm_squared() + self.e_double_tilde.norm_squared()
    }
}

/// Minimum-norm solution of `m1 E + E m2 = f` for square `m1`, `m2`.
pub fn min_norm_solve(
    m1: &DMatrix<f64>,
    m2: &DMatrix<f64>,
    f: &DMatrix<f64>,
) -> Result<MinNormSolution> {
    let (m, n) = f.shape();
    if m1.shape() != (m, m) || m2.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            what: "Sylvester operands",
            expected: format!("{} and {} for rhs {}", dims(m, m), dims(n, n), dims(m, n)),
            actual: format!(
                "{} and {}",
                dims(m1.nrows(), m1.ncols()),
                dims(m2.nrows(), m2.ncols())
            ),
        });
    }
    let svd1 = svd(m1);
    let svd2 = svd(m2);
    let rank1 = svd1.rank();
    let rank2 = svd2.rank();
    let d1 = &svd1.singular_values[..rank1];
    let d2 = &svd2.singular_values[..rank2];

    let rhs = partition_rhs(&svd1.left, f, &svd2.right, rank1, rank2)?;
    let (e11, ee11) = min_norm_entries(d1, d2, &rhs.f11)?;
    let (e12, ee21) = offdiag_blocks(d1, d2, &rhs.f12, &rhs.f21)?;

    let mut e_tilde = DMatrix::zeros(m, n);
    e_tilde.view_mut((0, 0), (rank1, rank2)).copy_from(&e11);
    e_tilde
        .view_mut((0, rank2), (rank1, n - rank2))
        .copy_from(&e12);
    let mut e_double_tilde = DMatrix::zeros(m, n);
    e_double_tilde
        .view_mut((0, 0), (rank1, rank2))
        .copy_from(&ee11);
    e_double_tilde
        .view_mut((rank1, 0), (m - rank1, rank2))
        .copy_from(&ee21);

    Ok(MinNormSolution {
        svd1,
        svd2,
        rank1,
        rank2,
        rhs,
        e_tilde,
        e_double_tilde,
    })
}

/// Upper bound on the Frobenius norm of the `f11` block:
///
/// `sqrt(n_t (n_x - 1)) * ( |U_exact| ( sqrt((n_x-1)/2) sqrt(2b^2 + d^2 + e^2)
///   + sqrt(n_t/2) sqrt(a^2 + g^2) ) + |M0| )`.
pub fn norm_bound(
    s: &SchemeCoefficients,
    d: &Discretization,
    norm_u_exact: f64,
    norm_m0: f64,
) -> f64 {
    let rows = (d.n_x - 1) as f64;
    let cols = d.n_t as f64;
    let o = objectives_from_weights(s, norm_m0);
    (cols * rows).sqrt()
        * (norm_u_exact * ((rows / 2.0).sqrt() * o.f1 + (cols / 2.0).sqrt() * o.f2) + norm_m0)
}

fn objectives_from_weights(s: &SchemeCoefficients, norm_m0: f64) -> ObjectiveValues {
    ObjectiveValues {
        f1: (2.0 * s.beta * s.beta + s.delta * s.delta + s.epsilon * s.epsilon).sqrt(),
        f2: (s.alpha * s.alpha + s.gamma * s.gamma).sqrt(),
        f3: norm_m0,
    }
}

pub fn objectives(s: &SchemeCoefficients, m0: &DMatrix<f64>) -> ObjectiveValues {
    objectives_from_weights(s, m0.norm())
}

/// Source of the spatial weights in [`tune_scheme_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TuneVariant {
    /// Closed-form coefficients as printed.
    Paper,
    /// True minimizer of the integrated wavenumber error.
    Oracle,
}

/// Time-part factor applied to the spatial weights.
pub const TUNE_TIME_FACTOR: f64 = -0.9;
/// Weight on `u_i^{n+1}` of the tuned scheme.
pub const TUNE_ALPHA: f64 = 10.0;

/// Tuned scheme built on the printed closed-form spatial weights.
pub fn tune_scheme(h: f64, tau: f64) -> Result<SchemeCoefficients> {
    tune_scheme_with(h, tau, TuneVariant::Paper)
}

/// `beta_t = -0.9 beta_x` (same for `delta`, `epsilon`), `alpha = 10`,
/// `gamma = 0`, corner weights zero.
pub fn tune_scheme_with(h: f64, tau: f64, variant: TuneVariant) -> Result<SchemeCoefficients> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let (spatial, name): (SpatialCoefficients, &str) = match variant {
        TuneVariant::Paper => (paper_drp_closed_form(h)?, "tuned"),
        TuneVariant::Oracle => (optimize_drp(h)?, "tuned-oracle"),
    };
    Ok(SchemeCoefficients {
        alpha_x: TUNE_ALPHA,
        beta_x: spatial.beta_x,
        beta_t: TUNE_TIME_FACTOR * spatial.beta_x,
        delta_x: spatial.delta_x,
        delta_t: TUNE_TIME_FACTOR * spatial.delta_x,
        epsilon_x: spatial.epsilon_x,
        epsilon_t: TUNE_TIME_FACTOR * spatial.epsilon_x,
        ..SchemeCoefficients::default()
    }
    .assemble()
    .with_name(name))
}
