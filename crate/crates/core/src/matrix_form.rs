//! Matrix form `M1 U + U M2 + L(U) = M0` of the nine-point scheme.
//!
//! `U` holds the interior unknowns, row `i - 1` for `i = 1 .. n_x - 1` and
//! column `n - 1` for `n = 1 .. n_t`. Column `n` of the matrix equation is the
//! scheme relation centred at time level `n`, so it couples levels `n - 1`,
//! `n` and `n + 1`. Couplings to level `n_t + 1` do not exist on the grid and
//! are dropped, which means only columns `1 .. n_t - 1` reproduce the
//! pointwise scheme exactly. Couplings to boundary or initial values move to
//! the right-hand side `M0`.

use nalgebra::DMatrix;

use crate::error::{dims, Error, Result};
use crate::scheme::{Discretization, SchemeCoefficients};

/// Space-time samples on the `(n_x + 1) x (n_t + 1)` grid, split into the
/// unknown interior block and the prescribed initial/boundary data.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    /// `(n_x - 1) x n_t`, entry `(i - 1, n - 1) = u_i^n`.
    pub interior: DMatrix<f64>,
    /// `u_i^0` for `i = 0 .. n_x`.
    pub initial_row: Vec<f64>,
    /// `u_0^n` for `n = 0 .. n_t`.
    pub left_boundary: Vec<f64>,
    /// `u_{n_x}^n` for `n = 0 .. n_t`.
    pub right_boundary: Vec<f64>,
}

impl GridField {
    pub fn new(
        interior: DMatrix<f64>,
        initial_row: Vec<f64>,
        left_boundary: Vec<f64>,
        right_boundary: Vec<f64>,
    ) -> Result<Self> {
        let n_x = interior.nrows() + 1;
        let n_t = interior.ncols();
        if interior.nrows() < 2 || n_t < 1 {
            return Err(Error::DimensionMismatch {
                what: "interior block",
                expected: "at least 2x1".into(),
                actual: dims(interior.nrows(), n_t),
            });
        }
        if initial_row.len() != n_x + 1 {
            return Err(Error::DimensionMismatch {
                what: "initial row",
                expected: (n_x + 1).to_string(),
                actual: initial_row.len().to_string(),
            });
        }
        for (what, b) in [
            ("left boundary", &left_boundary),
            ("right boundary", &right_boundary),
        ] {
            if b.len() != n_t + 1 {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: (n_t + 1).to_string(),
                    actual: b.len().to_string(),
                });
            }
        }
        if initial_row[0] != left_boundary[0] {
            return Err(Error::CornerMismatch {
                corner: "(0, 0)",
                a: initial_row[0],
                b: left_boundary[0],
            });
        }
        if initial_row[n_x] != right_boundary[0] {
            return Err(Error::CornerMismatch {
                corner: "(n_x, 0)",
                a: initial_row[n_x],
                b: right_boundary[0],
            });
        }
        Ok(Self {
            interior,
            initial_row,
            left_boundary,
            right_boundary,
        })
    }

    /// Samples `f(i, n)` at every grid node.
    pub fn from_fn(n_x: usize, n_t: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let interior = DMatrix::from_fn(n_x - 1, n_t, |r, c| f(r + 1, c + 1));
        let initial_row = (0..=n_x).map(|i| f(i, 0)).collect();
        let left_boundary = (0..=n_t).map(|n| f(0, n)).collect();
        let right_boundary = (0..=n_t).map(|n| f(n_x, n)).collect();
        Self {
            interior,
            initial_row,
            left_boundary,
            right_boundary,
        }
    }

    pub fn zeros(n_x: usize, n_t: usize) -> Self {
        Self::from_fn(n_x, n_t, |_, _| 0.0)
    }

    pub fn n_x(&self) -> usize {
        self.interior.nrows() + 1
    }

    pub fn n_t(&self) -> usize {
        self.interior.ncols()
    }

    /// `u_i^n` for `0 <= i <= n_x`, `0 <= n <= n_t`.
    pub fn value(&self, i: usize, n: usize) -> f64 {
        if n == 0 {
            self.initial_row[i]
        } else if i == 0 {
            self.left_boundary[n]
        } else if i == self.n_x() {
            self.right_boundary[n]
        } else {
            self.interior[(i - 1, n - 1)]
        }
    }

    /// Same interior with all initial and boundary data set to zero.
    pub fn with_zero_data(&self) -> Self {
        Self {
            interior: self.interior.clone(),
            initial_row: vec![0.0; self.initial_row.len()],
            left_boundary: vec![0.0; self.left_boundary.len()],
            right_boundary: vec![0.0; self.right_boundary.len()],
        }
    }

    fn check_grid(&self, n_x: usize, n_t: usize, what: &'static str) -> Result<()> {
        if self.n_x() != n_x || self.n_t() != n_t {
            return Err(Error::DimensionMismatch {
                what,
                expected: format!("n_x = {n_x}, n_t = {n_t}"),
                actual: format!("n_x = {}, n_t = {}", self.n_x(), self.n_t()),
            });
        }
        Ok(())
    }
}

/// Assembled matrices of the matrix form.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterSystem {
    /// `(n_x - 1) x (n_x - 1)`: `beta` diagonal, `delta` super, `epsilon` sub.
    pub m1: DMatrix<f64>,
    /// `n_t x n_t`: `gamma` super, `alpha` sub.
    pub m2: DMatrix<f64>,
    /// `(n_x - 1) x n_t` right-hand side carrying initial and boundary data.
    pub m0: DMatrix<f64>,
    pub scheme: SchemeCoefficients,
    pub disc: Discretization,
}

impl SylvesterSystem {
    pub fn rows(&self) -> usize {
        self.m1.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m2.nrows()
    }
}

/// Tridiagonal `M1` with constant diagonals.
pub fn space_matrix(s: &SchemeCoefficients, n_x: usize) -> DMatrix<f64> {
    let m = n_x - 1;
    DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            s.beta
        } else if c == r + 1 {
            s.delta
        } else if r == c + 1 {
            s.epsilon
        } else {
            0.0
        }
    })
}

/// `M2` with `gamma` on the superdiagonal and `alpha` on the subdiagonal, so
/// that `(U M2)_{i,n} = gamma u_i^{n-1} + alpha u_i^{n+1}`.
pub fn time_matrix(s: &SchemeCoefficients, n_t: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_t, n_t, |r, c| {
        if c == r + 1 {
            s.gamma
        } else if r == c + 1 {
            s.alpha
        } else {
            0.0
        }
    })
}

/// Right-hand side `M0`: minus every stencil term that lands on initial or
/// boundary data. Terms that reach level `n_t + 1` are dropped.
pub fn boundary_matrix(s: &SchemeCoefficients, data: &GridField) -> DMatrix<f64> {
    let (n_x, n_t) = (data.n_x(), data.n_t());
    let mut m0 = DMatrix::zeros(n_x - 1, n_t);
    let stencil = s.stencil();
    for i in 1..n_x {
        for n in 1..=n_t {
            let mut acc = 0.0;
            for &(w, di, dn) in &stencil {
                if w == 0.0 {
                    continue;
                }
                let ti = (i as isize + di) as usize;
                let tn = (n as isize + dn) as usize;
                if tn > n_t {
                    continue;
                }
                let on_data = tn == 0 || ti == 0 || ti == n_x;
                if on_data {
                    acc -= w * data.value(ti, tn);
                }
            }
            m0[(i - 1, n - 1)] = acc;
        }
    }
    m0
}

/// Builds `M1`, `M2` and `M0` for scheme `s` on grid `d`, taking the initial
/// and boundary values from `data` (its interior is ignored).
pub fn build_system(
    s: &SchemeCoefficients,
    d: &Discretization,
    data: &GridField,
) -> Result<SylvesterSystem> {
    data.check_grid(d.n_x, d.n_t, "boundary data")?;
    Ok(SylvesterSystem {
        m1: space_matrix(s, d.n_x),
        m2: time_matrix(s, d.n_t),
        m0: boundary_matrix(s, data),
        scheme: s.clone(),
        disc: *d,
    })
}

/// The four corner-weight shift operators making up `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftOperator {
    /// `zeta u_{i+1}^{n+1}`
    Zeta,
    /// `eta u_{i-1}^{n-1}`
    Eta,
    /// `theta u_{i-1}^{n+1}`
    Theta,
    /// `vartheta u_{i+1}^{n-1}`
    Vartheta,
}

impl ShiftOperator {
    pub const ALL: [ShiftOperator; 4] = [
        ShiftOperator::Zeta,
        ShiftOperator::Eta,
        ShiftOperator::Theta,
        ShiftOperator::Vartheta,
    ];

    /// Weight and `(space, time)` offset.
    pub fn term(self, s: &SchemeCoefficients) -> (f64, isize, isize) {
        match self {
            ShiftOperator::Zeta => (s.zeta, 1, 1),
            ShiftOperator::Eta => (s.eta, -1, -1),
            ShiftOperator::Theta => (s.theta, -1, 1),
            ShiftOperator::Vartheta => (s.vartheta, 1, -1),
        }
    }

    /// Applies the shift to an interior block, keeping only references that
    /// stay inside the interior.
    pub fn apply(self, s: &SchemeCoefficients, u: &DMatrix<f64>) -> DMatrix<f64> {
        let (w, di, dn) = self.term(s);
        let (rows, cols) = u.shape();
        let mut out = DMatrix::zeros(rows, cols);
        if w == 0.0 {
            return out;
        }
        for r in 0..rows {
            for c in 0..cols {
                let tr = r as isize + di;
                let tc = c as isize + dn;
                if (0..rows as isize).contains(&tr) && (0..cols as isize).contains(&tc) {
                    out[(r, c)] = w * u[(tr as usize, tc as usize)];
                }
            }
        }
        out
    }
}

/// `L(U) = L1 + L2 + L3 + L4` on the interior block.
pub fn apply_operator_l_matrix(s: &SchemeCoefficients, u: &DMatrix<f64>) -> DMatrix<f64> {
    ShiftOperator::ALL
        .iter()
        .fold(DMatrix::zeros(u.nrows(), u.ncols()), |acc, op| {
            acc + op.apply(s, u)
        })
}

/// `L(U)` for the interior of `u`.
pub fn apply_operator_l(s: &SchemeCoefficients, u: &GridField) -> DMatrix<f64> {
    apply_operator_l_matrix(s, &u.interior)
}

fn check_block(sys: &SylvesterSystem, u: &DMatrix<f64>, what: &'static str) -> Result<()> {
    if u.shape() != (sys.rows(), sys.cols()) {
        return Err(Error::DimensionMismatch {
            what,
            expected: dims(sys.rows(), sys.cols()),
            actual: dims(u.nrows(), u.ncols()),
        });
    }
    Ok(())
}

/// `M1 U + U M2 + L(U)` for an interior block.
pub fn apply_system(sys: &SylvesterSystem, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_block(sys, u, "interior block")?;
    Ok(&sys.m1 * u + u * &sys.m2 + apply_operator_l_matrix(&sys.scheme, u))
}

/// `M1 U + U M2 + L(U) - M0`.
pub fn matrix_residual(sys: &SylvesterSystem, u: &GridField) -> Result<DMatrix<f64>> {
    Ok(apply_system(sys, &u.interior)? - &sys.m0)
}

/// The scheme relation evaluated node by node for `i = 1 .. n_x - 1`,
/// `n = 1 .. n_t - 1`, reading initial and boundary values where the stencil
/// leaves the interior.
pub fn pointwise_residual(s: &SchemeCoefficients, u: &GridField) -> DMatrix<f64> {
    let (n_x, n_t) = (u.n_x(), u.n_t());
    let stencil = s.stencil();
    DMatrix::from_fn(n_x - 1, n_t - 1, |r, c| {
        let (i, n) = (r + 1, c + 1);
        stencil.iter().fold(0.0, |acc, &(w, di, dn)| {
            let ti = (i as isize + di) as usize;
            let tn = (n as isize + dn) as usize;
            acc + w * u.value(ti, tn)
        })
    })
}

/// Samples `amplitude * cos(k (x - c t))` on the grid of `d`.
pub fn sinusoid_field(k: f64, amplitude: f64, d: &Discretization) -> GridField {
    GridField::from_fn(d.n_x, d.n_t, |i, n| {
        amplitude * (k * (d.x(i) - d.c * d.t(n))).cos()
    })
}

/// Exact travelling wave `cos(k (x - c t))`.
pub fn exact_field(k: f64, d: &Discretization) -> GridField {
    sinusoid_field(k, 1.0, d)
}

/// Truncation residual `F = M1 U_exact + U_exact M2 + L(U_exact) - M0`.
pub fn residual_f(sys: &SylvesterSystem, u_exact: &GridField) -> Result<DMatrix<f64>> {
    matrix_residual(sys, u_exact)
}

/// `E = U - U_exact` on the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMatrix {
    pub entries: DMatrix<f64>,
}

pub fn error_matrix(u: &GridField, u_exact: &GridField) -> Result<ErrorMatrix> {
    if u.interior.shape() != u_exact.interior.shape() {
        return Err(Error::DimensionMismatch {
            what: "error matrix operands",
            expected: dims(u_exact.interior.nrows(), u_exact.interior.ncols()),
            actual: dims(u.interior.nrows(), u.interior.ncols()),
        });
    }
    Ok(ErrorMatrix {
        entries: &u.interior - &u_exact.interior,
    })
}
