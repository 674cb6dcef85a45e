//! Nine-point finite difference schemes for linear advection: coefficient
//! presets, dispersion-relation-preserving optimization, the Sylvester matrix
//! form of a scheme, minimum-norm error analysis and a reference time stepper.

pub mod drp;
pub mod error;
pub mod matrix_form;
pub mod scheme;
pub mod simulator;
pub mod svd;
pub mod sylvester;

pub use drp::{integrated_error, optimize_drp, SpatialCoefficients, WavenumberError};
pub use error::{Error, Result};
pub use matrix_form::{build_system, GridField, SylvesterSystem};
pub use scheme::{courant_number, Discretization, Preset, SchemeCoefficients};
pub use simulator::{run, ErrorSeries, SimulationConfig, SimulationRun, Startup};
pub use svd::{svd, SvdFactorization};
pub use sylvester::{min_norm_solve, tune_scheme, MinNormSolution, TuneVariant};
