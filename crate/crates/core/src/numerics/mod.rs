//! Shared numerical machinery: bracketed minimization, adaptive quadrature,
//! and nonlinear least squares.

pub mod lsq;
pub mod minimize;
pub mod quadrature;

pub use lsq::{levenberg_marquardt, FitOptions, FitOutcome};
pub use minimize::{golden_section, minimize_grid_golden, Minimum};
pub use quadrature::{integrate, integrate_2d, Quadrature};
