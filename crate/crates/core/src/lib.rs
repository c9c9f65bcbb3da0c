//! Steady-state thermodynamics of a driven three-mode photon–magnon–phonon
//! system.
//!
//! The crate builds the linearized drift and diffusion matrices of the six
//! quadrature fluctuations, solves the algebraic Lyapunov equation
//! `A V + V Aᵀ + D = 0` for the stationary covariance, and evaluates the
//! irreversible entropy production rate, entropy flux and magnon–phonon
//! mutual information on top of it. A fixed-step covariance integrator acts
//! as an independent cross-check for the algebraic solve.
//!
//! All rates and detunings are dimensionless, expressed in units of the
//! phonon frequency. The quadrature ordering is `(x_a, y_a, x_m, y_m, x_b,
//! y_b)` for photon, magnon and phonon respectively, with vacuum variance
//! 1/2 per quadrature.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod model;
pub mod smallmat;
pub mod thermo;

mod error;

pub use error::{Error, Result};

/// Dense 6×6 real matrix over the quadrature ordering
/// `(x_a, y_a, x_m, y_m, x_b, y_b)`.
pub type Mat6 = nalgebra::SMatrix<f64, 6, 6>;

/// 2×2 real matrix (single-mode quadrature block).
pub type Mat2 = nalgebra::SMatrix<f64, 2, 2>;

/// Labels of the six quadratures, in storage order.
pub const QUADRATURE_LABELS: [&str; 6] = ["x_a", "y_a", "x_m", "y_m", "x_b", "y_b"];

/// One bosonic mode of the three-mode chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Photon,
    Magnon,
    Phonon,
}

impl Mode {
    /// Index of the mode's `x` quadrature; the `y` quadrature follows it.
    pub fn quadrature_index(self) -> usize {
        match self {
            Mode::Photon => 0,
            Mode::Magnon => 2,
            Mode::Phonon => 4,
        }
    }

    pub const ALL: [Mode; 3] = [Mode::Photon, Mode::Magnon, Mode::Phonon];
}
