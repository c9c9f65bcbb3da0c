//! Time integration of the covariance moment equation `V̇ = A V + V Aᵀ + D`.
//!
//! A classic fixed-step 4th-order scheme, deliberately unadaptive: the
//! integrator is the independent oracle for the algebraic Lyapunov solve, so
//! determinism and a controlled convergence order matter more than speed.

use crate::smallmat::{spectral_abscissa, Covariance, STABILITY_MARGIN};
use crate::thermo::{
    entropy_flux, entropy_production_trace, time_reversal_split, wigner_entropy,
    wigner_entropy_rate, DriftSplit,
};
use crate::{Error, Mat6, Result};

/// One stored sample of a covariance trajectory with its entropy budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    /// Time in units of the inverse phonon frequency.
    pub time: f64,
    pub covariance: Covariance,
    /// Wigner entropy (nats).
    pub entropy: f64,
    /// Instantaneous entropy production rate (trace formula).
    pub pi: f64,
    /// Instantaneous entropy flux, `Φ = Π − dS/dt`.
    pub phi: f64,
    /// `½ tr(V⁻¹ V̇)`.
    pub ds_dt: f64,
}

/// Right-hand side of the moment equation, symmetrized.
pub fn covariance_rhs(a: &Mat6, d: &Mat6, v: &Mat6) -> Mat6 {
    let rhs = a * v + v * a.transpose() + d;
    (rhs + rhs.transpose()) * 0.5
}

fn rk4_step(a: &Mat6, d: &Mat6, v: &Mat6, dt: f64) -> Mat6 {
    let k1 = covariance_rhs(a, d, v);
    let k2 = covariance_rhs(a, d, &(v + k1 * (dt / 2.0)));
    let k3 = covariance_rhs(a, d, &(v + k2 * (dt / 2.0)));
    let k4 = covariance_rhs(a, d, &(v + k3 * dt));
    let next = v + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    (next + next.transpose()) * 0.5
}

fn budget_point(
    time: f64,
    v: Mat6,
    a_split: &DriftSplit,
    a: &Mat6,
    d: &Mat6,
) -> Result<TrajectoryPoint> {
    let covariance = Covariance::new(v)?;
    let entropy = wigner_entropy(&covariance).map_err(|_| Error::IntegrationDiverged { time })?;
    let pi = entropy_production_trace(&covariance, a_split, d)
        .map_err(|_| Error::IntegrationDiverged { time })?;
    let v_dot = covariance_rhs(a, d, covariance.matrix());
    let ds_dt = wigner_entropy_rate(&covariance, &v_dot)?;
    Ok(TrajectoryPoint {
        time,
        covariance,
        entropy,
        pi,
        phi: entropy_flux(pi, ds_dt),
        ds_dt,
    })
}

/// Step-size ceiling from the stability heuristic `dt ≤ 0.1 / max|A_ij|`.
pub fn max_step(a: &Mat6) -> f64 {
    0.1 / a.abs().max().max(1e-300)
}

/// Integrates `V̇ = A V + V Aᵀ + D` from `v0` and returns every step with
/// its entropy budget. The covariance must stay positive definite along the
/// way; losing that is reported as divergence.
pub fn integrate_covariance(
    a: &Mat6,
    d: &Mat6,
    v0: &Covariance,
    dt: f64,
    t_end: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "step must be positive",
        });
    }
    if dt > max_step(a) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "step exceeds the 0.1/max|A| stability bound",
        });
    }
    let split = time_reversal_split(a);
    let steps = (t_end / dt).ceil() as usize;
    let mut points = Vec::with_capacity(steps + 1);
    let mut v = *v0.matrix();
    points.push(budget_point(0.0, v, &split, a, d)?);
    for step in 1..=steps {
        v = rk4_step(a, d, &v, dt);
        points.push(budget_point(step as f64 * dt, v, &split, a, d)?);
    }
    Ok(points)
}

/// Relaxes `V̇ = A V + V Aᵀ + D` from the vacuum `I/2` until
/// `‖V̇‖_max < tol·‖D‖_max`, then returns the settled covariance.
///
/// The threshold is additionally tightened to `10·tol·|α|` (α the spectral
/// abscissa) so that the distance to the fixed point, ≈ ‖V̇‖/(2|α|), ends up
/// below `10·tol` even for slowly relaxing systems.
pub fn steady_state_by_integration(a: &Mat6, d: &Mat6, tol: f64) -> Result<Covariance> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "tolerance must be positive",
        });
    }
    let alpha = spectral_abscissa(a)?;
    if alpha > STABILITY_MARGIN {
        return Err(Error::Unstable {
            spectral_abscissa: alpha,
        });
    }
    if alpha >= -STABILITY_MARGIN {
        return Err(Error::MarginallyStable {
            spectral_abscissa: alpha,
        });
    }

    let dt = 0.5 * max_step(a);
    // Keep the threshold nonzero so a zero diffusion still terminates.
    let threshold = tol * d.abs().max().min(10.0 * alpha.abs()).max(1e-300);
    const MAX_STEPS: usize = 50_000_000;

    let mut v = Mat6::identity() * 0.5;
    for step in 0..MAX_STEPS {
        let v_dot = covariance_rhs(a, d, &v);
        if v_dot.abs().max() < threshold {
            return Covariance::new(v);
        }
        v = rk4_step(a, d, &v, dt);
        // Cheap divergence guard; a stable A cannot grow the covariance
        // without bound.
        if step % 4096 == 0 && !v.iter().all(|x| x.is_finite()) {
            return Err(Error::IntegrationDiverged {
                time: step as f64 * dt,
            });
        }
    }
    Err(Error::NoConvergence {
        steps: MAX_STEPS,
        spectral_abscissa: alpha,
    })
}
