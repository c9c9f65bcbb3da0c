//! Full steady-state evaluation of one parameter point.

use magnomech::model::SystemParams;
use magnomech::smallmat::{lyapunov_solve, spectral_abscissa, STABILITY_MARGIN};
use magnomech::thermo::{
    entropy_production_stationary, entropy_production_trace, mutual_information,
    time_reversal_split, weak_coupling_mutual_info, PiScope, SteadyStateReport,
};
use magnomech::Result;

/// Runs stability analysis, the Lyapunov solve and every thermodynamic
/// measure. Unstable (or marginal) points come back with `stable = false`
/// and NaN measures rather than an error.
pub fn evaluate_point(params: &SystemParams) -> Result<SteadyStateReport> {
    let pair = params.matrices()?;
    let alpha = spectral_abscissa(&pair.drift)?;
    if alpha >= -STABILITY_MARGIN {
        return Ok(SteadyStateReport::unstable(
            alpha,
            alpha <= STABILITY_MARGIN,
        ));
    }

    let v = lyapunov_solve(&pair.drift, &pair.diffusion)?;
    let pi_total = entropy_production_stationary(&v, params, PiScope::ThreeMode);
    let pi_mb = entropy_production_stationary(&v, params, PiScope::MagnonPhonon);
    let split = time_reversal_split(&pair.drift);
    let pi_trace = entropy_production_trace(&v, &split, &pair.diffusion)?;
    let mutual_info = mutual_information(&v)?;
    let nu = v.symplectic_eigenvalues()?;

    Ok(SteadyStateReport {
        stable: true,
        marginal: false,
        spectral_abscissa: alpha,
        pi_total,
        pi_mb,
        pi_trace,
        // Stationary balance: dS/dt = 0, so the flux equals the production.
        phi: pi_total,
        mutual_info,
        weak_coupling_ratio: weak_coupling_mutual_info(pi_mb, params.gamma_m + params.gamma_b),
        nu,
    })
}

/// Human-readable rendering for the `point` subcommand.
pub fn render_report(params: &SystemParams, report: &SteadyStateReport) -> String {
    let verdict = if report.stable {
        "stable"
    } else if report.marginal {
        "marginal"
    } else {
        "unstable"
    };
    let mut out = String::new();
    out.push_str(&format!(
        "point: delta_a={} delta_m={} omega_b={} g_am={} g_mb_eff={}\n",
        params.delta_a, params.delta_m, params.omega_b, params.g_am, params.g_mb_eff
    ));
    out.push_str(&format!(
        "       gamma_a={} gamma_m={} gamma_b={} n_a={} n_m={} n_b={} convention={:?}\n",
        params.gamma_a,
        params.gamma_m,
        params.gamma_b,
        params.n_a,
        params.n_m,
        params.n_b,
        params.drift_convention
    ));
    out.push_str(&format!(
        "stability:            {verdict} (spectral abscissa {:.6e})\n",
        report.spectral_abscissa
    ));
    out.push_str(&format!("pi_total:             {:.10e}\n", report.pi_total));
    out.push_str(&format!("pi_magnon_phonon:     {:.10e}\n", report.pi_mb));
    out.push_str(&format!("pi_trace_formula:     {:.10e}\n", report.pi_trace));
    out.push_str(&format!("entropy_flux:         {:.10e}\n", report.phi));
    out.push_str(&format!(
        "mutual_information:   {:.10e}\n",
        report.mutual_info
    ));
    out.push_str(&format!(
        "weak_coupling_ratio:  {:.10e}\n",
        report.weak_coupling_ratio
    ));
    out.push_str(&format!(
        "symplectic spectrum:  {:.10e} {:.10e} {:.10e}\n",
        report.nu[0], report.nu[1], report.nu[2]
    ));
    out
}
