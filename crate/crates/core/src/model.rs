//! System parameters and construction of the drift and diffusion matrices.
//!
//! The model is a microwave cavity mode coupled to the Kittel magnon mode of
//! a YIG sphere by magnetic dipole interaction (rate `g_am`), with the magnon
//! additionally coupled to the sphere's vibrational mode through
//! magnetostriction. A strong drive on the magnon enhances the bare
//! magnomechanical coupling `g_mb` to the effective `g_mb_eff = g_mb |m_s|`,
//! where `m_s` is the coherent magnon steady-state amplitude.
//!
//! Internally everything is dimensionless, in units of the phonon frequency;
//! SI inputs (rad/s, kelvin, tesla, meters) are converted at the boundary.

use nalgebra::matrix;
use num_complex::Complex64;

use crate::{Error, Mat6, Result};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380649e-23;
/// Gyromagnetic ratio of YIG, `2π · 28 GHz/T` (rad/s per tesla).
pub const GYROMAGNETIC_RATIO: f64 = 2.0 * std::f64::consts::PI * 28.0e9;
/// Spin density of YIG [m⁻³].
pub const YIG_SPIN_DENSITY: f64 = 4.22e27;

/// Placement of the magnon–phonon coupling and damping in the drift matrix.
///
/// `Consistent` is derived from the quantum Langevin equations with a real
/// coupling phase: damping `-γ_b` acts on both phonon quadratures and the
/// coupling sits on the momentum rows, so the time-reversal split of the
/// drift has a purely diagonal irreversible part. `TimeEvenCoupling` keeps
/// the coupling entries at time-even (position-row/column) slots and has no
/// damping on the phonon position row; it is retained for comparison only,
/// since a decoupled mode then fails to relax to the thermal variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftConvention {
    #[default]
    Consistent,
    TimeEvenCoupling,
}

/// Dimensionless parameters of one model instance, in units of the phonon
/// frequency `omega_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Cavity detuning `Δ_a = ω_a − ω_d`.
    pub delta_a: f64,
    /// Magnon detuning `Δ_m = ω_m − ω_d` (effective, if the magnetostrictive
    /// shift is included upstream).
    pub delta_m: f64,
    /// Phonon frequency; the normalization anchor, 1.0 in dimensionless mode.
    pub omega_b: f64,
    /// Magnon–photon coupling `g_am ≥ 0`.
    pub g_am: f64,
    /// Effective (drive-enhanced) magnon–phonon coupling, taken directly as
    /// the drift-matrix entry.
    pub g_mb_eff: f64,
    /// Photon energy decay rate `γ_a > 0`.
    pub gamma_a: f64,
    /// Magnon energy decay rate `γ_m > 0`.
    pub gamma_m: f64,
    /// Phonon energy decay rate `γ_b > 0`.
    pub gamma_b: f64,
    /// Mean thermal photon occupation `𝒩_a ≥ 0`.
    pub n_a: f64,
    /// Mean thermal magnon occupation `𝒩_m ≥ 0`.
    pub n_m: f64,
    /// Mean thermal phonon occupation `𝒩_b ≥ 0`.
    pub n_b: f64,
    pub drift_convention: DriftConvention,
}

impl Default for SystemParams {
    /// Working point shared by the bundled sweep presets: resolved-sideband
    /// regime with a broad magnon line and a weakly damped phonon.
    fn default() -> Self {
        SystemParams {
            delta_a: 1.0,
            delta_m: 1.0,
            omega_b: 1.0,
            g_am: 1.0,
            g_mb_eff: 0.1,
            gamma_a: 0.1,
            gamma_m: 0.5,
            gamma_b: 0.01,
            n_a: 0.0,
            n_m: 0.0,
            n_b: 10.0,
            drift_convention: DriftConvention::Consistent,
        }
    }
}

impl SystemParams {
    /// Checks positivity of rates, non-negativity of occupations and
    /// couplings, and that every field is finite.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("delta_a", self.delta_a),
            ("delta_m", self.delta_m),
            ("omega_b", self.omega_b),
            ("g_am", self.g_am),
            ("g_mb_eff", self.g_mb_eff),
            ("gamma_a", self.gamma_a),
            ("gamma_m", self.gamma_m),
            ("gamma_b", self.gamma_b),
            ("n_a", self.n_a),
            ("n_m", self.n_m),
            ("n_b", self.n_b),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        for (name, value) in [
            ("gamma_a", self.gamma_a),
            ("gamma_m", self.gamma_m),
            ("gamma_b", self.gamma_b),
        ] {
            if value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "dissipation rate must be strictly positive",
                });
            }
        }
        if self.omega_b <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega_b",
                value: self.omega_b,
                reason: "phonon frequency must be strictly positive",
            });
        }
        for (name, value) in [
            ("g_am", self.g_am),
            ("g_mb_eff", self.g_mb_eff),
            ("n_a", self.n_a),
            ("n_m", self.n_m),
            ("n_b", self.n_b),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    /// Builds the validated drift/diffusion pair for this parameter set.
    pub fn matrices(&self) -> Result<MatrixPair> {
        self.validate()?;
        Ok(MatrixPair {
            drift: build_drift(self),
            diffusion: build_diffusion(self),
            convention: self.drift_convention,
        })
    }
}

/// Laboratory-frame inputs, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroscopicParams {
    /// Cavity resonance (rad/s).
    pub omega_a: f64,
    /// Kittel-mode magnon resonance (rad/s).
    pub omega_m: f64,
    /// Drive frequency (rad/s).
    pub omega_d: f64,
    /// Bare magnomechanical coupling (rad/s).
    pub g_mb_bare: f64,
    /// Drive coupling (Rabi rate) `Ω_d` (rad/s).
    pub drive_rabi: f64,
    /// Environment temperature (K).
    pub temperature: f64,
    /// YIG sphere diameter (m).
    pub sphere_diameter: f64,
    /// Drive magnetic-field amplitude (T).
    pub field_amplitude: f64,
}

impl MicroscopicParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_a.is_finite() && self.omega_a > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_a",
                value: self.omega_a,
                reason: "cavity frequency must be strictly positive",
            });
        }
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega_m",
                value: self.omega_m,
                reason: "magnon frequency must be strictly positive",
            });
        }
        if self.temperature < 0.0 {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: self.temperature,
                reason: "must be non-negative",
            });
        }
        if self.sphere_diameter <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "sphere_diameter",
                value: self.sphere_diameter,
                reason: "must be strictly positive",
            });
        }
        if self.field_amplitude < 0.0 {
            return Err(Error::InvalidParameter {
                name: "field_amplitude",
                value: self.field_amplitude,
                reason: "must be non-negative",
            });
        }
        Ok(())
    }
}

/// Drift and diffusion matrices of the quadrature fluctuations, over the
/// ordering `(x_a, y_a, x_m, y_m, x_b, y_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixPair {
    pub drift: Mat6,
    /// Diagonal noise matrix from the local-bath correlators.
    pub diffusion: Mat6,
    pub convention: DriftConvention,
}

/// Bose–Einstein occupation `1/(exp(ħω/k_B T) − 1)`; 0 at `T = 0`.
pub fn thermal_occupation(frequency: f64, temperature: f64) -> Result<f64> {
    if !(frequency.is_finite() && frequency > 0.0) {
        return Err(Error::InvalidParameter {
            name: "frequency",
            value: frequency,
            reason: "must be strictly positive",
        });
    }
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "temperature",
            value: temperature,
            reason: "must be non-negative",
        });
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * frequency / (K_B * temperature);
    Ok(x.exp_m1().recip())
}

/// Drive coupling `Ω_d = (√5/4) γ_g √(ρ V) B_0` of a uniformly magnetized
/// sphere of diameter `d`, with `V = (π/6) d³` (rad/s).
pub fn rabi_frequency(field_amplitude: f64, sphere_diameter: f64) -> Result<f64> {
    if !(field_amplitude.is_finite() && field_amplitude >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "field_amplitude",
            value: field_amplitude,
            reason: "must be non-negative",
        });
    }
    if !(sphere_diameter.is_finite() && sphere_diameter >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "sphere_diameter",
            value: sphere_diameter,
            reason: "must be non-negative",
        });
    }
    let volume = std::f64::consts::PI / 6.0 * sphere_diameter.powi(3);
    let spins = YIG_SPIN_DENSITY * volume;
    Ok(5.0_f64.sqrt() / 4.0 * GYROMAGNETIC_RATIO * spins.sqrt() * field_amplitude)
}

/// Coherent steady-state amplitudes of the driven magnon and the displaced
/// phonon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyAmplitudes {
    /// `m_s = Ω_d (iΔ_a + γ_a) / (g_am² + (iΔ_m + γ_m)(iΔ_a + γ_a))`.
    pub magnon: Complex64,
    /// `b_s = −i g_mb |m_s|² / (iΩ_b + γ_b)`.
    pub phonon: Complex64,
}

/// Solves the classical steady state of the driven mean fields.
///
/// Frequencies inside `micro` fix the detunings `Δ_a = ω_a − ω_d` and
/// `Δ_m = ω_m − ω_d`; the remaining rates are passed in the same units as
/// those detunings.
pub fn steady_state_amplitudes(
    micro: &MicroscopicParams,
    g_am: f64,
    gamma_a: f64,
    gamma_m: f64,
    gamma_b: f64,
    omega_b: f64,
) -> Result<SteadyAmplitudes> {
    micro.validate()?;
    let delta_a = micro.omega_a - micro.omega_d;
    let delta_m = micro.omega_m - micro.omega_d;
    steady_amplitudes_from_detunings(
        delta_a,
        delta_m,
        micro.drive_rabi,
        micro.g_mb_bare,
        g_am,
        gamma_a,
        gamma_m,
        gamma_b,
        omega_b,
    )
}

/// Same as [`steady_state_amplitudes`] but with the detunings given directly.
#[allow(clippy::too_many_arguments)]
pub fn steady_amplitudes_from_detunings(
    delta_a: f64,
    delta_m: f64,
    drive_rabi: f64,
    g_mb_bare: f64,
    g_am: f64,
    gamma_a: f64,
    gamma_m: f64,
    gamma_b: f64,
    omega_b: f64,
) -> Result<SteadyAmplitudes> {
    let chi_a = Complex64::new(gamma_a, delta_a);
    let chi_m = Complex64::new(gamma_m, delta_m);
    let denominator = g_am * g_am + chi_m * chi_a;
    // Relative singularity test: the two terms can cancel exactly.
    let scale = g_am * g_am + chi_m.norm() * chi_a.norm();
    if denominator.norm() <= 1e-14 * scale || scale == 0.0 {
        return Err(Error::SingularDenominator {
            delta_a,
            delta_m,
            g_am,
        });
    }
    let magnon = drive_rabi * chi_a / denominator;
    let phonon = -Complex64::i() * g_mb_bare * magnon.norm_sqr() / Complex64::new(gamma_b, omega_b);
    Ok(SteadyAmplitudes { magnon, phonon })
}

/// Drive-enhanced coupling and magnetostrictively shifted magnon detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// `g_mb_eff = g_mb |m_s|` (magnitude convention: the complex phase of
    /// `m_s` is absorbed by a quadrature rotation).
    pub g_mb_eff: f64,
    /// `Δ̃_m = Δ_m − g_mb (b_s + b_s*)`.
    pub delta_m_eff: f64,
    /// Whether `|Δ̃_m − Δ_m| < 10⁻³ |Δ_m|`, i.e. the shift is negligible and
    /// `Δ̃_m ≈ Δ_m` is justified.
    pub detuning_shift_negligible: bool,
}

/// Derives the linearized coupling and detuning from the mean-field solution.
pub fn effective_params(
    micro: &MicroscopicParams,
    amplitudes: &SteadyAmplitudes,
) -> EffectiveParams {
    let delta_m = micro.omega_m - micro.omega_d;
    let g_mb_eff = micro.g_mb_bare * amplitudes.magnon.norm();
    let shift = micro.g_mb_bare * 2.0 * amplitudes.phonon.re;
    let delta_m_eff = delta_m - shift;
    EffectiveParams {
        g_mb_eff,
        delta_m_eff,
        detuning_shift_negligible: shift.abs() < 1e-3 * delta_m.abs(),
    }
}

/// Drift matrix of the quadrature fluctuations for the selected convention.
///
/// Rows 1–2 (photon) and the `g_am` blocks are common to both conventions;
/// they differ only in the five entries `(3,5), (4,5), (5,5), (6,3), (6,4)`
/// (1-indexed) carrying the magnon–phonon coupling and the phonon damping.
pub fn build_drift(params: &SystemParams) -> Mat6 {
    let SystemParams {
        delta_a: da,
        delta_m: dm,
        omega_b: wb,
        g_am,
        g_mb_eff: g,
        gamma_a: ga,
        gamma_m: gm,
        gamma_b: gb,
        ..
    } = *params;
    match params.drift_convention {
        DriftConvention::Consistent => matrix![
            -ga,   da,   0.0,  g_am, 0.0, 0.0;
            -da,  -ga,  -g_am, 0.0,  0.0, 0.0;
             0.0,  g_am, -gm,  dm,   0.0, 0.0;
            -g_am, 0.0,  -dm, -gm,  -g,   0.0;
             0.0,  0.0,  0.0,  0.0, -gb,  wb;
             0.0,  0.0,  -g,   0.0, -wb, -gb;
        ],
        DriftConvention::TimeEvenCoupling => matrix![
            -ga,   da,   0.0,  g_am, 0.0, 0.0;
            -da,  -ga,  -g_am, 0.0,  0.0, 0.0;
             0.0,  g_am, -gm,  dm,  -g,   0.0;
            -g_am, 0.0,  -dm, -gm,   0.0, 0.0;
             0.0,  0.0,  0.0,  0.0,  0.0, wb;
             0.0,  0.0,  0.0,  g,   -wb, -gb;
        ],
    }
}

/// Diagonal diffusion matrix
/// `diag(γ_a(2𝒩_a+1), ·, γ_m(2𝒩_m+1), ·, γ_b(2𝒩_b+1), ·)` from the local
/// bath correlators.
pub fn build_diffusion(params: &SystemParams) -> Mat6 {
    let da = params.gamma_a * (2.0 * params.n_a + 1.0);
    let dm = params.gamma_m * (2.0 * params.n_m + 1.0);
    let db = params.gamma_b * (2.0 * params.n_b + 1.0);
    Mat6::from_diagonal(&nalgebra::SVector::<f64, 6>::from([da, da, dm, dm, db, db]))
}
