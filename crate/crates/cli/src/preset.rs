//! Bundled sweep presets covering the standard working regimes of the
//! three-mode model.
//!
//! All presets share `𝒢_mb = 0.1 Ω_b`, `γ_b = 0.01 Ω_b`, `γ_m = 0.5 Ω_b`,
//! zero photon/magnon occupation and the consistent drift convention. The
//! cavity detuning is not fixed by the regime definitions; the default is
//! `Δ_a = Ω_b` and stays an explicit, overridable choice.
//!
//! - `fig2a`..`fig2d`: production rate vs magnon detuning, curves over the
//!   magnon–photon coupling, at (γ_a, 𝒩_b) = (0.1, 10), (0.1, 100), (1, 10),
//!   (1, 100).
//! - `fig3a`: production rate vs coupling, curves over the cavity loss.
//! - `fig3b`: production rate vs cavity loss, curves over the coupling.
//! - `fig4a`..`fig4c`: production rate and mutual information vs magnon
//!   detuning at fixed coupling 0, 1, 2 (γ_a = Ω_b, 𝒩_b = 10).

use magnomech::model::SystemParams;

use crate::config::{ConfigError, CurveSpec, SweepAxis, SweepParam, SweepSpec};

pub const PRESET_NAMES: [&str; 9] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c",
];

/// Default cavity detuning of every preset, in units of the phonon
/// frequency.
pub const DEFAULT_DELTA_A: f64 = 1.0;

fn preset_base() -> SystemParams {
    SystemParams {
        delta_a: DEFAULT_DELTA_A,
        delta_m: 1.0,
        g_am: 1.0,
        ..SystemParams::default()
    }
}

fn delta_m_axis() -> SweepAxis {
    SweepAxis {
        param: SweepParam::DeltaM,
        start: -5.0,
        stop: 5.0,
        count: 1001,
    }
}

/// Builds the named preset sweep.
pub fn preset(name: &str) -> Result<SweepSpec, ConfigError> {
    let base = preset_base();
    let spec = |base, axis1, curve| SweepSpec {
        base,
        axis1,
        axis2: None,
        curve: Some(curve),
        output: None,
    };
    let g_am_curves = CurveSpec {
        param: SweepParam::GAm,
        values: vec![0.0, 1.0, 2.0],
    };
    let fig4 = |g_am: f64| {
        spec(
            SystemParams {
                gamma_a: 1.0,
                n_b: 10.0,
                g_am,
                ..base
            },
            delta_m_axis(),
            CurveSpec {
                param: SweepParam::GAm,
                values: vec![g_am],
            },
        )
    };

    match name {
        "fig2a" => Ok(spec(
            SystemParams {
                gamma_a: 0.1,
                n_b: 10.0,
                ..base
            },
            delta_m_axis(),
            g_am_curves,
        )),
        "fig2b" => Ok(spec(
            SystemParams {
                gamma_a: 0.1,
                n_b: 100.0,
                ..base
            },
            delta_m_axis(),
            g_am_curves,
        )),
        "fig2c" => Ok(spec(
            SystemParams {
                gamma_a: 1.0,
                n_b: 10.0,
                ..base
            },
            delta_m_axis(),
            g_am_curves,
        )),
        "fig2d" => Ok(spec(
            SystemParams {
                gamma_a: 1.0,
                n_b: 100.0,
                ..base
            },
            delta_m_axis(),
            g_am_curves,
        )),
        "fig3a" => Ok(spec(
            SystemParams {
                n_b: 100.0,
                delta_m: 1.0,
                ..base
            },
            SweepAxis {
                param: SweepParam::GAm,
                start: 0.0,
                stop: 5.0,
                count: 1001,
            },
            CurveSpec {
                param: SweepParam::GammaA,
                values: vec![0.1, 1.0, 2.0],
            },
        )),
        "fig3b" => Ok(spec(
            SystemParams {
                n_b: 100.0,
                delta_m: 1.0,
                ..base
            },
            SweepAxis {
                param: SweepParam::GammaA,
                start: 0.05,
                stop: 5.0,
                count: 1001,
            },
            CurveSpec {
                param: SweepParam::GAm,
                values: vec![0.1, 1.0, 2.0],
            },
        )),
        "fig4a" => Ok(fig4(0.0)),
        "fig4b" => Ok(fig4(1.0)),
        "fig4c" => Ok(fig4(2.0)),
        other => Err(ConfigError::Invalid {
            line: 0,
            message: format!(
                "unknown preset '{other}'; valid names: {}",
                PRESET_NAMES.join(", ")
            ),
        }),
    }
}
