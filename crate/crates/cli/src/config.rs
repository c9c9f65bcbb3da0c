//! Flat `key = value` configuration files describing either a single
//! parameter point or a sweep.
//!
//! Two unit modes are supported. In `dimensionless` mode (the default) every
//! rate, coupling and detuning is already in units of the phonon frequency.
//! In `si` mode those keys are plain frequencies (any consistent unit, e.g.
//! Hz) and are divided by the supplied `omega_b` on input, which becomes the
//! 1.0 anchor internally. Occupations are dimensionless in both modes.

use std::collections::HashMap;
use std::path::PathBuf;

use magnomech::model::{DriftConvention, SystemParams};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value'")]
    MissingSeparator { line: usize },

    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}, column {column}: malformed number '{token}'")]
    MalformedNumber {
        line: usize,
        column: usize,
        token: String,
    },

    #[error("line {line}, column {column}: {message}")]
    BadValue {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing required key '{key}'")]
    MissingKey { key: &'static str },

    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// A parameter of [`SystemParams`] that a sweep axis or curve may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    DeltaA,
    DeltaM,
    OmegaB,
    GAm,
    GMbEff,
    GammaA,
    GammaM,
    GammaB,
    NA,
    NM,
    NB,
}

impl SweepParam {
    pub const ALL: [SweepParam; 11] = [
        SweepParam::DeltaA,
        SweepParam::DeltaM,
        SweepParam::OmegaB,
        SweepParam::GAm,
        SweepParam::GMbEff,
        SweepParam::GammaA,
        SweepParam::GammaM,
        SweepParam::GammaB,
        SweepParam::NA,
        SweepParam::NM,
        SweepParam::NB,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SweepParam::DeltaA => "delta_a",
            SweepParam::DeltaM => "delta_m",
            SweepParam::OmegaB => "omega_b",
            SweepParam::GAm => "g_am",
            SweepParam::GMbEff => "g_mb_eff",
            SweepParam::GammaA => "gamma_a",
            SweepParam::GammaM => "gamma_m",
            SweepParam::GammaB => "gamma_b",
            SweepParam::NA => "n_a",
            SweepParam::NM => "n_m",
            SweepParam::NB => "n_b",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.key() == key)
    }

    /// Whether the parameter carries frequency units (and is rescaled in SI
    /// mode).
    pub fn is_rate(self) -> bool {
        !matches!(self, SweepParam::NA | SweepParam::NM | SweepParam::NB)
    }

    pub fn apply(self, params: &mut SystemParams, value: f64) {
        match self {
            SweepParam::DeltaA => params.delta_a = value,
            SweepParam::DeltaM => params.delta_m = value,
            SweepParam::OmegaB => params.omega_b = value,
            SweepParam::GAm => params.g_am = value,
            SweepParam::GMbEff => params.g_mb_eff = value,
            SweepParam::GammaA => params.gamma_a = value,
            SweepParam::GammaM => params.gamma_m = value,
            SweepParam::GammaB => params.gamma_b = value,
            SweepParam::NA => params.n_a = value,
            SweepParam::NM => params.n_m = value,
            SweepParam::NB => params.n_b = value,
        }
    }
}

/// One linearly spaced sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    /// The `index`-th grid value; endpoints land exactly on start/stop.
    pub fn value(&self, index: usize) -> f64 {
        if index + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * index as f64 / (self.count - 1) as f64
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }
}

/// The values of the per-curve parameter (one curve per value).
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// A full sweep: base point, one or two axes, optional curve family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    pub curve: Option<CurveSpec>,
    pub output: Option<PathBuf>,
}

/// Result of parsing a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedConfig {
    Point(SystemParams),
    Sweep(SweepSpec),
}

const POINT_KEYS: [&str; 13] = [
    "delta_a",
    "delta_m",
    "omega_b",
    "g_am",
    "g_mb_eff",
    "gamma_a",
    "gamma_m",
    "gamma_b",
    "n_a",
    "n_m",
    "n_b",
    "drift_convention",
    "units",
];

const SWEEP_KEYS: [&str; 11] = [
    "sweep.axis1.param",
    "sweep.axis1.start",
    "sweep.axis1.stop",
    "sweep.axis1.count",
    "sweep.axis2.param",
    "sweep.axis2.start",
    "sweep.axis2.stop",
    "sweep.axis2.count",
    "sweep.curve.param",
    "sweep.curve.values",
    "output",
];

const REQUIRED_POINT_KEYS: [&str; 7] = [
    "delta_a", "delta_m", "g_am", "g_mb_eff", "gamma_a", "gamma_m", "gamma_b",
];

#[derive(Debug, Clone)]
struct RawEntry {
    value: String,
    line: usize,
    column: usize,
}

fn parse_raw(text: &str) -> Result<HashMap<String, RawEntry>, ConfigError> {
    let mut entries = HashMap::new();
    for (index, raw_line) in text.lines().enumerate() {
        let line = index + 1;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let eq = content
            .find('=')
            .ok_or(ConfigError::MissingSeparator { line })?;
        let key = content[..eq].trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::MissingSeparator { line });
        }
        let value_part = &content[eq + 1..];
        let leading = value_part.len() - value_part.trim_start().len();
        let column = eq + 1 + leading + 1; // 1-indexed column of the value
        let value = value_part.trim().to_string();
        if !POINT_KEYS.contains(&key.as_str()) && !SWEEP_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line, key });
        }
        if entries
            .insert(
                key.clone(),
                RawEntry {
                    value,
                    line,
                    column,
                },
            )
            .is_some()
        {
            return Err(ConfigError::DuplicateKey { line, key });
        }
    }
    Ok(entries)
}

fn parse_number(entry: &RawEntry) -> Result<f64, ConfigError> {
    entry
        .value
        .parse::<f64>()
        .map_err(|_| ConfigError::MalformedNumber {
            line: entry.line,
            column: entry.column,
            token: entry.value.clone(),
        })
}

fn parse_count(entry: &RawEntry) -> Result<usize, ConfigError> {
    entry
        .value
        .parse::<usize>()
        .map_err(|_| ConfigError::MalformedNumber {
            line: entry.line,
            column: entry.column,
            token: entry.value.clone(),
        })
}

fn parse_number_list(entry: &RawEntry) -> Result<Vec<f64>, ConfigError> {
    let mut values = Vec::new();
    let mut offset = 0usize;
    for piece in entry.value.split(',') {
        let trimmed = piece.trim();
        let column = entry.column + offset + (piece.len() - piece.trim_start().len());
        if trimmed.is_empty() {
            return Err(ConfigError::BadValue {
                line: entry.line,
                column,
                message: "empty entry in value list".into(),
            });
        }
        values.push(
            trimmed
                .parse::<f64>()
                .map_err(|_| ConfigError::MalformedNumber {
                    line: entry.line,
                    column,
                    token: trimmed.to_string(),
                })?,
        );
        offset += piece.len() + 1;
    }
    Ok(values)
}

fn parse_sweep_param(entry: &RawEntry) -> Result<SweepParam, ConfigError> {
    SweepParam::from_key(&entry.value).ok_or_else(|| ConfigError::BadValue {
        line: entry.line,
        column: entry.column,
        message: format!(
            "unknown sweep parameter '{}'; expected one of: {}",
            entry.value,
            SweepParam::ALL.map(|p| p.key()).join(", ")
        ),
    })
}

struct Builder {
    entries: HashMap<String, RawEntry>,
    si_units: bool,
    /// In SI mode every rate key is divided by this anchor.
    omega_b_anchor: f64,
}

impl Builder {
    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    fn rate_scale(&self) -> f64 {
        if self.si_units {
            self.omega_b_anchor
        } else {
            1.0
        }
    }

    fn number(&self, key: &'static str, default: Option<f64>) -> Result<f64, ConfigError> {
        match self.entries.get(key) {
            Some(entry) => parse_number(entry),
            None => default.ok_or(ConfigError::MissingKey { key }),
        }
    }

    fn rate(&self, key: &'static str, default: Option<f64>) -> Result<f64, ConfigError> {
        Ok(self.number(key, default)? / self.rate_scale())
    }
}

/// Parses a configuration file into a point or a sweep.
pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let entries = parse_raw(text)?;

    let si_units = match entries.get("units") {
        None => false,
        Some(entry) => match entry.value.as_str() {
            "dimensionless" => false,
            "si" => true,
            other => {
                return Err(ConfigError::BadValue {
                    line: entry.line,
                    column: entry.column,
                    message: format!("unknown units '{other}'; expected dimensionless or si"),
                })
            }
        },
    };

    let omega_b_anchor = if si_units {
        let entry = entries
            .get("omega_b")
            .ok_or(ConfigError::MissingKey { key: "omega_b" })?;
        let value = parse_number(entry)?;
        if value <= 0.0 {
            return Err(ConfigError::BadValue {
                line: entry.line,
                column: entry.column,
                message: "omega_b anchor must be strictly positive".into(),
            });
        }
        value
    } else {
        1.0
    };

    let builder = Builder {
        entries,
        si_units,
        omega_b_anchor,
    };

    let drift_convention = match builder.entries.get("drift_convention") {
        None => DriftConvention::Consistent,
        Some(entry) => match entry.value.as_str() {
            "consistent" => DriftConvention::Consistent,
            "time_even_coupling" => DriftConvention::TimeEvenCoupling,
            other => {
                return Err(ConfigError::BadValue {
                    line: entry.line,
                    column: entry.column,
                    message: format!(
                        "unknown drift_convention '{other}'; expected consistent or \
                         time_even_coupling"
                    ),
                })
            }
        },
    };

    for key in REQUIRED_POINT_KEYS {
        if !builder.entries.contains_key(key) {
            return Err(ConfigError::MissingKey { key });
        }
    }

    let params = SystemParams {
        delta_a: builder.rate("delta_a", None)?,
        delta_m: builder.rate("delta_m", None)?,
        omega_b: builder.rate("omega_b", Some(1.0))?,
        g_am: builder.rate("g_am", None)?,
        g_mb_eff: builder.rate("g_mb_eff", None)?,
        gamma_a: builder.rate("gamma_a", None)?,
        gamma_m: builder.rate("gamma_m", None)?,
        gamma_b: builder.rate("gamma_b", None)?,
        n_a: builder.number("n_a", Some(0.0))?,
        n_m: builder.number("n_m", Some(0.0))?,
        n_b: builder.number("n_b", Some(0.0))?,
        drift_convention,
    };

    if let Err(magnomech::Error::InvalidParameter { name, reason, .. }) = params.validate() {
        return Err(ConfigError::Invalid {
            line: builder.line_of(name),
            message: format!("{name} {reason}"),
        });
    }

    let has_sweep = builder.entries.keys().any(|k| k.starts_with("sweep."));
    if !has_sweep {
        if let Some(entry) = builder.entries.get("output") {
            return Err(ConfigError::Invalid {
                line: entry.line,
                message: "'output' requires a sweep section".into(),
            });
        }
        return Ok(ParsedConfig::Point(params));
    }

    let axis1 =
        parse_axis(&builder, "sweep.axis1", true)?.expect("axis1 presence enforced by parse_axis");
    let axis2 = parse_axis(&builder, "sweep.axis2", false)?;

    let curve = match (
        builder.entries.get("sweep.curve.param"),
        builder.entries.get("sweep.curve.values"),
    ) {
        (None, None) => None,
        (Some(param_entry), Some(values_entry)) => {
            let param = parse_sweep_param(param_entry)?;
            let mut values = parse_number_list(values_entry)?;
            if values.is_empty() {
                return Err(ConfigError::Invalid {
                    line: values_entry.line,
                    message: "curve needs at least one value".into(),
                });
            }
            if param.is_rate() {
                for v in &mut values {
                    *v /= builder.rate_scale();
                }
            }
            check_rate_positivity(param, values.iter().copied(), values_entry.line)?;
            Some(CurveSpec { param, values })
        }
        (Some(entry), None) | (None, Some(entry)) => {
            return Err(ConfigError::Invalid {
                line: entry.line,
                message: "curve requires both sweep.curve.param and sweep.curve.values".into(),
            })
        }
    };

    let output = builder
        .entries
        .get("output")
        .map(|entry| PathBuf::from(&entry.value));

    Ok(ParsedConfig::Sweep(SweepSpec {
        base: params,
        axis1,
        axis2,
        curve,
        output,
    }))
}

fn check_rate_positivity(
    param: SweepParam,
    values: impl IntoIterator<Item = f64>,
    line: usize,
) -> Result<(), ConfigError> {
    let must_be_positive = matches!(
        param,
        SweepParam::GammaA | SweepParam::GammaM | SweepParam::GammaB | SweepParam::OmegaB
    );
    let must_be_nonnegative = matches!(
        param,
        SweepParam::GAm | SweepParam::GMbEff | SweepParam::NA | SweepParam::NM | SweepParam::NB
    );
    for v in values {
        if must_be_positive && v <= 0.0 {
            return Err(ConfigError::Invalid {
                line,
                message: format!("{} must stay strictly positive over the sweep", param.key()),
            });
        }
        if must_be_nonnegative && v < 0.0 {
            return Err(ConfigError::Invalid {
                line,
                message: format!("{} must stay non-negative over the sweep", param.key()),
            });
        }
    }
    Ok(())
}

fn parse_axis(
    builder: &Builder,
    prefix: &str,
    required: bool,
) -> Result<Option<SweepAxis>, ConfigError> {
    let key = |suffix: &str| format!("{prefix}.{suffix}");
    let get = |suffix: &str| builder.entries.get(&key(suffix));
    let present: Vec<&str> = ["param", "start", "stop", "count"]
        .into_iter()
        .filter(|s| get(s).is_some())
        .collect();
    if present.is_empty() {
        if required {
            return Err(ConfigError::MissingKey {
                key: "sweep.axis1.param",
            });
        }
        return Ok(None);
    }
    if present.len() < 4 {
        let line = get(present[0]).map(|e| e.line).unwrap_or(0);
        return Err(ConfigError::Invalid {
            line,
            message: format!("{prefix} needs param, start, stop and count"),
        });
    }

    let param_entry = get("param").expect("present");
    let param = parse_sweep_param(param_entry)?;
    if builder.si_units && param == SweepParam::OmegaB {
        return Err(ConfigError::Invalid {
            line: param_entry.line,
            message: "cannot sweep omega_b in si mode: it is the unit anchor".into(),
        });
    }
    let scale = if param.is_rate() {
        builder.rate_scale()
    } else {
        1.0
    };
    let start_entry = get("start").expect("present");
    let start = parse_number(start_entry)? / scale;
    let stop = parse_number(get("stop").expect("present"))? / scale;
    let count_entry = get("count").expect("present");
    let count = parse_count(count_entry)?;

    if count < 2 {
        return Err(ConfigError::Invalid {
            line: count_entry.line,
            message: "axis count must be at least 2".into(),
        });
    }
    // NaN-safe: "nan" parses as a float, so the negated form matters here.
    if start.is_nan() || stop.is_nan() || start >= stop {
        return Err(ConfigError::Invalid {
            line: start_entry.line,
            message: "axis start must be strictly below stop".into(),
        });
    }
    let axis = SweepAxis {
        param,
        start,
        stop,
        count,
    };
    check_rate_positivity(param, [start, stop], start_entry.line)?;
    Ok(Some(axis))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
delta_a = 1.0
delta_m = 1.0
g_am = 1.0
g_mb_eff = 0.1
gamma_a = 0.1
gamma_m = 0.5
gamma_b = 0.01
";

    #[test]
    fn minimal_point_config_echoes_inputs() {
        let parsed = parse_config(MINIMAL).unwrap();
        let ParsedConfig::Point(p) = parsed else {
            panic!("expected point config");
        };
        assert_eq!(p.delta_a, 1.0);
        assert_eq!(p.g_mb_eff, 0.1);
        assert_eq!(p.omega_b, 1.0);
        assert_eq!(p.n_b, 0.0);
        assert_eq!(p.drift_convention, DriftConvention::Consistent);
    }

    #[test]
    fn si_mode_rescales_rates() {
        let text = "\
units = si
omega_b = 10.0e6
delta_a = 10.0e6
delta_m = 10.0e6
g_am = 1.0e6
g_mb_eff = 1.0e6
gamma_a = 3.0e6
gamma_m = 1.0e6
gamma_b = 100.0e3
n_b = 200
";
        let ParsedConfig::Point(p) = parse_config(text).unwrap() else {
            panic!("expected point config");
        };
        assert!((p.gamma_a - 0.3).abs() < 1e-15);
        assert!((p.gamma_m - 0.1).abs() < 1e-15);
        assert!((p.gamma_b - 0.01).abs() < 1e-15);
        assert_eq!(p.omega_b, 1.0);
        assert_eq!(p.n_b, 200.0);
    }

    #[test]
    fn zero_damping_is_rejected_with_line() {
        let text = MINIMAL.replace("gamma_b = 0.01", "gamma_b = 0");
        match parse_config(&text) {
            Err(ConfigError::Invalid { line, message }) => {
                assert_eq!(line, 7);
                assert!(message.contains("gamma_b"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = format!("{MINIMAL}kappa = 1.0\n");
        match parse_config(&text) {
            Err(ConfigError::UnknownKey { line, key }) => {
                assert_eq!(line, 8);
                assert_eq!(key, "kappa");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_value_is_rejected() {
        // "nan" parses as a float; the finiteness validation must catch it.
        let text = MINIMAL.replace("delta_a = 1.0", "delta_a = nan");
        match parse_config(&text) {
            Err(ConfigError::Invalid { line, message }) => {
                assert_eq!(line, 1);
                assert!(message.contains("delta_a"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_number_reports_position() {
        let text = MINIMAL.replace("g_am = 1.0", "g_am = fast");
        match parse_config(&text) {
            Err(ConfigError::MalformedNumber {
                line,
                column,
                token,
            }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 8);
                assert_eq!(token, "fast");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_required_key_is_reported() {
        let text = MINIMAL.replace("gamma_m = 0.5\n", "");
        assert_eq!(
            parse_config(&text),
            Err(ConfigError::MissingKey { key: "gamma_m" })
        );
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = format!("# header\n\n{MINIMAL}n_b = 10 # thermal phonons\n");
        let ParsedConfig::Point(p) = parse_config(&text).unwrap() else {
            panic!("expected point config");
        };
        assert_eq!(p.n_b, 10.0);
    }

    #[test]
    fn sweep_config_round_trip() {
        let text = format!(
            "{MINIMAL}\
n_b = 10
sweep.axis1.param = delta_m
sweep.axis1.start = -5
sweep.axis1.stop = 5
sweep.axis1.count = 11
sweep.curve.param = g_am
sweep.curve.values = 0, 1, 2
output = out.csv
"
        );
        let ParsedConfig::Sweep(spec) = parse_config(&text).unwrap() else {
            panic!("expected sweep config");
        };
        assert_eq!(spec.axis1.param, SweepParam::DeltaM);
        assert_eq!(spec.axis1.count, 11);
        assert_eq!(spec.axis1.value(0), -5.0);
        assert_eq!(spec.axis1.value(10), 5.0);
        assert!((spec.axis1.value(5) - 0.0).abs() < 1e-15);
        let curve = spec.curve.unwrap();
        assert_eq!(curve.param, SweepParam::GAm);
        assert_eq!(curve.values, vec![0.0, 1.0, 2.0]);
        assert_eq!(spec.output.unwrap(), PathBuf::from("out.csv"));
    }

    #[test]
    fn sweep_validation_failures() {
        let base = format!(
            "{MINIMAL}\
sweep.axis1.param = delta_m
sweep.axis1.start = -5
sweep.axis1.stop = 5
sweep.axis1.count = 11
"
        );
        let one_point = base.replace("count = 11", "count = 1");
        assert!(matches!(
            parse_config(&one_point),
            Err(ConfigError::Invalid { .. })
        ));
        let reversed = base
            .replace("start = -5", "start = 5")
            .replace("stop = 5", "stop = -5");
        assert!(matches!(
            parse_config(&reversed),
            Err(ConfigError::Invalid { .. })
        ));
        let bad_param = base.replace("param = delta_m", "param = q_factor");
        assert!(matches!(
            parse_config(&bad_param),
            Err(ConfigError::BadValue { .. })
        ));
        let negative_rate = base.replace("param = delta_m", "param = gamma_a");
        assert!(matches!(
            parse_config(&negative_rate),
            Err(ConfigError::Invalid { .. })
        ));
    }

    #[test]
    fn output_without_sweep_is_rejected() {
        let text = format!("{MINIMAL}output = out.csv\n");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { .. })
        ));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let text = format!("{MINIMAL}delta_a = 2.0\n");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::DuplicateKey { .. })
        ));
    }
}
