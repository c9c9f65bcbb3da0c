//! Grid evaluation and deterministic CSV emission.
//!
//! Grid points are independent and may be evaluated in parallel, but rows
//! are always buffered and emitted in the lexicographic order
//! (curve value, axis2 index, axis1 index), so serial and parallel runs
//! produce byte-identical tables.

use std::io::{self, Write};

use magnomech::model::SystemParams;
use magnomech::thermo::SteadyStateReport;
use rayon::prelude::*;

use crate::config::{SweepAxis, SweepSpec};
use crate::report::evaluate_point;

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub curve_value: Option<f64>,
    pub axis2_value: Option<f64>,
    pub axis1_value: f64,
    pub report: SteadyStateReport,
}

/// All rows of a sweep, in deterministic order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub curve_param: Option<&'static str>,
    pub axis2_param: Option<&'static str>,
    pub axis1_param: &'static str,
    pub rows: Vec<SweepRow>,
}

/// CSV column names, fixed across every sweep.
pub const CSV_COLUMNS: [&str; 15] = [
    "curve_param",
    "curve_value",
    "axis2_value",
    "axis1_value",
    "stable",
    "spectral_abscissa",
    "pi_total",
    "pi_mb",
    "pi_trace",
    "phi",
    "mutual_info",
    "weak_coupling_ratio",
    "nu1",
    "nu2",
    "nu3",
];

fn axis_values(axis: &SweepAxis) -> Vec<f64> {
    (0..axis.count).map(|i| axis.value(i)).collect()
}

/// One grid point before evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub curve_value: Option<f64>,
    pub axis2_value: Option<f64>,
    pub axis1_value: f64,
    pub params: SystemParams,
}

/// Enumerates the grid in the deterministic row order
/// (curve value, axis2 index, axis1 index).
pub fn grid_points(spec: &SweepSpec) -> Vec<GridPoint> {
    let curve_values: Vec<Option<f64>> = match &spec.curve {
        Some(curve) => curve.values.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let axis2_values: Vec<Option<f64>> = match &spec.axis2 {
        Some(axis) => axis_values(axis).into_iter().map(Some).collect(),
        None => vec![None],
    };
    let axis1_values = axis_values(&spec.axis1);

    let mut points =
        Vec::with_capacity(curve_values.len() * axis2_values.len() * axis1_values.len());
    for &curve_value in &curve_values {
        for &axis2_value in &axis2_values {
            for &axis1_value in &axis1_values {
                let mut params = spec.base;
                if let (Some(curve), Some(value)) = (&spec.curve, curve_value) {
                    curve.param.apply(&mut params, value);
                }
                if let (Some(axis), Some(value)) = (&spec.axis2, axis2_value) {
                    axis.param.apply(&mut params, value);
                }
                spec.axis1.param.apply(&mut params, axis1_value);
                points.push(GridPoint {
                    curve_value,
                    axis2_value,
                    axis1_value,
                    params,
                });
            }
        }
    }
    points
}

/// Evaluates every grid point of the sweep.
pub fn run_sweep(spec: &SweepSpec, parallel: bool) -> magnomech::Result<SweepTable> {
    spec.base.validate()?;
    let jobs = grid_points(spec);

    let evaluate = |point: &GridPoint| -> magnomech::Result<SweepRow> {
        Ok(SweepRow {
            curve_value: point.curve_value,
            axis2_value: point.axis2_value,
            axis1_value: point.axis1_value,
            report: evaluate_point(&point.params)?,
        })
    };

    let rows: magnomech::Result<Vec<SweepRow>> = if parallel {
        jobs.par_iter().map(evaluate).collect()
    } else {
        jobs.iter().map(evaluate).collect()
    };

    Ok(SweepTable {
        curve_param: spec.curve.as_ref().map(|c| c.param.key()),
        axis2_param: spec.axis2.as_ref().map(|a| a.param.key()),
        axis1_param: spec.axis1.param.key(),
        rows: rows?,
    })
}

/// 17 significant digits, scientific notation; non-finite values become the
/// literal token `nan`.
fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".to_string()
    }
}

fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Writes the table as CSV. The first line is a timestamp comment (the only
/// line allowed to differ between reruns); everything below it is a pure
/// function of the table.
pub fn write_csv<W: Write>(w: &mut W, table: &SweepTable, timestamp_unix: u64) -> io::Result<()> {
    writeln!(w, "# generated-unix: {timestamp_unix}")?;
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for row in &table.rows {
        let r = &row.report;
        let fields = [
            table.curve_param.unwrap_or_default().to_string(),
            format_optional(row.curve_value),
            format_optional(row.axis2_value),
            format_number(row.axis1_value),
            r.stable.to_string(),
            format_number(r.spectral_abscissa),
            format_number(r.pi_total),
            format_number(r.pi_mb),
            format_number(r.pi_trace),
            format_number(r.phi),
            format_number(r.mutual_info),
            format_number(r.weak_coupling_ratio),
            format_number(r.nu[0]),
            format_number(r.nu[1]),
            format_number(r.nu[2]),
        ];
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Renders the CSV to a string (timestamp line included).
pub fn csv_string(table: &SweepTable, timestamp_unix: u64) -> String {
    let mut buffer = Vec::new();
    write_csv(&mut buffer, table, timestamp_unix).expect("write to Vec cannot fail");
    String::from_utf8(buffer).expect("CSV output is ASCII")
}
