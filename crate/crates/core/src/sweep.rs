//! Deterministic parameter-grid evaluation of the geometric measure over the
//! model families, with CSV output suitable for plotting. Grid points are
//! independent pure evaluations; parallel runs gather by grid index, so the
//! output bytes do not depend on the job count.

use crate::geodiscord::{geometric_measure, Method};
use crate::models::{nanopore_state, xxz_dm_thermal_oracle, NanoporeParams, XxzDmParams};
use crate::states::{cs_to_matrix, x_to_matrix, CsParams, DensityMatrix, XParams};
use std::collections::BTreeMap;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("unknown parameter '{name}' for model {model}")]
    UnknownParameter { name: String, model: String },
    #[error("parameter '{name}' appears more than once")]
    DuplicateParameter { name: String },
    #[error("missing required parameter '{name}'")]
    MissingParameter { name: String },
    #[error("malformed axis: {0}")]
    MalformedAxis(String),
    #[error("a sweep needs 1 or 2 axes, got {0}")]
    WrongAxisCount(usize),
    #[error("jobs must be >= 1")]
    BadJobs,
    #[error("spec line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("model 'file' needs a base state; resolve the path first")]
    NeedsBaseState,
}

/// What generates the state at each grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    Nanopore,
    XxzDm,
    /// Sweep over the seven CS parameters around a base point.
    CsFamily(CsParams),
    /// Sweep over the seven X parameters around a base point.
    XFamily(XParams),
}

impl ModelKind {
    fn name(&self) -> &'static str {
        match self {
            ModelKind::Nanopore => "nanopore",
            ModelKind::XxzDm => "xxz-dm",
            ModelKind::CsFamily(_) => "file (cs)",
            ModelKind::XFamily(_) => "file (x)",
        }
    }

    fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            ModelKind::Nanopore => &["beta", "n", "coupling", "time"],
            ModelKind::XxzDm => &["j", "jz", "dx", "temp"],
            ModelKind::CsFamily(_) => &["p1", "p2", "p3", "p4", "p5", "p6", "p7"],
            ModelKind::XFamily(_) => &["q1", "q2", "q3", "q4", "q5", "q6", "q7"],
        }
    }

    /// Parameters that must be pinned by `fixed` or an axis.
    fn required_names(&self) -> &'static [&'static str] {
        match self {
            ModelKind::Nanopore => &["beta", "n", "coupling", "time"],
            ModelKind::XxzDm => &["j", "jz", "dx", "temp"],
            _ => &[],
        }
    }
}

/// One sweep axis: either uniformly spaced with inclusive endpoints or an
/// explicit value list (used by the figure specs for non-uniform curve sets).
#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    Uniform { start: f64, stop: f64, steps: usize },
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: AxisValues,
}

impl Axis {
    pub fn uniform(name: &str, start: f64, stop: f64, steps: usize) -> Self {
        Axis {
            name: name.to_string(),
            values: AxisValues::Uniform { start, stop, steps },
        }
    }

    pub fn explicit(name: &str, values: Vec<f64>) -> Self {
        Axis {
            name: name.to_string(),
            values: AxisValues::Explicit(values),
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            AxisValues::Uniform { steps, .. } => *steps,
            AxisValues::Explicit(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn value(&self, index: usize) -> f64 {
        match &self.values {
            AxisValues::Uniform { start, stop, steps } => {
                start + (stop - start) * index as f64 / (*steps as f64 - 1.0)
            }
            AxisValues::Explicit(v) => v[index],
        }
    }

    fn validate(&self) -> Result<(), SpecError> {
        match &self.values {
            AxisValues::Uniform { start, stop, steps } => {
                if *steps < 2 {
                    return Err(SpecError::MalformedAxis(format!(
                        "axis '{}' needs at least 2 steps",
                        self.name
                    )));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(SpecError::MalformedAxis(format!(
                        "axis '{}' endpoints must be finite",
                        self.name
                    )));
                }
                if start == stop {
                    return Err(SpecError::MalformedAxis(format!(
                        "axis '{}' is degenerate (start = stop = {start})",
                        self.name
                    )));
                }
                Ok(())
            }
            AxisValues::Explicit(values) => {
                if values.is_empty() {
                    return Err(SpecError::MalformedAxis(format!(
                        "axis '{}' has an empty value list",
                        self.name
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(SpecError::MalformedAxis(format!(
                        "axis '{}' contains a non-finite value",
                        self.name
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub model: ModelKind,
    pub fixed: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    pub method: Method,
    pub jobs: usize,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), SpecError> {
        if self.jobs < 1 {
            return Err(SpecError::BadJobs);
        }
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(SpecError::WrongAxisCount(self.axes.len()));
        }
        let known = self.model.parameter_names();
        let mut seen = Vec::new();
        for name in self.fixed.keys().map(String::as_str).chain(self.axes.iter().map(|a| a.name.as_str())) {
            if !known.contains(&name) {
                return Err(SpecError::UnknownParameter {
                    name: name.to_string(),
                    model: self.model.name().to_string(),
                });
            }
            if seen.contains(&name) {
                return Err(SpecError::DuplicateParameter {
                    name: name.to_string(),
                });
            }
            seen.push(name);
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        for required in self.model.required_names() {
            if !seen.contains(required) {
                return Err(SpecError::MissingParameter {
                    name: required.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Converged optimizer output for one valid grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct RowResult {
    pub g: f64,
    pub lambda_max: f64,
    pub k: [f64; 3],
    pub l: [f64; 3],
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    /// Dimensionless a*t for the nanopore model.
    pub at: Option<f64>,
    /// None marks a grid point whose state failed validation.
    pub result: Option<RowResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
}

fn assemble_state(model: &ModelKind, values: &BTreeMap<&str, f64>) -> Option<DensityMatrix> {
    match model {
        ModelKind::Nanopore => {
            let n = values["n"];
            if !(n.fract() == 0.0 && (2.0..=1e9).contains(&n)) {
                return None;
            }
            let params =
                NanoporeParams::new(values["beta"], n as u32, values["coupling"], values["time"])
                    .ok()?;
            nanopore_state(&params).ok()
        }
        ModelKind::XxzDm => {
            let params =
                XxzDmParams::new(values["j"], values["jz"], values["dx"], values["temp"]).ok()?;
            Some(xxz_dm_thermal_oracle(&params))
        }
        ModelKind::CsFamily(base) => {
            let mut p = base.as_array();
            for (i, name) in ["p1", "p2", "p3", "p4", "p5", "p6", "p7"].iter().enumerate() {
                if let Some(v) = values.get(name) {
                    p[i] = *v;
                }
            }
            cs_to_matrix(&CsParams::new(p)).ok()
        }
        ModelKind::XFamily(base) => {
            let mut q = base.as_array();
            for (i, name) in ["q1", "q2", "q3", "q4", "q5", "q6", "q7"].iter().enumerate() {
                if let Some(v) = values.get(name) {
                    q[i] = *v;
                }
            }
            x_to_matrix(&XParams::new(q)).ok()
        }
    }
}

/// Rebuilds the state behind a row, for cross-checks on emitted tables.
pub fn state_at(spec: &SweepSpec, row: &SweepRow) -> Option<DensityMatrix> {
    let mut values: BTreeMap<&str, f64> =
        spec.fixed.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    for (axis, value) in spec.axes.iter().zip(&row.axis_values) {
        values.insert(axis.name.as_str(), *value);
    }
    assemble_state(&spec.model, &values)
}

fn evaluate_point(spec: &SweepSpec, axis_values: &[f64]) -> SweepRow {
    let mut values: BTreeMap<&str, f64> =
        spec.fixed.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    for (axis, value) in spec.axes.iter().zip(axis_values) {
        values.insert(axis.name.as_str(), *value);
    }
    let at = match spec.model {
        ModelKind::Nanopore => values
            .get("coupling")
            .zip(values.get("time"))
            .map(|(d, t)| 1.5 * d * t),
        _ => None,
    };
    let result = assemble_state(&spec.model, &values).map(|rho| {
        let res = geometric_measure(&rho, spec.method);
        RowResult {
            g: res.g,
            lambda_max: res.opt.lambda_max,
            k: res.opt.axes.k,
            l: res.opt.axes.l,
            iterations: res.opt.iterations,
            converged: res.opt.converged,
        }
    });
    SweepRow {
        axis_values: axis_values.to_vec(),
        at,
        result,
    }
}

/// Runs the grid in lexicographic index order (first axis slowest). Rows for
/// points whose state fails validation are flagged invalid instead of
/// aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SpecError> {
    spec.validate()?;

    let lens: Vec<usize> = spec.axes.iter().map(Axis::len).collect();
    let total: usize = lens.iter().product();
    let grid: Vec<Vec<f64>> = (0..total)
        .map(|index| {
            let mut rest = index;
            let mut point = vec![0.0; lens.len()];
            for (d, len) in lens.iter().enumerate().rev() {
                point[d] = spec.axes[d].value(rest % len);
                rest /= len;
            }
            point
        })
        .collect();

    let rows: Vec<SweepRow> = if spec.jobs == 1 {
        grid.iter().map(|point| evaluate_point(spec, point)).collect()
    } else {
        let mut slots: Vec<Option<SweepRow>> = vec![None; total];
        let chunk = total.div_ceil(spec.jobs);
        std::thread::scope(|scope| {
            for (slot_chunk, point_chunk) in slots.chunks_mut(chunk).zip(grid.chunks(chunk)) {
                scope.spawn(move || {
                    for (slot, point) in slot_chunk.iter_mut().zip(point_chunk) {
                        *slot = Some(evaluate_point(spec, point));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every slot filled")).collect()
    };

    let mut header: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    if matches!(spec.model, ModelKind::Nanopore) {
        header.push("at".to_string());
    }
    for column in [
        "g",
        "lambda_max",
        "k1",
        "k2",
        "k3",
        "l1",
        "l2",
        "l3",
        "iterations",
        "converged",
        "valid",
    ] {
        header.push(column.to_string());
    }
    Ok(SweepTable { header, rows })
}

/// 17 significant digits, enough to reparse bit-exactly.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180-style CSV: header first, '.' decimals, 17 significant digits,
/// 'NA' on invalid points, '\n' endings. Byte-identical for equal tables.
pub fn emit_csv<W: Write>(table: &SweepTable, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{}", table.header.join(","))?;
    for row in &table.rows {
        let mut fields: Vec<String> = row.axis_values.iter().map(|v| fmt_real(*v)).collect();
        if let Some(at) = row.at {
            fields.push(fmt_real(at));
        }
        match &row.result {
            Some(r) => {
                fields.push(fmt_real(r.g));
                fields.push(fmt_real(r.lambda_max));
                for c in r.k.iter().chain(r.l.iter()) {
                    fields.push(fmt_real(*c));
                }
                fields.push(r.iterations.to_string());
                fields.push(r.converged.to_string());
                fields.push("true".to_string());
            }
            None => {
                for _ in 0..10 {
                    fields.push("NA".to_string());
                }
                fields.push("false".to_string());
            }
        }
        writeln!(sink, "{}", fields.join(","))?;
    }
    Ok(())
}

/// A sweep description read from a spec file, before the `file` model (if
/// any) is resolved against its base state.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepFile {
    pub model: String,
    pub path: Option<String>,
    pub fixed: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    pub method: Method,
    pub jobs: usize,
}

impl SweepFile {
    /// Finishes a nanopore or xxz-dm spec; `file` specs need
    /// [`SweepFile::into_spec_with_base`].
    pub fn into_spec(self) -> Result<SweepSpec, SpecError> {
        let model = match self.model.as_str() {
            "nanopore" => ModelKind::Nanopore,
            "xxz-dm" => ModelKind::XxzDm,
            "file" => return Err(SpecError::NeedsBaseState),
            other => return Err(SpecError::UnknownModel(other.to_string())),
        };
        Ok(SweepSpec {
            model,
            fixed: self.fixed,
            axes: self.axes,
            method: self.method,
            jobs: self.jobs,
        })
    }

    /// Finishes a `file` spec against the base family loaded from its path.
    pub fn into_spec_with_base(self, base: ModelKind) -> Result<SweepSpec, SpecError> {
        if self.model != "file" {
            return Err(SpecError::UnknownModel(self.model));
        }
        if !matches!(base, ModelKind::CsFamily(_) | ModelKind::XFamily(_)) {
            return Err(SpecError::NeedsBaseState);
        }
        Ok(SweepSpec {
            model: base,
            fixed: self.fixed,
            axes: self.axes,
            method: self.method,
            jobs: self.jobs,
        })
    }
}

struct AxisBuilder {
    line: usize,
    name: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    steps: Option<usize>,
    values: Option<Vec<f64>>,
}

impl AxisBuilder {
    fn finish(self) -> Result<Axis, SpecError> {
        let name = self.name.ok_or(SpecError::Parse {
            line: self.line,
            message: "axis section is missing 'name'".to_string(),
        })?;
        match (self.values, self.start, self.stop, self.steps) {
            (Some(values), None, None, None) => Ok(Axis::explicit(&name, values)),
            (None, Some(start), Some(stop), Some(steps)) => {
                Ok(Axis::uniform(&name, start, stop, steps))
            }
            _ => Err(SpecError::Parse {
                line: self.line,
                message: format!(
                    "axis '{name}' needs either start/stop/steps or a values list"
                ),
            }),
        }
    }
}

/// Parses the flat `key = value` sweep format with `[axis]` sections.
/// Comments start with '#'; blank lines are ignored; the '=' is optional.
pub fn parse_sweep_file(text: &str) -> Result<SweepFile, SpecError> {
    let mut model: Option<String> = None;
    let mut path: Option<String> = None;
    let mut fixed = BTreeMap::new();
    let mut axes: Vec<Axis> = Vec::new();
    let mut method = Method::Alternating;
    let mut jobs = 1usize;
    let mut current_axis: Option<AxisBuilder> = None;

    let parse_f64 = |raw: &str, line: usize| -> Result<f64, SpecError> {
        raw.parse::<f64>().map_err(|_| SpecError::Parse {
            line,
            message: format!("expected a number, got '{raw}'"),
        })
    };

    for (line_index, raw_line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line == "[axis]" {
            if let Some(builder) = current_axis.take() {
                axes.push(builder.finish()?);
            }
            current_axis = Some(AxisBuilder {
                line: line_no,
                name: None,
                start: None,
                stop: None,
                steps: None,
                values: None,
            });
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => {
                    return Err(SpecError::Parse {
                        line: line_no,
                        message: format!("expected 'key = value', got '{line}'"),
                    })
                }
            },
        };
        if value.is_empty() {
            return Err(SpecError::Parse {
                line: line_no,
                message: format!("key '{key}' has no value"),
            });
        }

        if let Some(builder) = current_axis.as_mut() {
            match key {
                "name" => builder.name = Some(value.to_string()),
                "start" => builder.start = Some(parse_f64(value, line_no)?),
                "stop" => builder.stop = Some(parse_f64(value, line_no)?),
                "steps" => {
                    builder.steps = Some(value.parse().map_err(|_| SpecError::Parse {
                        line: line_no,
                        message: format!("steps must be a positive integer, got '{value}'"),
                    })?)
                }
                "values" => {
                    let mut values = Vec::new();
                    for piece in value.split(',') {
                        values.push(parse_f64(piece.trim(), line_no)?);
                    }
                    builder.values = Some(values);
                }
                other => {
                    return Err(SpecError::Parse {
                        line: line_no,
                        message: format!("unknown axis key '{other}'"),
                    })
                }
            }
            continue;
        }

        match key {
            "model" => model = Some(value.to_string()),
            "path" => path = Some(value.to_string()),
            "method" => {
                method = match value {
                    "alternating" => Method::Alternating,
                    "grid" => Method::Grid,
                    other => {
                        return Err(SpecError::Parse {
                            line: line_no,
                            message: format!("method must be alternating or grid, got '{other}'"),
                        })
                    }
                }
            }
            "jobs" => {
                jobs = value.parse().map_err(|_| SpecError::Parse {
                    line: line_no,
                    message: format!("jobs must be a positive integer, got '{value}'"),
                })?
            }
            name => {
                let parsed = parse_f64(value, line_no)?;
                if fixed.insert(name.to_string(), parsed).is_some() {
                    return Err(SpecError::DuplicateParameter {
                        name: name.to_string(),
                    });
                }
            }
        }
    }
    if let Some(builder) = current_axis.take() {
        axes.push(builder.finish()?);
    }

    Ok(SweepFile {
        model: model.ok_or(SpecError::Parse {
            line: 0,
            message: "spec is missing 'model'".to_string(),
        })?,
        path,
        fixed,
        axes,
        method,
        jobs,
    })
}
