//! Serializable report shapes: JSON for analyzer and semigroup reports,
//! CSV for trajectories.
//!
//! Every numeric field is either a finite number or an explicit string
//! marker (`"infinite"`, `"not_applicable"`, `"undetermined"`); no NaN or
//! infinity ever reaches the output. Complex numbers serialize as
//! `{"re": …, "im": …}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::operator::{OperatorReport, SpectrumSet, TriState};
use crate::semigroup::{GenerationReport, IntegratedReport, StabilityReport, Trajectory};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        JsonComplex { re: z.re, im: z.im }
    }
}

/// Finite number or explicit marker.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ReportValue {
    Finite(f64),
    Marker(&'static str),
}

impl ReportValue {
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            ReportValue::Finite(v)
        } else if v.is_nan() {
            ReportValue::Marker("not_applicable")
        } else {
            ReportValue::Marker("infinite")
        }
    }
}

fn tri_state(t: TriState) -> &'static str {
    match t {
        TriState::True => "true",
        TriState::False => "false",
        TriState::NotApplicable => "not_applicable",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumJson {
    pub points: Vec<JsonComplex>,
    pub closure_certified: bool,
    pub bounded: bool,
}

impl From<&SpectrumSet> for SpectrumJson {
    fn from(s: &SpectrumSet) -> Self {
        SpectrumJson {
            points: s.points.iter().map(|&z| z.into()).collect(),
            closure_certified: s.closure_certified,
            bounded: s.bounded,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorReportJson {
    pub operator_norm: ReportValue,
    pub bounded: &'static str,
    pub invertible: &'static str,
    pub closed_range: &'static str,
    pub compact: &'static str,
    pub fredholm: &'static str,
    pub delta_invertibility: ReportValue,
    pub delta_closed_range: ReportValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub essential_range: Option<SpectrumJson>,
    pub spectrum: SpectrumJson,
    pub notes: Vec<String>,
}

impl From<&OperatorReport> for OperatorReportJson {
    fn from(r: &OperatorReport) -> Self {
        OperatorReportJson {
            operator_norm: ReportValue::from_f64(r.operator_norm),
            bounded: tri_state(r.bounded),
            invertible: tri_state(r.invertible),
            closed_range: tri_state(r.closed_range),
            compact: tri_state(r.compact),
            fredholm: tri_state(r.fredholm),
            delta_invertibility: ReportValue::from_f64(r.delta_invertibility),
            delta_closed_range: ReportValue::from_f64(r.delta_closed_range),
            essential_range: r.essential_range.as_ref().map(SpectrumJson::from),
            spectrum: SpectrumJson::from(&r.spectrum),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SemigroupReportJson {
    pub generates_c0: bool,
    /// Sup of `‖e^{tu}‖_∞` over the dyadic grid in [0, 1].
    pub c: ReportValue,
    /// Essential sup of pointwise spectral bounds.
    pub w_star: ReportValue,
    pub integrated_generator: bool,
    /// Integration degree used for integrated-semigroup operations.
    pub m: u32,
    /// Fitted trajectory growth constant against `e^{(w* + margin) t}`.
    pub fitted_m: ReportValue,
    pub growth_margin: f64,
    pub note: String,
}

pub fn semigroup_report_json(
    generation: &GenerationReport,
    integrated: &IntegratedReport,
    stability: &StabilityReport,
    m: u32,
) -> SemigroupReportJson {
    SemigroupReportJson {
        generates_c0: generation.generates_c0,
        c: ReportValue::from_f64(generation.c),
        w_star: ReportValue::from_f64(integrated.w_star),
        integrated_generator: integrated.generator,
        m,
        fitted_m: ReportValue::from_f64(stability.fitted_m),
        growth_margin: stability.margin,
        note: generation.note.clone(),
    }
}

/// Full-precision decimal used in CSV output (17 significant digits).
fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trajectory CSV: header `t,atom_index,component,re,im`, one row per
/// (time, atom, component), `\n` line endings.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("t,atom_index,component,re,im\n");
    for (k, &t) in trajectory.times.iter().enumerate() {
        let state = trajectory.state_at(k);
        for atom in 0..state.space().atom_count() {
            let value = state.value(atom);
            for (component, z) in value.iter().enumerate() {
                out.push_str(&fmt_full(t));
                out.push(',');
                out.push_str(&atom.to_string());
                out.push(',');
                out.push_str(&component.to_string());
                out.push(',');
                out.push_str(&fmt_full(z.re));
                out.push(',');
                out.push_str(&fmt_full(z.im));
                out.push('\n');
            }
        }
    }
    out
}

/// Serialize any report as pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize infallibly");
    text.push('\n');
    text
}
