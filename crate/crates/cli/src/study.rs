//! Sweep orchestration and CSV emission for convergence studies.

use crate::fmt::{fmt_f64, fmt_opt};
use flexwave::pml::{theta_bound, ASYMPTOTIC_THETA};
use flexwave::solver::{solution_error, Scenario, SolutionErrors};
use flexwave::{Error, PmlProfile, ProblemConfig, ThetaBranch};
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::time::Instant;

/// Which parameter a study sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Delta,
    Sigma0,
    M,
    Kappa,
    Theta,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "delta" => Ok(SweepAxis::Delta),
            "sigma0" => Ok(SweepAxis::Sigma0),
            "m" => Ok(SweepAxis::M),
            "kappa" => Ok(SweepAxis::Kappa),
            "theta" => Ok(SweepAxis::Theta),
            other => Err(format!(
                "unknown sweep axis '{other}' (expected delta, sigma0, m, kappa, or theta)"
            )),
        }
    }

    fn value_valid(&self, v: f64) -> bool {
        match self {
            SweepAxis::Delta | SweepAxis::Sigma0 | SweepAxis::Kappa => v > 0.0 && v.is_finite(),
            SweepAxis::M => v >= 2.0 && v.fract() == 0.0,
            SweepAxis::Theta => v.is_finite() && v.abs() < FRAC_PI_2,
        }
    }
}

impl std::fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepAxis::Delta => "delta",
            SweepAxis::Sigma0 => "sigma0",
            SweepAxis::M => "m",
            SweepAxis::Kappa => "kappa",
            SweepAxis::Theta => "theta",
        };
        write!(f, "{s}")
    }
}

/// A parameter sweep to run.
#[derive(Debug, Clone)]
pub struct StudySpec {
    pub config: ProblemConfig,
    pub profile: PmlProfile,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub scenario: Scenario,
    /// Emit measured wall time per row (off by default: timing breaks
    /// byte-identical reruns).
    pub timing: bool,
}

impl StudySpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.values.is_empty() {
            return Err("sweep value list is empty".into());
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err("sweep values must be strictly increasing".into());
        }
        for &v in &self.values {
            if !self.axis.value_valid(v) {
                return Err(format!("value {v} invalid for sweep axis {}", self.axis));
            }
        }
        self.config.validate().map_err(|e| e.to_string())?;
        self.profile.validate().map_err(|e| e.to_string())?;
        self.scenario
            .validate(&self.config)
            .map_err(|e| e.to_string())?;
        Ok(())
    }

    fn point(&self, v: f64) -> (ProblemConfig, PmlProfile) {
        let mut cfg = self.config.clone();
        let mut profile = self.profile.clone();
        match self.axis {
            SweepAxis::Delta => {
                profile.delta1 = v;
                profile.delta2 = v;
            }
            SweepAxis::Sigma0 => profile.sigma0 = v,
            SweepAxis::M => profile.m = v as u32,
            SweepAxis::Kappa => cfg.kappa = v,
            SweepAxis::Theta => cfg.theta = v,
        }
        (cfg, profile)
    }
}

/// One sweep point's outcome.
#[derive(Debug, Clone)]
pub struct ConvergenceRecord {
    pub sweep_value: f64,
    pub theta: Option<f64>,
    pub theta_branch: Option<ThetaBranch>,
    pub errors: Option<SolutionErrors>,
    pub status: String,
    pub wall_ms: Option<f64>,
}

/// Fitted-rate summary of a completed study.
#[derive(Debug, Clone, Default)]
pub struct StudySummary {
    /// Least-squares slope of ln(err_modal_h2) vs delta over all rows above
    /// the 1e-13 noise floor (delta sweeps only).
    pub slope_all: Option<f64>,
    /// Same fit restricted to the asymptotic regime `theta <= 0.15`, where
    /// the thin-layer transient no longer biases the rate.
    pub slope_asymptotic: Option<f64>,
    /// Theta-predicted slope `-2 min(sigma0 D^-/(m+1), D^+, gamma0)`.
    pub predicted_slope: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct StudyOutcome {
    pub records: Vec<ConvergenceRecord>,
    pub summary: StudySummary,
}

/// Short machine-readable tag for a per-point failure.
fn status_tag(err: &Error) -> &'static str {
    match err {
        Error::Resonance { .. } => "resonance",
        Error::DegenerateDenominator { .. } => "degenerate_denominator",
        Error::SingularSystem { .. } => "singular_system",
        Error::InvalidConfig(_) => "invalid_config",
        Error::MissingSymbol { .. } => "missing_symbol",
        Error::OutOfDomain { .. } => "out_of_domain",
        Error::NotFound { .. } => "not_found",
        Error::StepTooCoarse { .. } => "step_too_coarse",
    }
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Noise floor below which error rows are excluded from slope fits.
pub const SLOPE_NOISE_FLOOR: f64 = 1e-13;

/// Runs the study: per swept value, solves the scenario under both closures,
/// measures the error norms and Theta, and records one row. Per-point
/// failures land in the row's status; the study continues.
pub fn run_study(spec: &StudySpec) -> Result<StudyOutcome, String> {
    spec.validate()?;
    let mut records = Vec::with_capacity(spec.values.len());
    for &v in &spec.values {
        let (cfg, profile) = spec.point(v);
        let start = Instant::now();
        let theta = theta_bound(&cfg, &profile);
        let errors = theta
            .as_ref()
            .map_err(|e| e.clone())
            .and_then(|_| solution_error(&cfg, &spec.scenario, &profile));
        let wall = start.elapsed().as_secs_f64() * 1e3;
        let record = match (theta, errors) {
            (Ok(th), Ok(errs)) => ConvergenceRecord {
                sweep_value: v,
                theta: Some(th.theta),
                theta_branch: Some(th.dominant_branch),
                errors: Some(errs),
                status: "ok".into(),
                wall_ms: spec.timing.then_some(wall),
            },
            (th, errs) => {
                let e = th.err().or(errs.err()).expect("at least one failed");
                ConvergenceRecord {
                    sweep_value: v,
                    theta: None,
                    theta_branch: None,
                    errors: None,
                    status: status_tag(&e).into(),
                    wall_ms: spec.timing.then_some(wall),
                }
            }
        };
        records.push(record);
    }

    let mut summary = StudySummary::default();
    if spec.axis == SweepAxis::Delta {
        let ok_points: Vec<(f64, f64, f64)> = records
            .iter()
            .filter_map(|r| {
                let e = r.errors.as_ref()?;
                (e.modal_h2 > SLOPE_NOISE_FLOOR)
                    .then_some((r.sweep_value, e.modal_h2.ln(), r.theta.unwrap_or(1.0)))
            })
            .collect();
        let all: Vec<(f64, f64)> = ok_points.iter().map(|p| (p.0, p.1)).collect();
        let tail: Vec<(f64, f64)> = ok_points
            .iter()
            .filter(|p| p.2 <= ASYMPTOTIC_THETA)
            .map(|p| (p.0, p.1))
            .collect();
        summary.slope_all = fit_slope(&all);
        summary.slope_asymptotic = fit_slope(&tail);
        summary.predicted_slope = theta_bound(&spec.config, &spec.profile)
            .ok()
            .map(|t| -2.0 * t.rate);
    }
    Ok(StudyOutcome { records, summary })
}

/// Fixed CSV header.
pub const CSV_HEADER: &str = "sweep_value,theta,theta_branch,err_f_h32_g1,err_g_h12_g1,err_f_h32_g2,err_g_h12_g2,err_modal_h2,status,wall_ms";

/// Serializes the study to CSV bytes: header, one row per sweep point, and a
/// `#`-prefixed summary trailer carrying the fitted and predicted slopes.
pub fn to_csv(outcome: &StudyOutcome) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &outcome.records {
        let e = r.errors.as_ref();
        let row = [
            fmt_f64(r.sweep_value),
            fmt_opt(r.theta),
            r.theta_branch.map(|b| b.to_string()).unwrap_or_default(),
            fmt_opt(e.map(|e| e.f_h32_g1)),
            fmt_opt(e.map(|e| e.g_h12_g1)),
            fmt_opt(e.map(|e| e.f_h32_g2)),
            fmt_opt(e.map(|e| e.g_h12_g2)),
            fmt_opt(e.map(|e| e.modal_h2)),
            r.status.clone(),
            fmt_opt(r.wall_ms),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    let s = &outcome.summary;
    out.push_str(&format!(
        "# summary slope_all={} slope_asymptotic={} predicted_slope={}\n",
        fmt_opt(s.slope_all),
        fmt_opt(s.slope_asymptotic),
        fmt_opt(s.predicted_slope),
    ));
    out
}

/// Writes the CSV to a file.
pub fn write_csv(outcome: &StudyOutcome, path: &std::path::Path) -> Result<(), String> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    f.write_all(to_csv(outcome).as_bytes())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}
