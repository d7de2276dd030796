//! Configuration document loading and layering.
//!
//! The config file is TOML; every key mirrors the corresponding library
//! field name exactly. Command-line flags override file values, which
//! override the built-in defaults.

use flexwave::{PmlProfile, ProblemConfig, Scenario};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub problem: ProblemTable,
    #[serde(default)]
    pub pml: PmlTable,
    #[serde(default)]
    pub study: StudyTable,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemTable {
    pub kappa: Option<f64>,
    pub theta: Option<f64>,
    pub lambda_period: Option<f64>,
    pub mu: Option<f64>,
    pub h1: Option<f64>,
    pub h2: Option<f64>,
    pub truncation: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmlTable {
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub sigma0: Option<f64>,
    pub m: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyTable {
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub scenario: Option<String>,
    pub h0: Option<f64>,
    pub output: Option<String>,
}

/// Flag-level overrides collected from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub kappa: Option<f64>,
    pub theta: Option<f64>,
    pub lambda_period: Option<f64>,
    pub mu: Option<f64>,
    pub h1: Option<f64>,
    pub h2: Option<f64>,
    pub truncation: Option<u32>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub sigma0: Option<f64>,
    pub m: Option<u32>,
}

pub fn load_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("cannot parse config {}: {e}", path.display()))
}

/// Resolves the problem configuration: defaults, then file, then flags.
pub fn resolve_problem(file: &FileConfig, ov: &Overrides) -> Result<ProblemConfig, String> {
    let d = ProblemConfig::default();
    let p = &file.problem;
    ProblemConfig::new(
        ov.kappa.or(p.kappa).unwrap_or(d.kappa),
        ov.theta.or(p.theta).unwrap_or(d.theta),
        ov.lambda_period.or(p.lambda_period).unwrap_or(d.lambda_period),
        ov.mu.or(p.mu).unwrap_or(d.mu),
        ov.h1.or(p.h1).unwrap_or(d.h1),
        ov.h2.or(p.h2).unwrap_or(d.h2),
        ov.truncation.or(p.truncation).unwrap_or(d.truncation),
    )
    .map_err(|e| e.to_string())
}

/// Resolves the PML profile: defaults, then file, then flags.
pub fn resolve_profile(file: &FileConfig, ov: &Overrides) -> Result<PmlProfile, String> {
    let d = PmlProfile::default();
    let p = &file.pml;
    PmlProfile::new(
        ov.delta1.or(p.delta1).unwrap_or(d.delta1),
        ov.delta2.or(p.delta2).unwrap_or(d.delta2),
        ov.sigma0.or(p.sigma0).unwrap_or(d.sigma0),
        ov.m.or(p.m).unwrap_or(d.m),
    )
    .map_err(|e| e.to_string())
}

/// Parses a scenario name plus optional clamp height.
pub fn resolve_scenario(name: &str, h0: Option<f64>) -> Result<Scenario, String> {
    match name {
        "empty_strip" => Ok(Scenario::EmptyStrip),
        "clamped_line" => Ok(Scenario::ClampedLine {
            h0: h0.unwrap_or(0.25),
        }),
        other => Err(format!(
            "unknown scenario '{other}' (expected empty_strip or clamped_line)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_precedence() {
        let file: FileConfig = toml::from_str(
            r#"
            [problem]
            kappa = 2.0
            mu = 0.1
            [pml]
            sigma0 = 5.0
            "#,
        )
        .unwrap();
        let ov = Overrides {
            mu: Some(0.2),
            ..Default::default()
        };
        let cfg = resolve_problem(&file, &ov).unwrap();
        assert_eq!(cfg.kappa, 2.0); // file beats default
        assert_eq!(cfg.mu, 0.2); // flag beats file
        assert_eq!(cfg.h1, 1.0); // default survives
        let profile = resolve_profile(&file, &ov).unwrap();
        assert_eq!(profile.sigma0, 5.0);
        assert_eq!(profile.m, 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let r: Result<FileConfig, _> = toml::from_str("[problem]\nkapa = 1.0\n");
        assert!(r.is_err());
    }
}
