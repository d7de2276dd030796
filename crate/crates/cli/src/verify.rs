//! Bundled verification checks: denominator identity, positivity threshold,
//! closed-form-vs-solve agreement, boundary residuals, interface continuity,
//! and the finite-difference oracle.

use flexwave::dtn::{exact_symbol, positivity_threshold, DEFAULT_SEED};
use flexwave::modal::{mode_params, Boundary};
use flexwave::oracle::{fd_solve_mode, richardson};
use flexwave::pml::{layer_coeffs, layer_coeffs_closed_form, pml_symbol, Region};
use flexwave::solver::{solve_all, solve_mode, Scenario, SymbolChoice};
use flexwave::{PmlProfile, ProblemConfig};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn check(name: &str, result: Result<String, String>) -> CheckResult {
    match result {
        Ok(detail) => CheckResult {
            name: name.into(),
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name: name.into(),
            passed: false,
            detail,
        },
    }
}

fn denominator_identity(cfg: &ProblemConfig) -> Result<String, String> {
    let mut worst = 0.0f64;
    for n in -50i64..=50 {
        let m = mode_params(cfg, n).map_err(|e| e.to_string())?;
        let i = Complex64::i();
        let b = m.beta_n;
        let g = Complex64::from(m.gamma_n);
        let lhs = (-i * (g + i * b) * (g + i * b)).norm_sqr();
        let rhs = (g + i * b).norm_sqr().powi(2);
        let rel = (lhs - rhs).abs() / rhs;
        worst = worst.max(rel);
        if rel > 1e-12 {
            return Err(format!("identity defect {rel:.3e} at n = {n}"));
        }
    }
    Ok(format!("max relative defect {worst:.3e} over |n| <= 50"))
}

fn positivity(cfg: &ProblemConfig) -> Result<String, String> {
    let n0 = positivity_threshold(cfg, cfg.mu, 100, 1000, DEFAULT_SEED)
        .map_err(|e| e.to_string())?;
    Ok(format!("positivity threshold n0 = {n0}"))
}

fn closed_form_vs_solve(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<String, String> {
    let f = Complex64::new(0.8, -0.4);
    let g = Complex64::new(-0.1, 1.2);
    let mut worst = 0.0f64;
    for n in -20i64..=20 {
        let mode = mode_params(cfg, n).map_err(|e| e.to_string())?;
        for region in [Region::Upper, Region::Lower] {
            let lc = layer_coeffs(&mode, f, g, profile, region).map_err(|e| e.to_string())?;
            let cf =
                layer_coeffs_closed_form(&mode, f, g, profile, region).map_err(|e| e.to_string())?;
            let solved = [lc.w, lc.v, lc.x, lc.y];
            for j in 0..4 {
                let rel = (solved[j] - cf[j]).norm() / cf[j].norm().max(1.0);
                worst = worst.max(rel);
                if rel > 1e-9 {
                    return Err(format!(
                        "closed-form mismatch {rel:.3e} at n = {n} {region:?} coeff {j}"
                    ));
                }
            }
        }
    }
    Ok(format!("max relative mismatch {worst:.3e}"))
}

fn residuals(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<String, String> {
    let mut worst = 0.0f64;
    for scenario in [Scenario::EmptyStrip, Scenario::ClampedLine { h0: 0.25 }] {
        for symbols in [SymbolChoice::Exact, SymbolChoice::Pml(profile.clone())] {
            let sol = solve_all(cfg, &scenario, &symbols).map_err(|e| e.to_string())?;
            for ms in sol.modes.values() {
                worst = worst.max(ms.residual);
                if ms.residual > 1e-9 {
                    return Err(format!(
                        "residual {:.3e} at mode {} in {scenario:?}",
                        ms.residual, ms.n
                    ));
                }
            }
        }
    }
    Ok(format!("max boundary-row residual {worst:.3e}"))
}

fn continuity(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<String, String> {
    let scenario = Scenario::ClampedLine { h0: 0.25 };
    let mut worst = 0.0f64;
    for symbols in [SymbolChoice::Exact, SymbolChoice::Pml(profile.clone())] {
        let sol = solve_all(cfg, &scenario, &symbols).map_err(|e| e.to_string())?;
        for x1 in [0.0, 1.3, 4.4] {
            let eps = 1e-9;
            let pairs = [(cfg.h1, cfg.h1 + eps), (cfg.h2, cfg.h2 - eps)];
            for (inside, outside) in pairs {
                let a = sol.field_eval(x1, inside).map_err(|e| e.to_string())?.value;
                let b = sol.field_eval(x1, outside).map_err(|e| e.to_string())?.value;
                let rel = (a - b).norm() / a.norm().max(1.0);
                worst = worst.max(rel);
                if rel > 1e-6 {
                    return Err(format!("trace jump {rel:.3e} at x1 = {x1}, x2 = {inside}"));
                }
            }
        }
    }
    Ok(format!("max interface jump {worst:.3e}"))
}

fn fd_oracle(cfg: &ProblemConfig) -> Result<String, String> {
    let scenario = Scenario::ClampedLine { h0: 0.25 };
    let analytic = solve_mode(cfg, &scenario, 0, &SymbolChoice::Exact).map_err(|e| e.to_string())?;
    let coarse = fd_solve_mode(cfg, &scenario, 0, 1e-2).map_err(|e| e.to_string())?;
    let fine = fd_solve_mode(cfg, &scenario, 0, 5e-3).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (cg, fg) in coarse.iter().zip(&fine) {
        let ex = richardson(cg, fg);
        for i in 0..ex.len() {
            let err = (ex.values[i] - analytic.eval_strip(ex.node(i), 0)).norm();
            worst = worst.max(err);
        }
    }
    if worst > 1e-7 {
        return Err(format!("Richardson deviation {worst:.3e} exceeds 1e-7"));
    }
    Ok(format!("Richardson deviation {worst:.3e}"))
}

fn pml_symbols_sound(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<String, String> {
    // denominators non-degenerate and symbols finite across the truncation
    for n in -(cfg.truncation as i64)..=(cfg.truncation as i64) {
        let mode = mode_params(cfg, n).map_err(|e| e.to_string())?;
        for boundary in [Boundary::Gamma1, Boundary::Gamma2] {
            let s = pml_symbol(&mode, cfg.mu, profile, boundary).map_err(|e| e.to_string())?;
            let exact = exact_symbol(&mode, cfg.mu, boundary);
            for r in 0..2 {
                for c in 0..2 {
                    if !s.entries[r][c].is_finite() {
                        return Err(format!("non-finite symbol entry at n = {n}"));
                    }
                    // sanity: same growth scale as the exact symbol
                    let scale = exact.entries[r][c].norm().max(1.0);
                    if s.entries[r][c].norm() > 1e3 * scale {
                        return Err(format!("symbol entry blow-up at n = {n}"));
                    }
                }
            }
        }
    }
    Ok("all PML symbols finite and at exact-symbol scale".into())
}

/// Runs the full verification suite.
pub fn verify(cfg: &ProblemConfig, profile: &PmlProfile) -> Report {
    let checks = vec![
        check("denominator_identity", denominator_identity(cfg)),
        check("positivity_threshold", positivity(cfg)),
        check("closed_form_vs_solve", closed_form_vs_solve(cfg, profile)),
        check("pml_symbols", pml_symbols_sound(cfg, profile)),
        check("boundary_residuals", residuals(cfg, profile)),
        check("interface_continuity", continuity(cfg, profile)),
        check("fd_oracle", fd_oracle(cfg)),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Report { checks, passed }
}
