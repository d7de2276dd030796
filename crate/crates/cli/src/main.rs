//! Command-line interface for the strip scattering library.

use clap::{Args, Parser, Subcommand};
use flexwave::dtn::exact_symbol;
use flexwave::modal::{mode_params, Boundary};
use flexwave::pml::{pml_symbol, symbol_error, theta_bound};
use flexwave::solver::{solve_all, SymbolChoice};
use flexwave::{PmlProfile, ProblemConfig};
use flexwave_cli::config::{
    load_file, resolve_problem, resolve_profile, resolve_scenario, FileConfig, Overrides,
};
use flexwave_cli::fmt::fmt_f64;
use flexwave_cli::study::{run_study, to_csv, write_csv, StudySpec, SweepAxis};
use flexwave_cli::verify::verify;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "flexwave",
    version,
    about = "Biharmonic wave scattering in a quasi-periodic strip: exact and PML transparent boundary conditions"
)]
struct Cli {
    /// Config file (TOML); flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    params: ParamFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamFlags {
    /// Wavenumber kappa
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Incident angle theta (radians)
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Period Lambda
    #[arg(long, global = true)]
    lambda_period: Option<f64>,
    /// Poisson ratio mu
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Upper strip boundary h1
    #[arg(long, global = true, allow_negative_numbers = true)]
    h1: Option<f64>,
    /// Lower strip boundary h2
    #[arg(long, global = true, allow_negative_numbers = true)]
    h2: Option<f64>,
    /// Mode truncation (max |n|)
    #[arg(long, global = true)]
    truncation: Option<u32>,
    /// Upper PML thickness delta1
    #[arg(long, global = true)]
    delta1: Option<f64>,
    /// Lower PML thickness delta2
    #[arg(long, global = true)]
    delta2: Option<f64>,
    /// PML stretching strength sigma0
    #[arg(long, global = true)]
    sigma0: Option<f64>,
    /// PML stretching order m
    #[arg(long, global = true)]
    m: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the mode parameter table over the truncation range
    Modes,
    /// Dump exact or PML DtN symbols for a mode range
    Symbol {
        #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
        n_min: i64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        n_max: i64,
        /// Emit PML symbols instead of exact ones
        #[arg(long)]
        pml: bool,
        /// Boundary: gamma1 or gamma2
        #[arg(long, default_value = "gamma1")]
        boundary: String,
    },
    /// Tabulate the Sobolev-weighted PML symbol error against layer thickness
    PmlError {
        /// Comma-separated layer thicknesses
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,2.5,3")]
        deltas: Vec<f64>,
    },
    /// Solve one scenario and write field samples to CSV
    Solve {
        /// Scenario: empty_strip or clamped_line
        #[arg(long)]
        scenario: Option<String>,
        /// Clamped line height
        #[arg(long, allow_negative_numbers = true)]
        h0: Option<f64>,
        /// Solve with PML boundary rows instead of exact ones
        #[arg(long)]
        pml: bool,
        /// Samples along x1
        #[arg(long, default_value_t = 16)]
        nx1: usize,
        /// Samples along x2
        #[arg(long, default_value_t = 64)]
        nx2: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a convergence study sweep and emit one CSV row per point
    Sweep {
        /// Sweep axis: delta, sigma0, m, kappa, or theta
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated sweep values (strictly increasing)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
        /// Scenario: empty_strip or clamped_line
        #[arg(long)]
        scenario: Option<String>,
        /// Clamped line height
        #[arg(long, allow_negative_numbers = true)]
        h0: Option<f64>,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record wall time per row (breaks byte-identical reruns)
        #[arg(long)]
        timing: bool,
    },
    /// Run the verification suite; nonzero exit on any failure
    Verify {
        /// Write the machine-readable JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum AppError {
    /// Configuration problem: exit code 2.
    Config(String),
    /// Runtime or check failure: exit code 1.
    Run(String),
}

fn overrides(p: &ParamFlags) -> Overrides {
    Overrides {
        kappa: p.kappa,
        theta: p.theta,
        lambda_period: p.lambda_period,
        mu: p.mu,
        h1: p.h1,
        h2: p.h2,
        truncation: p.truncation,
        delta1: p.delta1,
        delta2: p.delta2,
        sigma0: p.sigma0,
        m: p.m,
    }
}

fn load(cli: &Cli) -> Result<(ProblemConfig, PmlProfile, FileConfig), AppError> {
    let file = match &cli.config {
        Some(path) => load_file(path).map_err(AppError::Config)?,
        None => FileConfig::default(),
    };
    let ov = overrides(&cli.params);
    let cfg = resolve_problem(&file, &ov).map_err(AppError::Config)?;
    let profile = resolve_profile(&file, &ov).map_err(AppError::Config)?;
    Ok((cfg, profile, file))
}

fn emit(text: String, path: &Option<PathBuf>) -> Result<(), AppError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| AppError::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_boundary(s: &str) -> Result<Boundary, AppError> {
    match s {
        "gamma1" => Ok(Boundary::Gamma1),
        "gamma2" => Ok(Boundary::Gamma2),
        other => Err(AppError::Config(format!(
            "unknown boundary '{other}' (expected gamma1 or gamma2)"
        ))),
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let (cfg, profile, file) = load(cli)?;
    match &cli.command {
        Command::Modes => {
            println!("n,alpha_n,re_beta_n,im_beta_n,gamma_n,propagating");
            let t = cfg.truncation as i64;
            for n in -t..=t {
                match mode_params(&cfg, n) {
                    Ok(m) => println!(
                        "{n},{},{},{},{},{}",
                        fmt_f64(m.alpha_n),
                        fmt_f64(m.beta_n.re),
                        fmt_f64(m.beta_n.im),
                        fmt_f64(m.gamma_n),
                        m.propagating
                    ),
                    Err(e) => println!("{n},,,,,{e}"),
                }
            }
            Ok(())
        }
        Command::Symbol {
            n_min,
            n_max,
            pml,
            boundary,
        } => {
            let boundary = parse_boundary(boundary)?;
            println!("n,re_t11,im_t11,re_t12,im_t12,re_t21,im_t21,re_t22,im_t22");
            for n in *n_min..=*n_max {
                let mode = mode_params(&cfg, n).map_err(|e| AppError::Run(e.to_string()))?;
                let s = if *pml {
                    pml_symbol(&mode, cfg.mu, &profile, boundary)
                        .map_err(|e| AppError::Run(e.to_string()))?
                } else {
                    exact_symbol(&mode, cfg.mu, boundary)
                };
                let e = &s.entries;
                println!(
                    "{n},{},{},{},{},{},{},{},{}",
                    fmt_f64(e[0][0].re),
                    fmt_f64(e[0][0].im),
                    fmt_f64(e[0][1].re),
                    fmt_f64(e[0][1].im),
                    fmt_f64(e[1][0].re),
                    fmt_f64(e[1][0].im),
                    fmt_f64(e[1][1].re),
                    fmt_f64(e[1][1].im)
                );
            }
            Ok(())
        }
        Command::PmlError { deltas } => {
            println!("delta,theta,theta_branch,werr_t11,werr_t12,werr_t21,werr_t22,max_ratio");
            let weights = [[1.5, 1.0], [1.0, 0.5]];
            for &d in deltas {
                let mut p = profile.clone();
                p.delta1 = d;
                p.delta2 = d;
                p.validate().map_err(|e| AppError::Config(e.to_string()))?;
                let th = theta_bound(&cfg, &p).map_err(|e| AppError::Run(e.to_string()))?;
                let mut werr = [[0.0f64; 2]; 2];
                let t = cfg.truncation as i64;
                for n in -t..=t {
                    let mode = mode_params(&cfg, n).map_err(|e| AppError::Run(e.to_string()))?;
                    let err = symbol_error(&mode, cfg.mu, &p, Boundary::Gamma1)
                        .map_err(|e| AppError::Run(e.to_string()))?;
                    for r in 0..2 {
                        for c in 0..2 {
                            let w = (1.0 + mode.alpha_n * mode.alpha_n).powf(weights[r][c]);
                            werr[r][c] = werr[r][c].max(err[r][c].norm() / w);
                        }
                    }
                }
                let max_ratio = werr
                    .iter()
                    .flatten()
                    .cloned()
                    .fold(0.0f64, f64::max)
                    / th.theta;
                println!(
                    "{},{},{},{},{},{},{},{}",
                    fmt_f64(d),
                    fmt_f64(th.theta),
                    th.dominant_branch,
                    fmt_f64(werr[0][0]),
                    fmt_f64(werr[0][1]),
                    fmt_f64(werr[1][0]),
                    fmt_f64(werr[1][1]),
                    fmt_f64(max_ratio)
                );
            }
            Ok(())
        }
        Command::Solve {
            scenario,
            h0,
            pml,
            nx1,
            nx2,
            out,
        } => {
            let name = scenario
                .clone()
                .or(file.study.scenario.clone())
                .unwrap_or_else(|| "clamped_line".into());
            let scen = resolve_scenario(&name, h0.or(file.study.h0)).map_err(AppError::Config)?;
            let symbols = if *pml {
                SymbolChoice::Pml(profile.clone())
            } else {
                SymbolChoice::Exact
            };
            let sol = solve_all(&cfg, &scen, &symbols).map_err(|e| AppError::Run(e.to_string()))?;
            let (lo, hi) = if *pml {
                (cfg.h2 - profile.delta2, cfg.h1 + profile.delta1)
            } else {
                (cfg.h2 - 1.0, cfg.h1 + 1.0)
            };
            let mut text = String::from("x1,x2,region,re_u,im_u,abs_u\n");
            for i in 0..*nx1 {
                let x1 = cfg.lambda_period * i as f64 / *nx1 as f64;
                for j in 0..*nx2 {
                    let x2 = lo + (hi - lo) * j as f64 / (*nx2 as f64 - 1.0);
                    let s = sol
                        .field_eval(x1, x2)
                        .map_err(|e| AppError::Run(e.to_string()))?;
                    text.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        fmt_f64(x1),
                        fmt_f64(x2),
                        s.region,
                        fmt_f64(s.value.re),
                        fmt_f64(s.value.im),
                        fmt_f64(s.value.norm())
                    ));
                }
            }
            emit(text, out)
        }
        Command::Sweep {
            axis,
            values,
            scenario,
            h0,
            output,
            timing,
        } => {
            let axis_name = axis
                .clone()
                .or(file.study.axis.clone())
                .unwrap_or_else(|| "delta".into());
            let axis = SweepAxis::parse(&axis_name).map_err(AppError::Config)?;
            let values = values
                .clone()
                .or(file.study.values.clone())
                .unwrap_or_else(|| vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
            let scen_name = scenario
                .clone()
                .or(file.study.scenario.clone())
                .unwrap_or_else(|| "clamped_line".into());
            let scen =
                resolve_scenario(&scen_name, h0.or(file.study.h0)).map_err(AppError::Config)?;
            let spec = StudySpec {
                config: cfg,
                profile,
                axis,
                values,
                scenario: scen,
                timing: *timing,
            };
            let outcome = run_study(&spec).map_err(AppError::Config)?;
            let out_path = output
                .clone()
                .or_else(|| file.study.output.clone().map(PathBuf::from));
            match &out_path {
                Some(p) => {
                    write_csv(&outcome, p).map_err(AppError::Run)?;
                    let s = &outcome.summary;
                    println!(
                        "wrote {} rows to {} (slope_all={}, slope_asymptotic={}, predicted={})",
                        outcome.records.len(),
                        p.display(),
                        s.slope_all.map(fmt_f64).unwrap_or_default(),
                        s.slope_asymptotic.map(fmt_f64).unwrap_or_default(),
                        s.predicted_slope.map(fmt_f64).unwrap_or_default()
                    );
                }
                None => print!("{}", to_csv(&outcome)),
            }
            if outcome.records.iter().any(|r| r.status != "ok") {
                return Err(AppError::Run("one or more sweep points failed".into()));
            }
            Ok(())
        }
        Command::Verify { json } => {
            let report = verify(&cfg, &profile);
            for c in &report.checks {
                println!(
                    "{} {} - {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report)
                    .map_err(|e| AppError::Run(e.to_string()))?;
                std::fs::write(path, text)
                    .map_err(|e| AppError::Run(format!("cannot write {}: {e}", path.display())))?;
            }
            if report.passed {
                Ok(())
            } else {
                Err(AppError::Run("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    // restore default SIGPIPE handling so piping into `head` exits quietly
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
    }
}
