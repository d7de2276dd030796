//! Quasi-periodic mode parameters, boundary trace coefficients, and the
//! discrete Sobolev trace norms built on them.
//!
//! Mode `n` carries `alpha_n = alpha + 2 pi n / Lambda`, the vertical
//! wavenumber `beta_n` (real positive for propagating modes, positive
//! imaginary otherwise), and the modified wavenumber
//! `gamma_n = sqrt(kappa^2 + alpha_n^2)`.

use crate::config::ProblemConfig;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Relative threshold below which |beta_n| is treated as a resonance.
pub const RESONANCE_REL_TOL: f64 = 1e-12;

/// Strip boundary tag. `Gamma1` is the upper boundary `x2 = h1`,
/// `Gamma2` the lower boundary `x2 = h2`. Outward normals are +x2 and -x2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Boundary {
    Gamma1,
    Gamma2,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Gamma1 => write!(f, "Gamma1"),
            Boundary::Gamma2 => write!(f, "Gamma2"),
        }
    }
}

/// Per-mode wavenumber triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub n: i64,
    /// Transverse wavenumber `alpha + 2 pi n / Lambda` (real).
    pub alpha_n: f64,
    /// Vertical wavenumber: real > 0 if propagating, else positive imaginary.
    pub beta_n: Complex64,
    /// Modified wavenumber `sqrt(kappa^2 + alpha_n^2)` (> 0).
    pub gamma_n: f64,
    /// True iff `kappa > |alpha_n|`.
    pub propagating: bool,
}

/// Computes the mode-`n` wavenumber triple, erroring out at cutoff.
pub fn mode_params(cfg: &ProblemConfig, n: i64) -> Result<ModeParams> {
    cfg.validate()?;
    let alpha_n = cfg.alpha() + 2.0 * PI * (n as f64) / cfg.lambda_period;
    let kappa2 = cfg.kappa * cfg.kappa;
    let diff = kappa2 - alpha_n * alpha_n;
    let propagating = cfg.kappa > alpha_n.abs();
    let beta_n = if propagating {
        Complex64::new(diff.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-diff).sqrt())
    };
    if beta_n.norm() < RESONANCE_REL_TOL * cfg.kappa {
        return Err(Error::Resonance {
            n,
            beta_abs: beta_n.norm(),
        });
    }
    let gamma_n = (kappa2 + alpha_n * alpha_n).sqrt();
    Ok(ModeParams {
        n,
        alpha_n,
        beta_n,
        gamma_n,
        propagating,
    })
}

/// All modes with `|n| <= cfg.truncation`, in increasing `n` order.
pub fn mode_range(cfg: &ProblemConfig) -> Result<Vec<ModeParams>> {
    let t = cfg.truncation as i64;
    (-t..=t).map(|n| mode_params(cfg, n)).collect()
}

/// Sparse Fourier-coefficient representation of the Dirichlet data
/// `(u, d_nu u)` of a quasi-periodic function on one strip boundary.
///
/// The map sends the mode index `n` to the pair `(f_n, g_n)`; absent
/// indices are zero. Normal derivatives use the strip's outward normal
/// (+x2 on Gamma1, -x2 on Gamma2).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCoefficients {
    pub boundary: Boundary,
    pub coeffs: BTreeMap<i64, (Complex64, Complex64)>,
}

/// Selector for the value (`F`) or normal-derivative (`G`) component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceComponent {
    F,
    G,
}

impl TraceCoefficients {
    pub fn zero(boundary: Boundary) -> Self {
        Self {
            boundary,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn get(&self, n: i64) -> (Complex64, Complex64) {
        self.coeffs
            .get(&n)
            .copied()
            .unwrap_or((Complex64::ZERO, Complex64::ZERO))
    }

    pub fn insert(&mut self, n: i64, f: Complex64, g: Complex64) {
        self.coeffs.insert(n, (f, g));
    }

    /// Largest |n| with a stored coefficient.
    pub fn support_bound(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// Entrywise difference of two traces on the same boundary.
    pub fn difference(&self, other: &Self) -> Self {
        assert_eq!(self.boundary, other.boundary, "traces on different boundaries");
        let mut out = Self::zero(self.boundary);
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        for n in keys {
            let (fa, ga) = self.get(n);
            let (fb, gb) = other.get(n);
            out.insert(n, fa - fb, ga - gb);
        }
        out
    }

    /// Samples the selected component at `m` equispaced points of one period.
    pub fn sample(&self, cfg: &ProblemConfig, component: TraceComponent, m: usize) -> Vec<Complex64> {
        let alpha = cfg.alpha();
        let step = cfg.lambda_period / m as f64;
        (0..m)
            .map(|j| {
                let x1 = j as f64 * step;
                let mut acc = Complex64::ZERO;
                for (&n, &(f, g)) in &self.coeffs {
                    let alpha_n = alpha + 2.0 * PI * (n as f64) / cfg.lambda_period;
                    let c = match component {
                        TraceComponent::F => f,
                        TraceComponent::G => g,
                    };
                    acc += c * (Complex64::i() * alpha_n * x1).exp();
                }
                acc
            })
            .collect()
    }

    /// Recovers the coefficients of one component from equispaced samples.
    ///
    /// Exact (up to rounding) whenever the sample count is at least
    /// `2 * support_bound + 1`.
    pub fn project(
        cfg: &ProblemConfig,
        boundary: Boundary,
        component: TraceComponent,
        samples: &[Complex64],
        n_max: i64,
    ) -> Self {
        let m = samples.len();
        let alpha = cfg.alpha();
        let step = cfg.lambda_period / m as f64;
        let mut out = Self::zero(boundary);
        for n in -n_max..=n_max {
            let alpha_n = alpha + 2.0 * PI * (n as f64) / cfg.lambda_period;
            let mut acc = Complex64::ZERO;
            for (j, s) in samples.iter().enumerate() {
                let x1 = j as f64 * step;
                acc += s * (-Complex64::i() * alpha_n * x1).exp();
            }
            let c = acc / m as f64;
            match component {
                TraceComponent::F => out.insert(n, c, Complex64::ZERO),
                TraceComponent::G => out.insert(n, Complex64::ZERO, c),
            }
        }
        out
    }
}

/// Trace of the incident plane wave on Gamma1.
///
/// Only the zeroth mode is populated: `f_0 = exp(-i beta h1)` and
/// `g_0 = -i beta exp(-i beta h1)` (outward normal +x2).
pub fn incident_trace(cfg: &ProblemConfig) -> TraceCoefficients {
    let beta = cfg.beta();
    let phase = (-Complex64::i() * beta * cfg.h1).exp();
    let mut t = TraceCoefficients::zero(Boundary::Gamma1);
    t.insert(0, phase, -Complex64::i() * beta * phase);
    t
}

/// Discrete Sobolev trace norm
/// `(Lambda * sum_n (1 + alpha_n^2)^s |c_n|^2)^{1/2}` over one component.
pub fn sobolev_trace_norm(
    cfg: &ProblemConfig,
    trace: &TraceCoefficients,
    component: TraceComponent,
    s: f64,
) -> f64 {
    let alpha = cfg.alpha();
    let mut acc = 0.0;
    for (&n, &(f, g)) in &trace.coeffs {
        let alpha_n = alpha + 2.0 * PI * (n as f64) / cfg.lambda_period;
        let c = match component {
            TraceComponent::F => f,
            TraceComponent::G => g,
        };
        acc += (1.0 + alpha_n * alpha_n).powf(s) * c.norm_sqr();
    }
    (cfg.lambda_period * acc).sqrt()
}
