//! Physical and geometric problem parameters.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Parameters of the quasi-periodic strip scattering problem.
///
/// The incident field is the unit-amplitude plane wave
/// `u^i(x) = exp(i(alpha x1 - beta x2))` with `alpha = kappa sin(theta)`,
/// `beta = kappa cos(theta)`. The strip is `{ 0 < x1 < lambda_period,
/// h2 < x2 < h1 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    /// Wavenumber, > 0.
    pub kappa: f64,
    /// Incident angle in radians, |theta| < pi/2.
    pub theta: f64,
    /// Period of the structure along x1, > 0.
    pub lambda_period: f64,
    /// Poisson ratio, 0 <= mu < 1.
    pub mu: f64,
    /// Upper strip boundary.
    pub h1: f64,
    /// Lower strip boundary, h2 < h1.
    pub h2: f64,
    /// Largest retained |n| in mode expansions. Discarded evanescent modes
    /// decay at least like `e^{-gamma_n d}` at distance `d` from the
    /// boundary data driving them, so moderate cutoffs are already tight
    /// for single-mode incident data.
    pub truncation: u32,
}

impl ProblemConfig {
    pub fn new(
        kappa: f64,
        theta: f64,
        lambda_period: f64,
        mu: f64,
        h1: f64,
        h2: f64,
        truncation: u32,
    ) -> Result<Self> {
        let cfg = Self {
            kappa,
            theta,
            lambda_period,
            mu,
            h1,
            h2,
            truncation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidConfig(format!("kappa must be > 0, got {}", self.kappa)));
        }
        if !(self.theta.is_finite() && self.theta.abs() < FRAC_PI_2) {
            return Err(Error::InvalidConfig(format!(
                "theta must lie in (-pi/2, pi/2), got {}",
                self.theta
            )));
        }
        if !(self.lambda_period.is_finite() && self.lambda_period > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "lambda_period must be > 0, got {}",
                self.lambda_period
            )));
        }
        if !(self.mu.is_finite() && (0.0..1.0).contains(&self.mu)) {
            return Err(Error::InvalidConfig(format!("mu must lie in [0, 1), got {}", self.mu)));
        }
        if !(self.h1.is_finite() && self.h2.is_finite() && self.h1 > self.h2) {
            return Err(Error::InvalidConfig(format!(
                "strip boundaries must satisfy h1 > h2, got h1 = {}, h2 = {}",
                self.h1, self.h2
            )));
        }
        Ok(())
    }

    /// Transverse wavenumber of the incident wave, `alpha = kappa sin(theta)`.
    pub fn alpha(&self) -> f64 {
        self.kappa * self.theta.sin()
    }

    /// Vertical wavenumber of the incident wave, `beta = kappa cos(theta)`.
    pub fn beta(&self) -> f64 {
        self.kappa * self.theta.cos()
    }

    /// Modified wavenumber of the zeroth mode, `gamma0 = sqrt(kappa^2 + alpha^2)`.
    pub fn gamma0(&self) -> f64 {
        self.kappa.hypot(self.alpha())
    }

    /// Strip height `h1 - h2`.
    pub fn height(&self) -> f64 {
        self.h1 - self.h2
    }
}

impl Default for ProblemConfig {
    /// Default study configuration: kappa = 1, theta = pi/6, period 2*pi,
    /// mu = 0.3, strip [-1, 1], truncation 30.
    fn default() -> Self {
        Self {
            kappa: 1.0,
            theta: std::f64::consts::FRAC_PI_6,
            lambda_period: 2.0 * std::f64::consts::PI,
            mu: 0.3,
            h1: 1.0,
            h2: -1.0,
            truncation: 30,
        }
    }
}
