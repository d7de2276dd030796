//! Error types shared across the library.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A configuration parameter violates its validity range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The mode sits at a cutoff (beta_n ~ 0), excluded by assumption.
    #[error("resonance at mode n = {n}: |beta_n| = {beta_abs:.3e} below threshold")]
    Resonance { n: i64, beta_abs: f64 },

    /// The scaled PML denominator is too close to zero for a reliable solve.
    #[error("degenerate PML denominator at mode n = {n} ({region}): |value| = {value_abs:.3e}")]
    DegenerateDenominator {
        n: i64,
        region: &'static str,
        value_abs: f64,
    },

    /// The assembled boundary system is numerically singular.
    #[error("singular system: condition estimate {cond:.3e} exceeds threshold")]
    SingularSystem { cond: f64 },

    /// A populated trace mode has no matching symbol.
    #[error("no symbol provided for populated mode n = {n}")]
    MissingSymbol { n: i64 },

    /// Requested point lies outside the computable domain.
    #[error("coordinate x2 = {x2} outside the domain [{lo}, {hi}]")]
    OutOfDomain { x2: f64, lo: f64, hi: f64 },

    /// No mode index satisfying the requested property was found.
    #[error("no mode index up to {n_max} satisfies the requested property")]
    NotFound { n_max: i64 },

    /// Finite-difference step too coarse for the requested mode.
    #[error("grid step {h} too coarse: need h <= {max_h:.3e} to resolve mode n = {n}")]
    StepTooCoarse { h: f64, max_h: f64, n: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
