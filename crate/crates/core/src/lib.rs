//! Flexural (biharmonic) wave scattering in a quasi-periodic strip.
//!
//! The incident plane wave `u^i = e^{i(alpha x1 - beta x2)}` hits a periodic
//! structure inside the strip `h2 < x2 < h1`; the total out-of-plane
//! displacement satisfies `Delta^2 u - kappa^4 u = 0` with quasi-periodic
//! side conditions. The library implements, per quasi-periodic Fourier mode:
//!
//! - the exact Dirichlet-to-Neumann symbols that close the strip problem
//!   with transparent boundary conditions ([`dtn`]),
//! - the perfectly-matched-layer closure obtained by complex coordinate
//!   stretching, its DtN symbols, and the exponential error bound Theta
//!   ([`pml`]),
//! - separable scattering solves under either closure with field
//!   reconstruction everywhere ([`solver`]),
//! - an independent finite-difference oracle ([`oracle`]).
//!
//! Every value is immutable after construction and every operation is a
//! pure function; all computations are safe to run concurrently and give
//! bit-identical results regardless of call order.

pub mod config;
pub mod dtn;
pub mod error;
pub mod linalg;
pub mod modal;
pub mod oracle;
pub mod pml;
pub mod solver;

pub use config::ProblemConfig;
pub use error::{Error, Result};
pub use modal::{Boundary, ModeParams, TraceCoefficients, TraceComponent};
pub use pml::{PmlProfile, Region, ThetaBound, ThetaBranch};
pub use solver::{Scenario, Solution, SolutionErrors, SymbolChoice};
