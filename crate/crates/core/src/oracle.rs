//! Independent finite-difference oracle for the per-mode two-point boundary
//! value problem `(d^2/dx2^2 - alpha_n^2)^2 u - kappa^4 u = 0`.
//!
//! Second-order central differences discretize the interior; boundary rows
//! reuse the exact DtN symbols of the analytic solver but discretize the
//! derivative combinations with one-sided stencils of fourth-order accuracy,
//! so the observed convergence rate stays at the interior's O(h^2).

use crate::config::ProblemConfig;
use crate::dtn::{exact_symbol, DtnSymbol};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::modal::{mode_params, Boundary, ModeParams};
use crate::solver::{boundary_rhs, Scenario, SymbolChoice};
use num_complex::Complex64;

/// Uniform grid with solved node values on one vertical segment.
#[derive(Debug, Clone)]
pub struct FdGrid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub h: f64,
    pub values: Vec<Complex64>,
}

impl FdGrid {
    pub fn node(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fornberg finite-difference weights: `out[k][j]` is the weight of node
/// `xs[j]` in the k-th derivative at `x0`, for all `k <= max_order`.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0f64; max_order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    (0..=max_order)
        .map(|k| (0..n).map(|j| c[j][k]).collect())
        .collect()
}

/// Boundary closure of one segment end.
enum EndCondition<'a> {
    /// Transparent rows with the given symbol and `[N, M]` right-hand sides.
    Tbc {
        boundary: Boundary,
        symbol: &'a DtnSymbol,
        rhs: [Complex64; 2],
    },
    /// Clamped line: `u = 0`, `u' = 0`.
    Clamped,
}

/// One-sided stencil weights for `u', u'', u'''` of fourth-order accuracy at
/// a segment end; `dir = +1` at the low end, `-1` at the high end.
fn end_stencils(h: f64, dir: f64) -> [Vec<f64>; 3] {
    let d1 = fornberg_weights(0.0, &(0..5).map(|i| dir * i as f64 * h).collect::<Vec<_>>(), 1);
    let d2 = fornberg_weights(0.0, &(0..6).map(|i| dir * i as f64 * h).collect::<Vec<_>>(), 2);
    let d3 = fornberg_weights(0.0, &(0..7).map(|i| dir * i as f64 * h).collect::<Vec<_>>(), 3);
    [d1[1].clone(), d2[2].clone(), d3[3].clone()]
}

#[allow(clippy::too_many_arguments)]
fn apply_end(
    band: &mut BandMatrix,
    rhs: &mut [Complex64],
    end: EndCondition<'_>,
    at_lo: bool,
    m: usize,
    h: f64,
    mu: f64,
    a2: f64,
) {
    let (e, dir, rows): (usize, f64, [usize; 2]) = if at_lo {
        (0, 1.0, [0, 1])
    } else {
        (m, -1.0, [m, m - 1])
    };
    let idx = |offset: usize| -> usize {
        if at_lo {
            e + offset
        } else {
            e - offset
        }
    };
    let [w1, w2, w3] = end_stencils(h, dir);
    match end {
        EndCondition::Clamped => {
            band.add(rows[0], e, Complex64::ONE);
            for (j, w) in w1.iter().enumerate() {
                band.add(rows[1], idx(j), Complex64::from(*w));
            }
        }
        EndCondition::Tbc {
            boundary,
            symbol,
            rhs: brhs,
        } => {
            let t = &symbol.entries;
            // trace orientation: g = sign * u' with sign = +1 on Gamma1, -1 on Gamma2
            let (n_du, n_d3, g_sign) = match boundary {
                // N1 = (2-mu) a^2 u' - u''' ; N2 = -(2-mu) a^2 u' + u'''
                Boundary::Gamma1 => ((2.0 - mu) * a2, -1.0, 1.0),
                Boundary::Gamma2 => (-(2.0 - mu) * a2, 1.0, -1.0),
            };
            // N row: n_du u' + n_d3 u''' - t11 u - t12 g
            band.add(rows[0], e, -t[0][0]);
            for (j, w) in w1.iter().enumerate() {
                band.add(rows[0], idx(j), Complex64::from(n_du * w) - t[0][1] * g_sign * w);
            }
            for (j, w) in w3.iter().enumerate() {
                band.add(rows[0], idx(j), Complex64::from(n_d3 * w));
            }
            rhs[rows[0]] = brhs[0];
            // M row: -mu a^2 u + u'' - t21 u - t22 g
            band.add(rows[1], e, Complex64::from(-mu * a2) - t[1][0]);
            for (j, w) in w2.iter().enumerate() {
                band.add(rows[1], idx(j), Complex64::from(*w));
            }
            for (j, w) in w1.iter().enumerate() {
                band.add(rows[1], idx(j), -t[1][1] * g_sign * w);
            }
            rhs[rows[1]] = brhs[1];
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_segment(
    mode: &ModeParams,
    kappa: f64,
    mu: f64,
    x_lo: f64,
    x_hi: f64,
    h_req: f64,
    lo_end: EndCondition<'_>,
    hi_end: EndCondition<'_>,
) -> Result<FdGrid> {
    let len = x_hi - x_lo;
    let m = ((len / h_req).round() as usize).max(8);
    let h = len / m as f64;
    let n_nodes = m + 1;
    let a2 = mode.alpha_n * mode.alpha_n;
    let kappa4 = kappa.powi(4);

    let mut band = BandMatrix::zeros(n_nodes, 6, 6);
    let mut rhs = vec![Complex64::ZERO; n_nodes];

    // interior rows: u'''' - 2 a^2 u'' + (a^4 - kappa^4) u = 0
    let h2 = h * h;
    let h4 = h2 * h2;
    for i in 2..=(m - 2) {
        let w4 = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (o, w) in w4.iter().enumerate() {
            band.add(i, i + o - 2, Complex64::from(w / h4));
        }
        let w2 = [1.0, -2.0, 1.0];
        for (o, w) in w2.iter().enumerate() {
            band.add(i, i + o - 1, Complex64::from(-2.0 * a2 * w / h2));
        }
        band.add(i, i, Complex64::from(a2 * a2 - kappa4));
    }

    // end rows occupy node slots (0, 1) and (m-1, m)
    apply_end(&mut band, &mut rhs, lo_end, true, m, h, mu, a2);
    apply_end(&mut band, &mut rhs, hi_end, false, m, h, mu, a2);

    band.equilibrate(&mut rhs);
    let values = band.solve(&rhs).ok_or(Error::SingularSystem { cond: f64::INFINITY })?;
    Ok(FdGrid {
        x_lo,
        x_hi,
        h,
        values,
    })
}

/// Finite-difference solve of mode `n` under exact DtN boundary rows.
///
/// Returns one grid per segment in ascending order (two when the scenario
/// carries a clamped line).
pub fn fd_solve_mode(
    cfg: &ProblemConfig,
    scenario: &Scenario,
    n: i64,
    h: f64,
) -> Result<Vec<FdGrid>> {
    cfg.validate()?;
    scenario.validate(cfg)?;
    let mode = mode_params(cfg, n)?;

    // the grid must resolve the fastest vertical scale with >= 20 points
    let scale = (1.0 / mode.gamma_n).min(1.0 / mode.beta_n.norm());
    let max_h = scale / 20.0;
    if h > max_h {
        return Err(Error::StepTooCoarse { h, max_h, n });
    }

    let s1 = exact_symbol(&mode, cfg.mu, Boundary::Gamma1);
    let s2 = exact_symbol(&mode, cfg.mu, Boundary::Gamma2);
    let rhs = boundary_rhs(cfg, scenario, n, &SymbolChoice::Exact)?;

    let clamp = match scenario {
        Scenario::EmptyStrip => None,
        Scenario::ClampedLine { h0 } => Some(*h0),
        Scenario::CustomTraceForcing { h0, .. } => *h0,
    };

    match clamp {
        None => {
            let grid = solve_segment(
                &mode,
                cfg.kappa,
                cfg.mu,
                cfg.h2,
                cfg.h1,
                h,
                EndCondition::Tbc {
                    boundary: Boundary::Gamma2,
                    symbol: &s2,
                    rhs: [rhs[2], rhs[3]],
                },
                EndCondition::Tbc {
                    boundary: Boundary::Gamma1,
                    symbol: &s1,
                    rhs: [rhs[0], rhs[1]],
                },
            )?;
            Ok(vec![grid])
        }
        Some(h0) => {
            let lower = solve_segment(
                &mode,
                cfg.kappa,
                cfg.mu,
                cfg.h2,
                h0,
                h,
                EndCondition::Tbc {
                    boundary: Boundary::Gamma2,
                    symbol: &s2,
                    rhs: [rhs[2], rhs[3]],
                },
                EndCondition::Clamped,
            )?;
            let upper = solve_segment(
                &mode,
                cfg.kappa,
                cfg.mu,
                h0,
                cfg.h1,
                h,
                EndCondition::Clamped,
                EndCondition::Tbc {
                    boundary: Boundary::Gamma1,
                    symbol: &s1,
                    rhs: [rhs[0], rhs[1]],
                },
            )?;
            Ok(vec![lower, upper])
        }
    }
}

/// Richardson extrapolation of two solves at steps `h` and `h/2` onto the
/// coarse nodes; the result is fourth-order accurate.
pub fn richardson(coarse: &FdGrid, fine: &FdGrid) -> FdGrid {
    assert!(
        (fine.h * 2.0 - coarse.h).abs() < 1e-12 * coarse.h,
        "fine grid must halve the coarse step"
    );
    let values = (0..coarse.len())
        .map(|i| (4.0 * fine.values[2 * i] - coarse.values[i]) / 3.0)
        .collect();
    FdGrid {
        x_lo: coarse.x_lo,
        x_hi: coarse.x_hi,
        h: coarse.h,
        values,
    }
}
