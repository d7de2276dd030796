//! Perfectly matched layers: complex coordinate stretching, per-mode layer
//! coefficient solves, PML DtN symbols, the Theta error bound, and a
//! cancellation-free evaluator for the PML-vs-exact symbol error.
//!
//! The layer ansatz per mode is the four-exponential expansion
//!
//! ```text
//! W e^{-i beta (x~ - h)} + V e^{+i beta (x~ - h)} + X e^{+gamma (x~ - h)} + Y e^{-gamma (x~ - h)}
//! ```
//!
//! in the stretched coordinate `x~`, pinned by the trace data at the
//! interface and homogeneous Dirichlet data (value and derivative) at the
//! outer edge. All arithmetic factors the dominant exponential out of the
//! linear system and the denominator, so the machinery stays finite for
//! arbitrarily deep evanescent modes.

use crate::config::ProblemConfig;
use crate::dtn::{exact_symbol, m_weight, n_weight, DtnSymbol, ForcingTerms, SymbolKind};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::modal::{mode_params, Boundary, ModeParams};
use num_complex::Complex64;

/// Relative threshold on the scaled denominator; below this the layer is
/// declared degenerate rather than silently solved.
pub const DENOMINATOR_REL_TOL: f64 = 1e-10;

/// Theta value below which a layer is treated as asymptotically thick.
///
/// The error bound holds for "sufficiently large" thickness; for thin layers
/// (Theta near one) the error carries a transient well above the asymptotic
/// exponential, which contaminates fitted decay rates. Rate fits therefore
/// restrict to sweep points with `theta <= ASYMPTOTIC_THETA`; one-sided
/// bounds (error below a multiple of Theta) hold on the full sweep.
pub const ASYMPTOTIC_THETA: f64 = 0.15;

/// PML layer above (`Upper`, beyond Gamma1) or below (`Lower`, beyond Gamma2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Upper,
    Lower,
}

impl Region {
    pub fn boundary(self) -> Boundary {
        match self {
            Region::Upper => Boundary::Gamma1,
            Region::Lower => Boundary::Gamma2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Region::Upper => "upper",
            Region::Lower => "lower",
        }
    }
}

impl From<Boundary> for Region {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Gamma1 => Region::Upper,
            Boundary::Gamma2 => Region::Lower,
        }
    }
}

/// Power-law stretching profile of the two absorbing layers.
#[derive(Debug, Clone, PartialEq)]
pub struct PmlProfile {
    /// Upper layer thickness, > 0.
    pub delta1: f64,
    /// Lower layer thickness, > 0.
    pub delta2: f64,
    /// Stretching strength, > 0.
    pub sigma0: f64,
    /// Stretching order, integer >= 2.
    pub m: u32,
}

impl PmlProfile {
    pub fn new(delta1: f64, delta2: f64, sigma0: f64, m: u32) -> Result<Self> {
        let p = Self {
            delta1,
            delta2,
            sigma0,
            m,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta1.is_finite() && self.delta1 > 0.0) {
            return Err(Error::InvalidConfig(format!("delta1 must be > 0, got {}", self.delta1)));
        }
        if !(self.delta2.is_finite() && self.delta2 > 0.0) {
            return Err(Error::InvalidConfig(format!("delta2 must be > 0, got {}", self.delta2)));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(Error::InvalidConfig(format!("sigma0 must be > 0, got {}", self.sigma0)));
        }
        if self.m < 2 {
            return Err(Error::InvalidConfig(format!("m must be >= 2, got {}", self.m)));
        }
        Ok(())
    }

    /// Stretched offset of the upper outer edge,
    /// `h~1 = delta1 (1 + i sigma0/(m+1))`.
    pub fn h1_tilde(&self) -> Complex64 {
        self.delta1 * Complex64::new(1.0, self.sigma0 / (self.m as f64 + 1.0))
    }

    /// Stretched offset of the lower outer edge,
    /// `h~2 = -delta2 (1 + i sigma0/(m+1))`.
    pub fn h2_tilde(&self) -> Complex64 {
        -self.delta2 * Complex64::new(1.0, self.sigma0 / (self.m as f64 + 1.0))
    }

    pub fn h_tilde(&self, region: Region) -> Complex64 {
        match region {
            Region::Upper => self.h1_tilde(),
            Region::Lower => self.h2_tilde(),
        }
    }

    pub fn delta(&self, region: Region) -> f64 {
        match region {
            Region::Upper => self.delta1,
            Region::Lower => self.delta2,
        }
    }
}

impl Default for PmlProfile {
    /// Default study profile: unit thickness, sigma0 = 10, m = 2.
    fn default() -> Self {
        Self {
            delta1: 1.0,
            delta2: 1.0,
            sigma0: 10.0,
            m: 2,
        }
    }
}

/// Complex coordinate stretching `phi(x2)`.
///
/// Identity inside the strip; beyond the interfaces the imaginary part grows
/// as the (m+1)-th power of the depth into the layer, reaching
/// `h_k + h~_k` at the outer edges.
pub fn stretch(profile: &PmlProfile, cfg: &ProblemConfig, x2: f64) -> Result<Complex64> {
    let lo = cfg.h2 - profile.delta2;
    let hi = cfg.h1 + profile.delta1;
    if !(lo..=hi).contains(&x2) {
        return Err(Error::OutOfDomain { x2, lo, hi });
    }
    let mp1 = profile.m as f64 + 1.0;
    if x2 > cfg.h1 {
        let t = (x2 - cfg.h1) / profile.delta1;
        Ok(Complex64::new(
            x2,
            profile.sigma0 * profile.delta1 / mp1 * t.powi(profile.m as i32 + 1),
        ))
    } else if x2 < cfg.h2 {
        let t = (cfg.h2 - x2) / profile.delta2;
        Ok(Complex64::new(
            x2,
            -profile.sigma0 * profile.delta2 / mp1 * t.powi(profile.m as i32 + 1),
        ))
    } else {
        Ok(Complex64::from(x2))
    }
}

/// Inverse of the stretching map on the stretched path: recovers the real
/// coordinate `x2` from `x2~ = phi(x2)`. The real part of `phi` is the
/// identity, so the inverse is projection; the imaginary part is checked
/// for consistency with the profile.
pub fn unstretch(profile: &PmlProfile, cfg: &ProblemConfig, x2_tilde: Complex64) -> Result<f64> {
    let x2 = x2_tilde.re;
    let expect = stretch(profile, cfg, x2)?;
    if (expect - x2_tilde).norm() > 1e-9 * (1.0 + x2_tilde.norm()) {
        return Err(Error::OutOfDomain {
            x2: x2_tilde.im,
            lo: expect.im,
            hi: expect.im,
        });
    }
    Ok(x2)
}

/// Exponent basis shared by the closed forms: the five exponential products
/// `E = [1, e^{2 i beta h~}, e^{(i beta + gamma) h~}, e^{2 gamma h~}, e^{2 (i beta + gamma) h~}]`.
fn exponent_set(mode: &ModeParams, h_tilde: Complex64) -> [Complex64; 5] {
    let ib = Complex64::i() * mode.beta_n;
    let g = Complex64::from(mode.gamma_n);
    [
        Complex64::ZERO,
        2.0 * ib * h_tilde,
        (ib + g) * h_tilde,
        2.0 * g * h_tilde,
        2.0 * (ib + g) * h_tilde,
    ]
}

/// Index of the dominant exponential per region: `e^{2 gamma h~1}` above,
/// `e^{2 i beta h~2}` below.
fn dominant_index(region: Region) -> usize {
    match region {
        Region::Upper => 3,
        Region::Lower => 1,
    }
}

/// Coefficients of the denominator over the exponent basis, in the factored
/// forms `i b^2 - i g^2 + 2 b g = -i (g + i b)^2` and
/// `-i b^2 + i g^2 + 2 b g = i (g - i b)^2`, which evaluate without the
/// catastrophic cancellation the expanded sums suffer for deep evanescent
/// modes.
fn denominator_vector(mode: &ModeParams) -> [Complex64; 5] {
    let i = Complex64::i();
    let b = mode.beta_n;
    let g = Complex64::from(mode.gamma_n);
    let plus = i * (g - i * b) * (g - i * b);
    let minus = -i * (g + i * b) * (g + i * b);
    [plus, minus, -8.0 * b * g, minus, plus]
}

/// Scaled denominator `d` with `D = d * exp(scaling_exponent)`; the scaling
/// exponent is `2 gamma h~1` (upper) or `2 i beta h~2` (lower).
///
/// Errors with [`Error::DegenerateDenominator`] when `|d|` falls below
/// `1e-10 |gamma + i beta|^2`, the natural scale of the limiting coefficient.
pub fn denominator(
    mode: &ModeParams,
    h_tilde: Complex64,
    region: Region,
) -> Result<(Complex64, Complex64)> {
    let exps = exponent_set(mode, h_tilde);
    let dvec = denominator_vector(mode);
    let s = exps[dominant_index(region)];
    let mut d = Complex64::ZERO;
    for k in 0..5 {
        d += dvec[k] * (exps[k] - s).exp();
    }
    let scale = (Complex64::from(mode.gamma_n) + Complex64::i() * mode.beta_n).norm_sqr();
    if d.norm() < DENOMINATOR_REL_TOL * scale {
        return Err(Error::DegenerateDenominator {
            n: mode.n,
            region: region.name(),
            value_abs: d.norm(),
        });
    }
    Ok((d, s))
}

/// Closed-form numerator vectors of the layer coefficients over the exponent
/// basis, mapping `(f, g)` trace data (outward-normal convention) to the
/// interface-anchored `(W, V, X, Y)` numerators.
struct ClosedVectors {
    wf: [Complex64; 5],
    wg: [Complex64; 5],
    vf: [Complex64; 5],
    vg: [Complex64; 5],
    xf: [Complex64; 5],
    xg: [Complex64; 5],
    yf: [Complex64; 5],
    yg: [Complex64; 5],
}

fn closed_vectors(mode: &ModeParams, region: Region) -> ClosedVectors {
    let i = Complex64::i();
    let z = Complex64::ZERO;
    let b = mode.beta_n;
    let g = Complex64::from(mode.gamma_n);
    let bg = b * g;

    let wf = [z, bg - i * g * g, -2.0 * bg, z, bg + i * g * g];
    let vf = [bg + i * g * g, z, -2.0 * bg, bg - i * g * g, z];
    let xf = [bg - i * b * b, i * b * b + bg, -2.0 * bg, z, z];
    let yf = [z, z, -2.0 * bg, i * b * b + bg, bg - i * b * b];

    // Upper-region g-parts; the lower region flips their sign (the normal
    // derivative enters the lower system with the opposite orientation).
    let wg = [z, -(b - i * g), -2.0 * i * g, z, i * g + b];
    let vg = [-(b + i * g), z, 2.0 * i * g, b - i * g, z];
    let xg = [b + i * g, b - i * g, -2.0 * b, z, z];
    let yg = [z, z, 2.0 * b, -(b - i * g), -(i * g + b)];

    let sign = match region {
        Region::Upper => 1.0,
        Region::Lower => -1.0,
    };
    let flip = |v: [Complex64; 5]| v.map(|c| sign * c);
    ClosedVectors {
        wf,
        wg: flip(wg),
        vf,
        vg: flip(vg),
        xf,
        xg: flip(xg),
        yf,
        yg: flip(yg),
    }
}

/// Where a layer basis function is anchored for stable evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    Interface,
    Outer,
}

/// Solved per-mode layer coefficients.
///
/// `w, v, x, y` are the coefficients in the interface-anchored basis
/// (every exponential is 1 at `h_k`); they may underflow to zero for deep
/// evanescent modes, which is physical. The `scaled` amplitudes carry the
/// same solution re-anchored so
/// every basis function has unit magnitude at its own anchor; field
/// evaluation uses those.
#[derive(Debug, Clone)]
pub struct LayerCoefficients {
    pub region: Region,
    pub n: i64,
    pub w: Complex64,
    pub v: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    /// Amplitudes in the anchored representation (order W, V, X, Y).
    pub scaled: [Complex64; 4],
    /// Scaled denominator value `d`.
    pub denominator: Complex64,
    /// Exponent of the factored dominant exponential: `D = d e^{scaling_exponent}`.
    pub scaling_exponent: Complex64,
    rates: [Complex64; 4],
    anchors: [Anchor; 4],
    h_tilde: Complex64,
    h_interface: f64,
}

impl LayerCoefficients {
    /// Evaluates the `order`-th stretched-coordinate derivative of the layer
    /// expansion at `x2_tilde`.
    pub fn eval(&self, x2_tilde: Complex64, order: u32) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for j in 0..4 {
            let anchor = match self.anchors[j] {
                Anchor::Interface => Complex64::from(self.h_interface),
                Anchor::Outer => Complex64::from(self.h_interface) + self.h_tilde,
            };
            let r = self.rates[j];
            acc += self.scaled[j] * r.powu(order) * (r * (x2_tilde - anchor)).exp();
        }
        acc
    }

    /// Residuals of the four defining rows (interface value/derivative,
    /// outer value/derivative) for the given data.
    pub fn residuals(&self, fhat: Complex64, ghat: Complex64) -> [Complex64; 4] {
        let h = Complex64::from(self.h_interface);
        let outer = h + self.h_tilde;
        let dsign = match self.region {
            Region::Upper => Complex64::ONE,
            Region::Lower => -Complex64::ONE,
        };
        [
            self.eval(h, 0) - fhat,
            self.eval(h, 1) - dsign * ghat,
            self.eval(outer, 0),
            self.eval(outer, 1),
        ]
    }
}

fn basis_rates(mode: &ModeParams) -> [Complex64; 4] {
    let ib = Complex64::i() * mode.beta_n;
    let g = Complex64::from(mode.gamma_n);
    [-ib, ib, g, -g]
}

/// Solves the four-exponential layer system for one mode by a scaled direct
/// dense solve. `fhat`/`ghat` are the trace data of the expansion at the
/// interface, with `ghat` in the outward-normal convention of the strip.
pub fn layer_coeffs(
    mode: &ModeParams,
    fhat: Complex64,
    ghat: Complex64,
    profile: &PmlProfile,
    region: Region,
) -> Result<LayerCoefficients> {
    let h_tilde = profile.h_tilde(region);
    let (denom, scaling_exponent) = denominator(mode, h_tilde, region)?;

    let i = Complex64::i();
    let b = mode.beta_n;
    let g = Complex64::from(mode.gamma_n);
    let rates = basis_rates(mode);

    // Exponentials of the anchored substitution; all have magnitude <= 1.
    let eb = (i * b * h_tilde).exp(); // upper: e^{i beta h~1}
    let eg = (-g * h_tilde).exp(); // upper: e^{-gamma h~1}
    let fb = (-i * b * h_tilde).exp(); // lower: e^{-i beta h~2}
    let fg = (g * h_tilde).exp(); // lower: e^{+gamma h~2}

    let mut a = DenseMatrix::zeros(4);
    let rhs;
    let anchors;
    match region {
        Region::Upper => {
            // unknowns (W', V, X', Y): W, X anchored at the outer edge
            let row = |m: &mut DenseMatrix, r: usize, vals: [Complex64; 4]| {
                for (c, v) in vals.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            };
            row(&mut a, 0, [eb, Complex64::ONE, eg, Complex64::ONE]);
            row(&mut a, 1, [-i * b * eb, i * b, g * eg, -g]);
            row(&mut a, 2, [Complex64::ONE, eb, Complex64::ONE, eg]);
            row(&mut a, 3, [-i * b, i * b * eb, g, -g * eg]);
            rhs = [fhat, ghat, Complex64::ZERO, Complex64::ZERO];
            anchors = [Anchor::Outer, Anchor::Interface, Anchor::Outer, Anchor::Interface];
        }
        Region::Lower => {
            // unknowns (W, V', X, Y'): V, Y anchored at the outer edge
            let row = |m: &mut DenseMatrix, r: usize, vals: [Complex64; 4]| {
                for (c, v) in vals.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            };
            row(&mut a, 0, [Complex64::ONE, fb, Complex64::ONE, fg]);
            row(&mut a, 1, [-i * b, i * b * fb, g, -g * fg]);
            row(&mut a, 2, [fb, Complex64::ONE, fg, Complex64::ONE]);
            row(&mut a, 3, [-i * b * fb, i * b, g * fg, -g]);
            rhs = [fhat, -ghat, Complex64::ZERO, Complex64::ZERO];
            anchors = [Anchor::Interface, Anchor::Outer, Anchor::Interface, Anchor::Outer];
        }
    }

    let sol = a.solve(&rhs).ok_or(Error::DegenerateDenominator {
        n: mode.n,
        region: region.name(),
        value_abs: denom.norm(),
    })?;
    let scaled = [sol[0], sol[1], sol[2], sol[3]];

    // Paper-basis coefficients: outer-anchored amplitudes pick up the (tiny)
    // exponential back to the interface anchor.
    let (w, v, x, y) = match region {
        Region::Upper => (scaled[0] * eb, scaled[1], scaled[2] * eg, scaled[3]),
        Region::Lower => (scaled[0], scaled[1] * fb, scaled[2], scaled[3] * fg),
    };

    Ok(LayerCoefficients {
        region,
        n: mode.n,
        w,
        v,
        x,
        y,
        scaled,
        denominator: denom,
        scaling_exponent,
        rates,
        anchors,
        h_tilde,
        h_interface: 0.0, // interface height is attached by the caller below
    })
}

/// [`layer_coeffs`] with the interface height recorded for field evaluation.
pub fn layer_coeffs_at(
    mode: &ModeParams,
    fhat: Complex64,
    ghat: Complex64,
    profile: &PmlProfile,
    region: Region,
    h_interface: f64,
) -> Result<LayerCoefficients> {
    let mut lc = layer_coeffs(mode, fhat, ghat, profile, region)?;
    lc.h_interface = h_interface;
    Ok(lc)
}

/// Closed-form evaluation of the layer coefficients (cross-check route
/// for the direct solve). Returns the interface-anchored `(W, V, X, Y)`.
pub fn layer_coeffs_closed_form(
    mode: &ModeParams,
    fhat: Complex64,
    ghat: Complex64,
    profile: &PmlProfile,
    region: Region,
) -> Result<[Complex64; 4]> {
    let h_tilde = profile.h_tilde(region);
    let (d, s) = denominator(mode, h_tilde, region)?;
    let exps = exponent_set(mode, h_tilde);
    let cv = closed_vectors(mode, region);
    let scaled_e: Vec<Complex64> = exps.iter().map(|e| (e - s).exp()).collect();
    let eval = |fv: &[Complex64; 5], gv: &[Complex64; 5]| -> Complex64 {
        let mut acc = Complex64::ZERO;
        for k in 0..5 {
            acc += (fv[k] * fhat + gv[k] * ghat) * scaled_e[k];
        }
        acc / d
    };
    Ok([
        eval(&cv.wf, &cv.wg),
        eval(&cv.vf, &cv.vg),
        eval(&cv.xf, &cv.xg),
        eval(&cv.yf, &cv.yg),
    ])
}

/// PML DtN symbol of one mode, constructed from the scaled layer solve and
/// analytic differentiation of the four-exponential basis at the interface.
pub fn pml_symbol(
    mode: &ModeParams,
    mu: f64,
    profile: &PmlProfile,
    boundary: Boundary,
) -> Result<DtnSymbol> {
    let region = Region::from(boundary);
    let rates = basis_rates(mode);
    let col = |f: Complex64, g: Complex64| -> Result<(Complex64, Complex64)> {
        let lc = layer_coeffs(mode, f, g, profile, region)?;
        let coeffs = [lc.w, lc.v, lc.x, lc.y];
        let mut nv = Complex64::ZERO;
        let mut mv = Complex64::ZERO;
        for j in 0..4 {
            nv += n_weight(boundary, mode.alpha_n, mu, rates[j]) * coeffs[j];
            mv += m_weight(mode.alpha_n, mu, rates[j]) * coeffs[j];
        }
        Ok((nv, mv))
    };
    let (t11, t21) = col(Complex64::ONE, Complex64::ZERO)?;
    let (t12, t22) = col(Complex64::ZERO, Complex64::ONE)?;
    Ok(DtnSymbol {
        boundary,
        n: mode.n,
        entries: [[t11, t12], [t21, t22]],
        kind: SymbolKind::Pml(profile.clone()),
    })
}

/// Numerator vectors of the four PML symbol entries over the exponent basis.
fn symbol_numerators(mode: &ModeParams, mu: f64, boundary: Boundary) -> [[[Complex64; 5]; 2]; 2] {
    let region = Region::from(boundary);
    let cv = closed_vectors(mode, region);
    let rates = basis_rates(mode);
    let nw: Vec<Complex64> = rates
        .iter()
        .map(|&r| n_weight(boundary, mode.alpha_n, mu, r))
        .collect();
    let mw: Vec<Complex64> = rates.iter().map(|&r| m_weight(mode.alpha_n, mu, r)).collect();
    let combine = |weights: &[Complex64], vecs: [&[Complex64; 5]; 4]| -> [Complex64; 5] {
        let mut out = [Complex64::ZERO; 5];
        for (j, vec) in vecs.into_iter().enumerate() {
            for k in 0..5 {
                out[k] += weights[j] * vec[k];
            }
        }
        out
    };
    let fvecs = [&cv.wf, &cv.vf, &cv.xf, &cv.yf];
    let gvecs = [&cv.wg, &cv.vg, &cv.xg, &cv.yg];
    [
        [combine(&nw, fvecs), combine(&nw, gvecs)],
        [combine(&mw, fvecs), combine(&mw, gvecs)],
    ]
}

/// PML DtN symbol entries evaluated through the explicit closed-form
/// numerators (cross-check route for [`pml_symbol`]).
pub fn pml_symbol_closed_form(
    mode: &ModeParams,
    mu: f64,
    profile: &PmlProfile,
    boundary: Boundary,
) -> Result<[[Complex64; 2]; 2]> {
    let region = Region::from(boundary);
    let h_tilde = profile.h_tilde(region);
    let (d, s) = denominator(mode, h_tilde, region)?;
    let exps = exponent_set(mode, h_tilde);
    let nums = symbol_numerators(mode, mu, boundary);
    let mut out = [[Complex64::ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = Complex64::ZERO;
            for k in 0..5 {
                acc += nums[r][c][k] * (exps[k] - s).exp();
            }
            out[r][c] = acc / d;
        }
    }
    Ok(out)
}

/// Entrywise difference `T^_ij - T_ij` between the PML and exact symbols,
/// computed with the dominant term cancelled analytically.
///
/// The dominant exponential's numerator coefficient equals the exact symbol
/// times the matching denominator coefficient, so the difference is a sum of
/// decaying exponentials only; no floating-point cancellation of large terms
/// occurs even when the error is far below the symbol magnitude.
pub fn symbol_error(
    mode: &ModeParams,
    mu: f64,
    profile: &PmlProfile,
    boundary: Boundary,
) -> Result<[[Complex64; 2]; 2]> {
    let region = Region::from(boundary);
    let h_tilde = profile.h_tilde(region);
    let (d, s) = denominator(mode, h_tilde, region)?;
    let exps = exponent_set(mode, h_tilde);
    let dvec = denominator_vector(mode);
    let nums = symbol_numerators(mode, mu, boundary);
    let exact = exact_symbol(mode, mu, boundary);
    let kd = dominant_index(region);
    let mut out = [[Complex64::ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let t = exact.entries[r][c];
            debug_assert!(
                (nums[r][c][kd] - dvec[kd] * t).norm() <= 1e-10 * nums[r][c][kd].norm().max(1e-300),
                "dominant-term identity violated at entry ({r},{c})"
            );
            let mut acc = Complex64::ZERO;
            for k in 0..5 {
                if k == kd {
                    continue;
                }
                acc += (nums[r][c][k] - dvec[k] * t) * (exps[k] - s).exp();
            }
            out[r][c] = acc / d;
        }
    }
    Ok(out)
}

/// PML forcing amplitudes on Gamma1, both multiplying
/// `e^{i(alpha x1 - beta h1)}`: `p^_k = (N1, M1) u^i - T^ (f^i, g^i)` on the
/// unit-amplitude incident trace.
pub fn pml_forcing(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<ForcingTerms> {
    cfg.validate()?;
    profile.validate()?;
    let mode0 = mode_params(cfg, 0)?;
    let sym = pml_symbol(&mode0, cfg.mu, profile, Boundary::Gamma1)?;
    let i = Complex64::i();
    let beta = Complex64::from(cfg.beta());
    let r = -i * beta;
    let f = Complex64::ONE;
    let g = -i * beta;
    let (tf, tg) = sym.apply(f, g);
    Ok(ForcingTerms {
        p1_coeff: n_weight(Boundary::Gamma1, cfg.alpha(), cfg.mu, r) - tf,
        p2_coeff: m_weight(cfg.alpha(), cfg.mu, r) - tg,
    })
}

/// Which exponential attains the Theta maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaBranch {
    /// `e^{-2 delta sigma0 Delta^- / (m+1)}` (propagating modes, damped by sigma0).
    Sigma0DeltaMinus,
    /// `e^{-2 delta sqrt(kappa^2 + alpha^2)}` (modified-wavenumber family).
    Gamma0,
    /// `e^{-2 delta Delta^+}` (evanescent modes).
    DeltaPlus,
}

impl std::fmt::Display for ThetaBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThetaBranch::Sigma0DeltaMinus => write!(f, "sigma0_delta_minus"),
            ThetaBranch::Gamma0 => write!(f, "gamma0"),
            ThetaBranch::DeltaPlus => write!(f, "delta_plus"),
        }
    }
}

/// The Theta error bound of the PML truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBound {
    /// Minimum of `Re beta_n` over propagating modes, when any exist.
    pub delta_minus: Option<f64>,
    /// Minimum of `Im beta_n` over evanescent modes, when any exist.
    pub delta_plus: Option<f64>,
    /// `max{ e^{-2 d s0 D^-/(m+1)}, e^{-2 d gamma0}, e^{-2 d D^+} }` with
    /// `d = min(delta1, delta2)`.
    pub theta: f64,
    pub dominant_branch: ThetaBranch,
    /// Theta evaluated with the per-boundary thicknesses `[delta1, delta2]`.
    pub theta_per_boundary: [f64; 2],
    /// Decay rate `min(sigma0 D^-/(m+1), gamma0, D^+)`: `theta = e^{-2 delta rate}`.
    pub rate: f64,
}

/// Computes the Theta bound by enumerating modes up to the truncation.
pub fn theta_bound(cfg: &ProblemConfig, profile: &PmlProfile) -> Result<ThetaBound> {
    profile.validate()?;
    let modes = crate::modal::mode_range(cfg)?;
    let delta_minus = modes
        .iter()
        .filter(|m| m.propagating)
        .map(|m| m.beta_n.re)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let delta_plus = modes
        .iter()
        .filter(|m| !m.propagating)
        .map(|m| m.beta_n.im)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));

    let mp1 = profile.m as f64 + 1.0;
    let gamma0 = cfg.gamma0();
    let branch_rates = [
        delta_minus.map(|dm| (ThetaBranch::Sigma0DeltaMinus, profile.sigma0 * dm / mp1)),
        Some((ThetaBranch::Gamma0, gamma0)),
        delta_plus.map(|dp| (ThetaBranch::DeltaPlus, dp)),
    ];
    let theta_for = |delta: f64| -> (f64, ThetaBranch, f64) {
        let mut best = f64::NEG_INFINITY;
        let mut branch = ThetaBranch::Gamma0;
        let mut rate = gamma0;
        for br in branch_rates.iter().flatten() {
            let v = (-2.0 * delta * br.1).exp();
            if v > best {
                best = v;
                branch = br.0;
                rate = br.1;
            }
        }
        (best, branch, rate)
    };
    let delta = profile.delta1.min(profile.delta2);
    let (theta, dominant_branch, rate) = theta_for(delta);
    Ok(ThetaBound {
        delta_minus,
        delta_plus,
        theta,
        dominant_branch,
        theta_per_boundary: [theta_for(profile.delta1).0, theta_for(profile.delta2).0],
        rate,
    })
}
