//! Stationary and non-stationary phase engine.
//!
//! Covers the quantitative hypotheses and the leading term of the stationary
//! phase lemma, the fast decay of compactly supported non-stationary
//! integrals, the Fresnel-type bound for `∫₀¹ e^{iλs²} ds`, and the
//! oscillatory integrals `I^{j,k}_N(s)` produced by the oscillatory test data.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::quad::{composite_quadrature, OscIntegrand};
use crate::theory::PhaseFamily;

/// A quantitative margin together with whether it is positive.
#[derive(Debug, Clone, Copy)]
pub struct ConditionMargin {
    pub holds: bool,
    pub margin: f64,
}

impl ConditionMargin {
    fn from_margin(margin: f64) -> Self {
        ConditionMargin { holds: margin > 0.0, margin }
    }
}

/// Measured hypotheses of the stationary phase lemma for one integrand.
#[derive(Debug, Clone, Copy)]
pub struct StationaryReport {
    /// Root of `φ'`, when one exists.
    pub z: Option<f64>,
    /// `φ''(z)`; NaN when there is no stationary point.
    pub phase_dd_at_z: f64,
    /// Distance of `z` from the boundary of `]lo+c, hi-c[`.
    pub cond_i: ConditionMargin,
    /// `min |φ'|` over the edge strips `[lo, lo+c] ∪ [hi-c, hi]`.
    pub cond_ii: ConditionMargin,
    /// `min |φ''|` over `[lo, hi]`.
    pub cond_iii: ConditionMargin,
    /// `max` of `|ψ^{(d)}|` (d ≤ 2) and `|φ^{(d+3)}|` (d ≤ 2); holds when finite.
    pub cond_iv: ConditionMargin,
}

/// Main term of the stationary phase expansion.
#[derive(Debug, Clone, Copy)]
pub struct LeadingTerm {
    pub value: Complex64,
    /// The `1/λ` reference scale of the remainder.
    pub remainder_bound_scale: f64,
}

const MESH: usize = 1000;

fn min_on_mesh(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    (0..=MESH)
        .map(|i| f(lo + (hi - lo) * i as f64 / MESH as f64))
        .fold(f64::INFINITY, f64::min)
}

fn max_on_mesh(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    (0..=MESH)
        .map(|i| f(lo + (hi - lo) * i as f64 / MESH as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Locate the root of `φ'` by bisection on a sign change, then one Newton
/// polish step. Returns `None` when `φ'` never changes sign on the mesh.
fn locate_stationary_point(f: &OscIntegrand) -> Option<f64> {
    let dphi = |s: f64| (f.phase)(s, 1);
    let scan = 1024;
    let h = (f.hi - f.lo) / scan as f64;
    let mut bracket = None;
    let mut prev = dphi(f.lo);
    for i in 1..=scan {
        let s = f.lo + i as f64 * h;
        let cur = dphi(s);
        if prev == 0.0 {
            return Some(f.lo + (i - 1) as f64 * h);
        }
        if prev.signum() != cur.signum() {
            bracket = Some((s - h, s));
            break;
        }
        prev = cur;
    }
    let (mut a, mut b) = bracket?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a < 1e-12 {
            break;
        }
        if dphi(a).signum() == dphi(mid).signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    let mut z = 0.5 * (a + b);
    let ddz = (f.phase)(z, 2);
    if ddz != 0.0 {
        let polished = z - dphi(z) / ddz;
        if polished > f.lo && polished < f.hi {
            z = polished;
        }
    }
    Some(z)
}

/// Measure conditions (i)-(iv) of the stationary phase lemma with edge width `c`.
///
/// Absence of a stationary point is not an error: the report comes back with
/// `cond_i.holds == false` and `z == None`.
pub fn verify_sp_conditions(f: &OscIntegrand, c: f64) -> Result<StationaryReport> {
    if !(c > 0.0) || 2.0 * c >= f.hi - f.lo {
        return Err(Error::Domain(format!("edge width c = {c} does not fit in the interval")));
    }
    let z = locate_stationary_point(f);
    let cond_i = match z {
        Some(z) => ConditionMargin::from_margin((z - (f.lo + c)).min((f.hi - c) - z)),
        None => ConditionMargin { holds: false, margin: f64::NEG_INFINITY },
    };
    let dphi_abs = |s: f64| (f.phase)(s, 1).abs();
    let cond_ii = ConditionMargin::from_margin(
        min_on_mesh(dphi_abs, f.lo, f.lo + c).min(min_on_mesh(dphi_abs, f.hi - c, f.hi)),
    );
    let cond_iii =
        ConditionMargin::from_margin(min_on_mesh(|s| (f.phase)(s, 2).abs(), f.lo, f.hi));
    let mut high = f64::NEG_INFINITY;
    for d in 0..=2usize {
        high = high.max(max_on_mesh(|s| (f.amplitude)(s, d).abs(), f.lo, f.hi));
        high = high.max(max_on_mesh(|s| (f.phase)(s, d + 3).abs(), f.lo, f.hi));
    }
    let cond_iv = ConditionMargin { holds: high.is_finite(), margin: high };
    Ok(StationaryReport {
        z,
        phase_dd_at_z: z.map_or(f64::NAN, |z| (f.phase)(z, 2)),
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
    })
}

/// `√(2π/(λ|φ''(z)|)) ψ(z) e^{iλφ(z) + i sgn(φ''(z)) π/4}`.
pub fn stationary_leading_term(f: &OscIntegrand, z: f64) -> Result<LeadingTerm> {
    let ddz = (f.phase)(z, 2);
    if ddz.abs() < 1e-14 {
        return Err(Error::DegenerateStationary { value: ddz });
    }
    let modulus = (std::f64::consts::TAU / (f.lambda * ddz.abs())).sqrt() * (f.amplitude)(z, 0);
    let arg = f.lambda * (f.phase)(z, 0) + ddz.signum() * std::f64::consts::FRAC_PI_4;
    Ok(LeadingTerm {
        value: modulus * Complex64::from_polar(1.0, arg),
        remainder_bound_scale: 1.0 / f.lambda,
    })
}

/// One row of a decay-bound sweep.
#[derive(Debug, Clone, Copy)]
pub struct DecayRow {
    pub lambda: f64,
    pub magnitude: f64,
    pub bound: f64,
    /// `magnitude / (C * bound)` with the calibrated constant.
    pub ratio: f64,
}

/// Result of a decay-bound sweep over a frequency ladder.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// Constant calibrated at the smallest ladder frequency, times 3.
    pub calibrated_constant: f64,
    pub max_ratio: f64,
    /// Log-log slope over the upper half of the ladder.
    pub tail_slope: f64,
}

fn decay_sweep(
    magnitudes: &[(f64, f64)],
    bound: impl Fn(f64) -> f64,
) -> DecayReport {
    let (l0, m0) = magnitudes[0];
    let calibrated_constant = 3.0 * m0 / bound(l0);
    let rows: Vec<DecayRow> = magnitudes
        .iter()
        .map(|&(lambda, magnitude)| {
            let b = bound(lambda);
            DecayRow { lambda, magnitude, bound: b, ratio: magnitude / (calibrated_constant * b) }
        })
        .collect();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    let tail: Vec<&DecayRow> =
        rows.iter().skip(rows.len() / 2).filter(|r| r.magnitude > 0.0 && r.lambda > 0.0).collect();
    let tail_slope = if tail.len() >= 2 {
        let xs: Vec<f64> = tail.iter().map(|r| r.lambda.ln()).collect();
        let ys: Vec<f64> = tail.iter().map(|r| r.magnitude.ln()).collect();
        linear_fit(&xs, &ys).0
    } else {
        f64::NAN
    };
    DecayReport { rows, calibrated_constant, max_ratio, tail_slope }
}

/// Check `|∫ ψ(s) e^{iλs} ds| <= C min{1/(1+λ), 1/(1+λ²)}` over a ladder.
///
/// The amplitude must be smooth and supported strictly inside `support`.
pub fn nonstationary_decay_check(
    amplitude: impl Fn(f64, usize) -> f64 + Sync + Send + Copy + 'static,
    support: (f64, f64),
    lambdas: &[f64],
) -> Result<DecayReport> {
    if lambdas.is_empty() {
        return Err(Error::Domain("empty frequency ladder".into()));
    }
    let mags: Vec<(f64, f64)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let f = OscIntegrand::new(
                support.0,
                support.1,
                lambda,
                |s, d| match d {
                    0 => s,
                    1 => 1.0,
                    _ => 0.0,
                },
                amplitude,
            );
            composite_quadrature(&f, 16).map(|v| (lambda, v.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(decay_sweep(&mags, |l| (1.0 / (1.0 + l.abs())).min(1.0 / (1.0 + l * l))))
}

/// Check `|∫₀¹ e^{iλs²} ds| <= C max{1/(1+√λ), 1/(1+λ)}` over a ladder.
///
/// The fitted tail slope should be close to -1/2.
pub fn fresnel_bound_check(lambdas: &[f64]) -> Result<DecayReport> {
    if lambdas.is_empty() {
        return Err(Error::Domain("empty frequency ladder".into()));
    }
    if lambdas.iter().any(|&l| l < 0.0) {
        return Err(Error::Domain("frequencies must be nonnegative".into()));
    }
    let mags: Vec<(f64, f64)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let f = OscIntegrand::new(
                0.0,
                1.0,
                lambda,
                |s, d| match d {
                    0 => s * s,
                    1 => 2.0 * s,
                    2 => 2.0,
                    _ => 0.0,
                },
                |_, d| if d == 0 { 1.0 } else { 0.0 },
            );
            composite_quadrature(&f, 16).map(|v| (lambda, v.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(decay_sweep(&mags, |l| {
        (1.0 / (1.0 + l.sqrt())).max(1.0 / (1.0 + l))
    }))
}

/// Completed-square center of the phase `ρ^j s^k + 2ρ² - 2ρ`.
///
/// `(2 - s^k)/4 ∈ [1/4, 1/2]` for `j = 1`, `1/(2 + s^k) ∈ [1/3, 1/2]` for `j = 2`.
pub fn completed_square_center(family: PhaseFamily, s: f64) -> f64 {
    let sk = s.powi(family.k() as i32);
    if family.j() == 1 {
        (2.0 - sk) / 4.0
    } else {
        1.0 / (2.0 + sk)
    }
}

fn ijk_integrand(family: PhaseFamily, n_freq: f64, s: f64) -> OscIntegrand {
    let j = family.j() as i32;
    let n = family.n() as i32;
    let sk = s.powi(family.k() as i32);
    OscIntegrand::new(
        0.0,
        1.0,
        n_freq,
        move |rho, d| match d {
            0 => rho.powi(j) * sk + 2.0 * rho * rho - 2.0 * rho,
            1 => j as f64 * rho.powi(j - 1) * sk + 4.0 * rho - 2.0,
            2 => (j * (j - 1)) as f64 * rho.powi((j - 2).max(0)) * sk * if j >= 2 { 1.0 } else { 0.0 } + 4.0,
            _ => 0.0,
        },
        move |rho, d| match d {
            0 => rho.powi(n - 1),
            1 => (n - 1) as f64 * rho.powi((n - 2).max(0)) * if n >= 2 { 1.0 } else { 0.0 },
            2 => ((n - 1) * (n - 2)) as f64 * rho.powi((n - 3).max(0)) * if n >= 3 { 1.0 } else { 0.0 },
            _ => 0.0,
        },
    )
}

/// `I^{j,k}_N(s) = ∫₀¹ e^{iN(ρ^j s^k + 2ρ² - 2ρ)} ρ^{n-1} dρ`.
pub fn oscillatory_integral_ijk(family: PhaseFamily, n_freq: f64, s: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0,1]")));
    }
    composite_quadrature(&ijk_integrand(family, n_freq, s), 16)
}

/// `I^{j,k}_N(s)` next to the square-completed main term `z^{n-1} √(π/2N)`.
#[derive(Debug, Clone, Copy)]
pub struct IjkReport {
    pub value: Complex64,
    pub center: f64,
    pub main_term_magnitude: f64,
    /// `|I| / main_term_magnitude`.
    pub ratio: f64,
}

pub fn oscillatory_integral_ijk_report(
    family: PhaseFamily,
    n_freq: f64,
    s: f64,
) -> Result<IjkReport> {
    let value = oscillatory_integral_ijk(family, n_freq, s)?;
    let center = completed_square_center(family, s);
    let main = center.powi(family.n() as i32 - 1)
        * (std::f64::consts::PI / (2.0 * n_freq)).sqrt();
    Ok(IjkReport { value, center, main_term_magnitude: main, ratio: value.norm() / main })
}
