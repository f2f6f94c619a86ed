//! Discretized `T^{j,k}_N` as a radially reduced weighted operator, its
//! `L^p -> L^q` norm bounds, and decay-exponent fits.
//!
//! The kernel depends on `x` only through `|x|`, so replacing `f` by its
//! spherical average preserves `Tf` and does not increase `‖f‖_p`; the
//! production path is therefore always the weighted one-dimensional operator
//! `f ↦ ω_{n-1} ∫₀¹ f(ρ) e^{iNρ^j s^k} ρ^{n-1} dρ`. A two-dimensional
//! cartesian build exists solely as an oracle for that reduction.
//!
//! The `s`-axis is sampled on a lattice that is uniform in `v = s^k`, which
//! turns every kernel row and column into a geometric sequence; applying the
//! operator then costs one complex multiply per kernel entry and no kernel
//! storage, with deterministic, thread-count-independent reductions.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::phase;
use crate::theory::{interpolated_upper_bound, BallGeometry, LebesguePoint, PhaseFamily};

/// Fixed focusing parameter; the constructions keep it small and fixed.
pub const DEFAULT_ETA: f64 = 0.1;

/// Default frequency ladder `2^7 .. 2^13`.
pub fn default_ladder() -> Vec<f64> {
    (7..=13).map(|e| (1u64 << e) as f64).collect()
}

const GL16_NODES: [f64; 16] = [
    -0.9894009349916499326,
    -0.9445750230732325761,
    -0.8656312023878317439,
    -0.7554044083550030339,
    -0.6178762444026437484,
    -0.4580167776572273863,
    -0.2816035507792589132,
    -0.09501250983763744019,
    0.09501250983763744019,
    0.2816035507792589132,
    0.4580167776572273863,
    0.6178762444026437484,
    0.7554044083550030339,
    0.8656312023878317439,
    0.9445750230732325761,
    0.9894009349916499326,
];
const GL16_WEIGHTS: [f64; 16] = [
    0.02715245941175409485,
    0.06225352393864789286,
    0.09515851168249278481,
    0.1246289712555338721,
    0.1495959888165767321,
    0.1691565193950025382,
    0.1826034150449235889,
    0.1894506104550684963,
    0.1894506104550684963,
    0.1826034150449235889,
    0.1691565193950025382,
    0.1495959888165767321,
    0.1246289712555338721,
    0.09515851168249278481,
    0.06225352393864789286,
    0.02715245941175409485,
];

/// Quadrature grids for `∫₀¹ · ω_{n-1} ρ^{n-1} dρ` and `∫₀¹ · ds`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub rho_nodes: Vec<f64>,
    /// Weights carry the full radial measure; they sum to `|B|`.
    pub rho_weights: Vec<f64>,
    pub s_nodes: Vec<f64>,
    /// Weights sum to 1.
    pub s_weights: Vec<f64>,
    /// Lattice step of `v = s^k`; `s_nodes[m] = ((m + 1/2) dv)^{1/k}`.
    dv: f64,
}

fn s_lattice(k: u32, cells: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let dv = 1.0 / cells as f64;
    let exp = 1.0 / k as f64;
    let mut nodes = Vec::with_capacity(cells);
    let mut weights = Vec::with_capacity(cells);
    for m in 0..cells {
        let v = (m as f64 + 0.5) * dv;
        nodes.push(v.powf(exp));
        weights.push(((m as f64 + 1.0) * dv).powf(exp) - (m as f64 * dv).powf(exp));
    }
    (nodes, weights, dv)
}

fn rho_panels(family: PhaseFamily, n_freq: f64, panels: usize, eta: f64) -> Vec<f64> {
    let jexp = 1.0 / family.j() as f64;
    // Equal kernel-phase boundaries: the phase N rho^j s^k advances by N/panels
    // per panel at the worst s.
    let mut bounds: Vec<f64> = (0..=panels).map(|i| (i as f64 / panels as f64).powf(jexp)).collect();
    // Refine the focusing ball so the indicator of rho <= eta N^{-1/j} sees nodes.
    if n_freq > 0.0 {
        let r0 = eta * n_freq.powf(-jexp);
        let first = bounds[1];
        if r0 > 0.0 && r0 < 0.5 * first {
            bounds.splice(1..1, [0.5 * r0, r0]);
        }
    }
    bounds
}

/// The radially reduced operator, applied through per-column geometric
/// phase recurrences instead of a stored kernel matrix.
pub struct SampledOperator {
    family: PhaseFamily,
    freq: f64,
    grid: RadialGrid,
    /// `u_i = rho_i^j`.
    u: Vec<f64>,
    /// `exp(i N u_i dv / 2)`.
    col_base: Vec<Complex64>,
    /// `exp(i N u_i dv)`.
    col_ratio: Vec<Complex64>,
    cached_norm22: OnceLock<f64>,
    cached_osc_output: OnceLock<Vec<Complex64>>,
}

/// Build the sampled operator with at least `points_per_period` nodes per
/// kernel oscillation period on each axis (and never fewer than 64 nodes).
pub fn build_operator(
    family: PhaseFamily,
    n_freq: f64,
    points_per_period: usize,
) -> Result<SampledOperator> {
    if points_per_period < 8 {
        return Err(Error::Domain(format!(
            "points_per_period must be >= 8, got {points_per_period}"
        )));
    }
    if !n_freq.is_finite() || n_freq < 0.0 {
        return Err(Error::Domain(format!("frequency must be finite and >= 0, got {n_freq}")));
    }
    let tau = std::f64::consts::TAU;
    let min_nodes = 64.0f64.max(points_per_period as f64 * n_freq / tau);
    if min_nodes > (1u64 << 22) as f64 {
        return Err(Error::Resolution(format!(
            "frequency {n_freq} needs {min_nodes:.0} nodes per axis, above the desk-scale cap"
        )));
    }
    let s_cells = min_nodes.ceil() as usize;
    let panels = ((min_nodes / 16.0).ceil() as usize).max(4);

    let (s_nodes, s_weights, dv) = s_lattice(family.k(), s_cells);
    let bounds = rho_panels(family, n_freq, panels, DEFAULT_ETA);
    let geom = BallGeometry::new(family.n());
    let nm1 = family.n() as i32 - 1;
    let mut rho_nodes = Vec::with_capacity(16 * (bounds.len() - 1));
    let mut rho_weights = Vec::with_capacity(rho_nodes.capacity());
    for w in bounds.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        for (x, wt) in GL16_NODES.iter().zip(GL16_WEIGHTS) {
            let rho = mid + half * x;
            rho_nodes.push(rho);
            rho_weights.push(half * wt * geom.sphere_area() * rho.powi(nm1));
        }
    }

    let u: Vec<f64> = rho_nodes.iter().map(|r| r.powi(family.j() as i32)).collect();
    let col_base = u.iter().map(|&ui| Complex64::from_polar(1.0, n_freq * ui * 0.5 * dv)).collect();
    let col_ratio = u.iter().map(|&ui| Complex64::from_polar(1.0, n_freq * ui * dv)).collect();

    Ok(SampledOperator {
        family,
        freq: n_freq,
        grid: RadialGrid { rho_nodes, rho_weights, s_nodes, s_weights, dv },
        u,
        col_base,
        col_ratio,
        cached_norm22: OnceLock::new(),
        cached_osc_output: OnceLock::new(),
    })
}

const FORWARD_CHUNK: usize = 1024;
const ADJOINT_CHUNK: usize = 512;

fn forward_chunk(
    out: &mut [Complex64],
    coeff: &[Complex64],
    base: &[Complex64],
    ratio: &[Complex64],
) {
    let rows = out.len();
    let cols = coeff.len();
    let mut i = 0;
    while i + 4 <= cols {
        let mut p = [
            coeff[i] * base[i],
            coeff[i + 1] * base[i + 1],
            coeff[i + 2] * base[i + 2],
            coeff[i + 3] * base[i + 3],
        ];
        let r = [ratio[i], ratio[i + 1], ratio[i + 2], ratio[i + 3]];
        for om in out.iter_mut().take(rows) {
            *om += p[0] + p[1] + p[2] + p[3];
            p[0] *= r[0];
            p[1] *= r[1];
            p[2] *= r[2];
            p[3] *= r[3];
        }
        i += 4;
    }
    while i < cols {
        let mut p = coeff[i] * base[i];
        let r = ratio[i];
        for om in out.iter_mut().take(rows) {
            *om += p;
            p *= r;
        }
        i += 1;
    }
}

fn adjoint_chunk(
    out: &mut [Complex64],
    weighted_g: &[Complex64],
    base: &[Complex64],
    ratio: &[Complex64],
) {
    let cols = out.len();
    let mut i = 0;
    while i + 4 <= cols {
        let mut p = [base[i].conj(), base[i + 1].conj(), base[i + 2].conj(), base[i + 3].conj()];
        let r = [ratio[i].conj(), ratio[i + 1].conj(), ratio[i + 2].conj(), ratio[i + 3].conj()];
        let mut acc = [Complex64::new(0.0, 0.0); 4];
        for gm in weighted_g.iter() {
            acc[0] += gm * p[0];
            acc[1] += gm * p[1];
            acc[2] += gm * p[2];
            acc[3] += gm * p[3];
            p[0] *= r[0];
            p[1] *= r[1];
            p[2] *= r[2];
            p[3] *= r[3];
        }
        out[i] = acc[0];
        out[i + 1] = acc[1];
        out[i + 2] = acc[2];
        out[i + 3] = acc[3];
        i += 4;
    }
    while i < cols {
        let mut p = base[i].conj();
        let r = ratio[i].conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for gm in weighted_g.iter() {
            acc += gm * p;
            p *= r;
        }
        out[i] = acc;
        i += 1;
    }
}

impl SampledOperator {
    pub fn family(&self) -> PhaseFamily {
        self.family
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// Number of kernel rows (`s` nodes).
    pub fn rows(&self) -> usize {
        self.grid.s_nodes.len()
    }

    /// Number of kernel columns (`rho` nodes).
    pub fn cols(&self) -> usize {
        self.grid.rho_nodes.len()
    }

    /// `K[m][i] = e^{i N rho_i^j s_m^k}`, evaluated directly.
    pub fn kernel_entry(&self, m: usize, i: usize) -> Complex64 {
        let v = (m as f64 + 0.5) * self.grid.dv;
        Complex64::from_polar(1.0, self.freq * self.u[i] * v)
    }

    /// `(Tf)_m = Σ_i w_i f_i K[m][i]`.
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.cols());
        let coeff: Vec<Complex64> =
            f.iter().zip(&self.grid.rho_weights).map(|(fi, &w)| fi * w).collect();
        let rows = self.rows();
        let partials: Vec<Vec<Complex64>> = coeff
            .par_chunks(FORWARD_CHUNK)
            .zip(self.col_base.par_chunks(FORWARD_CHUNK))
            .zip(self.col_ratio.par_chunks(FORWARD_CHUNK))
            .map(|((c, b), r)| {
                let mut out = vec![Complex64::new(0.0, 0.0); rows];
                forward_chunk(&mut out, c, b, r);
                out
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); rows];
        for part in partials {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }

    /// `(T*g)_i = Σ_m w^s_m conj(K[m][i]) g_m`, the adjoint for the
    /// `L²(ρ^{n-1}dρ) -> L²(ds)` pairing.
    pub fn apply_adjoint(&self, g: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(g.len(), self.rows());
        let weighted: Vec<Complex64> =
            g.iter().zip(&self.grid.s_weights).map(|(gm, &w)| gm * w).collect();
        let cols = self.cols();
        let mut out = vec![Complex64::new(0.0, 0.0); cols];
        out.par_chunks_mut(ADJOINT_CHUNK)
            .zip(self.col_base.par_chunks(ADJOINT_CHUNK))
            .zip(self.col_ratio.par_chunks(ADJOINT_CHUNK))
            .for_each(|((o, b), r)| adjoint_chunk(o, &weighted, b, r));
        out
    }

    /// Accurate `Th` for the oscillatory data `h = e^{2iN(ρ²-ρ)}`, through the
    /// resolved one-dimensional integrals `ω_{n-1} I^{j,k}_N(s)` rather than
    /// pointwise sampling of `h` (which aliases on the kernel-sized grid for
    /// `j = 2`).
    pub fn oscillatory_output(&self) -> &[Complex64] {
        self.cached_osc_output.get_or_init(|| {
            let omega = BallGeometry::new(self.family.n()).sphere_area();
            self.grid
                .s_nodes
                .par_iter()
                .map(|&s| {
                    omega
                        * phase::oscillatory_integral_ijk(self.family, self.freq, s)
                            .expect("I^{j,k} quadrature on [0,1] cannot fail for s in [0,1]")
                })
                .collect()
        })
    }

    fn norm22_cached(&self) -> Result<f64> {
        if let Some(&v) = self.cached_norm22.get() {
            return Ok(v);
        }
        let v = norm_2_2(self, 1e-4)?;
        Ok(*self.cached_norm22.get_or_init(|| v))
    }
}

/// Discrete weighted `L^p` norm; `recip` is `1/p`, with `recip = 0` meaning the sup norm.
pub fn lp_norm(values: &[Complex64], weights: &[f64], recip: f64) -> f64 {
    if recip == 0.0 {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let p = 1.0 / recip;
    let sum: f64 = values.iter().zip(weights).map(|(v, &w)| w * (v.norm() / peak).powf(p)).sum();
    peak * sum.powf(recip)
}

fn l2_norm(values: &[Complex64], weights: &[f64]) -> f64 {
    values.iter().zip(weights).map(|(v, &w)| w * v.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) trait KernelOperator: Sync {
    fn in_weights(&self) -> &[f64];
    fn out_weights(&self) -> &[f64];
    fn apply_vec(&self, f: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint_vec(&self, g: &[Complex64]) -> Vec<Complex64>;
}

impl KernelOperator for SampledOperator {
    fn in_weights(&self) -> &[f64] {
        &self.grid.rho_weights
    }
    fn out_weights(&self) -> &[f64] {
        &self.grid.s_weights
    }
    fn apply_vec(&self, f: &[Complex64]) -> Vec<Complex64> {
        self.apply(f)
    }
    fn apply_adjoint_vec(&self, g: &[Complex64]) -> Vec<Complex64> {
        self.apply_adjoint(g)
    }
}

fn seeded_complex_gaussian(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    // Box-Muller; ChaCha keeps restarts reproducible across platforms.
    (0..len)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            Complex64::new(r * u2.cos(), r * u2.sin())
        })
        .collect()
}

fn power_iteration_norm<K: KernelOperator>(
    op: &K,
    tol: f64,
    cap: usize,
    warm: Option<&[Complex64]>,
) -> Result<(f64, Vec<Complex64>)> {
    let n = op.in_weights().len();
    let mut x = match warm {
        Some(w) if w.len() == n => w.to_vec(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6f73_636c);
            seeded_complex_gaussian(&mut rng, n)
        }
    };
    let nx = l2_norm(&x, op.in_weights());
    if nx == 0.0 {
        return Ok((0.0, x));
    }
    x.iter_mut().for_each(|v| *v /= nx);
    let mut prev = 0.0f64;
    for _ in 0..cap {
        let y = op.apply_vec(&x);
        let sigma = l2_norm(&y, op.out_weights());
        if sigma == 0.0 {
            return Ok((0.0, x));
        }
        if (sigma - prev).abs() <= tol * sigma {
            return Ok((sigma, x));
        }
        prev = sigma;
        x = op.apply_adjoint_vec(&y);
        let nx = l2_norm(&x, op.in_weights());
        if nx == 0.0 {
            return Ok((0.0, x));
        }
        x.iter_mut().for_each(|v| *v /= nx);
    }
    Err(Error::Convergence { residual: prev })
}

/// Largest singular value of the measure-weighted kernel, i.e. the discrete
/// `L²(ρ^{n-1}dρ) -> L²(ds)` operator norm, by power iteration on the Gram map.
pub fn norm_2_2(op: &SampledOperator, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::Domain(format!("tolerance {tol} outside (0, 1e-3]")));
    }
    let (sigma, x) = power_iteration_norm(op, tol, 600, None)?;
    let _ = op.cached_norm22.set(sigma);
    let _ = x;
    Ok(sigma)
}

/// `norm_2_2` with a warm-start vector (e.g. the previous ladder rung's
/// singular vector interpolated onto this grid); returns the singular vector
/// for reuse and primes the operator's cached value.
pub fn norm_2_2_warm(
    op: &SampledOperator,
    tol: f64,
    warm: Option<&[Complex64]>,
) -> Result<(f64, Vec<Complex64>)> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::Domain(format!("tolerance {tol} outside (0, 1e-3]")));
    }
    let (sigma, x) = power_iteration_norm(op, tol, 600, warm)?;
    let _ = op.cached_norm22.set(sigma);
    Ok((sigma, x))
}

/// Piecewise-linear transfer of a grid vector onto a new node set, used to
/// warm-start ladder sweeps from the previous rung's extremizer.
pub fn interp_to_grid(
    old_nodes: &[f64],
    old_values: &[Complex64],
    new_nodes: &[f64],
) -> Vec<Complex64> {
    assert_eq!(old_nodes.len(), old_values.len());
    new_nodes
        .iter()
        .map(|&x| {
            match old_nodes.binary_search_by(|n| n.partial_cmp(&x).unwrap()) {
                Ok(i) => old_values[i],
                Err(0) => old_values[0],
                Err(i) if i == old_nodes.len() => old_values[old_nodes.len() - 1],
                Err(i) => {
                    let t = (x - old_nodes[i - 1]) / (old_nodes[i] - old_nodes[i - 1]);
                    old_values[i - 1] * (1.0 - t) + old_values[i] * t
                }
            }
        })
        .collect()
}

/// The three coefficient vectors of the lower-bound constructions.
pub struct CandidateVectors {
    pub focusing: Vec<Complex64>,
    pub constant: Vec<Complex64>,
    pub oscillatory: Vec<Complex64>,
}

/// Focusing indicator, all-ones, and `e^{2iN(ρ²-ρ)}` sampled on the grid.
pub fn candidate_vectors(
    family: PhaseFamily,
    n_freq: f64,
    grid: &RadialGrid,
    eta: f64,
) -> Result<CandidateVectors> {
    if !(eta > 0.0 && eta <= 0.25) {
        return Err(Error::Domain(format!("eta = {eta} outside (0, 1/4]")));
    }
    let r0 = if n_freq > 0.0 {
        (eta * n_freq.powf(-1.0 / family.j() as f64)).min(1.0)
    } else {
        1.0
    };
    let focusing: Vec<Complex64> = grid
        .rho_nodes
        .iter()
        .map(|&rho| Complex64::new(if rho <= r0 { 1.0 } else { 0.0 }, 0.0))
        .collect();
    if focusing.iter().all(|v| v.re == 0.0) {
        return Err(Error::DegenerateSupport { radius: r0 });
    }
    let constant = vec![Complex64::new(1.0, 0.0); grid.rho_nodes.len()];
    let oscillatory = grid
        .rho_nodes
        .iter()
        .map(|&rho| Complex64::from_polar(1.0, 2.0 * n_freq * (rho * rho - rho)))
        .collect();
    Ok(CandidateVectors { focusing, constant, oscillatory })
}

/// Rayleigh ratios of the three candidate constructions at several exponent pairs.
#[derive(Debug, Clone, Copy)]
pub struct CandidateRatios {
    pub focusing: f64,
    pub constant: f64,
    pub oscillatory: f64,
}

/// One forward application per candidate; the oscillatory output goes through
/// the resolved integral path.
pub fn candidate_ratios(
    op: &SampledOperator,
    eta: f64,
    points: &[LebesguePoint],
) -> Result<Vec<CandidateRatios>> {
    let cands = candidate_vectors(op.family(), op.freq(), op.grid(), eta)?;
    let t_foc = op.apply(&cands.focusing);
    let t_con = op.apply(&cands.constant);
    let t_osc = op.oscillatory_output();
    let ws = &op.grid().s_weights;
    let wr = &op.grid().rho_weights;
    Ok(points
        .iter()
        .map(|pt| {
            let a = pt.a();
            let b = pt.b();
            CandidateRatios {
                focusing: lp_norm(&t_foc, ws, b) / lp_norm(&cands.focusing, wr, a),
                constant: lp_norm(&t_con, ws, b) / lp_norm(&cands.constant, wr, a),
                oscillatory: lp_norm(t_osc, ws, b) / lp_norm(&cands.oscillatory, wr, a),
            }
        })
        .collect())
}

/// Provenance of the winning lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerMethod {
    Focusing,
    Constant,
    Oscillatory,
    Ascent,
    Endpoint,
    Svd,
}

/// Provenance of the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperMethod {
    Interpolation,
    Endpoint,
    Svd,
}

impl std::fmt::Display for LowerMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LowerMethod::Focusing => "focusing",
            LowerMethod::Constant => "constant",
            LowerMethod::Oscillatory => "oscillatory",
            LowerMethod::Ascent => "ascent",
            LowerMethod::Endpoint => "endpoint",
            LowerMethod::Svd => "svd",
        };
        f.write_str(s)
    }
}

impl std::fmt::Display for UpperMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            UpperMethod::Interpolation => "interpolation",
            UpperMethod::Endpoint => "endpoint",
            UpperMethod::Svd => "svd",
        };
        f.write_str(s)
    }
}

/// Lower and upper bounds on one operator norm, with method provenance.
#[derive(Debug, Clone, Copy)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method_lower: LowerMethod,
    pub method_upper: UpperMethod,
}

/// Entrywise duality map `x ↦ x |x|^{r-2}`, with `|x|^{r-2}` taken as 0 at
/// `x = 0` for `r < 2`.
fn duality_map(values: &mut [Complex64], r: f64) {
    for v in values.iter_mut() {
        let m = v.norm();
        *v = if m == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            *v * m.powf(r - 2.0)
        };
    }
}

/// Maximum ascent steps per start; runs stop early once the ratio plateaus.
pub const MAX_ASCENT_STEPS: usize = 200;

struct AscentOutcome {
    ratio: f64,
    improved: bool,
    degenerate: bool,
    best_vector: Vec<Complex64>,
}

fn rayleigh(op: &SampledOperator, f: &[Complex64], a: f64, b: f64) -> f64 {
    let nf = lp_norm(f, &op.grid().rho_weights, a);
    if nf == 0.0 {
        return 0.0;
    }
    lp_norm(&op.apply(f), &op.grid().s_weights, b) / nf
}

fn ascent(op: &SampledOperator, start: &[Complex64], a: f64, b: f64, max_steps: usize) -> AscentOutcome {
    let wr = &op.grid().rho_weights;
    let q = 1.0 / b;
    let p_dual = 1.0 / (1.0 - a);
    let mut f = start.to_vec();
    let n0 = lp_norm(&f, wr, a);
    if n0 == 0.0 {
        return AscentOutcome { ratio: 0.0, improved: false, degenerate: true, best_vector: f };
    }
    f.iter_mut().for_each(|v| *v /= n0);
    let initial = rayleigh(op, &f, a, b);
    let mut best = initial;
    let mut best_vector = f.clone();
    let mut prev = initial;
    let mut plateau = 0;
    for _ in 0..max_steps {
        let mut g = op.apply(&f);
        let peak = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return AscentOutcome { ratio: best, improved: best > initial, degenerate: true, best_vector };
        }
        g.iter_mut().for_each(|v| *v /= peak);
        duality_map(&mut g, q);
        let mut u = op.apply_adjoint(&g);
        let upeak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if upeak == 0.0 {
            return AscentOutcome { ratio: best, improved: best > initial, degenerate: true, best_vector };
        }
        u.iter_mut().for_each(|v| *v /= upeak);
        duality_map(&mut u, p_dual);
        let norm = lp_norm(&u, wr, a);
        if norm == 0.0 || !norm.is_finite() {
            return AscentOutcome { ratio: best, improved: best > initial, degenerate: true, best_vector };
        }
        u.iter_mut().for_each(|v| *v /= norm);
        f = u;
        let r = rayleigh(op, &f, a, b);
        if r > best {
            best = r;
            best_vector.copy_from_slice(&f);
        }
        // ratio gains below slope-fit resolution are not worth more sweeps
        if (r - prev).abs() <= 3e-3 * r.max(1e-300) {
            plateau += 1;
            if plateau >= 2 {
                break;
            }
        } else {
            plateau = 0;
        }
        prev = r;
    }
    AscentOutcome { ratio: best, improved: best > initial * (1.0 + 1e-9), degenerate: false, best_vector }
}

/// Lower/upper bound pair for `‖T‖_{p→q}` at one exponent point.
///
/// Interior points run the nonlinear power ascent from the three candidate
/// vectors plus `restarts` seeded random starts; `p ∈ {1,∞}` or `q ∈ {1,∞}`
/// skip the ascent (exact endpoint formulas or raw candidate ratios instead).
pub fn norm_lower_bound(
    op: &SampledOperator,
    point: LebesguePoint,
    restarts: usize,
) -> Result<NormEstimate> {
    norm_lower_bound_seeded(op, point, restarts, 0x706f77)
}

pub fn norm_lower_bound_seeded(
    op: &SampledOperator,
    point: LebesguePoint,
    restarts: usize,
    seed: u64,
) -> Result<NormEstimate> {
    norm_lower_bound_warm(op, point, restarts, seed, None).map(|(est, _)| est)
}

/// `norm_lower_bound` with an extra warm-start vector (the previous ladder
/// rung's extremizer transferred onto this grid); also returns the best
/// extremizer found so ladder sweeps can chain it.
pub fn norm_lower_bound_warm(
    op: &SampledOperator,
    point: LebesguePoint,
    restarts: usize,
    seed: u64,
    warm: Option<&[Complex64]>,
) -> Result<(NormEstimate, Option<Vec<Complex64>>)> {
    if restarts < 1 {
        return Err(Error::Domain("restarts must be >= 1".into()));
    }
    let (a, b) = (point.a(), point.b());
    let geom = BallGeometry::new(op.family().n());

    // Exact discrete endpoint norms: the kernel is unimodular, so the 1 -> q
    // norm (max over columns of the column q-norm) is 1 and the p -> infinity
    // norm (max over rows of the row p'-norm) is |B|^{1-a}.
    if a == 1.0 {
        return Ok((
            NormEstimate {
                lower: 1.0,
                upper: 1.0,
                method_lower: LowerMethod::Endpoint,
                method_upper: UpperMethod::Endpoint,
            },
            None,
        ));
    }
    if b == 0.0 {
        let exact = geom.volume().powf(1.0 - a);
        return Ok((
            NormEstimate {
                lower: exact,
                upper: exact,
                method_lower: LowerMethod::Endpoint,
                method_upper: UpperMethod::Endpoint,
            },
            None,
        ));
    }

    let c22 = op.norm22_cached()?;
    let upper = interpolated_upper_bound(c22, &geom, point)?;
    let method_upper =
        if a == 0.5 && b == 0.5 { UpperMethod::Svd } else { UpperMethod::Interpolation };

    let ratios = candidate_ratios(op, DEFAULT_ETA, &[point])?[0];
    let mut best = (ratios.focusing, LowerMethod::Focusing);
    if ratios.constant > best.0 {
        best = (ratios.constant, LowerMethod::Constant);
    }
    if ratios.oscillatory > best.0 {
        best = (ratios.oscillatory, LowerMethod::Oscillatory);
    }
    // At p = q = 2 the top singular value is itself an attained ratio.
    if a == 0.5 && b == 0.5 && c22 > best.0 {
        best = (c22, LowerMethod::Svd);
    }

    let interior = a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0;
    let cands = candidate_vectors(op.family(), op.freq(), op.grid(), DEFAULT_ETA)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<(Vec<Complex64>, LowerMethod)> = vec![
        (cands.focusing, LowerMethod::Focusing),
        (cands.constant, LowerMethod::Constant),
        (cands.oscillatory, LowerMethod::Oscillatory),
    ];
    for _ in 0..restarts {
        starts.push((seeded_complex_gaussian(&mut rng, op.cols()), LowerMethod::Ascent));
    }

    let mut degenerate = 0;
    for (start, tag) in &starts {
        if interior {
            let out = ascent(op, start, a, b, MAX_ASCENT_STEPS);
            if out.degenerate {
                degenerate += 1;
            }
            if out.ratio > best.0 {
                best = (out.ratio, if out.improved { LowerMethod::Ascent } else { *tag });
            }
        } else if *tag == LowerMethod::Ascent {
            // endpoint exponents: raw Rayleigh quotients only
            let r = rayleigh(op, start, a, b);
            if r > best.0 {
                best = (r, LowerMethod::Ascent);
            }
        }
    }
    if degenerate == starts.len() {
        return Err(Error::Estimation);
    }
    if !(best.0 > 0.0) || !best.0.is_finite() {
        return Err(Error::Estimation);
    }
    Ok(NormEstimate { lower: best.0, upper, method_lower: best.1, method_upper })
}

/// Slope, intercept, worst residual, and ladder of a `log‖T‖` vs `log N` fit.
#[derive(Debug, Clone)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub ladder: Vec<f64>,
}

/// Least-squares fit of `log(norm)` against `log(N)`.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 4 {
        return Err(Error::Domain(format!("need at least 4 ladder rungs, got {}", pairs.len())));
    }
    if pairs.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Domain("ladder must be strictly increasing".into()));
    }
    if pairs.iter().any(|&(n, y)| !(n > 0.0) || !(y > 0.0) || !y.is_finite()) {
        return Err(Error::Domain("norms and frequencies must be positive".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, y)| y.ln()).collect();
    let (slope, intercept, max_residual) = linear_fit(&xs, &ys);
    Ok(ExponentFit { slope, intercept, max_residual, ladder: pairs.iter().map(|p| p.0).collect() })
}

/// Two-dimensional tensor-grid oracle for the radial reduction; disk-masked
/// square grid with coverage-weighted boundary cells.
pub struct CartesianOperator {
    family: PhaseFamily,
    freq: f64,
    weights: Vec<f64>,
    u: Vec<f64>,
    col_base: Vec<Complex64>,
    col_ratio: Vec<Complex64>,
    s_weights: Vec<f64>,
}

/// Build the n = 2 cartesian oracle; `side_points` caps the per-axis grid.
pub fn build_cartesian_operator(
    family: PhaseFamily,
    n_freq: f64,
    side_points: usize,
) -> Result<CartesianOperator> {
    if family.n() != 2 {
        return Err(Error::Domain(format!("cartesian oracle supports n = 2 only, got n = {}", family.n())));
    }
    if side_points == 0 || side_points > 256 {
        return Err(Error::Domain(format!("side_points = {side_points} outside 1..=256 (oracle scale)")));
    }
    let tau = std::f64::consts::TAU;
    let s_cells = (64.0f64.max(16.0 * n_freq / tau)).ceil() as usize;
    let (_, s_weights, dv) = s_lattice(family.k(), s_cells);

    let h = 2.0 / side_points as f64;
    let mut u = Vec::new();
    let mut weights = Vec::new();
    for ax in 0..side_points {
        for ay in 0..side_points {
            let x = -1.0 + (ax as f64 + 0.5) * h;
            let y = -1.0 + (ay as f64 + 0.5) * h;
            let center = (x * x + y * y).sqrt();
            let reach = h * std::f64::consts::FRAC_1_SQRT_2;
            let coverage = if center + reach <= 1.0 {
                1.0
            } else if center - reach >= 1.0 {
                0.0
            } else {
                // boundary cell: 8x8 subsample
                let mut inside = 0u32;
                for sx in 0..8 {
                    for sy in 0..8 {
                        let px = x - 0.5 * h + (sx as f64 + 0.5) * h / 8.0;
                        let py = y - 0.5 * h + (sy as f64 + 0.5) * h / 8.0;
                        if px * px + py * py <= 1.0 {
                            inside += 1;
                        }
                    }
                }
                inside as f64 / 64.0
            };
            if coverage > 0.0 {
                let r = center;
                u.push(r.powi(family.j() as i32));
                weights.push(h * h * coverage);
            }
        }
    }
    let col_base = u.iter().map(|&ui| Complex64::from_polar(1.0, n_freq * ui * 0.5 * dv)).collect();
    let col_ratio = u.iter().map(|&ui| Complex64::from_polar(1.0, n_freq * ui * dv)).collect();
    Ok(CartesianOperator { family, freq: n_freq, weights, u, col_base, col_ratio, s_weights })
}

impl CartesianOperator {
    pub fn family(&self) -> PhaseFamily {
        self.family
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn node_count(&self) -> usize {
        self.u.len()
    }

    /// Total quadrature mass; approximately the disk area π.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Discrete `L² -> L²` norm of the cartesian build.
    pub fn norm_2_2(&self, tol: f64) -> Result<f64> {
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(Error::Domain(format!("tolerance {tol} outside (0, 1e-3]")));
        }
        power_iteration_norm(self, tol, 600, None).map(|(s, _)| s)
    }
}

impl KernelOperator for CartesianOperator {
    fn in_weights(&self) -> &[f64] {
        &self.weights
    }
    fn out_weights(&self) -> &[f64] {
        &self.s_weights
    }
    fn apply_vec(&self, f: &[Complex64]) -> Vec<Complex64> {
        let coeff: Vec<Complex64> = f.iter().zip(&self.weights).map(|(fi, &w)| fi * w).collect();
        let rows = self.s_weights.len();
        let partials: Vec<Vec<Complex64>> = coeff
            .par_chunks(FORWARD_CHUNK)
            .zip(self.col_base.par_chunks(FORWARD_CHUNK))
            .zip(self.col_ratio.par_chunks(FORWARD_CHUNK))
            .map(|((c, b), r)| {
                let mut out = vec![Complex64::new(0.0, 0.0); rows];
                forward_chunk(&mut out, c, b, r);
                out
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); rows];
        for part in partials {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }
    fn apply_adjoint_vec(&self, g: &[Complex64]) -> Vec<Complex64> {
        let weighted: Vec<Complex64> =
            g.iter().zip(&self.s_weights).map(|(gm, &w)| gm * w).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.u.len()];
        out.par_chunks_mut(ADJOINT_CHUNK)
            .zip(self.col_base.par_chunks(ADJOINT_CHUNK))
            .zip(self.col_ratio.par_chunks(ADJOINT_CHUNK))
            .for_each(|((o, b), r)| adjoint_chunk(o, &weighted, b, r));
        out
    }
}
