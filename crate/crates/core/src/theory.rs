//! Closed-form exponent surface of the main theorem and the interpolation
//! upper-bound chain.
//!
//! The operator norm of `T^{j,k}_N : L^p(B) -> L^q([0,1])` decays like
//! `N^{-C}` where `C` depends on `(j,k,n)` and on the reciprocal exponents
//! `(a,b) = (1/p, 1/q)` only. This module evaluates that surface and the
//! multiplicative upper bound obtained by Riesz-Thorin interpolation plus
//! Hölder inclusions.

use crate::error::{Error, Result};

/// Reciprocal Lebesgue exponent pair `(a, b) = (1/p, 1/q)` in the unit square.
///
/// `a = 0` encodes `p = ∞` and `a = 1` encodes `p = 1`; same for `b` and `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesguePoint {
    a: f64,
    b: f64,
}

impl LebesguePoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || !a.is_finite() || !b.is_finite()
        {
            return Err(Error::Domain(format!(
                "reciprocal exponents ({a}, {b}) outside the unit square"
            )));
        }
        Ok(Self { a, b })
    }

    /// Reciprocal of `p`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Reciprocal of `q`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// The exponent `p` itself, `f64::INFINITY` when `a = 0`.
    pub fn p(&self) -> f64 {
        if self.a == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.a
        }
    }

    /// The exponent `q` itself, `f64::INFINITY` when `b = 0`.
    pub fn q(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.b
        }
    }
}

/// The triple `(j, k, n)` selecting the kernel `e^{iN |x|^j s^k}` on the unit
/// ball of `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseFamily {
    j: u32,
    k: u32,
    n: u32,
}

impl PhaseFamily {
    pub fn new(j: u32, k: u32, n: u32) -> Result<Self> {
        if !(1..=2).contains(&j) || !(1..=2).contains(&k) {
            return Err(Error::Domain(format!("phase powers (j={j}, k={k}) must lie in {{1,2}}")));
        }
        if n == 0 {
            return Err(Error::Domain("dimension n must be >= 1".into()));
        }
        Ok(Self { j, k, n })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// All twelve families with `j, k ∈ {1,2}` and `n ∈ {1,2,3}`.
    pub fn all_desk_scale() -> Vec<PhaseFamily> {
        let mut out = Vec::new();
        for n in 1..=3 {
            for j in 1..=2 {
                for k in 1..=2 {
                    out.push(PhaseFamily::new(j, k, n).unwrap());
                }
            }
        }
        out
    }
}

impl std::fmt::Display for PhaseFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T({},{},n={})", self.j, self.k, self.n)
    }
}

/// Unit-ball volume and unit-sphere area in dimension `n`.
#[derive(Debug, Clone, Copy)]
pub struct BallGeometry {
    n: u32,
    volume: f64,
    sphere_area: f64,
}

impl BallGeometry {
    pub fn new(n: u32) -> Self {
        // |B| = pi^{n/2} / Gamma(n/2 + 1), omega_{n-1} = n |B|.
        let half = n as f64 / 2.0;
        let volume = std::f64::consts::PI.powf(half) / libm::tgamma(half + 1.0);
        BallGeometry { n, volume, sphere_area: n as f64 * volume }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|B|`, the Lebesgue measure of the unit ball.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `omega_{n-1}`, the surface measure of the unit sphere.
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }
}

/// The piecewise-linear interpolation exponent `sigma(a, b)`.
///
/// Branches are tried in the order they are listed in the defining display;
/// on shared boundaries the adjacent formulas agree, so the order is not
/// observable.
pub fn sigma(point: LebesguePoint) -> f64 {
    let (a, b) = (point.a(), point.b());
    if a <= 1.0 - b && b <= 0.5 {
        2.0 * b
    } else if a >= 0.5 && a + b >= 1.0 {
        2.0 * (1.0 - a)
    } else {
        debug_assert!(a <= 0.5 && b >= 0.5);
        1.0
    }
}

/// The decay exponent `C_{j,k,n}(a, b)` of the operator-norm asymptotics.
pub fn theoretical_exponent(family: PhaseFamily, point: LebesguePoint) -> f64 {
    let s = sigma(point);
    if family.n() == 1 && family.j() == 2 {
        s / 4.0
    } else {
        // n >= j covers every remaining (j, k, n) with n >= 1.
        s / (2.0 * family.k() as f64)
    }
}

/// Multiplicative upper bound on `‖T‖_{p→q}` given the `L²→L²` constant.
///
/// Follows the interpolation chain: `c^{2(1-a)}` on the lower-right triangle,
/// `|B|^{1-a-b} c^{2b}` below the diagonal strip, `|B|^{1/2-a} c` on the
/// upper-left square. Equals `c^{sigma(a,b)}` up to the explicit volume power.
pub fn interpolated_upper_bound(
    c22: f64,
    geom: &BallGeometry,
    point: LebesguePoint,
) -> Result<f64> {
    if !(c22 > 0.0) || !c22.is_finite() {
        return Err(Error::Domain(format!("L2->L2 constant must be positive, got {c22}")));
    }
    let (a, b) = (point.a(), point.b());
    let vol = geom.volume();
    let bound = if a >= 0.5 && a + b >= 1.0 {
        c22.powf(2.0 * (1.0 - a))
    } else if b <= 0.5 && a <= 1.0 - b {
        vol.powf(1.0 - a - b) * c22.powf(2.0 * b)
    } else {
        vol.powf(0.5 - a) * c22
    };
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: f64, b: f64) -> LebesguePoint {
        LebesguePoint::new(a, b).unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(pt(0.25, 0.25)), 0.5);
        assert_eq!(sigma(pt(0.25, 0.75)), 1.0);
        assert_eq!(sigma(pt(1.0, 1.0)), 0.0);
    }

    #[test]
    fn sigma_branch_consistency_on_boundaries() {
        // b = 1/2 with a <= 1/2: 2b vs 1
        for i in 0..=64 {
            let a = 0.5 * i as f64 / 64.0;
            assert_eq!(2.0 * 0.5, 1.0);
            assert_eq!(sigma(pt(a, 0.5)), 1.0);
        }
        // a + b = 1 with a >= 1/2: 2b vs 2(1-a)
        for i in 0..=64 {
            let a = 0.5 + 0.5 * i as f64 / 64.0;
            let b = 1.0 - a;
            assert!((2.0 * b - 2.0 * (1.0 - a)).abs() < 1e-15);
            assert!((sigma(pt(a, b)) - 2.0 * b).abs() < 1e-15);
        }
        // a = 1/2 with b >= 1/2: 2(1-a) vs 1
        for i in 0..=64 {
            let b = 0.5 + 0.5 * i as f64 / 64.0;
            assert_eq!(sigma(pt(0.5, b)), 1.0);
        }
    }

    #[test]
    fn sigma_lipschitz_on_grid() {
        // |sigma(P) - sigma(Q)| <= 2 (|da| + |db|) for mesh neighbours.
        let mesh = 256usize;
        let h = 1.0 / mesh as f64;
        for i in 0..=mesh {
            for jj in 0..mesh {
                let a = i as f64 * h;
                let b = jj as f64 * h;
                let s0 = sigma(pt(a, b));
                let s1 = sigma(pt(a, b + h));
                assert!((s1 - s0).abs() <= 2.0 * h + 1e-12);
                if i < mesh {
                    let s2 = sigma(pt(a + h, b));
                    assert!((s2 - s0).abs() <= 2.0 * h + 1e-12);
                }
            }
        }
    }

    #[test]
    fn exponent_examples() {
        let f211 = PhaseFamily::new(2, 1, 1).unwrap();
        assert_eq!(theoretical_exponent(f211, pt(0.0, 0.75)), 0.25);
        let f123 = PhaseFamily::new(1, 2, 3).unwrap();
        assert_eq!(theoretical_exponent(f123, pt(0.5, 0.5)), 0.25);
        let f112 = PhaseFamily::new(1, 1, 2).unwrap();
        assert_eq!(theoretical_exponent(f112, pt(1.0, 0.0)), 0.0);
    }

    #[test]
    fn exponent_range_attained() {
        let mesh = 64usize;
        for family in PhaseFamily::all_desk_scale() {
            let mut max = f64::NEG_INFINITY;
            let mut min = f64::INFINITY;
            for i in 0..=mesh {
                for jj in 0..=mesh {
                    let c = theoretical_exponent(
                        family,
                        pt(i as f64 / mesh as f64, jj as f64 / mesh as f64),
                    );
                    max = max.max(c);
                    min = min.min(c);
                }
            }
            let expected_max = if family.n() == 1 && family.j() == 2 {
                0.25
            } else {
                0.5 / family.k() as f64
            };
            assert!((max - expected_max).abs() < 1e-15, "{family}: max {max}");
            assert_eq!(min, 0.0, "{family}: min {min}");
        }
    }

    #[test]
    fn ball_geometry_values() {
        assert!((BallGeometry::new(1).volume() - 2.0).abs() < 1e-12);
        assert!((BallGeometry::new(2).volume() - std::f64::consts::PI).abs() < 1e-12);
        assert!((BallGeometry::new(3).volume() - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        for n in 1..=6 {
            let g = BallGeometry::new(n);
            assert!((g.sphere_area() - n as f64 * g.volume()).abs() < 1e-12 * g.sphere_area());
        }
    }

    #[test]
    fn upper_bound_examples() {
        for n in 1..=3 {
            let geom = BallGeometry::new(n);
            let got = interpolated_upper_bound(1.0, &geom, pt(0.25, 0.75)).unwrap();
            assert!((got - geom.volume().powf(0.25)).abs() < 1e-14);
        }
        let g1 = BallGeometry::new(1);
        let got = interpolated_upper_bound(0.1, &g1, pt(0.5, 0.5)).unwrap();
        assert!((got - 0.1).abs() < 1e-15);
        let got = interpolated_upper_bound(0.5, &g1, pt(0.0, 0.0)).unwrap();
        assert!((got - 2.0).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_rejects_bad_constant() {
        let g = BallGeometry::new(2);
        assert!(interpolated_upper_bound(0.0, &g, pt(0.5, 0.5)).is_err());
        assert!(interpolated_upper_bound(-1.0, &g, pt(0.5, 0.5)).is_err());
    }

    #[test]
    fn upper_bound_log_slope_identity() {
        // With c22 = c N^{-e} the bound has log-slope -e sigma(a,b) exactly.
        let geom = BallGeometry::new(2);
        let (c, e) = (3.7, 0.31);
        for &(a, b) in &[(0.2, 0.3), (0.7, 0.6), (0.3, 0.9), (0.5, 0.5)] {
            let point = pt(a, b);
            let (n1, n2) = (128.0f64, 4096.0f64);
            let u1 = interpolated_upper_bound(c * n1.powf(-e), &geom, point).unwrap();
            let u2 = interpolated_upper_bound(c * n2.powf(-e), &geom, point).unwrap();
            let slope = (u2.ln() - u1.ln()) / (n2.ln() - n1.ln());
            assert!(
                (slope + e * sigma(point)).abs() < 1e-12,
                "({a},{b}): slope {slope} vs {}",
                -e * sigma(point)
            );
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(LebesguePoint::new(-0.1, 0.5).is_err());
        assert!(LebesguePoint::new(0.1, 1.5).is_err());
        assert!(PhaseFamily::new(3, 1, 1).is_err());
        assert!(PhaseFamily::new(1, 0, 1).is_err());
        assert!(PhaseFamily::new(1, 1, 0).is_err());
    }
}
