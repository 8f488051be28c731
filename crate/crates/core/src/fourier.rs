//! Sparse bivariate trigonometric polynomials and the Fourier side of the
//! error analysis.
//!
//! The lattice rule integrates `e^{2πi k·x}` to 1 exactly when `k` is dual
//! and to 0 otherwise, so for a trigonometric polynomial the integration
//! error is the plain coefficient sum over nonzero dual frequencies —
//! computed here without ever evaluating the rule. On top of that sit the
//! dyadic frequency blocks `δ_j` (with a sharp band system or the smooth
//! telescoped partition of unity), the block-weighted Besov quasi-norm, and
//! the `χ_s` polynomials supported on the dual lattice whose `L_p` growth is
//! `(2^{|s|₁}/b_n)^{1-1/p}` up to a constant.

use crate::error::{Error, Result};
use crate::fiblattice::{dual_enumerate_box, dual_membership, fibonacci, DualVector};
use crate::splines::BesovParams;
use num::complex::Complex64;
use num::Zero;
use rustfft::FftPlanner;
use std::collections::BTreeMap;

/// Finitely supported Fourier coefficient map on ℤ².
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigPoly2 {
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl TrigPoly2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_coeffs(it: impl IntoIterator<Item = ((i64, i64), Complex64)>) -> Self {
        let mut p = Self::new();
        for (k, c) in it {
            p.add(k, c);
        }
        p
    }

    pub fn add(&mut self, k: (i64, i64), c: Complex64) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Complex64::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: (i64, i64)) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &Complex64)> {
        self.coeffs.iter()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The exact integral over the torus: the zero-frequency coefficient.
    pub fn mean(&self) -> Complex64 {
        self.coeff((0, 0))
    }

    /// Largest absolute frequency per axis.
    pub fn support_radius(&self) -> (i64, i64) {
        let mut r = (0i64, 0i64);
        for (k, _) in self.iter() {
            r.0 = r.0.max(k.0.abs());
            r.1 = r.1.max(k.1.abs());
        }
        r
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (&(k1, k2), &c) in self.iter() {
            let phase = std::f64::consts::TAU * (k1 as f64 * x + k2 as f64 * y);
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        acc
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in self.coeffs.values_mut() {
            *v *= c;
        }
    }

    /// Real on the torus iff the coefficient map is Hermitian-symmetric.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.iter().all(|(&(k1, k2), &c)| {
            (self.coeff((-k1, -k2)).conj() - c).norm() <= tol
        })
    }

    pub fn to_integrand(&self) -> crate::cubature::Integrand {
        let poly = self.clone();
        let mean = self.mean();
        crate::cubature::Integrand::new(2, format!("trigpoly[{} terms]", self.term_count()), move |x: &[f64]| {
            poly.eval(x[0], x[1])
        })
        .with_integral(mean)
    }
}

/// Exact Fibonacci integration error: the sum of coefficients over nonzero
/// dual frequencies in the support. No rule evaluation involved.
pub fn fib_error_exact(poly: &TrigPoly2, n: u32) -> Result<Complex64> {
    let fib = fibonacci(n)?;
    let mut acc = Complex64::zero();
    for (&(k1, k2), &c) in poly.iter() {
        if (k1, k2) != (0, 0) && dual_membership(DualVector::new(k1 as i128, k2 as i128), fib) {
            acc += c;
        }
    }
    Ok(acc)
}

/// Dyadic frequency band bookkeeping.
///
/// `Sharp` uses the exact partition of ℤ: level 0 holds `|k| ≤ 1` and level
/// `j ≥ 1` holds `2^{j-1} < |k| ≤ 2^j`. `Smooth` is the telescoped system
/// `φ_j = φ_0(2^{-j}·) − φ_0(2^{-j+1}·)` built from one fixed even bump that
/// is 1 on `[-1,1]`, 0 outside `(-2,2)`, with an exponential ramp between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffSystem {
    Sharp,
    Smooth,
}

fn smooth_bump(t: f64) -> f64 {
    // even, 1 on [-1,1], 0 beyond |t| = 2
    let a = t.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let u = a - 1.0;
        let e = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
        e(1.0 - u) / (e(1.0 - u) + e(u))
    }
}

impl CutoffSystem {
    /// Band index of an integer frequency under the sharp convention.
    pub fn sharp_level(k: i64) -> u32 {
        let a = k.unsigned_abs();
        if a <= 1 {
            0
        } else {
            64 - (a - 1).leading_zeros()
        }
    }

    /// Cutoff value `φ_j(t)`.
    pub fn phi(&self, j: u32, t: f64) -> f64 {
        match self {
            CutoffSystem::Sharp => {
                let a = t.abs();
                if j == 0 {
                    if a <= 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    let lo = 2f64.powi(j as i32 - 1);
                    let hi = 2f64.powi(j as i32);
                    if a > lo && a <= hi {
                        1.0
                    } else {
                        0.0
                    }
                }
            }
            CutoffSystem::Smooth => {
                if j == 0 {
                    smooth_bump(t)
                } else {
                    smooth_bump(t * 2f64.powi(-(j as i32))) - smooth_bump(t * 2f64.powi(1 - j as i32))
                }
            }
        }
    }

    /// Largest level that can touch frequencies up to `radius`.
    pub fn max_level(&self, radius: i64) -> u32 {
        Self::sharp_level(radius) + 1
    }

    /// Maximum deviation of `Σ_j φ_j` from 1 over the given sample points.
    pub fn partition_defect(&self, samples: &[f64]) -> f64 {
        samples
            .iter()
            .map(|&t| {
                let jmax = self.max_level(t.abs().ceil() as i64 + 2);
                let s: f64 = (0..=jmax).map(|j| self.phi(j, t)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Coefficient-wise block extraction `δ_j(f)`.
pub fn dyadic_block(poly: &TrigPoly2, j: (u32, u32), system: CutoffSystem) -> TrigPoly2 {
    TrigPoly2::from_coeffs(poly.iter().filter_map(|(&(k1, k2), &c)| {
        let w = system.phi(j.0, k1 as f64) * system.phi(j.1, k2 as f64);
        if w == 0.0 {
            None
        } else {
            Some(((k1, k2), c * w))
        }
    }))
}

/// Values of a polynomial on a uniform grid at ≥ 4× Nyquist density, via a
/// zero-padded 2-D FFT. Both axis sizes are powers of two.
pub struct GridValues {
    pub m1: usize,
    pub m2: usize,
    pub values: Vec<Complex64>,
}

impl GridValues {
    /// Rectangle-rule `L_p` norm (`p ≥ 1`) or the grid sup for `p = ∞`.
    pub fn norm(&self, p: f64) -> Result<f64> {
        if p < 1.0 {
            return Err(Error::UnsupportedExponent(p));
        }
        if p.is_finite() {
            let cell = 1.0 / (self.m1 as f64 * self.m2 as f64);
            Ok((self.values.iter().map(|v| v.norm().powf(p)).sum::<f64>() * cell).powf(1.0 / p))
        } else {
            Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max))
        }
    }
}

pub fn poly_grid_values(poly: &TrigPoly2) -> GridValues {
    // 4x oversampling of the two-sided bandwidth, kept a power of two
    let (r1, r2) = poly.support_radius();
    let m1 = (8 * r1.max(2) as usize).next_power_of_two();
    let m2 = (8 * r2.max(2) as usize).next_power_of_two();
    let mut grid = vec![Complex64::zero(); m1 * m2];
    for (&(k1, k2), &c) in poly.iter() {
        let i1 = (k1.rem_euclid(m1 as i64)) as usize;
        let i2 = (k2.rem_euclid(m2 as i64)) as usize;
        grid[i1 * m2 + i2] += c;
    }
    // values f(t1/m1, t2/m2) = Σ ĉ_k e^{2πi(k1 t1/m1 + k2 t2/m2)}: inverse DFT
    // without normalization, applied per axis
    let mut planner = FftPlanner::new();
    let fft_rows = planner.plan_fft_inverse(m2);
    for row in grid.chunks_exact_mut(m2) {
        fft_rows.process(row);
    }
    let fft_cols = planner.plan_fft_inverse(m1);
    let mut col = vec![Complex64::zero(); m1];
    for c in 0..m2 {
        for r in 0..m1 {
            col[r] = grid[r * m2 + c];
        }
        fft_cols.process(&mut col);
        for r in 0..m1 {
            grid[r * m2 + c] = col[r];
        }
    }
    GridValues {
        m1,
        m2,
        values: grid,
    }
}

/// `L_p` norm of a trigonometric polynomial by grid sampling.
pub fn norm_lp_grid(poly: &TrigPoly2, p: f64) -> Result<f64> {
    poly_grid_values(poly).norm(p)
}

/// Block-weighted Besov quasi-norm
/// `( Σ_j 2^{|j|₁ α θ} ‖δ_j(f)‖_p^θ )^{1/θ}` over the touched levels.
pub fn fourier_besov_norm(
    poly: &TrigPoly2,
    params: &BesovParams,
    system: CutoffSystem,
) -> Result<f64> {
    if params.p < 1.0 {
        return Err(Error::UnsupportedExponent(params.p));
    }
    if poly.is_zero() {
        return Ok(0.0);
    }
    let (r1, r2) = poly.support_radius();
    let (j1max, j2max) = (system.max_level(r1), system.max_level(r2));
    let theta = params.theta;
    let mut acc = 0.0f64;
    let mut sup = 0.0f64;
    for j1 in 0..=j1max {
        for j2 in 0..=j2max {
            let block = dyadic_block(poly, (j1, j2), system);
            if block.is_zero() {
                continue;
            }
            let term = 2f64.powf(((j1 + j2) as f64) * params.alpha) * norm_lp_grid(&block, params.p)?;
            if theta.is_finite() {
                acc += term.powf(theta);
            } else {
                sup = sup.max(term);
            }
        }
    }
    Ok(if theta.is_finite() {
        acc.powf(1.0 / theta)
    } else {
        sup
    })
}

/// Piecewise-linear profile: 1 on `[-2,2]`, `2 − |t|/2` on `2 < |t| ≤ 4`,
/// 0 beyond.
pub fn chi_profile_base(t: f64) -> f64 {
    let a = t.abs();
    if a <= 2.0 {
        1.0
    } else if a <= 4.0 {
        2.0 - a / 2.0
    } else {
        0.0
    }
}

/// Level-`s` profile: the base profile for `s = 0`, otherwise the telescoped
/// ring `v(t/2^s)` with `v = v₀ − v₀(8·)`, supported on `2^{s-2} < |t| < 2^{s+2}`.
pub fn chi_profile(s: u32, t: f64) -> f64 {
    if s == 0 {
        chi_profile_base(t)
    } else {
        let u = t / 2f64.powi(s as i32);
        chi_profile_base(u) - chi_profile_base(8.0 * u)
    }
}

const CHI_TERM_CAP: u128 = 1 << 20;
const CHI_ROW_CAP: i128 = 1 << 25;

/// The dual-lattice polynomial `χ_s(x) = Σ_{k ∈ L(n)} v_{s1}(k1) v_{s2}(k2) e^{2πi k·x}`.
pub fn build_chi_s(n: u32, s: (u32, u32)) -> Result<TrigPoly2> {
    let fib = fibonacci(n)?;
    let k1max: i128 = 1i128 << (s.0 + 2);
    let k2max: i128 = 1i128 << (s.1 + 2);
    let est_terms = ((2 * k1max as u128 + 1) * (2 * k2max as u128 + 1)) / fib.b;
    if est_terms > CHI_TERM_CAP || k1max.max(k2max) > CHI_ROW_CAP {
        return Err(Error::CapExceeded(s.0, s.1, n));
    }
    let mut poly = TrigPoly2::new();
    // zero frequency: always dual, nonzero profile only when s = (0,0)
    let c0 = chi_profile(s.0, 0.0) * chi_profile(s.1, 0.0);
    if c0 != 0.0 {
        poly.add((0, 0), Complex64::new(c0, 0.0));
    }
    for k in dual_enumerate_box(n, k1max, k2max)? {
        let c = chi_profile(s.0, k.k1 as f64) * chi_profile(s.1, k.k2 as f64);
        if c != 0.0 {
            poly.add((k.k1 as i64, k.k2 as i64), Complex64::new(c, 0.0));
        }
    }
    Ok(poly)
}

/// Measured `‖χ_s‖_p` against the reference growth `(2^{|s|₁}/b_n)^{1-1/p}`.
pub fn chi_norm_check(n: u32, s: (u32, u32), p: f64) -> Result<(f64, f64)> {
    let poly = build_chi_s(n, s)?;
    let lhs = norm_lp_grid(&poly, p)?;
    let b = fibonacci(n)?.b as f64;
    let expo = if p.is_finite() { 1.0 - 1.0 / p } else { 1.0 };
    let rhs = (2f64.powi((s.0 + s.1) as i32) / b).powf(expo);
    Ok((lhs, rhs))
}
