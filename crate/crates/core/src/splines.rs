//! Cardinal B-splines, tensor-product atoms, the bivariate Faber basis, and
//! discrete Besov quasi-norms built on their coefficients.
//!
//! The order-`r` cardinal B-spline is the `r`-fold convolution of the unit
//! indicator, supported on `[0, r]`. Its dyadic dilations `N(2^k x − s)` are
//! the atoms behind both the stability checks and the fooling functions. In
//! two dimensions the order-2 system becomes the hierarchical hat (Faber)
//! basis, whose coefficients are scaled second differences at dyadic points:
//!
//! * level `(-1,-1)`: corner values `f(m1, m2)`, `m ∈ {0,1}²`,
//! * one hat axis: `-1/2 Δ²_h f` along that axis with `h = 2^{-j-1}`,
//! * two hat axes: `1/4 Δ²_{h1} Δ²_{h2} f` at the cell corner.
//!
//! The Besov quasi-norm of a coefficient family is
//! `( Σ_j 2^{|j|₁(α−1/p)θ} ( Σ_m |c_{j,m}|^p )^{θ/p} )^{1/θ}` with the usual
//! max conventions at `p = ∞` or `θ = ∞`.

use crate::error::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Order-`r` cardinal B-spline via the triangular order recursion; exact
/// piecewise-polynomial values, no numeric convolution.
pub fn eval_bspline(r: u32, x: f64) -> f64 {
    debug_assert!(r >= 1);
    if x < 0.0 || x >= r as f64 {
        // support is [0, r]; the right endpoint value is 0 anyway
        return 0.0;
    }
    if r == 1 {
        return 1.0; // indicator of [0, 1)
    }
    let rf = r as f64;
    (x * eval_bspline(r - 1, x) + (rf - x) * eval_bspline(r - 1, x - 1.0)) / (rf - 1.0)
}

/// Peak value of the order-`r` spline (attained at `x = r/2`).
pub fn bspline_peak(r: u32) -> f64 {
    eval_bspline(r, r as f64 / 2.0)
}

/// A tensor-product dilated translate `x ↦ Π N(2^{k_i} x_i − s_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSplineAtom {
    pub k: Vec<u32>,
    pub s: Vec<i64>,
    pub r: u32,
}

impl BSplineAtom {
    pub fn new(k: Vec<u32>, s: Vec<i64>, r: u32) -> Self {
        assert_eq!(k.len(), s.len());
        BSplineAtom { k, s, r }
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    /// Integral over all of space: `2^{-|k|₁}` since `∫N = 1` per axis.
    pub fn integral(&self) -> f64 {
        2f64.powi(-(self.k.iter().sum::<u32>() as i32))
    }
}

pub fn eval_atom(atom: &BSplineAtom, x: &[f64]) -> f64 {
    debug_assert_eq!(atom.dim(), x.len());
    let mut v = 1.0;
    for i in 0..x.len() {
        v *= eval_bspline(atom.r, x[i] * (1u64 << atom.k[i]) as f64 - atom.s[i] as f64);
        if v == 0.0 {
            return 0.0;
        }
    }
    v
}

/// Smoothness/integrability exponents `(α, p, θ)`; `p` and `θ` may be
/// `f64::INFINITY`. The rate laws additionally need `α > 1/p`, which is
/// checked where rates are claimed, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    pub alpha: f64,
    pub p: f64,
    pub theta: f64,
}

impl BesovParams {
    pub fn new(alpha: f64, p: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(p > 0.0) || !(theta > 0.0) {
            return Err(Error::invalid(format!(
                "besov parameters must be positive, got a={alpha}, p={p}, t={theta}"
            )));
        }
        Ok(BesovParams { alpha, p, theta })
    }

    pub fn inv_p(&self) -> f64 {
        if self.p.is_finite() {
            1.0 / self.p
        } else {
            0.0
        }
    }
}

/// ℓ_p aggregation of a slice with the max convention at `p = ∞`.
fn lp_aggregate(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_finite() {
        values.map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    } else {
        values.fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// One stored Faber level: a dense `n1 × n2` coefficient block.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelBlock {
    pub n1: usize,
    pub n2: usize,
    pub coef: Vec<f64>,
}

impl LevelBlock {
    pub fn new(n1: usize, n2: usize) -> Self {
        LevelBlock {
            n1,
            n2,
            coef: vec![0.0; n1 * n2],
        }
    }

    pub fn get(&self, m1: usize, m2: usize) -> f64 {
        self.coef[m1 * self.n2 + m2]
    }

    pub fn set(&mut self, m1: usize, m2: usize, v: f64) {
        self.coef[m1 * self.n2 + m2] = v;
    }
}

/// Coefficients of the bivariate Faber expansion, keyed by level
/// `(j1, j2) ∈ ({-1} ∪ ℕ₀)²` with `|D_{-1}| = 2` and `|D_j| = 2^j`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaberCoefficients {
    levels: BTreeMap<(i32, i32), LevelBlock>,
}

pub fn level_size(j: i32) -> usize {
    if j < 0 {
        2
    } else {
        1usize << j
    }
}

impl FaberCoefficients {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_level(&mut self, j: (i32, i32), block: LevelBlock) {
        assert_eq!(block.n1, level_size(j.0));
        assert_eq!(block.n2, level_size(j.1));
        self.levels.insert(j, block);
    }

    pub fn level(&self, j: (i32, i32)) -> Option<&LevelBlock> {
        self.levels.get(&j)
    }

    pub fn levels(&self) -> impl Iterator<Item = (&(i32, i32), &LevelBlock)> {
        self.levels.iter()
    }

    pub fn get(&self, j: (i32, i32), m: (usize, usize)) -> f64 {
        self.levels.get(&j).map_or(0.0, |b| b.get(m.0, m.1))
    }

    pub fn coefficient_count(&self) -> usize {
        self.levels.values().map(|b| b.coef.len()).sum()
    }

    pub fn scale(&mut self, c: f64) {
        for b in self.levels.values_mut() {
            for v in &mut b.coef {
                *v *= c;
            }
        }
    }

    /// Coefficient-wise sum; missing levels count as zero.
    pub fn add(&self, other: &FaberCoefficients) -> FaberCoefficients {
        let mut out = self.clone();
        for (j, b) in other.levels.iter() {
            match out.levels.get_mut(j) {
                Some(mine) => {
                    for (x, y) in mine.coef.iter_mut().zip(&b.coef) {
                        *x += y;
                    }
                }
                None => {
                    out.levels.insert(*j, b.clone());
                }
            }
        }
        out
    }
}

/// Univariate Faber factor: hats `v_{j,m}` for `j ≥ 0`, and the boundary
/// pair `v_0 = 1 − x`, `v_1 = x` at level −1.
pub fn faber_factor(j: i32, m: usize, x: f64) -> f64 {
    if j < 0 {
        return if m == 0 { 1.0 - x } else { x };
    }
    let t = (2f64).powi(j + 1) * x - (2 * m + 1) as f64;
    (1.0 - t.abs()).max(0.0)
}

fn hat_coefficient_step(j: i32) -> f64 {
    2f64.powi(-(j + 1))
}

/// Extracts all coefficients up to hat level `j_max` on both axes.
pub fn faber_decompose<F: Fn(f64, f64) -> f64>(f: F, j_max: u32) -> FaberCoefficients {
    let mut out = FaberCoefficients::new();
    let jm = j_max as i32;
    for j1 in -1..=jm {
        for j2 in -1..=jm {
            let n1 = level_size(j1);
            let n2 = level_size(j2);
            let mut block = LevelBlock::new(n1, n2);
            for m1 in 0..n1 {
                for m2 in 0..n2 {
                    block.set(m1, m2, faber_coefficient(&f, (j1, j2), (m1, m2)));
                }
            }
            out.insert_level((j1, j2), block);
        }
    }
    out
}

/// One Faber coefficient `D²_{j,m}(f)`.
pub fn faber_coefficient<F: Fn(f64, f64) -> f64>(f: &F, j: (i32, i32), m: (usize, usize)) -> f64 {
    // per-axis stencil: points and weights of the second difference
    let axis = |jj: i32, mm: usize| -> (Vec<f64>, Vec<f64>) {
        if jj < 0 {
            (vec![mm as f64], vec![1.0])
        } else {
            let h = hat_coefficient_step(jj);
            let x0 = 2f64.powi(-jj) * mm as f64;
            (
                vec![x0, x0 + h, x0 + 2.0 * h],
                vec![-0.5, 1.0, -0.5],
            )
        }
    };
    let (xs, wx) = axis(j.0, m.0);
    let (ys, wy) = axis(j.1, m.1);
    let mut acc = 0.0;
    for (x, wa) in xs.iter().zip(&wx) {
        for (y, wb) in ys.iter().zip(&wy) {
            acc += wa * wb * f(*x, *y);
        }
    }
    acc
}

/// Evaluates `Σ_j Σ_m D²_{j,m} v_{j,m}(x)` over the stored levels. Hats at a
/// fixed level have disjoint interiors, so each level contributes O(1) terms.
pub fn faber_reconstruct(coeffs: &FaberCoefficients, x: f64, y: f64) -> f64 {
    let mut total = 0.0;
    for (&(j1, j2), block) in coeffs.levels() {
        let m1s = active_factors(j1, x, block.n1);
        let m2s = active_factors(j2, y, block.n2);
        for &(m1, v1) in &m1s {
            if v1 == 0.0 {
                continue;
            }
            for &(m2, v2) in &m2s {
                if v2 != 0.0 {
                    total += block.get(m1, m2) * v1 * v2;
                }
            }
        }
    }
    total
}

fn active_factors(j: i32, x: f64, n: usize) -> Vec<(usize, f64)> {
    if j < 0 {
        return vec![(0, 1.0 - x), (1, x)];
    }
    let cell = ((x * n as f64).floor() as isize).clamp(0, n as isize - 1) as usize;
    let mut out = Vec::with_capacity(2);
    for m in [cell.saturating_sub(1), cell] {
        let v = faber_factor(j, m, x);
        if v != 0.0 {
            out.push((m, v));
        }
    }
    out.dedup_by_key(|e| e.0);
    out
}

/// Discrete Besov quasi-norm of Faber coefficients. Level components of −1
/// are clamped to 0 inside the dyadic weight `2^{|j|₁(α−1/p)}`, so boundary
/// terms carry no extra weight.
pub fn besov_norm_faber(coeffs: &FaberCoefficients, params: &BesovParams) -> f64 {
    let w = params.alpha - params.inv_p();
    let per_level = coeffs.levels().map(|(&(j1, j2), block)| {
        let jsum = (j1.max(0) + j2.max(0)) as f64;
        2f64.powf(jsum * w) * lp_aggregate(block.coef.iter().copied(), params.p)
    });
    lp_aggregate(per_level, params.theta)
}

/// B-spline coefficient quasi-norm
/// `( Σ_k 2^{θ(α−1/p)|k|₁} [ Σ_s |c_{k,s}|^p ]^{θ/p} )^{1/θ}` over the terms,
/// grouped by level `k ∈ ℤ₊^d`.
pub fn bspline_quasinorm(terms: &[(Vec<u32>, Vec<i64>, f64)], params: &BesovParams) -> f64 {
    let mut by_level: BTreeMap<&[u32], Vec<f64>> = BTreeMap::new();
    for (k, _, c) in terms {
        by_level.entry(k.as_slice()).or_default().push(*c);
    }
    let w = params.alpha - params.inv_p();
    let per_level = by_level.iter().map(|(k, cs)| {
        let ksum = k.iter().sum::<u32>() as f64;
        2f64.powf(ksum * w) * lp_aggregate(cs.iter().copied(), params.p)
    });
    lp_aggregate(per_level, params.theta)
}

/// Number of shifts per axis in `J^d(k)`: `s_j ∈ (-r, 2^{k_j})`.
pub fn shift_count(k: u32, r: u32) -> usize {
    (1usize << k) + r as usize - 1
}

/// Compares `‖Σ a_s N_{k,s}‖_p` on the unit cube against the discrete side
/// `2^{-|k|₁/p} (Σ |a_s|^p)^{1/p}`. Coefficients are indexed row-major over
/// `J^d(k)` with `s_j = index_j - (r-1)`. The continuous norm is estimated by
/// a midpoint rule at per-axis resolution `k_i + 6`.
pub fn stability_check(r: u32, k: &[u32], coeffs: &[f64], p: f64) -> (f64, f64) {
    let d = k.len();
    let dims: Vec<usize> = k.iter().map(|&ki| shift_count(ki, r)).collect();
    assert_eq!(coeffs.len(), dims.iter().product::<usize>());

    let ksum: u32 = k.iter().sum();
    let discrete = 2f64.powf(-(ksum as f64) * if p.is_finite() { 1.0 / p } else { 0.0 })
        * lp_aggregate(coeffs.iter().copied(), p);

    // grid norm of g = Σ a_s N_{k,s}; only r shifts per axis touch any point
    let res: Vec<u64> = k.iter().map(|&ki| 1u64 << (ki + 6)).collect();
    let eval = |x: &[f64]| -> f64 {
        let mut total = 0.0;
        let mut idx = vec![0i64; d];
        let mut offs = vec![0u32; d];
        loop {
            let mut v = 1.0;
            let mut flat = 0usize;
            for i in 0..d {
                let t = x[i] * (1u64 << k[i]) as f64;
                let s_hi = t.floor() as i64;
                let s = s_hi - offs[i] as i64;
                if s <= -(r as i64) || s >= (1i64 << k[i]) {
                    v = 0.0;
                    break;
                }
                idx[i] = s + (r as i64 - 1);
                if idx[i] < 0 || idx[i] >= dims[i] as i64 {
                    v = 0.0;
                    break;
                }
                flat = flat * dims[i] + idx[i] as usize;
                v *= eval_bspline(r, t - s as f64);
            }
            if v != 0.0 {
                total += coeffs[flat] * v;
            }
            // advance the per-axis shift offsets 0..r-1
            let mut i = 0;
            loop {
                if i == d {
                    return total;
                }
                offs[i] += 1;
                if offs[i] < r {
                    break;
                }
                offs[i] = 0;
                i += 1;
            }
        }
    };

    let continuous = if d == 2 {
        let (m1, m2) = (res[0], res[1]);
        let (h1, h2) = (1.0 / m1 as f64, 1.0 / m2 as f64);
        if p.is_finite() {
            let sum: f64 = (0..m1)
                .into_par_iter()
                .map(|i| {
                    let x = (i as f64 + 0.5) * h1;
                    let mut row = 0.0;
                    for j in 0..m2 {
                        let y = (j as f64 + 0.5) * h2;
                        row += eval(&[x, y]).abs().powf(p);
                    }
                    row
                })
                .sum();
            (sum * h1 * h2).powf(1.0 / p)
        } else {
            (0..m1)
                .into_par_iter()
                .map(|i| {
                    let x = (i as f64 + 0.5) * h1;
                    let mut best = 0.0f64;
                    for j in 0..m2 {
                        let y = (j as f64 + 0.5) * h2;
                        best = best.max(eval(&[x, y]).abs());
                    }
                    best
                })
                .reduce(|| 0.0, f64::max)
        }
    } else {
        // generic-dimension fallback, sequential
        let total_pts: u64 = res.iter().product();
        let mut acc = 0.0f64;
        let mut maxv = 0.0f64;
        let mut x = vec![0.0; d];
        for flat in 0..total_pts {
            let mut rem = flat;
            for i in (0..d).rev() {
                let c = rem % res[i];
                rem /= res[i];
                x[i] = (c as f64 + 0.5) / res[i] as f64;
            }
            let v = eval(&x).abs();
            if p.is_finite() {
                acc += v.powf(p);
            } else {
                maxv = maxv.max(v);
            }
        }
        if p.is_finite() {
            let cellvol: f64 = res.iter().map(|&m| 1.0 / m as f64).product();
            (acc * cellvol).powf(1.0 / p)
        } else {
            maxv
        }
    };

    (continuous, discrete)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bspline_values() {
        assert_eq!(eval_bspline(2, 1.0), 1.0);
        assert_eq!(eval_bspline(3, 1.5), 0.75);
        for r in 1..=5 {
            assert_eq!(eval_bspline(r, -0.3), 0.0);
            assert_eq!(eval_bspline(r, r as f64 + 0.1), 0.0);
            assert_eq!(eval_bspline(r, r as f64), 0.0);
        }
        assert_abs_diff_eq!(bspline_peak(4), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn bspline_partition_of_unity() {
        for r in 2..=4 {
            for &x in &[0.1, 0.5, 1.9, 2.7, 3.3] {
                let sum: f64 = (-10..10).map(|s| eval_bspline(r, x - s as f64)).sum();
                assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn atom_peak_and_integral() {
        let atom = BSplineAtom::new(vec![0, 0], vec![0, 0], 2);
        assert_eq!(eval_atom(&atom, &[1.0, 1.0]), 1.0);
        assert_eq!(atom.integral(), 1.0);
        let atom = BSplineAtom::new(vec![2, 3], vec![1, 2], 3);
        assert_abs_diff_eq!(atom.integral(), 2f64.powi(-5), epsilon = 1e-16);
        // quadrature oracle for the integral over the support box
        let (k1, k2) = (2u32, 3u32);
        let n = 1 << 9;
        let h = 1.0 / n as f64;
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += eval_atom(&atom, &[(i as f64 + 0.5) * h, (j as f64 + 0.5) * h]);
            }
        }
        q *= h * h;
        assert_abs_diff_eq!(q, 2f64.powi(-((k1 + k2) as i32)), epsilon = 1e-6);
    }

    #[test]
    fn atom_vanishes_outside_its_support_cells() {
        // support of N(2^k x - s) is s/2^k ..= (s+r)/2^k per axis
        let atom = BSplineAtom::new(vec![2, 2], vec![1, 2], 2);
        for i in 0..=4i64 {
            for j in 0..=4i64 {
                let x = [i as f64 / 4.0, j as f64 / 4.0];
                let outside = i <= 1 || i >= 3 || j <= 2 || j >= 4;
                if outside {
                    assert_eq!(eval_atom(&atom, &x), 0.0, "{x:?}");
                }
            }
        }
        // interior corner of the 2-cell-wide hat atom is its peak
        assert_eq!(eval_atom(&atom, &[0.5, 0.75]), 1.0);
    }

    fn hatprod(x: f64, y: f64) -> f64 {
        x * (1.0 - x) * y * (1.0 - y)
    }

    #[test]
    fn faber_coefficients_of_hatprod() {
        let c = faber_decompose(hatprod, 2);
        assert_abs_diff_eq!(c.get((0, 0), (0, 0)), 1.0 / 16.0, epsilon = 1e-15);
        for m1 in 0..2 {
            for m2 in 0..2 {
                assert_eq!(c.get((-1, -1), (m1, m2)), 0.0);
            }
        }
    }

    #[test]
    fn faber_annihilates_bilinear() {
        let c = faber_decompose(|x, y| 1.0 + 2.0 * x - y + 3.0 * x * y, 3);
        for (&j, block) in c.levels() {
            if j.0 >= 0 || j.1 >= 0 {
                for v in &block.coef {
                    assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn reconstruct_bilinear_everywhere() {
        let c = faber_decompose(|x, y| x * y, 0);
        for &x in &[0.0, 0.21, 0.5, 0.77, 1.0] {
            for &y in &[0.0, 0.3, 0.9, 1.0] {
                assert_abs_diff_eq!(faber_reconstruct(&c, x, y), x * y, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn zero_coefficients_reconstruct_zero() {
        let c = FaberCoefficients::new();
        assert_eq!(faber_reconstruct(&c, 0.37, 0.91), 0.0);
    }

    #[test]
    fn decompose_reconstruct_interpolates_dyadic_points() {
        let f = |x: f64, y: f64| (2.0 * x - 0.3).sin() * (1.3 * y * y + 0.2 * x) + x * y;
        let j_max = 4u32;
        let c = faber_decompose(f, j_max);
        let n = 1usize << (j_max + 1);
        for i in 0..=n {
            for j in 0..=n {
                let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
                assert_abs_diff_eq!(faber_reconstruct(&c, x, y), f(x, y), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn besov_norm_examples() {
        let params = BesovParams::new(1.5, 2.0, 2.0).unwrap();
        let mut c = FaberCoefficients::new();
        let mut b = LevelBlock::new(1, 1);
        b.set(0, 0, 1.0);
        c.insert_level((0, 0), b);
        assert_abs_diff_eq!(besov_norm_faber(&c, &params), 1.0, epsilon = 1e-15);

        // single coefficient 2^{-|j|(α-1/p)} at level j has norm 1
        let (j1, j2) = (2i32, 3i32);
        let w = params.alpha - params.inv_p();
        let mut c = FaberCoefficients::new();
        let mut b = LevelBlock::new(4, 8);
        b.set(1, 5, 2f64.powf(-((j1 + j2) as f64) * w));
        c.insert_level((j1, j2), b);
        assert_abs_diff_eq!(besov_norm_faber(&c, &params), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn besov_norm_homogeneity_exact() {
        let f = |x: f64, y: f64| (x * 1.7).cos() + y * x;
        let c = faber_decompose(f, 3);
        let mut c4 = c.clone();
        c4.scale(-4.0);
        for (p, t) in [(1.0, 1.0), (2.0, 2.0), (f64::INFINITY, 0.5), (0.7, f64::INFINITY)] {
            let params = BesovParams::new(1.1, p, t).unwrap();
            let a = besov_norm_faber(&c, &params);
            let b = besov_norm_faber(&c4, &params);
            assert_abs_diff_eq!(b, 4.0 * a, epsilon = 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn besov_level_homogeneity_family() {
        // f_j = 2^{-|j|(α-1/p)} v_{j,m} has norm exactly 1 for every level
        let params = BesovParams::new(2.0, 1.0, f64::INFINITY).unwrap();
        let w = params.alpha - params.inv_p();
        for j1 in -1i32..=4 {
            for j2 in -1i32..=4 {
                let jsum = (j1.max(0) + j2.max(0)) as f64;
                let mut block = LevelBlock::new(level_size(j1), level_size(j2));
                block.set(0, 0, 2f64.powf(-jsum * w));
                let mut c = FaberCoefficients::new();
                c.insert_level((j1, j2), block);
                assert_abs_diff_eq!(besov_norm_faber(&c, &params), 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn quasi_triangle_inequality() {
        let f = |x: f64, y: f64| (x - 0.4) * (y + 0.1) * y;
        let g = |x: f64, y: f64| (3.1 * x).sin() + 0.2 * y;
        let cf = faber_decompose(f, 3);
        let cg = faber_decompose(g, 3);
        let cs = cf.add(&cg);
        for (p, t) in [(0.5, 0.5), (1.0, 0.6), (2.0, 2.0), (f64::INFINITY, 1.0)] {
            let params = BesovParams::new(1.3, p, t).unwrap();
            let cap = 2f64.powf((1f64).max(1.0 / p.min(1e300)).max(1.0 / t.min(1e300)));
            let lhs = besov_norm_faber(&cs, &params);
            let rhs = besov_norm_faber(&cf, &params) + besov_norm_faber(&cg, &params);
            assert!(lhs <= cap * rhs * (1.0 + 1e-12), "p={p} t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn quasinorm_examples() {
        let params = BesovParams::new(1.5, 2.0, 2.0).unwrap();
        let one = vec![(vec![0u32, 0], vec![0i64, 0], 1.0)];
        assert_abs_diff_eq!(bspline_quasinorm(&one, &params), 1.0, epsilon = 1e-15);
        let scaled: Vec<_> = one.iter().map(|(k, s, c)| (k.clone(), s.clone(), 3.0 * c)).collect();
        assert_abs_diff_eq!(bspline_quasinorm(&scaled, &params), 3.0, epsilon = 1e-15);

        // level k filled with 2^{|k|} unit coefficients and p = θ gives 2^{α|k|}
        for (k1, k2) in [(1u32, 2u32), (3, 0), (2, 2)] {
            let mut terms = Vec::new();
            for s1 in 0..(1i64 << k1) {
                for s2 in 0..(1i64 << k2) {
                    terms.push((vec![k1, k2], vec![s1, s2], 1.0));
                }
            }
            let norm = bspline_quasinorm(&terms, &params);
            let expect = 2f64.powf(params.alpha * (k1 + k2) as f64);
            assert_abs_diff_eq!(norm, expect, epsilon = 1e-9 * expect);
        }
    }

    #[test]
    fn stability_single_unit_coefficient_sup() {
        for r in [2u32, 3, 4] {
            let k = [1u32, 1];
            let dims = shift_count(1, r);
            let mut coeffs = vec![0.0; dims * dims];
            // interior-ish shift s = (0,0) -> index r-1 each axis
            coeffs[(r as usize - 1) * dims + (r as usize - 1)] = 1.0;
            let (lhs, rhs) = stability_check(r, &k, &coeffs, f64::INFINITY);
            assert_abs_diff_eq!(rhs, 1.0, epsilon = 1e-15);
            let peak2 = bspline_peak(r).powi(2);
            assert!(lhs <= 1.0 + 1e-9 && lhs >= 0.8 * peak2, "r={r} lhs={lhs}");
        }
    }

    #[test]
    fn stability_partition_of_unity_sup() {
        // all-equal coefficients reach sup 1 in the interior
        let r = 3u32;
        let k = [2u32, 1];
        let coeffs = vec![1.0; shift_count(2, r) * shift_count(1, r)];
        let (lhs, rhs) = stability_check(r, &k, &coeffs, f64::INFINITY);
        assert_abs_diff_eq!(lhs, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn stability_single_atom_l1() {
        // an interior atom integrates to 2^{-|k|}, matching the discrete side
        let r = 2u32;
        let k = [2u32, 2];
        let dims = shift_count(2, r);
        let mut coeffs = vec![0.0; dims * dims];
        coeffs[(r as usize) * dims + r as usize] = 1.0; // s = (1,1)
        let (lhs, rhs) = stability_check(r, &k, &coeffs, 1.0);
        assert_abs_diff_eq!(rhs, 2f64.powi(-4), epsilon = 1e-15);
        assert_abs_diff_eq!(lhs, 2f64.powi(-4), epsilon = 2e-6);
    }
}
