//! Smolyak sparse grids, the hierarchical Faber sampling operator on them,
//! and the cubature weights it induces.
//!
//! The grid is `G^d(m) = ∪_{|k|₁ = m} I_{k1} × … × I_{kd}` with
//! `I_k = {2^{-k} ℓ : ℓ < 2^k}`; nesting makes the union over `|k|₁ ≤ m`
//! identical. Note the grid is half-open. The interpolation operator keeps
//! the Faber levels `j` with `Σ (j_i + 1)₊ ≤ m` (a level-`j` surplus stencil
//! needs dyadic resolution `j + 1`), which means its stencils additionally
//! touch the closure points with a coordinate equal to 1; those boundary
//! samples are part of the operator even though the paper-counted grid is
//! half-open. Cubature weights are obtained by pushing the exact hat
//! integrals `∫v_{j,m} = 2^{-j-1}` (and 1/2 for each boundary factor)
//! through every coefficient stencil, accumulated in exact dyadic rationals.

use crate::cubature::CubatureRule;
use crate::error::{Error, Result};
use crate::rat::{dyadic, rat, Rat};
use crate::splines::{faber_coefficient, faber_reconstruct, FaberCoefficients, LevelBlock};
use num::Zero;
use std::collections::BTreeMap;

const MAX_GRID_POINTS: u64 = 1 << 24;

/// The sparse dyadic grid with level bookkeeping.
#[derive(Debug, Clone)]
pub struct SmolyakGrid {
    pub d: usize,
    pub m: u32,
    /// Deduplicated points, sorted lexicographically, all of the form `2^{-k}ℓ`.
    pub points: Vec<Vec<Rat>>,
    /// The generating level vectors `k` with `|k|₁ = m`.
    pub level_vectors: Vec<Vec<u32>>,
}

/// All compositions of `total` into `d` nonnegative parts, lexicographic.
pub fn compositions(total: u32, d: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, d: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=total {
            prefix.push(v);
            rec(total - v, d - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, d, &mut Vec::new(), &mut out);
    out
}

pub fn smolyak_grid(d: usize, m: u32) -> Result<SmolyakGrid> {
    assert!(d >= 1);
    let level_vectors = compositions(m, d);
    let raw: u64 = level_vectors
        .iter()
        .map(|k| k.iter().map(|&ki| 1u64 << ki).product::<u64>())
        .sum();
    if raw > MAX_GRID_POINTS {
        return Err(Error::SizeGuard {
            d,
            m,
            max: MAX_GRID_POINTS,
        });
    }
    let mut set: std::collections::BTreeSet<Vec<Rat>> = std::collections::BTreeSet::new();
    for k in &level_vectors {
        let mut idx = vec![0u64; d];
        loop {
            set.insert(
                idx.iter()
                    .zip(k.iter())
                    .map(|(&l, &ki)| dyadic(l as i128, ki))
                    .collect(),
            );
            let mut axis = 0;
            loop {
                if axis == d {
                    break;
                }
                idx[axis] += 1;
                if idx[axis] < (1u64 << k[axis]) {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == d {
                break;
            }
        }
    }
    Ok(SmolyakGrid {
        d,
        m,
        points: set.into_iter().collect(),
        level_vectors,
    })
}

/// Faber levels admissible at sparse budget `m`: `Σ (j_i + 1)₊ ≤ m` with the
/// boundary level −1 contributing 0.
pub fn admissible_levels(m: u32) -> Vec<(i32, i32)> {
    let m = m as i32;
    let mut out = Vec::new();
    for j1 in -1..=(m - 1) {
        for j2 in -1..=(m - 1) {
            if (j1 + 1).max(0) + (j2 + 1).max(0) <= m {
                out.push((j1, j2));
            }
        }
    }
    out
}

/// Hierarchical surpluses of the sparse sampling operator: the Faber
/// coefficients over the admissible level triangle.
#[derive(Debug, Clone)]
pub struct SparseSurplus {
    pub m: u32,
    pub coeffs: FaberCoefficients,
}

impl SparseSurplus {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        faber_reconstruct(&self.coeffs, x, y)
    }
}

pub fn smolyak_interpolate<F: Fn(f64, f64) -> f64>(f: F, m: u32) -> SparseSurplus {
    let mut coeffs = FaberCoefficients::new();
    for (j1, j2) in admissible_levels(m) {
        let n1 = crate::splines::level_size(j1);
        let n2 = crate::splines::level_size(j2);
        let mut block = LevelBlock::new(n1, n2);
        for m1 in 0..n1 {
            for m2 in 0..n2 {
                block.set(m1, m2, faber_coefficient(&f, (j1, j2), (m1, m2)));
            }
        }
        coeffs.insert_level((j1, j2), block);
    }
    SparseSurplus { m, coeffs }
}

/// Per-axis stencil of one Faber coefficient: dyadic points with their
/// difference weights, plus the exact integral of the matching basis factor.
fn axis_stencil(j: i32, m: usize) -> (Vec<(Rat, Rat)>, Rat) {
    if j < 0 {
        (vec![(rat(m as i128, 1), rat(1, 1))], rat(1, 2))
    } else {
        let ju = j as u32;
        let base = 2 * m as i128;
        (
            vec![
                (dyadic(base, ju + 1), rat(-1, 2)),
                (dyadic(base + 1, ju + 1), rat(1, 1)),
                (dyadic(base + 2, ju + 1), rat(-1, 2)),
            ],
            dyadic(1, ju + 1),
        )
    }
}

/// The cubature rule induced by integrating the sparse interpolant: weights
/// `λ_ξ = Σ D-stencil(ξ) · ∫v_{j,m}` accumulated exactly, nodes inside the
/// closure of the sparse grid.
pub fn smolyak_cubature(m: u32) -> Result<CubatureRule> {
    let raw: u64 = admissible_levels(m)
        .iter()
        .map(|&(j1, j2)| (crate::splines::level_size(j1) * crate::splines::level_size(j2)) as u64)
        .sum();
    if raw * 9 > MAX_GRID_POINTS {
        return Err(Error::SizeGuard {
            d: 2,
            m,
            max: MAX_GRID_POINTS,
        });
    }
    let mut acc: BTreeMap<(Rat, Rat), Rat> = BTreeMap::new();
    for (j1, j2) in admissible_levels(m) {
        for m1 in 0..crate::splines::level_size(j1) {
            let (sx, ix) = axis_stencil(j1, m1);
            for m2 in 0..crate::splines::level_size(j2) {
                let (sy, iy) = axis_stencil(j2, m2);
                let vol = ix * iy;
                for &(x, wx) in &sx {
                    for &(y, wy) in &sy {
                        *acc.entry((x, y)).or_insert_with(Rat::zero) += wx * wy * vol;
                    }
                }
            }
        }
    }
    let pairs: Vec<(Vec<Rat>, f64)> = acc
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|((x, y), w)| (vec![x, y], crate::rat::rat_to_f64(&w)))
        .collect();
    Ok(CubatureRule::new(
        2,
        pairs,
        format!("smolyak:2,{m}"),
    ))
}

/// `‖f − S_m f‖_q` estimated on a uniform grid of resolution `m + 4`:
/// midpoint rectangle rule for finite `q`, closed-lattice sup for `q = ∞`.
pub fn sampling_error<F: Fn(f64, f64) -> f64 + Sync>(f: F, m: u32, q: f64) -> f64 {
    use rayon::prelude::*;
    let surplus = smolyak_interpolate(&f, m);
    let n = 1u64 << (m + 4);
    if q.is_finite() {
        let h = 1.0 / n as f64;
        let sum: f64 = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                let mut row = 0.0;
                for j in 0..n {
                    let y = (j as f64 + 0.5) * h;
                    row += (f(x, y) - surplus.eval(x, y)).abs().powf(q);
                }
                row
            })
            .sum();
        (sum * h * h).powf(1.0 / q)
    } else {
        (0..=n)
            .into_par_iter()
            .map(|i| {
                let x = i as f64 / n as f64;
                let mut best = 0.0f64;
                for j in 0..=n {
                    let y = j as f64 / n as f64;
                    best = best.max((f(x, y) - surplus.eval(x, y)).abs());
                }
                best
            })
            .reduce(|| 0.0, f64::max)
    }
}
