//! Fibonacci numbers, the two-dimensional Fibonacci integration lattice and
//! its dual lattice.
//!
//! The lattice with `b_n` points is `{ (μ/b_n, {μ b_{n-1}/b_n}) : μ = 0..b_n }`
//! where `b_0 = b_1 = 1`, `b_n = b_{n-1} + b_{n-2}`. Its dual consists of the
//! integer frequencies `k` with `k_1 + b_{n-1} k_2 ≡ 0 (mod b_n)`; these are
//! exactly the exponentials the equal-weight rule fails to annihilate, so all
//! error analysis reduces to arithmetic on this set. Everything here is exact:
//! coordinates are rationals, membership is 128-bit modular arithmetic, and
//! floats appear only at the output boundary.

use crate::error::{Error, Result};
use crate::rat::{rat, Rat};

/// Largest supported index; `μ · b_{n-1}` stays inside `u128` well past this,
/// but `b_n` itself should remain far from the signed 128-bit edge since dual
/// arithmetic multiplies `b_{n-1}` with user-supplied frequencies.
pub const MAX_FIB_INDEX: u32 = 80;

/// Largest index for the O(b_n) Zaremba scan.
pub const MAX_ZAREMBA_INDEX: u32 = 45;

/// A Fibonacci number `b_n` together with its predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibonacciIndex {
    pub n: u32,
    pub b: u128,
    pub b_prev: u128,
}

/// Computes `b_n` and `b_{n-1}` by the recursion. For `n = 0` the predecessor
/// is reported as 0, consistent with running the recursion backwards.
pub fn fibonacci(n: u32) -> Result<FibonacciIndex> {
    if n > MAX_FIB_INDEX {
        return Err(Error::OverflowGuard(n, MAX_FIB_INDEX));
    }
    // advance (b_{k-1}, b_k) starting from (b_{-1}, b_0) = (0, 1)
    let (mut prev, mut cur) = (0u128, 1u128);
    for _ in 0..n {
        let next = cur + prev;
        prev = cur;
        cur = next;
    }
    Ok(FibonacciIndex {
        n,
        b: cur,
        b_prev: prev,
    })
}

/// One lattice node: exact coordinates `(μ/b_n, (μ b_{n-1} mod b_n)/b_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticePoint2 {
    pub mu: u64,
    pub x: Rat,
    pub y: Rat,
}

impl LatticePoint2 {
    pub fn as_float(&self) -> (f64, f64) {
        (
            crate::rat::rat_to_f64(&self.x),
            crate::rat::rat_to_f64(&self.y),
        )
    }
}

/// Streaming form of the lattice; `fibonacci_lattice` collects it.
pub fn fibonacci_lattice_iter(n: u32) -> Result<impl Iterator<Item = LatticePoint2>> {
    if n < 1 {
        return Err(Error::RangeGuard {
            what: "fibonacci lattice",
            got: n,
            lo: 1,
            hi: MAX_FIB_INDEX,
        });
    }
    let fib = fibonacci(n)?;
    let b = fib.b;
    let bp = fib.b_prev;
    Ok((0..b as u64).map(move |mu| {
        let y_num = (mu as u128 * bp) % b;
        LatticePoint2 {
            mu,
            x: rat(mu as i128, b as i128),
            y: rat(y_num as i128, b as i128),
        }
    }))
}

pub fn fibonacci_lattice(n: u32) -> Result<Vec<LatticePoint2>> {
    Ok(fibonacci_lattice_iter(n)?.collect())
}

/// An integer frequency vector tested against the dual lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector {
    pub k1: i128,
    pub k2: i128,
}

impl DualVector {
    pub fn new(k1: i128, k2: i128) -> Self {
        DualVector { k1, k2 }
    }

    pub fn is_zero(&self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    /// Zaremba product `max(1,|k1|) · max(1,|k2|)`.
    pub fn product(&self) -> i128 {
        self.k1.abs().max(1) * self.k2.abs().max(1)
    }
}

/// Membership test `k1 + b_{n-1} k2 ≡ 0 (mod b_n)`.
pub fn dual_membership(k: DualVector, fib: FibonacciIndex) -> bool {
    let b = fib.b as i128;
    let bp = fib.b_prev as i128;
    (k.k1 % b + (bp % b) * (k.k2 % b)).rem_euclid(b) == 0
}

/// The parametrization `(u b_{n-2} - v b_{n-3}, u + 2v)` of the dual lattice.
pub fn dual_representation(u: i128, v: i128, n: u32) -> Result<DualVector> {
    if n < 3 {
        return Err(Error::RangeGuard {
            what: "dual representation",
            got: n,
            lo: 3,
            hi: MAX_FIB_INDEX,
        });
    }
    let b2 = fibonacci(n - 2)?.b as i128;
    let b3 = fibonacci(n - 3)?.b as i128;
    Ok(DualVector::new(u * b2 - v * b3, u + 2 * v))
}

/// Inverts `dual_representation` exactly: for a dual vector `k` with
/// `k1 + b_{n-1} k2 = ℓ b_n`, the pair `(u, v) = (2ℓ - k2, k2 - ℓ)` works.
/// Returns `None` when `k` is not in the dual lattice.
pub fn dual_solve(k: DualVector, n: u32) -> Result<Option<(i128, i128)>> {
    if n < 3 {
        return Err(Error::RangeGuard {
            what: "dual solve",
            got: n,
            lo: 3,
            hi: MAX_FIB_INDEX,
        });
    }
    let fib = fibonacci(n)?;
    let b = fib.b as i128;
    let bp = fib.b_prev as i128;
    let t = k.k1 + bp * k.k2;
    if t.rem_euclid(b) != 0 {
        return Ok(None);
    }
    let l = t / b;
    Ok(Some((2 * l - k.k2, k.k2 - l)))
}

/// All nonzero dual vectors inside the box `|k1| ≤ k1max`, `|k2| ≤ k2max`,
/// in row order (`k2` ascending, then `k1` ascending). Each row is solved by
/// the congruence and stepped by `b_n`, so the cost is
/// `O(k2max · (1 + k1max/b_n))` instead of a full box scan.
pub fn dual_enumerate_box(n: u32, k1max: i128, k2max: i128) -> Result<Vec<DualVector>> {
    let fib = fibonacci(n)?;
    let b = fib.b as i128;
    let bp = (fib.b_prev as i128) % b;
    let mut out = Vec::new();
    for k2 in -k2max..=k2max {
        let r0 = (-bp * (k2 % b)).rem_euclid(b);
        let mut k1 = -k1max + (r0 + k1max).rem_euclid(b);
        while k1 <= k1max {
            if !(k1 == 0 && k2 == 0) {
                out.push(DualVector::new(k1, k2));
            }
            k1 += b;
        }
    }
    Ok(out)
}

/// Square-box form of [`dual_enumerate_box`].
pub fn dual_enumerate(n: u32, kmax: i128) -> Result<Vec<DualVector>> {
    dual_enumerate_box(n, kmax, kmax)
}

/// Minimum of `max(1,|k1|) · max(1,|k2|)` over nonzero dual vectors, with a
/// witness attaining it. Scans `k2 ∈ [0, b_n]` keeping per row the centered
/// residue `k1 ∈ (-b_n/2, b_n/2]`, which minimizes `|k1|` within the row;
/// rows beyond `b_n` and negated vectors cannot improve the minimum.
pub fn zaremba_min_product(n: u32) -> Result<(i128, DualVector)> {
    if !(3..=MAX_ZAREMBA_INDEX).contains(&n) {
        return Err(Error::RangeGuard {
            what: "zaremba scan",
            got: n,
            lo: 3,
            hi: MAX_ZAREMBA_INDEX,
        });
    }
    let fib = fibonacci(n)?;
    let b = fib.b as i128;
    let bp = fib.b_prev as i128;
    // k2 = 0 row: the only nonzero candidates are multiples of b_n.
    let mut best_val = b;
    let mut best = DualVector::new(b, 0);
    let mut r: i128 = 0; // residue of -bp*k2 mod b, updated incrementally
    for k2 in 1..=b {
        r -= bp;
        if r < 0 {
            r += b;
        }
        let k1 = if 2 * r > b { r - b } else { r };
        let cand = DualVector::new(k1, k2);
        let val = cand.product();
        if val < best_val {
            best_val = val;
            best = cand;
        }
    }
    Ok((best_val, best))
}
