//! Weighted cubature rules on the unit cube.
//!
//! A rule is a finite node/weight list applied by compensated summation in a
//! canonical (lexicographic) node order, so results do not depend on
//! construction order. The two Fibonacci-based rules live here: the
//! equal-weight lattice rule and its boundary-corrected variant for
//! non-periodic integrands, which adds the lattice points projected to the
//! four faces with signed weights `±(y_i − 1/2)/b_n`, `±(x_i − 1/2)/b_n` and
//! the four corners with weight `±(1/(2 b_n) − 1/4 + (1/b_n) Σ x_i y_i)`.
//! Coinciding evaluation points are merged by exact rational weight
//! addition. Node storage is flat (one coordinate array) since rules run
//! into millions of nodes.

use crate::error::{Error, Result};
use crate::fiblattice::{fibonacci, fibonacci_lattice_iter};
use crate::rat::{rat, rat_to_f64, Rat};
use crate::splines::BesovParams;
use num::complex::Complex64;
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Finite weighted node set with exact rational coordinates, stored flat in
/// canonical lexicographic order.
#[derive(Clone)]
pub struct CubatureRule {
    pub dim: usize,
    coords: Vec<Rat>,
    coords_f: Vec<f64>,
    weights: Vec<f64>,
    pub label: String,
}

impl std::fmt::Debug for CubatureRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CubatureRule({}, dim={}, nodes={})",
            self.label,
            self.dim,
            self.len()
        )
    }
}

impl CubatureRule {
    /// Builds a rule from (node, weight) pairs, sorting into canonical order.
    /// Constructors that can produce coinciding points merge them first.
    pub fn new(dim: usize, mut pairs: Vec<(Vec<Rat>, f64)>, label: impl Into<String>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut coords = Vec::with_capacity(dim * pairs.len());
        let mut weights = Vec::with_capacity(pairs.len());
        for (node, w) in pairs {
            debug_assert_eq!(node.len(), dim);
            coords.extend(node);
            weights.push(w);
        }
        Self::from_sorted(dim, coords, weights, label)
    }

    /// Builds from flat coordinates already in canonical order.
    pub fn from_sorted(
        dim: usize,
        coords: Vec<Rat>,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Self {
        debug_assert_eq!(coords.len(), dim * weights.len());
        debug_assert!(coords.chunks_exact(dim).zip(coords.chunks_exact(dim).skip(1)).all(|(a, b)| a < b));
        let coords_f = coords.iter().map(rat_to_f64).collect();
        CubatureRule {
            dim,
            coords,
            coords_f,
            weights,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[Rat] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn node_f64(&self, i: usize) -> &[f64] {
        &self.coords_f[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_nodes(&self) -> impl Iterator<Item = &[Rat]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        let mut acc = Kahan::default();
        for &w in &self.weights {
            acc.add(w);
        }
        acc.value()
    }
}

/// Compensated (Kahan) accumulator.
#[derive(Default, Clone, Copy)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

type EvalFn = dyn Fn(&[f64]) -> Complex64 + Send + Sync;
type AxisFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A function on the unit cube, with optional metadata: the exact integral
/// when known, a smoothness tag, and a separable factor `f(x) = Π u(x_i)`
/// that rule application exploits by memoizing per-coordinate values.
#[derive(Clone)]
pub struct Integrand {
    pub dim: usize,
    pub label: String,
    eval: Arc<EvalFn>,
    pub exact_integral: Option<Complex64>,
    pub smoothness: Option<BesovParams>,
    separable: Option<Arc<AxisFn>>,
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Integrand({}, dim={})", self.label, self.dim)
    }
}

impl Integrand {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Integrand {
            dim,
            label: label.into(),
            eval: Arc::new(eval),
            exact_integral: None,
            smoothness: None,
            separable: None,
        }
    }

    pub fn from_real(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Integrand::new(dim, label, move |x| Complex64::new(eval(x), 0.0))
    }

    /// Marks the integrand as a product `Π u(x_i)` of one axis function.
    pub fn separable(
        dim: usize,
        label: impl Into<String>,
        u: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let u = Arc::new(u);
        let u2 = Arc::clone(&u);
        let mut f = Integrand::new(dim, label, move |x: &[f64]| {
            Complex64::new(x.iter().map(|&t| u2(t)).product(), 0.0)
        });
        f.separable = Some(u);
        f
    }

    pub fn with_integral(mut self, value: Complex64) -> Self {
        self.exact_integral = Some(value);
        self
    }

    pub fn with_smoothness(mut self, params: BesovParams) -> Self {
        self.smoothness = Some(params);
        self
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        (self.eval)(x)
    }

    pub fn axis_factor(&self) -> Option<&Arc<AxisFn>> {
        self.separable.as_ref()
    }
}

/// Applies the rule: `Σ_j λ_j f(x^j)` with compensated summation over the
/// canonical node order.
pub fn apply_rule(rule: &CubatureRule, f: &Integrand) -> Result<Complex64> {
    if rule.dim != f.dim {
        return Err(Error::DimensionMismatch {
            rule: rule.dim,
            integrand: f.dim,
        });
    }
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    if let Some(u) = f.axis_factor() {
        let mut memo: BTreeMap<Rat, f64> = BTreeMap::new();
        for i in 0..rule.len() {
            let node = rule.node(i);
            let node_f = rule.node_f64(i);
            let mut v = 1.0;
            for (c, &cf) in node.iter().zip(node_f.iter()) {
                v *= *memo.entry(*c).or_insert_with(|| u(cf));
            }
            re.add(rule.weights[i] * v);
        }
    } else {
        for (i, &w) in rule.weights.iter().enumerate() {
            let v = f.eval(rule.node_f64(i));
            re.add(w * v.re);
            im.add(w * v.im);
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Signed integration error `rule(f) − I(f)`; requires the exact integral.
pub fn qmc_error(rule: &CubatureRule, f: &Integrand) -> Result<Complex64> {
    let exact = f
        .exact_integral
        .ok_or_else(|| Error::MissingExactIntegral(f.label.clone()))?;
    Ok(apply_rule(rule, f)? - exact)
}

/// The equal-weight Fibonacci lattice rule with `b_n` nodes. Lattice order
/// is already canonical (first coordinates strictly increase with μ).
pub fn fibonacci_qmc(n: u32) -> Result<CubatureRule> {
    let fib = fibonacci(n)?;
    let w = 1.0 / fib.b as f64;
    let mut coords = Vec::with_capacity(2 * fib.b as usize);
    for p in fibonacci_lattice_iter(n)? {
        coords.push(p.x);
        coords.push(p.y);
    }
    let weights = vec![w; fib.b as usize];
    Ok(CubatureRule::from_sorted(
        2,
        coords,
        weights,
        format!("fib:{n}[b={}]", fib.b),
    ))
}

/// Exact-arithmetic ceiling for the boundary-corrected rule: corner weights
/// carry denominator `4 b_n³`, which must stay inside `i128` while merging.
pub const MAX_NONPERIODIC_INDEX: u32 = 30;

fn mod_inverse(a: i128, modulus: i128) -> i128 {
    // extended euclid; gcd(a, modulus) = 1 by construction
    let (mut old_r, mut r) = (a.rem_euclid(modulus), modulus);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(modulus)
}

/// The boundary-corrected Fibonacci rule for non-periodic integrands.
///
/// Weights are exact rationals; the five evaluation-point families overlap
/// only at the μ = 0 projections and the corners, so the merged rule is
/// emitted directly in sorted order: the `x = 0` column, then per-μ triples
/// `(x_μ, 0), (x_μ, y_μ), (x_μ, 1)`, then the `x = 1` column. The label
/// records the nominal count `5 b_n − 2` next to the distinct and active
/// (nonzero-weight) node counts.
pub fn fibonacci_nonperiodic(n: u32) -> Result<CubatureRule> {
    if !(2..=MAX_NONPERIODIC_INDEX).contains(&n) {
        return Err(Error::RangeGuard {
            what: "boundary-corrected rule",
            got: n,
            lo: 2,
            hi: MAX_NONPERIODIC_INDEX,
        });
    }
    let fib = fibonacci(n)?;
    let b = fib.b as i128;
    let bp = fib.b_prev as i128;
    let bp_inv = mod_inverse(bp, b);

    // Σ μ (μ b' mod b) for the corner coefficient, exact in i128
    let mut s_xy: i128 = 0;
    for mu in 1..b {
        s_xy += mu * ((mu * bp) % b);
    }
    // c = 1/(2b) - 1/4 + S/b^3 = (2b^2 - b^3 + 4S) / (4 b^3)
    let corner = rat(2 * b * b - b * b * b + 4 * s_xy, 4 * b * b * b);

    let zero = rat(0, 1);
    let one = rat(1, 1);
    let mut coords: Vec<Rat> = Vec::with_capacity(2 * (5 * b as usize - 1));
    let mut weights: Vec<f64> = Vec::with_capacity(5 * b as usize - 1);
    let mut distinct = 0usize;
    let mut push = |coords: &mut Vec<Rat>,
                    weights: &mut Vec<f64>,
                    distinct: &mut usize,
                    x: Rat,
                    y: Rat,
                    w: Rat| {
        *distinct += 1;
        if !w.is_zero() {
            coords.push(x);
            coords.push(y);
            weights.push(rat_to_f64(&w));
        }
    };

    // face weights: (x_μ - 1/2)/b = (2μ - b)/(2b²), (y_μ - 1/2)/b likewise
    let wx = |mu: i128| rat(2 * mu - b, 2 * b * b);
    let wy = |mu: i128| rat(2 * ((mu * bp) % b) - b, 2 * b * b);

    // x = 0 column: (0, j/b) for j = 0..b, then (0, 1)
    push(&mut coords, &mut weights, &mut distinct, zero, zero, corner);
    for j in 1..b {
        let mu = (j * bp_inv) % b; // the lattice point with y-numerator j
        push(&mut coords, &mut weights, &mut distinct, zero, rat(j, b), wx(mu));
    }
    push(&mut coords, &mut weights, &mut distinct, zero, one, rat(1, 2 * b) - corner);

    // interior columns: μ = 1..b, triple (x_μ, 0), (x_μ, y_μ), (x_μ, 1)
    for mu in 1..b {
        let x = rat(mu, b);
        let y = rat((mu * bp) % b, b);
        push(&mut coords, &mut weights, &mut distinct, x, zero, wy(mu));
        push(&mut coords, &mut weights, &mut distinct, x, y, rat(1, b));
        push(&mut coords, &mut weights, &mut distinct, x, one, -wy(mu));
    }

    // x = 1 column
    push(&mut coords, &mut weights, &mut distinct, one, zero, rat(1, 2 * b) - corner);
    for j in 1..b {
        let mu = (j * bp_inv) % b;
        push(&mut coords, &mut weights, &mut distinct, one, rat(j, b), -wx(mu));
    }
    push(&mut coords, &mut weights, &mut distinct, one, one, corner);

    let label = format!(
        "fibnp:{n}[b={b},nominal_nodes={},distinct_nodes={distinct},active_nodes={}]",
        5 * b - 2,
        weights.len()
    );
    Ok(CubatureRule::from_sorted(2, coords, weights, label))
}

/// Complex exponential `e^{2πi k·x}` as an integrand; integral 1 at `k = 0`
/// and 0 otherwise.
pub fn exponential(k1: i64, k2: i64) -> Integrand {
    let exact = if k1 == 0 && k2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::zero()
    };
    Integrand::new(2, format!("exp({k1},{k2})"), move |x: &[f64]| {
        let phase = std::f64::consts::TAU * (k1 as f64 * x[0] + k2 as f64 * x[1]);
        Complex64::new(phase.cos(), phase.sin())
    })
    .with_integral(exact)
}
