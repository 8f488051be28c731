//! Experiment driver: convergence sweeps over the rule families, log-log
//! rate fits, matched-budget comparisons, and CSV/JSON row emission.
//!
//! The reference test integrand is the Korobov-type product
//! `F_r(x) = Π_i (1 + 2 Σ_{k=1}^{K} k^{-r} cos 2πk x_i)` with `K = 4096` and
//! exact integral 1; its Fourier coefficients are known in closed form, so
//! Fibonacci errors are computed exactly by summing `|k1|^{-r} |k2|^{-r}`
//! over the nonzero dual frequencies in the truncation box instead of
//! evaluating the rule at its nodes.

use crate::cubature::{fibonacci_nonperiodic, fibonacci_qmc, qmc_error, Integrand};
use crate::error::{Error, Result};
use crate::fiblattice::{dual_enumerate_box, fibonacci, fibonacci_lattice};
use crate::fooling::{
    build_gk, build_gstar, build_smolyak_witnesses, witness_level_for, witness_lower_bound,
    FoolingConfig, WitnessKind,
};
use crate::fourier::TrigPoly2;
use crate::rat::{parse_rat, Rat};
use crate::smolyak::{smolyak_cubature, smolyak_grid};
use crate::splines::BesovParams;
use num::complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const DEFAULT_KOROBOV_TRUNC: u32 = 4096;

/// Which rule family a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleFamily {
    Fib,
    FibNp,
    Smolyak,
}

impl std::str::FromStr for RuleFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fib" => Ok(RuleFamily::Fib),
            "fibnp" => Ok(RuleFamily::FibNp),
            "smolyak" => Ok(RuleFamily::Smolyak),
            other => Err(Error::invalid(format!("unknown rule family `{other}`"))),
        }
    }
}

impl std::fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RuleFamily::Fib => "fib",
            RuleFamily::FibNp => "fibnp",
            RuleFamily::Smolyak => "smolyak",
        })
    }
}

/// A sweep description; hashed into every emitted row for provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub rule: RuleFamily,
    pub integrand: String,
    pub lo: u32,
    pub hi: u32,
    pub fit: bool,
    pub pin_beta: Option<f64>,
}

impl ExperimentSpec {
    pub fn canonical(&self) -> String {
        format!(
            "rule={};fn={};range={}:{};fit={};pin_beta={}",
            self.rule,
            self.integrand,
            self.lo,
            self.hi,
            self.fit,
            self.pin_beta.map_or("none".into(), |b| format!("{b}")),
        )
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut s = String::new();
        for byte in digest.iter().take(6) {
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergeRow {
    pub index: u32,
    pub nodes: u64,
    pub error: f64,
}

/// Built-in integrand specifications.
#[derive(Debug, Clone)]
pub enum FnSpec {
    Korobov { r: u32, trunc: u32 },
    ExpSum,
    Bilinear,
    Witness(WitnessSpec),
}

#[derive(Debug, Clone)]
pub struct WitnessSpec {
    pub kind: WitnessKind,
    /// `fib:<n>`, `smolyak:<d>.<m>`, `file:<path>`, or `auto` (sweep nodes).
    pub nodes: String,
    pub params: BesovParams,
    pub r: u32,
}

pub fn parse_fnspec(s: &str) -> Result<FnSpec> {
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n, a),
        None => (s, ""),
    };
    match name {
        "korobov" => {
            let mut r = 2u32;
            let mut trunc = DEFAULT_KOROBOV_TRUNC;
            for item in args.split(',').filter(|p| !p.is_empty()) {
                match item.split_once('=') {
                    Some(("r", v)) => {
                        r = v
                            .parse()
                            .map_err(|_| Error::invalid(format!("bad korobov r `{v}`")))?
                    }
                    Some(("K", v)) | Some(("k", v)) => {
                        trunc = v
                            .parse()
                            .map_err(|_| Error::invalid(format!("bad korobov K `{v}`")))?
                    }
                    _ => return Err(Error::invalid(format!("bad korobov item `{item}`"))),
                }
            }
            if r < 2 || trunc == 0 {
                return Err(Error::invalid("korobov needs r >= 2 and K >= 1"));
            }
            Ok(FnSpec::Korobov { r, trunc })
        }
        "expsum" => Ok(FnSpec::ExpSum),
        "bilinear" => Ok(FnSpec::Bilinear),
        "witness" => {
            let mut parts = args.split(',');
            let kind = match parts.next() {
                Some("gstar") => WitnessKind::GStar,
                Some("gk") => WitnessKind::GK,
                Some("phi1") => WitnessKind::Phi1,
                Some("phi2") => WitnessKind::Phi2,
                Some("phi3") => WitnessKind::Phi3,
                Some("phi4") => WitnessKind::Phi4,
                other => return Err(Error::invalid(format!("bad witness kind `{other:?}`"))),
            };
            let nodes = parts
                .next()
                .ok_or_else(|| Error::invalid("witness spec needs a node source"))?
                .to_string();
            let (mut a, mut p, mut t, mut r) = (2.0, 2.0, 2.0, 3u32);
            for item in parts {
                match item.split_once('=') {
                    Some(("a", v)) => a = parse_exponent(v)?,
                    Some(("p", v)) => p = parse_exponent(v)?,
                    Some(("t", v)) => t = parse_exponent(v)?,
                    Some(("r", v)) => {
                        r = v
                            .parse()
                            .map_err(|_| Error::invalid(format!("bad witness r `{v}`")))?
                    }
                    _ => return Err(Error::invalid(format!("bad witness item `{item}`"))),
                }
            }
            Ok(FnSpec::Witness(WitnessSpec {
                kind,
                nodes,
                params: BesovParams::new(a, p, t)?,
                r,
            }))
        }
        other => Err(Error::invalid(format!("unknown integrand `{other}`"))),
    }
}

/// Parses an exponent that may be `inf`.
pub fn parse_exponent(v: &str) -> Result<f64> {
    if v == "inf" || v == "oo" {
        return Ok(f64::INFINITY);
    }
    v.parse()
        .map_err(|_| Error::invalid(format!("bad exponent `{v}`")))
}

/// Besov triple `a,p,t` with `inf` allowed for `p` and `t`.
pub fn parse_besov(s: &str) -> Result<BesovParams> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("besov spec `{s}` must be a,p,t")));
    }
    BesovParams::new(
        parse_exponent(parts[0])?,
        parse_exponent(parts[1])?,
        parse_exponent(parts[2])?,
    )
}

fn korobov_axis(r: u32, trunc: u32) -> impl Fn(f64) -> f64 + Send + Sync + Clone {
    move |t: f64| {
        let mut acc = 1.0;
        for k in 1..=trunc {
            acc += 2.0 * (k as f64).powi(-(r as i32)) * (std::f64::consts::TAU * k as f64 * t).cos();
        }
        acc
    }
}

/// The Korobov product integrand; separable with exact integral 1.
pub fn korobov_integrand(r: u32, trunc: u32) -> Integrand {
    Integrand::separable(2, format!("korobov:r={r},K={trunc}"), korobov_axis(r, trunc))
        .with_integral(Complex64::new(1.0, 0.0))
}

/// `e^{x+y}` with exact integral `(e-1)²`.
pub fn expsum_integrand() -> Integrand {
    let exact = (std::f64::consts::E - 1.0).powi(2);
    Integrand::separable(2, "expsum", |t| t.exp()).with_integral(Complex64::new(exact, 0.0))
}

/// `xy` with exact integral 1/4.
pub fn bilinear_integrand() -> Integrand {
    Integrand::separable(2, "bilinear", |t| t).with_integral(Complex64::new(0.25, 0.0))
}

/// Exact Fibonacci error for the Korobov integrand: the coefficient sum over
/// nonzero dual frequencies inside the truncation box.
pub fn korobov_fib_error(n: u32, r: u32, trunc: u32) -> Result<f64> {
    let coeff = |t: i128| -> f64 {
        if t == 0 {
            1.0
        } else {
            (t.unsigned_abs() as f64).powi(-(r as i32))
        }
    };
    let mut sum = 0.0;
    for k in dual_enumerate_box(n, trunc as i128, trunc as i128)? {
        sum += coeff(k.k1) * coeff(k.k2);
    }
    Ok(sum)
}

/// The Korobov integrand as an explicit sparse polynomial (small truncations
/// only; used to cross-validate the closed-form error path).
pub fn korobov_poly(r: u32, trunc: u32) -> TrigPoly2 {
    let coeff = |t: i64| -> f64 {
        if t == 0 {
            1.0
        } else {
            (t.unsigned_abs() as f64).powi(-(r as i32))
        }
    };
    let mut poly = TrigPoly2::new();
    let t = trunc as i64;
    for k1 in -t..=t {
        for k2 in -t..=t {
            poly.add((k1, k2), Complex64::new(coeff(k1) * coeff(k2), 0.0));
        }
    }
    poly
}

/// Materializes an integrand spec. Witness specs need a concrete node
/// source here; `auto` is only meaningful inside [`converge`].
pub fn parse_integrand(spec: &str) -> Result<Integrand> {
    match parse_fnspec(spec)? {
        FnSpec::Korobov { r, trunc } => Ok(korobov_integrand(r, trunc)),
        FnSpec::ExpSum => Ok(expsum_integrand()),
        FnSpec::Bilinear => Ok(bilinear_integrand()),
        FnSpec::Witness(w) => {
            if w.nodes == "auto" {
                return Err(Error::invalid(
                    "witness node source `auto` is only valid inside a converge sweep",
                ));
            }
            Ok(build_witness(&w, &w.nodes)?.to_integrand())
        }
    }
}

/// Node sources: `fib:<n>`, `smolyak:<d>,<m>` (or `<d>.<m>`), `file:<path>`.
pub fn resolve_nodes(spec: &str) -> Result<(Vec<Vec<Rat>>, String)> {
    if let Some(n) = spec.strip_prefix("fib:") {
        let n: u32 = n
            .parse()
            .map_err(|_| Error::invalid(format!("bad lattice index `{n}`")))?;
        let nodes = fibonacci_lattice(n)?
            .into_iter()
            .map(|p| vec![p.x, p.y])
            .collect();
        return Ok((nodes, format!("fib:{n}")));
    }
    if let Some(dm) = spec.strip_prefix("smolyak:") {
        let (d, m) = dm
            .split_once([',', '.'])
            .ok_or_else(|| Error::invalid(format!("bad smolyak node spec `{dm}`")))?;
        let d: usize = d
            .parse()
            .map_err(|_| Error::invalid(format!("bad smolyak dimension `{d}`")))?;
        let m: u32 = m
            .parse()
            .map_err(|_| Error::invalid(format!("bad smolyak order `{m}`")))?;
        return Ok((smolyak_grid(d, m)?.points, format!("smolyak:{d},{m}")));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read node file `{path}`: {e}")))?;
        let mut nodes = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let coords: Result<Vec<Rat>> = line.split(',').map(parse_rat).collect();
            nodes.push(coords?);
        }
        if nodes.is_empty() {
            return Err(Error::invalid(format!("node file `{path}` is empty")));
        }
        let d = nodes[0].len();
        if nodes.iter().any(|p| p.len() != d) {
            return Err(Error::invalid("node file has mixed dimensions"));
        }
        return Ok((nodes, format!("file:{path}")));
    }
    Err(Error::invalid(format!("unknown node source `{spec}`")))
}

/// Builds the requested witness against a node source.
pub fn build_witness(spec: &WitnessSpec, nodes_src: &str) -> Result<crate::fooling::WitnessFunction> {
    let (nodes, _) = resolve_nodes(nodes_src)?;
    let d = nodes.first().map_or(2, |p| p.len());
    let config = FoolingConfig::new(d, spec.r, spec.params)?;
    match spec.kind {
        WitnessKind::GStar => {
            let m = witness_level_for(nodes.len());
            build_gstar(&nodes, m, config)
        }
        WitnessKind::GK => {
            let m = witness_level_for(nodes.len());
            let mut k = vec![0u32; d];
            k[0] = m + 1;
            build_gk(&nodes, m, &k, config)
        }
        phi => {
            let m = if let Some(dm) = nodes_src.strip_prefix("smolyak:") {
                dm.split_once([',', '.'])
                    .and_then(|(_, m)| m.parse().ok())
                    .ok_or_else(|| Error::invalid("bad smolyak node spec for witness"))?
            } else {
                witness_level_for(nodes.len())
            };
            let ws = build_smolyak_witnesses(d, m, config)?;
            let idx = match phi {
                WitnessKind::Phi1 => 0,
                WitnessKind::Phi2 => 1,
                WitnessKind::Phi3 => 2,
                WitnessKind::Phi4 => 3,
                _ => unreachable!(),
            };
            Ok(ws.into_iter().nth(idx).unwrap())
        }
    }
}

fn converge_row(spec: &ExperimentSpec, fnspec: &FnSpec, index: u32) -> Result<ConvergeRow> {
    match spec.rule {
        RuleFamily::Fib => {
            let nodes = fibonacci(index)?.b as u64;
            let error = match fnspec {
                FnSpec::Korobov { r, trunc } => korobov_fib_error(index, *r, *trunc)?,
                FnSpec::Witness(w) if w.nodes == "auto" => {
                    let src = format!("fib:{index}");
                    let witness = build_witness(w, &src)?;
                    let (lattice, _) = resolve_nodes(&src)?;
                    witness_lower_bound(&lattice, &witness)?
                }
                FnSpec::Witness(w) => {
                    let rule = fibonacci_qmc(index)?;
                    qmc_error(&rule, &build_witness(w, &w.nodes)?.to_integrand())?.norm()
                }
                FnSpec::ExpSum => {
                    qmc_error(&fibonacci_qmc(index)?, &expsum_integrand())?.norm()
                }
                FnSpec::Bilinear => {
                    qmc_error(&fibonacci_qmc(index)?, &bilinear_integrand())?.norm()
                }
            };
            Ok(ConvergeRow {
                index,
                nodes,
                error,
            })
        }
        RuleFamily::FibNp => {
            let rule = fibonacci_nonperiodic(index)?;
            let f = fnspec_integrand(fnspec)?;
            Ok(ConvergeRow {
                index,
                nodes: rule.len() as u64,
                error: qmc_error(&rule, &f)?.norm(),
            })
        }
        RuleFamily::Smolyak => {
            let rule = smolyak_cubature(index)?;
            let f = fnspec_integrand(fnspec)?;
            Ok(ConvergeRow {
                index,
                nodes: rule.len() as u64,
                error: qmc_error(&rule, &f)?.norm(),
            })
        }
    }
}

fn fnspec_integrand(fnspec: &FnSpec) -> Result<Integrand> {
    match fnspec {
        FnSpec::Korobov { r, trunc } => Ok(korobov_integrand(*r, *trunc)),
        FnSpec::ExpSum => Ok(expsum_integrand()),
        FnSpec::Bilinear => Ok(bilinear_integrand()),
        FnSpec::Witness(w) => {
            if w.nodes == "auto" {
                return Err(Error::invalid(
                    "witness `auto` nodes require the fib rule family",
                ));
            }
            Ok(build_witness(w, &w.nodes)?.to_integrand())
        }
    }
}

/// Runs the sweep; rows are computed concurrently and returned in index order.
pub fn converge(spec: &ExperimentSpec) -> Result<Vec<ConvergeRow>> {
    if spec.lo > spec.hi {
        return Err(Error::invalid("empty sweep range"));
    }
    let fnspec = parse_fnspec(&spec.integrand)?;
    (spec.lo..=spec.hi)
        .into_par_iter()
        .map(|i| converge_row(spec, &fnspec, i))
        .collect()
}

/// Least-squares fit of `log e = c − a·log N + b·log log N`.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub model: &'static str,
}

pub fn fit_rate(rows: &[(f64, f64)], pin_beta: Option<f64>) -> Result<RateFit> {
    const MIN_ROWS: usize = 6;
    let clean: Vec<(f64, f64)> = rows
        .iter()
        .copied()
        .filter(|&(n, e)| n > 1.0 && e > 0.0)
        .collect();
    if clean.len() < MIN_ROWS || clean.len() != rows.len() {
        return Err(Error::DegenerateFit {
            rows: clean.len(),
            min: MIN_ROWS,
            decades: 0.0,
        });
    }
    let (emin, emax) = clean
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, e)| {
            (lo.min(e), hi.max(e))
        });
    let decades = (emax / emin).log10();
    if decades < 2.0 {
        return Err(Error::DegenerateFit {
            rows: clean.len(),
            min: MIN_ROWS,
            decades,
        });
    }
    let pts: Vec<(f64, f64, f64)> = clean
        .iter()
        .map(|&(n, e)| (n.ln(), n.ln().ln(), e.ln()))
        .collect();
    let len = pts.len() as f64;

    let fit = if let Some(beta) = pin_beta {
        // z = y - beta*w regressed on (1, -u)
        let mu = pts.iter().map(|p| p.0).sum::<f64>() / len;
        let mz = pts.iter().map(|p| p.2 - beta * p.1).sum::<f64>() / len;
        let (mut suz, mut suu) = (0.0, 0.0);
        for &(u, w, y) in &pts {
            let z = y - beta * w;
            suz += (u - mu) * (z - mz);
            suu += (u - mu) * (u - mu);
        }
        let a = -suz / suu;
        let c = mz + a * mu;
        RateFit {
            alpha_hat: a,
            beta_hat: beta,
            intercept: c,
            residual_rms: 0.0,
            model: "log e = c - a*log N + b*log log N",
        }
    } else {
        // normal equations for (c, a, b) with design (1, -u, w)
        let mut ata = [[0.0f64; 3]; 3];
        let mut aty = [0.0f64; 3];
        for &(u, w, y) in &pts {
            let row = [1.0, -u, w];
            for i in 0..3 {
                for j in 0..3 {
                    ata[i][j] += row[i] * row[j];
                }
                aty[i] += row[i] * y;
            }
        }
        let det3 = |m: &[[f64; 3]; 3]| -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d0 = det3(&ata);
        if d0.abs() < 1e-12 {
            return Err(Error::DegenerateFit {
                rows: clean.len(),
                min: MIN_ROWS,
                decades,
            });
        }
        let solve_col = |col: usize| -> f64 {
            let mut m = ata;
            for i in 0..3 {
                m[i][col] = aty[i];
            }
            det3(&m) / d0
        };
        RateFit {
            alpha_hat: solve_col(1),
            beta_hat: solve_col(2),
            intercept: solve_col(0),
            residual_rms: 0.0,
            model: "log e = c - a*log N + b*log log N",
        }
    };

    let mut ss = 0.0;
    for &(u, w, y) in &pts {
        let pred = fit.intercept - fit.alpha_hat * u + fit.beta_hat * w;
        ss += (y - pred) * (y - pred);
    }
    Ok(RateFit {
        residual_rms: (ss / len).sqrt(),
        ..fit
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BudgetRow {
    pub budget: u64,
    pub fib_n: u32,
    pub fib_nodes: u64,
    pub fib_error: f64,
    pub smolyak_m: u32,
    pub smolyak_nodes: u64,
    pub smolyak_error: f64,
    pub ratio: f64,
}

/// For each budget, the largest Fibonacci rule and the largest Smolyak rule
/// whose evaluation-node counts fit, with their errors on the integrand.
pub fn compare_budget(fnspec: &str, budgets: &[u64]) -> Result<Vec<BudgetRow>> {
    let parsed = parse_fnspec(fnspec)?;
    let mut rows = Vec::new();
    for &budget in budgets {
        if budget < 3 {
            return Err(Error::invalid(format!(
                "budget {budget} is below the 3-node minimum"
            )));
        }
        let mut fib_n = 1;
        while fibonacci(fib_n + 1)?.b as u64 <= budget {
            fib_n += 1;
        }
        let fib_nodes = fibonacci(fib_n)?.b as u64;

        let mut smolyak_m = 0u32;
        let mut smolyak_nodes = smolyak_cubature(0)?.len() as u64;
        loop {
            let next = smolyak_cubature(smolyak_m + 1)?;
            if next.len() as u64 > budget {
                break;
            }
            smolyak_m += 1;
            smolyak_nodes = next.len() as u64;
        }
        if smolyak_nodes > budget {
            return Err(Error::invalid(format!(
                "budget {budget} cannot fit the order-0 sparse rule"
            )));
        }

        let fib_error = match &parsed {
            FnSpec::Korobov { r, trunc } => korobov_fib_error(fib_n, *r, *trunc)?,
            other => {
                let f = fnspec_integrand(other)?;
                qmc_error(&fibonacci_qmc(fib_n)?, &f)?.norm()
            }
        };
        let f = fnspec_integrand(&parsed)?;
        let smolyak_error = qmc_error(&smolyak_cubature(smolyak_m)?, &f)?.norm();
        rows.push(BudgetRow {
            budget,
            fib_n,
            fib_nodes,
            fib_error,
            smolyak_m,
            smolyak_nodes,
            smolyak_error,
            ratio: smolyak_error / fib_error,
        });
    }
    Ok(rows)
}

/// CSV with one row per sweep point; fit results go into trailing comment
/// lines so the file stays gnuplot-friendly.
pub fn converge_csv(spec: &ExperimentSpec, rows: &[ConvergeRow], fit: Option<&RateFit>) -> String {
    let hash = spec.hash();
    let mut out = String::from("index,nodes,error,spec\n");
    for row in rows {
        out.push_str(&format!("{},{},{},{}\n", row.index, row.nodes, row.error, hash));
    }
    if let Some(f) = fit {
        out.push_str(&format!(
            "# fit: alpha={} beta={} intercept={} rms={} model=\"{}\"\n",
            f.alpha_hat, f.beta_hat, f.intercept, f.residual_rms, f.model
        ));
    }
    out
}

/// JSON-lines output mirroring the CSV.
pub fn converge_json(spec: &ExperimentSpec, rows: &[ConvergeRow], fit: Option<&RateFit>) -> String {
    let hash = spec.hash();
    let mut out = String::new();
    for row in rows {
        let mut v = serde_json::to_value(row).expect("row serializes");
        v["spec"] = serde_json::Value::String(hash.clone());
        out.push_str(&v.to_string());
        out.push('\n');
    }
    if let Some(f) = fit {
        out.push_str(&format!("{{\"fit\":{}}}\n", serde_json::to_string(f).unwrap()));
    }
    out
}

pub fn budget_csv(rows: &[BudgetRow]) -> String {
    let mut out =
        String::from("budget,fib_n,fib_nodes,fib_error,smolyak_m,smolyak_nodes,smolyak_error,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.budget, r.fib_n, r.fib_nodes, r.fib_error, r.smolyak_m, r.smolyak_nodes, r.smolyak_error, r.ratio
        ));
    }
    out
}

/// Polynomial spec: JSON map `{"k1,k2": [re, im], ...}`.
pub fn parse_polyspec(json: &str) -> Result<TrigPoly2> {
    let map: std::collections::BTreeMap<String, [f64; 2]> = serde_json::from_str(json)
        .map_err(|e| Error::invalid(format!("bad polynomial spec: {e}")))?;
    let mut poly = TrigPoly2::new();
    for (key, [re, im]) in map {
        let (k1, k2) = key
            .split_once(',')
            .ok_or_else(|| Error::invalid(format!("bad frequency key `{key}`")))?;
        let k1: i64 = k1
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad frequency `{key}`")))?;
        let k2: i64 = k2
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad frequency `{key}`")))?;
        poly.add((k1, k2), Complex64::new(re, im));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::fib_error_exact;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fit_recovers_exact_power_law() {
        let rows: Vec<(f64, f64)> = (1..=10).map(|i| {
            let n = (10 * i) as f64;
            (n, n.powi(-2))
        }).collect();
        let fit = fit_rate(&rows, Some(0.0)).unwrap();
        assert_abs_diff_eq!(fit.alpha_hat, 2.0, epsilon = 1e-9);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn fit_with_pinned_log_factor() {
        let rows: Vec<(f64, f64)> = (1..=12).map(|i| {
            let n = 10.0 * 1.9f64.powi(i);
            (n, n.powi(-2) * n.ln())
        }).collect();
        let fit = fit_rate(&rows, Some(1.0)).unwrap();
        assert_abs_diff_eq!(fit.alpha_hat, 2.0, epsilon = 1e-9);
        // and the free 3-parameter fit finds the same structure
        let free = fit_rate(&rows, None).unwrap();
        assert_abs_diff_eq!(free.alpha_hat, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(free.beta_hat, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn fit_guards() {
        let few = [(10.0, 1e-1), (100.0, 1e-3)];
        assert!(matches!(
            fit_rate(&few, Some(0.0)),
            Err(Error::DegenerateFit { .. })
        ));
        let flat: Vec<(f64, f64)> = (1..=8).map(|i| ((10 * i) as f64, 1.0)).collect();
        assert!(matches!(
            fit_rate(&flat, Some(0.0)),
            Err(Error::DegenerateFit { .. })
        ));
    }

    #[test]
    fn korobov_error_matches_sparse_poly_oracle() {
        // small truncation: closed-form dual sum vs generic coefficient sum
        let trunc = 12u32;
        let poly = korobov_poly(2, trunc);
        for n in 3..=10 {
            let direct = korobov_fib_error(n, 2, trunc).unwrap();
            let via_poly = fib_error_exact(&poly, n).unwrap().re;
            assert_abs_diff_eq!(direct, via_poly, epsilon = 1e-12);
        }
    }

    #[test]
    fn converge_korobov_rows() {
        let spec = ExperimentSpec {
            rule: RuleFamily::Fib,
            integrand: "korobov:r=2,K=64".into(),
            lo: 5,
            hi: 12,
            fit: false,
            pin_beta: None,
        };
        let rows = converge(&spec).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0].nodes, 8);
        assert!(rows.iter().all(|r| r.error >= 0.0));
        // errors trend down across the sweep
        assert!(rows.last().unwrap().error < rows[0].error);
    }

    #[test]
    fn converge_is_deterministic() {
        let spec = ExperimentSpec {
            rule: RuleFamily::Fib,
            integrand: "korobov:r=2,K=128".into(),
            lo: 5,
            hi: 12,
            fit: true,
            pin_beta: Some(0.0),
        };
        let a = converge(&spec).unwrap();
        let b = converge(&spec).unwrap();
        let fit_a = fit_rate(
            &a.iter().map(|r| (r.nodes as f64, r.error)).collect::<Vec<_>>(),
            Some(0.0),
        );
        let fit_b = fit_rate(
            &b.iter().map(|r| (r.nodes as f64, r.error)).collect::<Vec<_>>(),
            Some(0.0),
        );
        let csv_a = converge_csv(&spec, &a, fit_a.as_ref().ok());
        let csv_b = converge_csv(&spec, &b, fit_b.as_ref().ok());
        assert_eq!(csv_a, csv_b);
        assert!(csv_a.starts_with("index,nodes,error,spec\n"));
    }

    #[test]
    fn converge_witness_auto_equals_certified_bound() {
        let spec = ExperimentSpec {
            rule: RuleFamily::Fib,
            integrand: "witness:gstar,auto,a=2,p=2,t=2,r=3".into(),
            lo: 6,
            hi: 9,
            fit: false,
            pin_beta: None,
        };
        let rows = converge(&spec).unwrap();
        for row in &rows {
            assert!(row.error > 0.0);
            let w = build_witness(
                &WitnessSpec {
                    kind: WitnessKind::GStar,
                    nodes: "auto".into(),
                    params: BesovParams::new(2.0, 2.0, 2.0).unwrap(),
                    r: 3,
                },
                &format!("fib:{}", row.index),
            )
            .unwrap();
            assert_abs_diff_eq!(row.error, w.exact_integral.abs(), epsilon = 1e-15);
        }
    }

    #[test]
    fn budget_guard_and_row_shape() {
        assert!(compare_budget("korobov:r=2,K=16", &[2]).is_err());
        let rows = compare_budget("korobov:r=2,K=64", &[50, 200]).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.fib_nodes <= r.budget);
            assert!(r.smolyak_nodes <= r.budget);
            assert!(r.fib_error > 0.0 && r.smolyak_error > 0.0);
        }
    }

    #[test]
    fn polyspec_parses() {
        let p = parse_polyspec(r#"{"3,1":[1.0,0.0],"0,0":[0.5,-0.5]}"#).unwrap();
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.coeff((3, 1)).re, 1.0);
        assert!(parse_polyspec("not json").is_err());
    }

    #[test]
    fn node_sources_resolve() {
        let (nodes, label) = resolve_nodes("fib:4").unwrap();
        assert_eq!(nodes.len(), 5);
        assert_eq!(label, "fib:4");
        let (nodes, _) = resolve_nodes("smolyak:2,3").unwrap();
        assert_eq!(nodes.len(), smolyak_grid(2, 3).unwrap().points.len());
        assert!(resolve_nodes("nonsense").is_err());
    }

    #[test]
    fn spec_hash_is_stable_and_sensitive() {
        let spec = ExperimentSpec {
            rule: RuleFamily::Fib,
            integrand: "korobov:r=2,K=4096".into(),
            lo: 8,
            hi: 28,
            fit: true,
            pin_beta: Some(0.0),
        };
        let h1 = spec.hash();
        let mut other = spec.clone();
        other.hi = 29;
        assert_eq!(h1.len(), 12);
        assert_eq!(h1, spec.hash());
        assert_ne!(h1, other.hash());
    }
}
