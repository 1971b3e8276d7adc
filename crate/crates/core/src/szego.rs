//! Spectral-density experiments: (log N)^{−1} Tr g(K_N(φ)) against
//! (1/2π)∫g(φ), the counting law, trace asymptotics, moment gaps and the
//! emergence of eigenvalues φ̂(0)/j under symbol scaling.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::linalg::Spectrum;
use crate::operators::{build_k, build_t, kernel_entry};
use crate::quadrature::adaptive_with_breaks;
use crate::symbols::{
    half_line_integral, scale_symbol, superlevel_measure, Family, Symbol, SymbolId,
};

/// Kinds of test function g with g(0) = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctionKind {
    /// g(x) = x^m.
    Power { m: u32 },
    /// Piecewise-linear ramp from 0 at λ₀ to 1 at λ₀ + w.
    ClippedRamp { lambda0: f64, width: f64 },
    /// Linear interpolation through (xs, ys), constant beyond the ends.
    Table { xs: Vec<f64>, ys: Vec<f64> },
}

/// A Lipschitz test function g with g(0) = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    kind: TestFunctionKind,
}

impl TestFunction {
    pub fn power(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(HardyError::InvalidArgument(
                "power test function needs m >= 1".into(),
            ));
        }
        Ok(Self {
            kind: TestFunctionKind::Power { m },
        })
    }

    /// g(x) = x.
    pub fn identity() -> Self {
        Self {
            kind: TestFunctionKind::Power { m: 1 },
        }
    }

    /// g(x) = x².
    pub fn square() -> Self {
        Self {
            kind: TestFunctionKind::Power { m: 2 },
        }
    }

    pub fn clipped_ramp(lambda0: f64, width: f64) -> Result<Self> {
        if !(lambda0 >= 0.0 && lambda0.is_finite()) || !(width > 0.0 && width.is_finite()) {
            return Err(HardyError::InvalidArgument(format!(
                "ramp needs lambda0 >= 0 and width > 0, got ({lambda0}, {width})"
            )));
        }
        Ok(Self {
            kind: TestFunctionKind::ClippedRamp { lambda0, width },
        })
    }

    pub fn table(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(HardyError::InvalidArgument(
                "table needs at least two (x, y) pairs of equal length".into(),
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(HardyError::InvalidArgument(
                "table entries must be finite".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HardyError::InvalidArgument(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        let g = Self {
            kind: TestFunctionKind::Table { xs, ys },
        };
        if g.eval(0.0) != 0.0 {
            return Err(HardyError::InvalidArgument(
                "table must satisfy g(0) = 0".into(),
            ));
        }
        Ok(g)
    }

    pub fn kind(&self) -> &TestFunctionKind {
        &self.kind
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            TestFunctionKind::Power { m } => x.powi(*m as i32),
            TestFunctionKind::ClippedRamp { lambda0, width } => {
                ((x - lambda0) / width).clamp(0.0, 1.0)
            }
            TestFunctionKind::Table { xs, ys } => {
                let k = xs.partition_point(|&v| v <= x);
                if k == 0 {
                    ys[0]
                } else if k == xs.len() || x == xs[k - 1] {
                    ys[k - 1]
                } else {
                    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                    ys[k - 1] + t * (ys[k] - ys[k - 1])
                }
            }
        }
    }

    /// Global Lipschitz constant on ℝ (infinite for x^m, m ≥ 2).
    pub fn lipschitz_constant(&self) -> f64 {
        match &self.kind {
            TestFunctionKind::Power { m: 1 } => 1.0,
            TestFunctionKind::Power { .. } => f64::INFINITY,
            _ => self.lipschitz_on(f64::INFINITY),
        }
    }

    /// Lipschitz constant on [−r, r].
    pub fn lipschitz_on(&self, r: f64) -> f64 {
        match &self.kind {
            TestFunctionKind::Power { m } => *m as f64 * r.powi(*m as i32 - 1),
            TestFunctionKind::ClippedRamp { width, .. } => 1.0 / width,
            TestFunctionKind::Table { xs, ys } => xs
                .windows(2)
                .zip(ys.windows(2))
                .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Arguments at which g has kinks.
    fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            TestFunctionKind::Power { .. } => vec![],
            TestFunctionKind::ClippedRamp { lambda0, width } => vec![*lambda0, lambda0 + width],
            TestFunctionKind::Table { xs, .. } => xs.clone(),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TestFunctionKind::Power { m: 1 } => f.write_str("lambda"),
            TestFunctionKind::Power { m: 2 } => f.write_str("square"),
            TestFunctionKind::Power { m } => write!(f, "pow:{m}"),
            TestFunctionKind::ClippedRamp { lambda0, width } => {
                write!(f, "ramp:{lambda0}:{width}")
            }
            TestFunctionKind::Table { xs, ys } => {
                f.write_str("table:")?;
                for (k, (x, y)) in xs.iter().zip(ys).enumerate() {
                    if k > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{x}:{y}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for TestFunction {
    type Err = HardyError;

    /// Parses `lambda`, `square`, `pow:m`, `ramp:l0:w` or `table:x:y;x:y;…`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            HardyError::InvalidArgument(format!(
                "unrecognised test function `{s}` (use lambda, square, pow:m, ramp:l0:w or table:x:y;...)"
            ))
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match s.trim() {
            "lambda" | "identity" => return Ok(Self::identity()),
            "square" => return Ok(Self::square()),
            _ => {}
        }
        let (head, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        match head {
            "pow" => Self::power(rest.trim().parse().map_err(|_| bad())?),
            "ramp" => {
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                Self::clipped_ramp(num(a)?, num(b)?)
            }
            "table" => {
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for pair in rest.split(';') {
                    let (x, y) = pair.split_once(':').ok_or_else(bad)?;
                    xs.push(num(x)?);
                    ys.push(num(y)?);
                }
                Self::table(xs, ys)
            }
            _ => Err(bad()),
        }
    }
}

/// H_N = Σ_{n≤N} 1/n, summed from the smallest term.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

/// Σ_j g(λ_j).
pub fn trace_functional(spec: &Spectrum, g: &TestFunction) -> f64 {
    spec.sum_of(|x| g.eval(x))
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(HardyError::Dimension(format!(
            "N must be at least {min}, got {n}"
        )));
    }
    Ok(())
}

type CacheKey = (Family, u64, u64, usize);

/// Memoizes eigenvalues of K_N(φ) by (symbol, N).
#[derive(Debug, Default)]
pub struct SpectrumCache {
    map: Mutex<HashMap<CacheKey, Arc<Spectrum>>>,
}

impl SpectrumCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eigenvalues of K_N(φ), computed on first request.
    pub fn kernel(&self, sym: &Symbol, n: usize) -> Result<Arc<Spectrum>> {
        let key = (
            sym.family(),
            sym.alpha().to_bits(),
            sym.scale().to_bits(),
            n,
        );
        if let Some(s) = self.map.lock().unwrap().get(&key) {
            return Ok(Arc::clone(s));
        }
        let spec = Arc::new(build_k(sym, n)?.spectrum()?);
        self.map.lock().unwrap().insert(key, Arc::clone(&spec));
        Ok(spec)
    }
}

/// M_N = (log N)^{−1} Tr g(K_N(φ)).
pub fn szego_ratio(sym: &Symbol, g: &TestFunction, n: usize) -> Result<f64> {
    check_n(n, 2)?;
    let spec = build_k(sym, n)?.spectrum()?;
    Ok(trace_functional(&spec, g) / (n as f64).ln())
}

/// (1/2π)∫g(φ(t))dt to absolute error `tol`.
pub fn szego_limit(sym: &Symbol, g: &TestFunction, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(HardyError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let f = |t: f64| g.eval(sym.eval(t));
    // Points where φ(t) crosses a kink of g become panel boundaries, as do
    // discontinuities of φ itself.
    let mut breaks = vec![0.0];
    for level in g.kinks() {
        if level > 0.0 && level < sym.sup_norm() {
            breaks.push(0.5 * superlevel_measure(sym, level));
        }
    }
    if let crate::symbols::Tail::Compact { support } = sym.tail() {
        breaks.push(support);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let end = *breaks.last().unwrap();
    // Integrals over the half line carry a factor π relative to the result.
    let target = tol * PI;
    let mut total = 0.0;
    if breaks.len() >= 2 {
        total += adaptive_with_breaks(f, &breaks, 0.5 * target, 100_000)?.value;
    }
    total += half_line_integral(sym, end, f, 0.5 * target)?.value;
    Ok(total / PI)
}

/// (log N)^{−1}·#{j : λ_j > λ}.
pub fn counting_ratio(spec: &Spectrum, lambda: f64, n: usize) -> Result<f64> {
    check_n(n, 2)?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(HardyError::InvalidArgument(format!(
            "counting threshold must be positive, got {lambda}"
        )));
    }
    Ok(spec.count_above(lambda) as f64 / (n as f64).ln())
}

/// Predicted counting density (1/2π)·meas{φ > λ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingLimit {
    pub value: f64,
    /// λ sits on a plateau of φ, so the level set {φ = λ} has positive measure.
    pub ambiguous: bool,
}

pub fn counting_limit(sym: &Symbol, lambda: f64) -> Result<CountingLimit> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(HardyError::InvalidArgument(format!(
            "counting threshold must be positive, got {lambda}"
        )));
    }
    let ambiguous = sym.family() == Family::Sinc && lambda == sym.sup_norm();
    Ok(CountingLimit {
        value: superlevel_measure(sym, lambda) / (2.0 * PI),
        ambiguous,
    })
}

/// (Tr K_N from its diagonal entries, φ̂(0)·H_N).
pub fn trace_identity(sym: &Symbol, n: usize) -> Result<(f64, f64)> {
    check_n(n, 1)?;
    let from_entries: f64 = (1..=n).rev().map(|k| kernel_entry(sym, k, k)).sum();
    Ok((from_entries, sym.hat_zero() * harmonic(n)))
}

/// Tr K_N^m − Tr T_N^m, with T_N discretized on `m_nodes` nodes. For m = 1
/// the second trace is exactly φ̂(0)·log N.
pub fn moment_gap(sym: &Symbol, m: u32, n: usize, m_nodes: usize) -> Result<f64> {
    check_n(n, 2)?;
    if m == 0 {
        return Err(HardyError::InvalidArgument(
            "moment order must be >= 1".into(),
        ));
    }
    if m == 1 {
        let (tr, _) = trace_identity(sym, n)?;
        return Ok(tr - sym.hat_zero() * (n as f64).ln());
    }
    let k = build_k(sym, n)?.spectrum()?;
    moment_gap_from_spectrum(sym, &k, m, n, m_nodes)
}

/// [`moment_gap`] for m ≥ 2 with a precomputed spectrum of K_N.
pub fn moment_gap_from_spectrum(
    sym: &Symbol,
    k_spectrum: &Spectrum,
    m: u32,
    n: usize,
    m_nodes: usize,
) -> Result<f64> {
    let t = build_t(sym, n as f64, m_nodes)?.spectrum()?;
    Ok(k_spectrum.power_sum(m) - t.power_sum(m))
}

/// max_{j ≤ j_max} |λ_(j)(K_N(φ_α)) − φ̂(0)/j| over the top eigenvalues.
pub fn eigen13_deviation(sym: &Symbol, alpha: f64, n: usize, j_max: usize) -> Result<f64> {
    let (scaled, spec) = scaled_spectrum(sym, alpha, n, j_max)?;
    Ok(top_deviation(&spec, scaled.hat_zero(), j_max))
}

fn scaled_spectrum(sym: &Symbol, alpha: f64, n: usize, j_max: usize) -> Result<(Symbol, Spectrum)> {
    if !sym.nonnegative() {
        return Err(HardyError::InvalidArgument(
            "eigenvalue emergence needs a nonnegative symbol".into(),
        ));
    }
    if alpha.is_nan() || alpha < 1.0 {
        return Err(HardyError::InvalidArgument(format!(
            "scaling factor must be >= 1, got {alpha}"
        )));
    }
    if j_max == 0 || j_max > 10 || j_max > n {
        return Err(HardyError::InvalidArgument(format!(
            "j_max must lie in 1..=min(10, N), got {j_max}"
        )));
    }
    let scaled = scale_symbol(sym, alpha)?;
    let spec = build_k(&scaled, n)?.spectrum()?;
    Ok((scaled, spec))
}

/// max_{j ≤ j_max} |λ_(j) − h0/j| for a spectrum in ascending order.
pub fn top_deviation(spec: &Spectrum, h0: f64, j_max: usize) -> f64 {
    spec.values()
        .iter()
        .rev()
        .take(j_max)
        .enumerate()
        .map(|(k, &l)| (l - h0 / (k + 1) as f64).abs())
        .fold(0.0, f64::max)
}

/// Value at x = 0 of the quadratic through (x_i, y_i), i = 1..3.
pub fn richardson_at_zero(x: [f64; 3], y: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= (0.0 - x[j]) / (x[i] - x[j]);
            }
        }
        total += w * y[i];
    }
    total
}

/// One (N, M_N) row of a density sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRow {
    pub n: usize,
    pub m_n: f64,
}

/// M_N over a sweep of N, with the predicted limit and its extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub symbol_id: SymbolId,
    pub g: String,
    pub rows: Vec<DensityRow>,
    pub predicted_limit: f64,
    /// Quadratic extrapolation in 1/log N through the last three rows.
    pub extrapolated_limit: Option<f64>,
}

/// Runs the density sweep over strictly increasing `ns`, all ≥ 2; `tol` is
/// the quadrature tolerance of the predicted limit.
pub fn density_report(
    sym: &Symbol,
    g: &TestFunction,
    ns: &[usize],
    tol: f64,
    cache: &SpectrumCache,
) -> Result<DensityReport> {
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HardyError::InvalidArgument(
            "N list must be non-empty and strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        check_n(n, 2)?;
        let spec = cache.kernel(sym, n)?;
        rows.push(DensityRow {
            n,
            m_n: trace_functional(&spec, g) / (n as f64).ln(),
        });
    }
    let extrapolated_limit = (rows.len() >= 3).then(|| {
        let last = &rows[rows.len() - 3..];
        let x = [0, 1, 2].map(|k| 1.0 / (last[k].n as f64).ln());
        let y = [0, 1, 2].map(|k| last[k].m_n);
        richardson_at_zero(x, y)
    });
    Ok(DensityReport {
        symbol_id: sym.id(),
        g: g.to_string(),
        rows,
        predicted_limit: szego_limit(sym, g, tol)?,
        extrapolated_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for d in [
            "lambda",
            "square",
            "pow:3",
            "ramp:0.5:0.25",
            "table:-1:0;0:0;2:1",
        ] {
            let g: TestFunction = d.parse().unwrap();
            assert_eq!(g.to_string(), d);
        }
        assert!("table:0:1;1:2".parse::<TestFunction>().is_err());
        assert!("ramp:-1:1".parse::<TestFunction>().is_err());
        assert!("pow:0".parse::<TestFunction>().is_err());
        assert!("cube".parse::<TestFunction>().is_err());
    }

    #[test]
    fn ramp_and_table_values() {
        let g = TestFunction::clipped_ramp(1.0, 0.5).unwrap();
        assert_eq!(g.eval(0.0), 0.0);
        assert_eq!(g.eval(1.25), 0.5);
        assert_eq!(g.eval(9.0), 1.0);
        assert_eq!(g.lipschitz_constant(), 2.0);
        let t = TestFunction::table(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 1.0]).unwrap();
        assert_eq!(t.eval(-5.0), 0.0);
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(2.0), 1.5);
        assert_eq!(t.eval(10.0), 1.0);
        assert_eq!(t.lipschitz_constant(), 2.0);
    }

    #[test]
    fn richardson_is_exact_on_quadratics() {
        let f = |x: f64| 1.0 - 0.3 * x + 2.0 * x * x;
        let x = [0.2, 0.15, 0.1];
        assert!((richardson_at_zero(x, x.map(f)) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), 1.0);
        assert!((harmonic(3) - 11.0 / 6.0).abs() < 1e-15);
    }
}
