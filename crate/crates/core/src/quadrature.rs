//! Gauss-Legendre panels, global adaptive bisection and tail acceleration.
//!
//! Everything here is deterministic: the same integrand and tolerance always
//! visit the same nodes in the same order.

use std::sync::OnceLock;

use crate::error::{HardyError, Result};

/// Order of the composite panels used throughout the crate.
pub const PANEL_ORDER: usize = 16;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess for the i-th largest root.
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Applies the rule on [a, b].
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped onto [a, b], appended to the given buffers.
    pub fn map_onto(&self, a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>) {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// The shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
}

/// Integral value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn assess<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Interval {
    let rule = gl16();
    let whole = rule.integrate(f, a, b);
    let m = 0.5 * (a + b);
    let halves = rule.integrate(f, a, m) + rule.integrate(f, m, b);
    Interval {
        a,
        b,
        value: halves,
        error: (whole - halves).abs(),
    }
}

/// Global adaptive bisection with GL16 panels.
///
/// `breaks` seeds the initial partition (sorted, at least two points). The
/// interval with the largest error estimate is bisected until the summed
/// estimate falls below `tol` or `max_intervals` is reached.
pub fn adaptive_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: f64,
    max_intervals: usize,
) -> Result<Estimate> {
    if breaks.len() < 2 {
        return Err(HardyError::InvalidArgument(
            "adaptive quadrature needs at least two breakpoints".into(),
        ));
    }
    let mut intervals: Vec<Interval> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| assess(&f, w[0], w[1]))
        .collect();
    loop {
        let total_err: f64 = intervals.iter().map(|i| i.error).sum();
        if total_err <= tol {
            break;
        }
        if intervals.len() >= max_intervals {
            return Err(HardyError::Convergence {
                tol,
                achieved: total_err,
            });
        }
        let (worst, _) =
            intervals
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (k, iv)| {
                    if iv.error > best.1 {
                        (k, iv.error)
                    } else {
                        best
                    }
                });
        let iv = intervals.swap_remove(worst);
        let m = 0.5 * (iv.a + iv.b);
        if m <= iv.a || m >= iv.b {
            // Interval collapsed to machine resolution; keep what we have.
            intervals.push(iv);
            let total_err: f64 = intervals.iter().map(|i| i.error).sum();
            return Err(HardyError::Convergence {
                tol,
                achieved: total_err,
            });
        }
        intervals.push(assess(&f, iv.a, m));
        intervals.push(assess(&f, m, iv.b));
    }
    // Sum in positional order so the result does not depend on the
    // bisection history.
    intervals.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Estimate {
        value: intervals.iter().map(|i| i.value).sum(),
        error: intervals.iter().map(|i| i.error).sum(),
    })
}

/// Adaptive integral of `f` over [a, b] split into `pieces` equal panels.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    pieces: usize,
    tol: f64,
    max_intervals: usize,
) -> Result<Estimate> {
    let pieces = pieces.max(1);
    let breaks: Vec<f64> = (0..=pieces)
        .map(|k| {
            if k == pieces {
                b
            } else {
                a + (b - a) * k as f64 / pieces as f64
            }
        })
        .collect();
    adaptive_with_breaks(f, &breaks, tol, max_intervals.max(pieces))
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the extrapolated limit and the difference between the last two
/// even-column estimates as an error indicator.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Estimate {
    let n = partial_sums.len();
    match n {
        0 => {
            return Estimate {
                value: 0.0,
                error: f64::INFINITY,
            }
        }
        1 | 2 => {
            let last = partial_sums[n - 1];
            let prev = if n == 2 { partial_sums[0] } else { f64::NAN };
            return Estimate {
                value: last,
                error: (last - prev).abs(),
            };
        }
        _ => {}
    }
    // prev_col holds epsilon_{k-1}, cur_col holds epsilon_k.
    let mut prev_col = vec![0.0; n + 1];
    let mut cur_col: Vec<f64> = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    let mut best_prev = partial_sums[n - 2];
    let mut k = 0;
    while cur_col.len() >= 2 {
        let mut next = Vec::with_capacity(cur_col.len() - 1);
        let mut broke = false;
        for j in 0..cur_col.len() - 1 {
            let diff = cur_col[j + 1] - cur_col[j];
            if diff == 0.0 || !diff.is_finite() {
                broke = true;
                break;
            }
            next.push(prev_col[j + 1] + 1.0 / diff);
        }
        if broke {
            break;
        }
        k += 1;
        prev_col = cur_col;
        cur_col = next;
        if k % 2 == 0 {
            let m = cur_col.len();
            if m >= 2 {
                best_prev = cur_col[m - 2];
            } else {
                best_prev = best;
            }
            best = cur_col[m - 1];
        }
    }
    Estimate {
        value: best,
        error: (best - best_prev).abs(),
    }
}

/// ∫_a^∞ f(t) cos(ωt) dt for a smooth, slowly decaying `f` and ω > 0.
///
/// Integrates successive half-periods of the cosine and accelerates the
/// alternating partial sums with the epsilon algorithm.
pub fn cos_tail<F: Fn(f64) -> f64>(f: F, a: f64, omega: f64, tol: f64) -> Result<Estimate> {
    if omega <= 0.0 {
        return Err(HardyError::InvalidArgument(
            "cos_tail requires a positive frequency".into(),
        ));
    }
    const MAX_CYCLES: usize = 400;
    let half = std::f64::consts::PI / omega;
    let g = |t: f64| f(t) * (omega * t).cos();
    // Align the cycle boundaries with zeros of the cosine.
    let k0 = ((omega * a) / std::f64::consts::PI - 0.5).ceil();
    let mut first_zero = (k0 + 0.5) * half;
    if first_zero <= a {
        first_zero += half;
    }
    let head = adaptive(g, a, first_zero, 1, tol * 1e-2, 2000)?;
    let mut sums = Vec::new();
    let mut acc = head.value;
    let mut quad_err = head.error;
    let mut lo = first_zero;
    let mut last: Option<Estimate> = None;
    for cycle in 0..MAX_CYCLES {
        let hi = lo + half;
        let piece = adaptive(g, lo, hi, 1, tol * 1e-3, 2000)?;
        acc += piece.value;
        quad_err += piece.error;
        sums.push(acc);
        lo = hi;
        if cycle >= 6 {
            let window = if sums.len() > 40 {
                &sums[sums.len() - 40..]
            } else {
                &sums[..]
            };
            let est = wynn_epsilon(window);
            if let Some(prev) = last {
                let change = (est.value - prev.value).abs();
                if change.max(est.error) + quad_err <= tol {
                    return Ok(Estimate {
                        value: est.value,
                        error: change.max(est.error) + quad_err,
                    });
                }
            }
            last = Some(est);
        }
    }
    let achieved = last.map(|e| e.error).unwrap_or(f64::INFINITY);
    Err(HardyError::Convergence { tol, achieved })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl16_integrates_degree_31_exactly() {
        let rule = gl16();
        let v = rule.integrate(|x| x.powi(30) + x.powi(31), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        for i in 0..PANEL_ORDER {
            assert_eq!(rule.nodes[i], -rule.nodes[PANEL_ORDER - 1 - i]);
        }
    }

    #[test]
    fn adaptive_handles_a_kink() {
        let est = adaptive(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1, 1e-12, 500).unwrap();
        assert!((est.value - (0.045 + 0.245)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_budget_exhaustion() {
        let err = adaptive(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1, 1e-14, 8).unwrap_err();
        assert!(matches!(err, HardyError::Convergence { .. }));
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // 1 - 1/2 + 1/3 - ... = ln 2
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=15)
            .map(|k| {
                let term = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s += term;
                s
            })
            .collect();
        let est = wynn_epsilon(&sums);
        assert!((est.value - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn cos_tail_of_lorentzian() {
        // ∫_0^∞ cos(ωt)/(1+t²) dt = (π/2) e^{-ω}; subtract the head [0, 5].
        let omega = 0.7;
        let f = |t: f64| 1.0 / (1.0 + t * t);
        let head = adaptive(|t| f(t) * (omega * t).cos(), 0.0, 5.0, 4, 1e-14, 500).unwrap();
        let tail = cos_tail(f, 5.0, omega, 1e-11).unwrap();
        let exact = std::f64::consts::FRAC_PI_2 * (-omega).exp();
        assert!((head.value + tail.value - exact).abs() < 1e-10);
    }
}
