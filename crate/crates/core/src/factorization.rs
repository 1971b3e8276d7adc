//! Gram operators of the factorization K_N(φ) = A_N A_N*, discretized on a
//! t-grid, and the trace norm of the difference D_N between the discrete
//! (ζ_N) and continuous (η_N) Gram kernels.
//!
//! The kernels (1/2π)φ^{1/2}(t₁)φ^{1/2}(t₂)F(t₁ − t₂) with F = ζ_N(1 + i·) or
//! η_N(1 + i·) are Hermitian but not real: Im F is odd. On a grid mirrored
//! about t = 0 and an even φ, the Hermitian matrix is unitarily equivalent
//! to a real symmetric one in the basis (δ_t ± δ_{−t})/√2, with the odd
//! combinations multiplied by i. That real form is what is assembled here.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::linalg::{eigh, DenseMatrix};
use crate::quadrature::{gl16, PANEL_ORDER};
use crate::symbols::{default_r_cut, tail_mass, Symbol};

/// Number of nodes per side carried by one Gauss-Legendre panel pair.
const NODES_PER_PANEL_PAIR: usize = 2 * PANEL_ORDER;

/// ζ_N(1 + iτ) = Σ_{k≤N} k^{−1−iτ}.
pub fn zeta_n(tau: f64, n: usize) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for k in (1..=n).rev() {
        let kf = k as f64;
        let (s, c) = (tau * kf.ln()).sin_cos();
        re += c / kf;
        im -= s / kf;
    }
    Complex64::new(re, im)
}

/// η_N(1 + iτ) = ∫₁^N x^{−1−iτ}dx = (1 − N^{−iτ})/(iτ), log N at τ = 0.
pub fn eta_n(tau: f64, n: usize) -> Complex64 {
    let l = (n.max(1) as f64).ln();
    let z = tau * l;
    if tau.abs() < 1e-6 {
        // L·Σ_k (−iz)^k/(k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..6 {
            term *= Complex64::new(0.0, -z) / (k + 1) as f64;
            sum += term;
        }
        return sum * l;
    }
    let half = (0.5 * z).sin();
    Complex64::new(z.sin() / tau, -2.0 * half * half / tau)
}

/// Which Gram kernel to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GramMode {
    /// Discrete side, F = ζ_N.
    Zeta,
    /// Continuous side, F = η_N.
    Eta,
}

impl GramMode {
    fn kernel(self, tau: f64, n: usize) -> Complex64 {
        match self {
            GramMode::Zeta => zeta_n(tau, n),
            GramMode::Eta => eta_n(tau, n),
        }
    }
}

/// Quadrature nodes and weights on [0, R]: Gauss-Legendre panels of order 16
/// whose widths grow geometrically from min(R/P, 16/log N, 2·width of φ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Builds the half grid for `m_nodes` total nodes (a positive multiple of 32).
/// The first panel is at most twice `t_width`, the scale on which φ varies.
pub fn half_grid(n: usize, r_cut: f64, t_width: f64, m_nodes: usize) -> Result<HalfGrid> {
    if m_nodes == 0 || !m_nodes.is_multiple_of(NODES_PER_PANEL_PAIR) {
        return Err(HardyError::InvalidArgument(format!(
            "m_nodes must be a positive multiple of {NODES_PER_PANEL_PAIR}, got {m_nodes}"
        )));
    }
    if !(r_cut > 0.0 && r_cut.is_finite()) {
        return Err(HardyError::InvalidArgument(format!(
            "r_cut must be positive and finite, got {r_cut}"
        )));
    }
    let panels = m_nodes / NODES_PER_PANEL_PAIR;
    let first = (r_cut / panels as f64)
        .min(16.0 / (n as f64).ln().max(1.0))
        .min(2.0 * t_width);
    let ratio = panel_ratio(first, r_cut, panels);
    let mut nodes = Vec::with_capacity(m_nodes / 2);
    let mut weights = Vec::with_capacity(m_nodes / 2);
    let mut a = 0.0;
    let mut width = first;
    for k in 0..panels {
        let b = if k + 1 == panels { r_cut } else { a + width };
        gl16().map_onto(a, b, &mut nodes, &mut weights);
        a = b;
        width *= ratio;
    }
    Ok(HalfGrid { nodes, weights })
}

/// q ≥ 1 with first·(1 + q + … + q^{P−1}) = total.
fn panel_ratio(first: f64, total: f64, panels: usize) -> f64 {
    let sum = |q: f64| -> f64 { (0..panels).map(|k| q.powi(k as i32)).sum::<f64>() * first };
    if sum(1.0) >= total {
        return 1.0;
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while sum(hi) < total {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum(mid) < total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Discretized Gram operator on a grid mirrored about t = 0.
#[derive(Debug, Clone, Serialize)]
pub struct GramDiscretization {
    /// All nodes on [−R, R], ascending.
    pub t_grid: Vec<f64>,
    pub t_weights: Vec<f64>,
    pub mode: GramMode,
    pub n_param: usize,
    pub r_cut: f64,
    /// Real symmetric form of the Hermitian Gram matrix (see module docs).
    #[serde(skip)]
    pub matrix: DenseMatrix,
    /// max |F(τ) − conj F(−τ)| over the assembled arguments.
    pub hermitian_defect: f64,
}

/// Resolves the cutoff and checks the tail-mass condition.
fn resolve_r_cut(sym: &Symbol, r_cut: Option<f64>) -> Result<f64> {
    match r_cut {
        None => default_r_cut(sym),
        Some(r) => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(HardyError::InvalidArgument(format!(
                    "r_cut must be positive and finite, got {r}"
                )));
            }
            if tail_mass(sym, r)? >= 1e-8 * sym.l1_norm() {
                return Err(HardyError::DomainTruncation {
                    r_cut: r,
                    suggested: default_r_cut(sym)?,
                });
            }
            Ok(r)
        }
    }
}

fn check_gram_args(sym: &Symbol, n: usize) -> Result<()> {
    if n == 0 {
        return Err(HardyError::Dimension("N must be at least 1".into()));
    }
    if !sym.nonnegative() {
        return Err(HardyError::InvalidArgument(
            "Gram factorization needs a nonnegative symbol".into(),
        ));
    }
    Ok(())
}

/// Assembles the Gram matrix of `mode` for K_N(φ). `r_cut = None` selects
/// the default cutoff.
pub fn build_gram(
    sym: &Symbol,
    n: usize,
    mode: GramMode,
    r_cut: Option<f64>,
    m_nodes: usize,
) -> Result<GramDiscretization> {
    check_gram_args(sym, n)?;
    let r = resolve_r_cut(sym, r_cut)?;
    let grid = half_grid(n, r, sym.t_width(), m_nodes)?;
    Ok(assemble(sym, n, mode, r, &grid))
}

fn assemble(
    sym: &Symbol,
    n: usize,
    mode: GramMode,
    r_cut: f64,
    grid: &HalfGrid,
) -> GramDiscretization {
    let h = grid.nodes.len();
    let c: Vec<f64> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(&t, &w)| (w * sym.eval(t) / (2.0 * PI)).sqrt())
        .collect();
    let mut diff = vec![Complex64::new(0.0, 0.0); h * h];
    let mut sum = vec![Complex64::new(0.0, 0.0); h * h];
    for p in 0..h {
        for q in 0..h {
            diff[p * h + q] = mode.kernel(grid.nodes[p] - grid.nodes[q], n);
        }
        for q in 0..=p {
            let v = mode.kernel(grid.nodes[p] + grid.nodes[q], n);
            sum[p * h + q] = v;
            sum[q * h + p] = v;
        }
    }
    let mut defect = 0.0_f64;
    for p in 0..h {
        for q in 0..p {
            defect = defect.max((diff[p * h + q] - diff[q * h + p].conj()).norm());
        }
    }
    let mut matrix = DenseMatrix::zeros(2 * h, 2 * h);
    for p in 0..h {
        for q in 0..h {
            let cc = c[p] * c[q];
            let d = diff[p * h + q];
            let s = sum[p * h + q];
            if q <= p {
                let even = cc * (d.re + s.re);
                let odd = cc * (d.re - s.re);
                matrix.set(p, q, even);
                matrix.set(q, p, even);
                matrix.set(h + p, h + q, odd);
                matrix.set(h + q, h + p, odd);
            }
            let cross = -cc * (d.im - s.im);
            matrix.set(p, h + q, cross);
            matrix.set(h + q, p, cross);
        }
    }
    let mut t_grid: Vec<f64> = grid.nodes.iter().rev().map(|t| -t).collect();
    t_grid.extend_from_slice(&grid.nodes);
    let mut t_weights: Vec<f64> = grid.weights.iter().rev().copied().collect();
    t_weights.extend_from_slice(&grid.weights);
    GramDiscretization {
        t_grid,
        t_weights,
        mode,
        n_param: n,
        r_cut,
        matrix,
        hermitian_defect: defect,
    }
}

/// Summary of one D_N computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DnReport {
    pub n: usize,
    pub m_nodes: usize,
    pub r_cut: f64,
    pub dn_trace_norm: f64,
    pub zeta_norm: f64,
    pub eta_norm: f64,
    pub trace_dn: f64,
}

fn gram_pair(
    sym: &Symbol,
    n: usize,
    r_cut: Option<f64>,
    m_nodes: usize,
) -> Result<(GramDiscretization, GramDiscretization)> {
    check_gram_args(sym, n)?;
    let r = resolve_r_cut(sym, r_cut)?;
    let grid = half_grid(n, r, sym.t_width(), m_nodes)?;
    Ok((
        assemble(sym, n, GramMode::Zeta, r, &grid),
        assemble(sym, n, GramMode::Eta, r, &grid),
    ))
}

/// Trace norm of D_N together with both Gram operator norms and Tr D_N.
pub fn dn_report(sym: &Symbol, n: usize, r_cut: Option<f64>, m_nodes: usize) -> Result<DnReport> {
    let (zeta, eta) = gram_pair(sym, n, r_cut, m_nodes)?;
    let d = zeta.matrix.sub(&eta.matrix)?;
    Ok(DnReport {
        n,
        m_nodes,
        r_cut: zeta.r_cut,
        dn_trace_norm: eigh(&d)?.abs_sum(),
        zeta_norm: eigh(&zeta.matrix)?.norm(),
        eta_norm: eigh(&eta.matrix)?.norm(),
        trace_dn: d.trace(),
    })
}

/// ‖ζ-mode − η-mode‖_{S₁} on a shared grid.
pub fn dn_trace_norm(sym: &Symbol, n: usize, r_cut: Option<f64>, m_nodes: usize) -> Result<f64> {
    let (zeta, eta) = gram_pair(sym, n, r_cut, m_nodes)?;
    Ok(eigh(&zeta.matrix.sub(&eta.matrix)?)?.abs_sum())
}

/// (‖ζ-mode‖, ‖η-mode‖) operator norms.
pub fn gram_operator_norms(
    sym: &Symbol,
    n: usize,
    r_cut: Option<f64>,
    m_nodes: usize,
) -> Result<(f64, f64)> {
    let (zeta, eta) = gram_pair(sym, n, r_cut, m_nodes)?;
    Ok((eigh(&zeta.matrix)?.norm(), eigh(&eta.matrix)?.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_and_eta_special_values() {
        assert!((zeta_n(0.0, 3) - Complex64::new(11.0 / 6.0, 0.0)).norm() < 1e-15);
        let tau = PI / 2.0_f64.ln();
        assert!((zeta_n(tau, 2) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(zeta_n(3.7, 1), Complex64::new(1.0, 0.0));
        assert!((eta_n(0.0, 2).re - 2.0_f64.ln()).abs() < 1e-16);
        let want = Complex64::new(0.0, -2.0 * 2.0_f64.ln() / PI);
        assert!((eta_n(tau, 2) - want).norm() < 1e-15);
        assert_eq!(eta_n(0.7, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn eta_series_branch_is_continuous() {
        for n in [2, 100, 4096] {
            let a = eta_n(1e-8, n);
            let l = (n as f64).ln();
            let z: f64 = 1e-8 * l;
            let b = Complex64::new(l * (1.0 - z * z / 6.0), -0.5 * l * z * (1.0 - z * z / 12.0));
            assert!((a - b).norm() < 1e-12, "{n}");
            let tau = 0.999e-6;
            let (s, h) = ((tau * l).sin(), (0.5 * tau * l).sin());
            let closed = Complex64::new(s / tau, -2.0 * h * h / tau);
            assert!((eta_n(tau, n) - closed).norm() < 1e-12, "{n}");
        }
    }

    #[test]
    fn grid_covers_half_line() {
        let g = half_grid(64, 8.0, 1.0, 256).unwrap();
        assert_eq!(g.nodes.len(), 128);
        let total: f64 = g.weights.iter().sum();
        assert!((total - 8.0).abs() < 1e-12);
        assert!(g.nodes.windows(2).all(|w| w[1] > w[0]));
        let g = half_grid(1024, 67108864.0, 1.0, 512).unwrap();
        let total: f64 = g.weights.iter().sum();
        assert!((total / 67108864.0 - 1.0).abs() < 1e-12);
        assert!(half_grid(4, 8.0, 1.0, 100).is_err());
    }
}
