//! Dense real symmetric eigenvalues: Householder reduction to tridiagonal
//! form followed by implicit QL with Wilkinson-type shifts.
//!
//! The reduction is unblocked but fused: the rank-2 update of one step and
//! the matrix-vector product of the next step share a single pass over the
//! lower triangle, which halves the memory traffic at large N.

use serde::Serialize;

use super::matrix::DenseMatrix;
use crate::error::{HardyError, Result};

/// Maximum implicit QL sweeps spent on a single eigenvalue.
pub const MAX_SWEEPS: usize = 30;

/// Number of eigenpairs re-derived by inverse iteration to bound the residual.
const RESIDUAL_SAMPLES: usize = 10;

/// Eigenvalues of a symmetric matrix in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    values: Vec<f64>,
    /// Largest ‖Av − λv‖ / ‖A‖ over the sampled eigenpairs.
    pub residual_bound: f64,
}

impl Spectrum {
    pub fn from_sorted(values: Vec<f64>, residual_bound: f64) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self {
            values,
            residual_bound,
        }
    }

    /// Builds a spectrum from arbitrary-order values (no residual information).
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values,
            residual_bound: 0.0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Spectral norm of the underlying symmetric matrix.
    pub fn norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Eigenvalues ordered non-increasingly.
    pub fn descending(&self) -> Vec<f64> {
        self.values.iter().rev().copied().collect()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Σ λ_j^m.
    pub fn power_sum(&self, m: u32) -> f64 {
        self.values.iter().map(|x| x.powi(m as i32)).sum()
    }

    /// Σ |λ_j|.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|x| x.abs()).sum()
    }

    /// Number of eigenvalues in the open interval (λ, ∞).
    pub fn count_above(&self, lambda: f64) -> usize {
        self.values.len() - self.values.partition_point(|&x| x <= lambda)
    }

    /// Σ g(λ_j).
    pub fn sum_of<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.values.iter().map(|&x| g(x)).sum()
    }

    /// The spectrum of `c·A` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|x| c * x).collect(),
            residual_bound: self.residual_bound,
        }
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling i and i+1.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Householder reduction of a symmetric matrix held in the lower triangle of
/// `a` (row-major, n×n). On return row i, columns 0..i hold the reflector
/// v_i (with v_i[i-1] = 1) and `tau[i]` its scalar factor.
pub(crate) fn tridiagonalize(a: &mut [f64], n: usize) -> (Tridiagonal, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut tau = vec![0.0; n];
    if n == 0 {
        return (
            Tridiagonal {
                diag: d,
                off: vec![],
            },
            tau,
        );
    }
    let mut p = vec![0.0; n];
    let mut w_prev = vec![0.0; n];
    // Size of the block the pending update (v of row i+1, w_prev) applies to.
    let mut pending: Option<usize> = None;

    for i in (1..n).rev() {
        let (head, tail) = a.split_at_mut(i * n);
        let (row_i, rest) = tail.split_at_mut(n);
        let v_prev: &[f64] = match pending {
            Some(m) => &rest[..m],
            None => &[],
        };
        if pending.is_some() {
            update_row(&mut row_i[..=i], v_prev, &w_prev, i);
        }
        d[i] = row_i[i];
        let (beta, t) = householder(&mut row_i[..i]);
        e[i] = beta;
        tau[i] = t;
        let v = &row_i[..i];

        p[..i].fill(0.0);
        for j in 0..i {
            let rj = &mut head[j * n..j * n + j + 1];
            if pending.is_some() {
                if t != 0.0 {
                    fused_update_matvec(rj, v_prev, &w_prev, v, &mut p, j);
                } else {
                    update_row(rj, v_prev, &w_prev, j);
                }
            } else if t != 0.0 {
                matvec_row(rj, v, &mut p, j);
            }
        }

        if t != 0.0 {
            for pk in &mut p[..i] {
                *pk *= t;
            }
            let pv: f64 = p[..i].iter().zip(v).map(|(x, y)| x * y).sum();
            let k = 0.5 * t * pv;
            for kk in 0..i {
                w_prev[kk] = p[kk] - k * v[kk];
            }
            pending = Some(i);
        } else {
            pending = None;
        }
    }
    if let Some(m) = pending {
        let (row0, rest) = a.split_at_mut(n);
        let v_prev = &rest[..m];
        update_row(&mut row0[..1], v_prev, &w_prev, 0);
    }
    d[0] = a[0];
    let off = e[1..].to_vec();
    (Tridiagonal { diag: d, off }, tau)
}

/// row[k] -= v[j] w[k] + w[j] v[k] for k ≤ j.
#[inline]
fn update_row(row: &mut [f64], v: &[f64], w: &[f64], j: usize) {
    let vj = v[j];
    let wj = w[j];
    for ((r, &vk), &wk) in row[..=j].iter_mut().zip(&v[..=j]).zip(&w[..=j]) {
        *r -= vj * wk + wj * vk;
    }
}

/// Accumulates the lower-triangle contribution of row j to p = A v.
#[inline]
fn matvec_row(row: &[f64], v: &[f64], p: &mut [f64], j: usize) {
    let vj = v[j];
    let mut acc = [0.0; 4];
    let body = j - j % 4;
    for c in (0..body).step_by(4) {
        for l in 0..4 {
            let x = row[c + l];
            acc[l] += x * v[c + l];
            p[c + l] += x * vj;
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in body..j {
        let x = row[k];
        s += x * v[k];
        p[k] += x * vj;
    }
    p[j] += s + row[j] * vj;
}

/// Applies the pending rank-2 update to row j and accumulates its matvec
/// contribution with the new reflector in the same pass.
#[inline]
fn fused_update_matvec(
    row: &mut [f64],
    v_prev: &[f64],
    w_prev: &[f64],
    v: &[f64],
    p: &mut [f64],
    j: usize,
) {
    let a1 = v_prev[j];
    let b1 = w_prev[j];
    let vj = v[j];
    let mut acc = [0.0; 4];
    let body = j - j % 4;
    for c in (0..body).step_by(4) {
        for (l, a) in acc.iter_mut().enumerate() {
            let k = c + l;
            let x = row[k] - (a1 * w_prev[k] + b1 * v_prev[k]);
            row[k] = x;
            *a += x * v[k];
            p[k] += x * vj;
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in body..j {
        let x = row[k] - (a1 * w_prev[k] + b1 * v_prev[k]);
        row[k] = x;
        s += x * v[k];
        p[k] += x * vj;
    }
    let x = row[j] - (a1 * w_prev[j] + b1 * v_prev[j]);
    row[j] = x;
    p[j] += s + x * vj;
}

/// Reflector H = I − τ v vᵀ with H x = β e_last. Overwrites x with v.
fn householder(x: &mut [f64]) -> (f64, f64) {
    let m = x.len();
    if m == 0 {
        return (0.0, 0.0);
    }
    let alpha = x[m - 1];
    let head = &x[..m - 1];
    let scale = head.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        x[m - 1] = 1.0;
        return (alpha, 0.0);
    }
    let ssq: f64 = head.iter().map(|v| (v / scale) * (v / scale)).sum();
    let xnorm = scale * ssq.sqrt();
    let beta = -alpha.hypot(xnorm).copysign(alpha);
    let tau = (beta - alpha) / beta;
    let inv = 1.0 / (alpha - beta);
    for v in &mut x[..m - 1] {
        *v *= inv;
    }
    x[m - 1] = 1.0;
    (beta, tau)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
pub(crate) fn tridiagonal_eigenvalues(t: &Tridiagonal) -> Result<Vec<f64>> {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&t.off);
    // Off-diagonals below ε‖T‖ are negligible at the accuracy the reduction
    // already delivers; deflating them avoids stalls on clusters near zero.
    let tnorm = (0..n).fold(0.0_f64, |m, i| {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        m.max(d[i].abs() + e[i].abs() + left)
    });
    let floor = f64::EPSILON * tnorm;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() + dd == dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(HardyError::SolverNoConvergence {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Solves (T − σI) y = b for a symmetric tridiagonal T by Gaussian
/// elimination with partial pivoting. `b` is overwritten with y.
fn shifted_tridiagonal_solve(t: &Tridiagonal, sigma: f64, b: &mut [f64]) {
    let n = t.diag.len();
    if n == 1 {
        let piv = t.diag[0] - sigma;
        b[0] /= if piv == 0.0 { f64::EPSILON } else { piv };
        return;
    }
    let tiny = f64::EPSILON
        * t.diag
            .iter()
            .chain(&t.off)
            .fold(f64::MIN_POSITIVE, |m, x| m.max(x.abs()));
    let mut d: Vec<f64> = t.diag.iter().map(|x| x - sigma).collect();
    let mut dl = t.off.clone();
    let mut du = t.off.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - dl[i] * b[i];
        } else {
            b[i + 1] -= dl[i] * b[i];
        }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return 0.0;
    }
    let norm = scale
        * x.iter()
            .map(|v| (v / scale) * (v / scale))
            .sum::<f64>()
            .sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
    norm
}

/// ‖Ax − λx‖ / ‖A‖ for sampled eigenvalues, with eigenvectors recovered by
/// inverse iteration on T and mapped back through the stored reflectors.
fn sampled_residual(
    original: &DenseMatrix,
    reflectors: &[f64],
    tau: &[f64],
    tri: &Tridiagonal,
    values: &[f64],
) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let norm = values[0].abs().max(values[n - 1].abs());
    if norm == 0.0 {
        return 0.0;
    }
    let samples = RESIDUAL_SAMPLES.min(n);
    let mut worst = 0.0_f64;
    for s in 0..samples {
        let idx = if samples == 1 {
            0
        } else {
            (s * (n - 1) + (samples - 1) / 2) / (samples - 1)
        };
        let lambda = values[idx];
        let sigma = lambda + norm * f64::EPSILON * 4.0;
        let mut y: Vec<f64> = (0..n).map(|k| 1.0 + (k % 7) as f64 * 0.1).collect();
        normalize(&mut y);
        for _ in 0..3 {
            shifted_tridiagonal_solve(tri, sigma, &mut y);
            if normalize(&mut y) == 0.0 {
                break;
            }
        }
        // x = H_{n-1} ⋯ H_1 y, applying H_1 first.
        for i in 1..n {
            let t = tau[i];
            if t == 0.0 {
                continue;
            }
            let v = &reflectors[i * n..i * n + i];
            let dot: f64 = v.iter().zip(&y[..i]).map(|(a, b)| a * b).sum();
            let f = t * dot;
            for (yk, vk) in y[..i].iter_mut().zip(v) {
                *yk -= f * vk;
            }
        }
        let ax = original
            .mul_vec(&y)
            .expect("square matrix and matching vector");
        let res: f64 = ax
            .iter()
            .zip(&y)
            .map(|(a, x)| (a - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        let xn: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if xn > 0.0 {
            worst = worst.max(res / (norm * xn));
        }
    }
    worst
}

/// Relative symmetry tolerance accepted by [`eigh`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// All eigenvalues of a real symmetric matrix, ascending.
pub fn eigh(mat: &DenseMatrix) -> Result<Spectrum> {
    if !mat.is_square() {
        return Err(HardyError::Dimension(format!(
            "eigh needs a square matrix, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    let n = mat.rows();
    if n == 0 {
        return Ok(Spectrum::from_sorted(vec![], 0.0));
    }
    let allowed = SYMMETRY_TOLERANCE * mat.max_abs();
    let defect = mat.symmetry_defect();
    if defect > allowed {
        return Err(HardyError::Asymmetric { defect, allowed });
    }
    if mat.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(HardyError::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let mut work = mat.as_slice().to_vec();
    let (tri, tau) = tridiagonalize(&mut work, n);
    let values = tridiagonal_eigenvalues(&tri)?;
    let residual = sampled_residual(mat, &work, &tau, &tri, &values);
    Ok(Spectrum::from_sorted(values, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let m = DenseMatrix::from_rows(&[vec![0.5, 1.0 / 3.0], vec![1.0 / 3.0, 0.25]]).unwrap();
        let s = eigh(&m).unwrap();
        let tr: f64 = 0.75;
        let det: f64 = 0.125 - 1.0 / 9.0;
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!((s.values()[0] - (tr - disc) / 2.0).abs() < 1e-15);
        assert!((s.values()[1] - (tr + disc) / 2.0).abs() < 1e-15);
        assert!(s.residual_bound < 1e-14);
    }

    #[test]
    fn identity_and_diagonal() {
        let s = eigh(&DenseMatrix::identity(5)).unwrap();
        assert_eq!(s.values(), &[1.0; 5]);
        let s = eigh(&DenseMatrix::from_diagonal(&[1.0, 0.5, 1.0 / 3.0])).unwrap();
        assert_eq!(s.values(), &[1.0 / 3.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.1, 1.0]]).unwrap();
        assert!(matches!(eigh(&m), Err(HardyError::Asymmetric { .. })));
    }

    #[test]
    fn one_by_one_and_empty() {
        let s = eigh(&DenseMatrix::from_rows(&[vec![-3.0]]).unwrap()).unwrap();
        assert_eq!(s.values(), &[-3.0]);
        assert!(eigh(&DenseMatrix::zeros(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn counting_is_strict() {
        let s = Spectrum::from_values(vec![0.5, 1.0, 2.0]);
        assert_eq!(s.count_above(1.0), 1);
        assert_eq!(s.count_above(0.0), 3);
        assert_eq!(s.count_above(2.0), 0);
    }

    #[test]
    fn tridiagonal_solver_inverts() {
        let t = Tridiagonal {
            diag: vec![2.0, 1e-18, 3.0, 4.0],
            off: vec![1.0, 5.0, -1.0],
        };
        let x = [1.0, -2.0, 0.5, 3.0];
        // b = T x
        let b: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = t.diag[i] * x[i];
                if i > 0 {
                    s += t.off[i - 1] * x[i - 1];
                }
                if i < 3 {
                    s += t.off[i] * x[i + 1];
                }
                s
            })
            .collect();
        let mut y = b.clone();
        shifted_tridiagonal_solve(&t, 0.0, &mut y);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
