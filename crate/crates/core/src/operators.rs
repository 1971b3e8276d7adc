//! Finite matrices generated by a symbol: K_N(φ), the Nyström matrix of
//! T_N(φ), the diagonal limit K_{N,∞} and the Pochhammer matrix B_α.

use std::f64::consts::PI;
use std::io::{self, Read, Write};

use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::linalg::{eigh, DenseMatrix, Spectrum};
use crate::quadrature::{adaptive, cos_tail};
use crate::symbols::{half_line_integral, Symbol, SymbolId, Tail};

/// Environment variable overriding the dimension cap.
pub const MAX_N_ENV: &str = "HARDY_SPECTRA_MAX_N";

/// Dimension cap used when the environment does not set one.
pub const DEFAULT_MAX_N: usize = 20_000;

/// Magic bytes opening a matrix dump.
pub const DUMP_MAGIC: &[u8; 4] = b"HKM1";

/// The dimension cap in force: `HARDY_SPECTRA_MAX_N` if set and valid,
/// otherwise [`DEFAULT_MAX_N`].
pub fn dimension_cap() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn check_dimension(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(HardyError::Dimension("N must be at least 1".into()));
    }
    if n > cap {
        return Err(HardyError::Resource { requested: n, cap });
    }
    Ok(())
}

/// Dense symmetric N×N matrix tagged with the symbol it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    matrix: DenseMatrix,
    symbol_id: SymbolId,
}

impl KernelMatrix {
    pub fn new(matrix: DenseMatrix, symbol_id: SymbolId) -> Result<Self> {
        if !matrix.is_square() {
            return Err(HardyError::Dimension(format!(
                "kernel matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, symbol_id })
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn symbol_id(&self) -> &SymbolId {
        &self.symbol_id
    }

    /// Entry (i, j), zero-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigh(&self.matrix)
    }

    /// Writes the binary dump: "HKM1", N as u64 LE, then N² f64 LE row-major.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&(self.n() as u64).to_le_bytes())?;
        for x in self.matrix.as_slice() {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()
    }
}

/// Reads a matrix written by [`KernelMatrix::write_dump`].
pub fn read_dump<R: Read>(mut r: R) -> io::Result<DenseMatrix> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    let mut nb = [0u8; 8];
    r.read_exact(&mut nb)?;
    let n = usize::try_from(u64::from_le_bytes(nb))
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidData, "dimension overflow"))?;
    let mut data = Vec::with_capacity(n * n);
    let mut buf = [0u8; 8];
    for _ in 0..n * n {
        r.read_exact(&mut buf)?;
        data.push(f64::from_le_bytes(buf));
    }
    DenseMatrix::from_row_major(n, n, data)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
}

/// k(n, m) = φ̂(log n − log m)/√(nm) for one-based n, m, bit-identical to the
/// entries produced by [`build_k`].
pub fn kernel_entry(sym: &Symbol, n: usize, m: usize) -> f64 {
    let nm = (n * m) as f64;
    sym.hat((n as f64).ln() - (m as f64).ln()) / nm.sqrt()
}

/// K_N(φ) with entries φ̂(log(n/m))/√(nm), n, m = 1..N.
pub fn build_k(sym: &Symbol, n: usize) -> Result<KernelMatrix> {
    build_k_with_cap(sym, n, dimension_cap())
}

/// [`build_k`] with an explicit dimension cap.
pub fn build_k_with_cap(sym: &Symbol, n: usize, cap: usize) -> Result<KernelMatrix> {
    check_dimension(n, cap)?;
    let logs: Vec<f64> = (1..=n).map(|k| (k as f64).ln()).collect();
    let matrix = DenseMatrix::symmetric_from_fn(n, |i, j| {
        let nm = ((i + 1) * (j + 1)) as f64;
        sym.hat(logs[i] - logs[j]) / nm.sqrt()
    });
    KernelMatrix::new(matrix, sym.id())
}

/// K_{N,∞} = diag(φ̂(0)/j), j = 1..N.
pub fn build_diagonal_limit(sym: &Symbol, n: usize) -> Result<KernelMatrix> {
    check_dimension(n, dimension_cap())?;
    let h0 = sym.hat_zero();
    let diag: Vec<f64> = (1..=n).map(|j| h0 / j as f64).collect();
    KernelMatrix::new(DenseMatrix::from_diagonal(&diag), sym.id())
}

/// ln (x)_k for the rising factorial (x)_k = x(x+1)⋯(x+k−1).
fn ln_pochhammer(x: f64, k: u32) -> f64 {
    (0..k).map(|i| (x + i as f64).ln()).sum()
}

/// Entry b_{n,m} of B_α (one-based n, m).
pub fn pochhammer_entry(alpha: u32, n: usize, m: usize) -> f64 {
    let lp = |k: usize| ln_pochhammer(k as f64, alpha.saturating_sub(1));
    (0.5 * (lp(n) + lp(m)) - ln_pochhammer((n + m - 1) as f64, alpha)).exp()
}

/// B_α with entries √((n)_{α−1}(m)_{α−1}) / (n+m−1)_α, evaluated in log space.
pub fn build_pochhammer(alpha: u32, n: usize) -> Result<KernelMatrix> {
    if alpha == 0 {
        return Err(HardyError::ParameterDomain {
            symbol: "pochhammer".into(),
            alpha: 0.0,
            admissible: "requires an integer alpha >= 1",
        });
    }
    check_dimension(n, dimension_cap())?;
    let lp: Vec<f64> = (1..=n)
        .map(|k| ln_pochhammer(k as f64, alpha - 1))
        .collect();
    let matrix = DenseMatrix::symmetric_from_fn(n, |i, j| {
        let s = (i + j + 1) as f64;
        (0.5 * (lp[i] + lp[j]) - ln_pochhammer(s, alpha)).exp()
    });
    KernelMatrix::new(
        matrix,
        SymbolId {
            name: "pochhammer".into(),
            alpha: alpha as f64,
            scale: 1.0,
        },
    )
}

/// Σ_{n,m} k(n,m) a_n a_m.
pub fn quadratic_form(mat: &KernelMatrix, a: &[f64]) -> Result<f64> {
    let ka = mat.matrix().mul_vec(a)?;
    Ok(ka.iter().zip(a).map(|(x, y)| x * y).sum())
}

/// (1/2π)∫φ(t)|Σ a_n n^{−1/2−it}|²dt by direct quadrature, absolute error ≤ tol.
pub fn dirichlet_form_oracle(sym: &Symbol, a: &[f64], tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(HardyError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(HardyError::InvalidArgument(
            "coefficient vector has non-finite entries".into(),
        ));
    }
    let terms: Vec<(f64, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0.0)
        .map(|(k, &x)| {
            let n = (k + 1) as f64;
            (x / n.sqrt(), n.ln())
        })
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let dirichlet_sq = |t: f64| {
        let (mut re, mut im) = (0.0, 0.0);
        for &(c, l) in &terms {
            let (s, co) = (t * l).sin_cos();
            re += c * co;
            im -= c * s;
        }
        re * re + im * im
    };
    let max_freq = terms.last().unwrap().1 - terms[0].1;
    // The integrals below carry a factor π relative to the result.
    let target = tol * PI;
    let f = |t: f64| sym.eval(t) * dirichlet_sq(t);
    let value = match sym.tail() {
        Tail::Compact { support } => {
            let pieces = ((support * (max_freq + 1.0) / PI).ceil() as usize).max(2);
            adaptive(f, 0.0, support, pieces, target, 100_000)?.value
        }
        Tail::Exponential { .. } => half_line_integral(sym, 0.0, f, target)?.value,
        Tail::Algebraic { .. } => {
            let core_end = 16.0 * sym.t_width();
            let pieces = ((core_end * (max_freq + 1.0) / PI).ceil() as usize).max(8);
            let core = adaptive(f, 0.0, core_end, pieces, 0.5 * target, 100_000)?.value;
            let diag: f64 = terms.iter().map(|(c, _)| c * c).sum();
            let n_pairs = terms.len() * (terms.len() - 1) / 2;
            let share = 0.5 * target / (n_pairs + 1) as f64;
            let mut tail = diag * half_line_integral(sym, core_end, |t| sym.eval(t), share)?.value;
            for (p, &(cp, lp)) in terms.iter().enumerate() {
                for &(cq, lq) in &terms[..p] {
                    let omega = lp - lq;
                    tail +=
                        2.0 * cp * cq * cos_tail(|t| sym.eval(t), core_end, omega, share)?.value;
                }
            }
            core + tail
        }
    };
    Ok(value / PI)
}

/// Fewer nodes than this always raise the under-resolution flag.
pub const MIN_RESOLVED_NODES: usize = 8;

/// Default number of Nyström nodes for T_N: max(512, ⌈64 log N⌉).
pub fn default_m_nodes(n_param: f64) -> usize {
    512.max((64.0 * n_param.ln()).ceil() as usize)
}

/// Trapezoid Nyström discretization of T_N(φ) on [0, log N].
#[derive(Debug, Clone, Serialize)]
pub struct NystromOperator {
    pub n_param: f64,
    pub length: f64,
    pub grid: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub matrix: DenseMatrix,
    /// ε_q: the eigenvalues of `matrix` lie in [inf φ − ε_q, sup φ + ε_q].
    pub aliasing_bound: f64,
    /// Set when the node spacing is coarse relative to the width of φ̂.
    pub under_resolved: bool,
    pub symbol_id: SymbolId,
}

impl NystromOperator {
    pub fn spectrum(&self) -> Result<Spectrum> {
        eigh(&self.matrix)
    }

    pub fn step(&self) -> f64 {
        self.length / (self.grid.len() - 1) as f64
    }
}

/// Bound on sup_s |Σ_{j≠0} φ(s + jP)| for P = 2π/h, valid for even φ with
/// |φ| non-increasing in |t|.
fn aliasing_bound(sym: &Symbol, h: f64) -> f64 {
    let period = 2.0 * PI / h;
    let mut sum = 0.0;
    let mut j = 1u64;
    loop {
        let term = sym.eval((j as f64 - 0.5) * period).abs();
        sum += term;
        if term == 0.0 || term <= 1e-17 * sum {
            break;
        }
        if j >= 100_000 {
            if let Tail::Algebraic { power } = sym.tail() {
                // Σ_{i>j} C i^{−p} ≈ C j^{1−p}/(p−1) with C = term·j^p.
                sum += term * j as f64 / (power - 1.0);
            }
            break;
        }
        j += 1;
    }
    2.0 * sum
}

/// Uniform-trapezoid Nyström matrix Ã = W^{1/2} K W^{1/2}, K(u,v) = φ̂(u−v).
///
/// `n_param` is the N of T_N and may be any real ≥ 2.
pub fn build_t(sym: &Symbol, n_param: f64, m_nodes: usize) -> Result<NystromOperator> {
    if !n_param.is_finite() || n_param < 2.0 {
        return Err(HardyError::Dimension(format!(
            "T_N needs N >= 2, got {n_param}"
        )));
    }
    if m_nodes < 2 {
        return Err(HardyError::Dimension(format!(
            "Nystrom discretization needs at least 2 nodes, got {m_nodes}"
        )));
    }
    check_dimension(m_nodes, dimension_cap())?;
    let length = n_param.ln();
    let h = length / (m_nodes - 1) as f64;
    let grid: Vec<f64> = (0..m_nodes)
        .map(|i| {
            if i + 1 == m_nodes {
                length
            } else {
                i as f64 * h
            }
        })
        .collect();
    let weights: Vec<f64> = (0..m_nodes)
        .map(|i| {
            if i == 0 || i + 1 == m_nodes {
                0.5 * h
            } else {
                h
            }
        })
        .collect();
    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let hats: Vec<f64> = (0..m_nodes).map(|k| sym.hat(k as f64 * h)).collect();
    let matrix = DenseMatrix::symmetric_from_fn(m_nodes, |i, j| {
        if i == j {
            weights[i] * hats[0]
        } else {
            sqrt_w[i] * sqrt_w[j] * hats[i - j]
        }
    });
    Ok(NystromOperator {
        n_param,
        length,
        grid,
        weights,
        matrix,
        aliasing_bound: aliasing_bound(sym, h),
        under_resolved: m_nodes < MIN_RESOLVED_NODES || h > 0.25 * sym.kernel_width(),
        symbol_id: sym.id(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::catalog_symbol;

    #[test]
    fn small_dimension_errors() {
        let s = catalog_symbol("hilbert", 1.0).unwrap();
        assert!(matches!(build_k(&s, 0), Err(HardyError::Dimension(_))));
        assert!(matches!(
            build_k_with_cap(&s, 11, 10),
            Err(HardyError::Resource {
                requested: 11,
                cap: 10
            })
        ));
        assert!(build_t(&s, 10.0, 1).is_err());
        assert!(build_t(&s, 10.0, 7).unwrap().under_resolved);
        assert!(build_t(&s, 1.5, 16).is_err());
    }

    #[test]
    fn diagonal_is_hat_zero_over_n() {
        let s = catalog_symbol("power", 2.5).unwrap();
        let k = build_k(&s, 40).unwrap();
        for i in 0..40 {
            assert_eq!(k.get(i, i), s.hat_zero() / (i + 1) as f64);
        }
    }

    #[test]
    fn dump_round_trip() {
        let s = catalog_symbol("min", 1.0).unwrap();
        let k = build_k(&s, 5).unwrap();
        let mut buf = Vec::new();
        k.write_dump(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"HKM1");
        assert_eq!(u64::from_le_bytes(buf[4..12].try_into().unwrap()), 5);
        assert_eq!(buf.len(), 12 + 25 * 8);
        let back = read_dump(&buf[..]).unwrap();
        assert_eq!(&back, k.matrix());
    }

    #[test]
    fn pochhammer_log_space_matches_products() {
        assert!((ln_pochhammer(3.0, 4) - (3.0 * 4.0 * 5.0 * 6.0_f64).ln()).abs() < 1e-14);
        assert_eq!(ln_pochhammer(7.0, 0), 0.0);
        let big = pochhammer_entry(6, 100_000, 99_999);
        assert!(big.is_finite() && big > 0.0);
        let k = build_pochhammer(2, 3).unwrap();
        assert_eq!(k.get(2, 1), pochhammer_entry(2, 3, 2));
    }
}
