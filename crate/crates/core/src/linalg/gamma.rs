//! Log-Gamma in the right half-plane by the Lanczos approximation
//! (g = 607/128, 15 coefficients).

use num_complex::Complex64;

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// ln Γ(z) for Re z ≥ 1/2 (principal branch up to multiples of 2πi).
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut s = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + s.ln()
}

/// ln Γ(z) for Re z > 0.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma needs Re z > 0, got {z}");
    if z.re < 0.5 {
        ln_gamma_lanczos(z + 1.0) - z.ln()
    } else {
        ln_gamma_lanczos(z)
    }
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// ln |Γ(a + it)|² for a > 0.
pub fn ln_gamma_abs2(alpha_half: f64, t: f64) -> f64 {
    2.0 * ln_gamma(Complex64::new(alpha_half, t)).re
}

/// |Γ(a + it)|² for a > 0.
pub fn log_gamma_abs2(alpha_half: f64, t: f64) -> f64 {
    ln_gamma_abs2(alpha_half, t).exp()
}
