//! Small worked cases with closed-form or independently computed values.

use std::f64::consts::{E, PI};

use approx::assert_abs_diff_eq;
use hardy_spectra::factorization::{
    build_gram, dn_report, eta_n, gram_operator_norms, zeta_n, GramMode,
};
use hardy_spectra::linalg::Spectrum;
use hardy_spectra::linalg::{
    eigh, log_gamma_abs2, operator_norm, singular_values, trace_norm, DenseMatrix,
};
use hardy_spectra::operators::{
    build_diagonal_limit, build_k, build_pochhammer, build_t, dirichlet_form_oracle, quadratic_form,
};
use hardy_spectra::symbols::{
    catalog_symbol, hardy_condition, hat_numeric, log_moment, scale_symbol, superlevel_measure,
    Diagnostic,
};
use hardy_spectra::szego::{
    counting_limit, counting_ratio, harmonic, moment_gap, szego_limit, szego_ratio,
    trace_functional, trace_identity, TestFunction,
};
use hardy_spectra::HardyError;

fn sym(name: &str, alpha: f64) -> hardy_spectra::symbols::Symbol {
    catalog_symbol(name, alpha).unwrap()
}

fn hilbert_block() -> DenseMatrix {
    DenseMatrix::from_rows(&[vec![0.5, 1.0 / 3.0], vec![1.0 / 3.0, 0.25]]).unwrap()
}

/// Roots of λ² − (3/4)λ + 1/72.
fn hilbert_block_roots() -> (f64, f64) {
    let disc = (0.5625_f64 - 4.0 / 72.0).sqrt();
    ((1.0 / 36.0) / (0.75 + disc), 0.5 * (0.75 + disc))
}

#[test]
fn symbol_values() {
    assert_abs_diff_eq!(sym("hilbert", 1.0).hat_zero(), 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(
        sym("min", 1.0).hat_closed(0.0).unwrap(),
        1.0,
        epsilon = 1e-15
    );
    // π·sech(π) from an mpmath evaluation of |Γ(1/2 + i)|².
    assert_abs_diff_eq!(
        sym("power", 1.0).eval(1.0),
        0.271014951399418,
        epsilon = 1e-13
    );
    assert_abs_diff_eq!(sym("hilbert", 1.0).hat(0.0), 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(sym("sinc", 1.0).hat(0.0), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sym("min", 1.0).hat(2f64.ln()), 0.5, epsilon = 1e-15);
}

#[test]
fn numeric_transforms() {
    assert_abs_diff_eq!(
        hat_numeric(&sym("hilbert", 1.0), 0.0, 1e-10).unwrap(),
        0.5,
        epsilon = 1e-10
    );
    let want = 1.0 / 1f64.sinh();
    assert_abs_diff_eq!(
        hat_numeric(&sym("log", 1.0), 2.0, 1e-8).unwrap(),
        want,
        epsilon = 1e-8
    );
    assert_abs_diff_eq!(
        hat_numeric(&sym("sinc", 1.0), PI, 1e-8).unwrap(),
        0.0,
        epsilon = 1e-8
    );
    let quad = hat_numeric(&sym("min", 1.0), 2f64.ln(), 1e-9).unwrap();
    assert_abs_diff_eq!(quad, 0.5, epsilon = 1e-8);
}

#[test]
fn log_moments_match_mpmath() {
    let cases = [
        ("hilbert", 2.103764946444708),
        ("min", 33.53410143801052),
        ("sinc", 4.959255594724017),
    ];
    for (name, want) in cases {
        let got = log_moment(&sym(name, 1.0), 3.0).value().unwrap();
        assert!((got - want).abs() <= 1e-6 * want, "{name}: {got} vs {want}");
    }
    let l1 = log_moment(&sym("min", 1.0), 0.0).value().unwrap();
    assert_abs_diff_eq!(l1, 2.0 * PI, epsilon = 1e-7);
}

#[test]
fn superlevel_measures() {
    let lambda = PI / PI.cosh();
    assert_abs_diff_eq!(
        superlevel_measure(&sym("hilbert", 1.0), lambda),
        2.0,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        superlevel_measure(&sym("min", 1.0), 1.0),
        2.0,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        superlevel_measure(&sym("sinc", 1.0), 1.5),
        2.0,
        epsilon = 0.0
    );
    assert_eq!(superlevel_measure(&sym("min", 1.0), 3.0), 0.0);
}

#[test]
fn hardy_conditions() {
    let h = hardy_condition(&sym("hilbert", 1.0)).value().unwrap();
    assert_abs_diff_eq!(h, PI, epsilon = 1e-7);
    let m = hardy_condition(&sym("min", 1.0)).value().unwrap();
    assert_abs_diff_eq!(m, 2.0, epsilon = 1e-7);
    match hardy_condition(&sym("sinc", 1.0)) {
        Diagnostic::Divergent { partial, upto } => assert!(partial > 0.0 && upto > 0.0),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn scaling() {
    let h2 = scale_symbol(&sym("hilbert", 1.0), 2.0).unwrap();
    for u in [-3.0, 0.0, 0.7, 5.0] {
        assert_abs_diff_eq!(h2.hat(u), 1.0 / (2.0 * f64::cosh(u)), epsilon = 1e-15);
    }
    let m = sym("min", 1.0);
    assert_eq!(scale_symbol(&m, 1.0).unwrap(), m);
    assert_abs_diff_eq!(
        scale_symbol(&m, 3.0).unwrap().hat_zero(),
        1.0,
        epsilon = 1e-15
    );
}

#[test]
fn parameter_domains() {
    assert!(matches!(
        catalog_symbol("sinhratio", 0.5),
        Err(HardyError::ParameterDomain { .. })
    ));
    assert!(matches!(
        catalog_symbol("cauchy", 1.0),
        Err(HardyError::UnknownSymbol(_))
    ));
}

#[test]
fn small_kernel_matrices() {
    let h = build_k(&sym("hilbert", 1.0), 2).unwrap();
    for (got, want) in h.matrix().as_slice().iter().zip(hilbert_block().as_slice()) {
        assert_abs_diff_eq!(*got, *want, epsilon = 1e-16);
    }
    let m = build_k(&sym("min", 1.0), 2).unwrap();
    assert_abs_diff_eq!(m.get(0, 1), 1.0 / (2.0 * 2f64.sqrt()), epsilon = 1e-15);
    assert_abs_diff_eq!(m.get(1, 1), 0.5, epsilon = 1e-15);
    assert_eq!(build_k(&sym("sinc", 1.0), 1).unwrap().get(0, 0), 1.0);
    assert!(matches!(
        build_k(&h_sym(), 0),
        Err(HardyError::Dimension(_))
    ));
}

fn h_sym() -> hardy_spectra::symbols::Symbol {
    sym("hilbert", 1.0)
}

#[test]
fn nystrom_small_grid() {
    let t = build_t(&h_sym(), E * E, 3).unwrap();
    assert!(t.under_resolved);
    assert_abs_diff_eq!(t.matrix.get(0, 0), 0.25, epsilon = 1e-15);
    let want = 0.5_f64.sqrt() / (2.0 * 0.5_f64.cosh());
    assert_abs_diff_eq!(t.matrix.get(0, 1), want, epsilon = 1e-15);
    let m = build_t(&sym("min", 1.0), E * E, 3).unwrap();
    assert_abs_diff_eq!(m.matrix.get(0, 2), 0.5 * (-2.0_f64).exp(), epsilon = 1e-15);
    for s in [h_sym(), sym("sinc", 1.0), sym("power", 2.0)] {
        let t = build_t(&s, 50.0, 40).unwrap();
        assert_abs_diff_eq!(t.matrix.trace(), s.hat_zero() * 50f64.ln(), epsilon = 1e-13);
    }
    assert!(build_t(&h_sym(), 1.5, 16).is_err());
}

#[test]
fn diagonal_limit() {
    let d = build_diagonal_limit(&sym("min", 1.0), 3).unwrap();
    assert_eq!(
        d.matrix().as_slice(),
        &[1.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0 / 3.0]
    );
    assert_eq!(d.spectrum().unwrap().values(), &[1.0 / 3.0, 0.5, 1.0]);
    let h = build_diagonal_limit(&h_sym(), 2).unwrap();
    assert_eq!(h.matrix().as_slice(), &[0.5, 0.0, 0.0, 0.25]);
}

#[test]
fn pochhammer_small() {
    assert_abs_diff_eq!(
        build_pochhammer(2, 1).unwrap().get(0, 0),
        0.5,
        epsilon = 1e-15
    );
    let b = build_pochhammer(1, 2).unwrap();
    for (got, want) in b.matrix().as_slice().iter().zip([1.0, 0.5, 0.5, 1.0 / 3.0]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
    }
}

#[test]
fn quadratic_forms() {
    let k = build_k(&h_sym(), 2).unwrap();
    assert_abs_diff_eq!(
        quadratic_form(&k, &[1.0, 0.0]).unwrap(),
        0.5,
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(
        quadratic_form(&k, &[1.0, 1.0]).unwrap(),
        0.5 + 2.0 / 3.0 + 0.25,
        epsilon = 1e-15
    );
    assert!(quadratic_form(&k, &[1.0]).is_err());
    assert_abs_diff_eq!(
        dirichlet_form_oracle(&h_sym(), &[1.0, 0.0], 1e-8).unwrap(),
        0.5,
        epsilon = 1e-8
    );
    let m = dirichlet_form_oracle(&sym("min", 1.0), &[0.0, 1.0], 1e-8).unwrap();
    assert_abs_diff_eq!(m, 0.5, epsilon = 1e-8);
    let sinc = sym("sinc", 1.0);
    let exact = quadratic_form(&build_k(&sinc, 2).unwrap(), &[1.0, 1.0]).unwrap();
    assert_abs_diff_eq!(
        dirichlet_form_oracle(&sinc, &[1.0, 1.0], 1e-6).unwrap(),
        exact,
        epsilon = 1e-6
    );
}

#[test]
fn dense_linear_algebra() {
    let (lo, hi) = hilbert_block_roots();
    let s = eigh(&hilbert_block()).unwrap();
    assert_abs_diff_eq!(s.values()[0], lo, epsilon = 1e-12);
    assert_abs_diff_eq!(s.values()[1], hi, epsilon = 1e-12);
    assert_eq!(eigh(&DenseMatrix::identity(5)).unwrap().values(), &[1.0; 5]);
    let sv = singular_values(&DenseMatrix::from_diagonal(&[3.0, -4.0])).unwrap();
    assert_eq!(sv, vec![4.0, 3.0]);
    let sv = singular_values(&hilbert_block()).unwrap();
    assert_abs_diff_eq!(sv[0], hi, epsilon = 1e-12);
    assert_abs_diff_eq!(sv[1], lo, epsilon = 1e-12);
    assert_abs_diff_eq!(
        trace_norm(&DenseMatrix::from_diagonal(&[1.0, -2.0, 3.0])).unwrap(),
        6.0,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(
        operator_norm(&DenseMatrix::identity(7)).unwrap(),
        1.0,
        epsilon = 1e-14
    );
    assert_abs_diff_eq!(
        operator_norm(&hilbert_block()).unwrap(),
        hi,
        epsilon = 1e-12
    );
    let k = build_k(&sym("min", 1.0), 40).unwrap();
    assert_abs_diff_eq!(trace_norm(k.matrix()).unwrap(), k.trace(), epsilon = 1e-10);
}

#[test]
fn gamma_values() {
    assert_abs_diff_eq!(log_gamma_abs2(0.5, 0.0), PI, epsilon = 1e-13);
    // mpmath: |Γ(1/2 + i)|² and |Γ(1 + i)|².
    assert_abs_diff_eq!(log_gamma_abs2(0.5, 1.0), 0.271014951399418, epsilon = 1e-13);
    assert_abs_diff_eq!(log_gamma_abs2(1.0, 1.0), 0.272029054982133, epsilon = 1e-13);
}

#[test]
fn trace_functionals() {
    let spec = Spectrum::from_values(vec![1.0, 2.0, 3.0]);
    assert_abs_diff_eq!(
        trace_functional(&spec, &TestFunction::square()),
        14.0,
        epsilon = 1e-14
    );
    let hb = eigh(&hilbert_block()).unwrap();
    assert_abs_diff_eq!(
        trace_functional(&hb, &TestFunction::identity()),
        0.75,
        epsilon = 1e-15
    );
    let zero = TestFunction::table(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
    assert_eq!(trace_functional(&hb, &zero), 0.0);
}

#[test]
fn szego_ratios_and_limits() {
    let g = TestFunction::identity();
    let want = harmonic(1024) / (2.0 * 1024f64.ln());
    assert_abs_diff_eq!(
        szego_ratio(&h_sym(), &g, 1024).unwrap(),
        want,
        epsilon = 1e-10
    );
    assert_abs_diff_eq!(
        szego_ratio(&h_sym(), &g, 2).unwrap(),
        0.75 / 2f64.ln(),
        epsilon = 1e-14
    );
    let sinc = szego_ratio(&sym("sinc", 1.0), &g, 100).unwrap();
    assert_abs_diff_eq!(sinc, harmonic(100) / 100f64.ln(), epsilon = 1e-12);
    let sq = TestFunction::square();
    assert_abs_diff_eq!(
        szego_limit(&h_sym(), &sq, 1e-12).unwrap(),
        1.0,
        epsilon = 1e-10
    );
    assert_abs_diff_eq!(
        szego_limit(&sym("min", 1.0), &sq, 1e-12).unwrap(),
        1.0,
        epsilon = 1e-10
    );
    for s in [sym("power", 2.0), sym("log", 1.0), sym("sinhratio", 0.25)] {
        assert_abs_diff_eq!(
            szego_limit(&s, &g, 1e-12).unwrap(),
            s.hat_zero(),
            epsilon = 1e-9
        );
    }
}

#[test]
fn counting() {
    let hb = eigh(&hilbert_block()).unwrap();
    assert_eq!(counting_ratio(&hb, 1.0, 2).unwrap(), 0.0);
    assert_abs_diff_eq!(
        counting_ratio(&hb, 0.5, 2).unwrap(),
        1.0 / 2f64.ln(),
        epsilon = 1e-15
    );
    let d = Spectrum::from_values(vec![1.0, 0.5, 1.0 / 3.0]);
    assert_abs_diff_eq!(
        counting_ratio(&d, 0.4, 3).unwrap(),
        2.0 / 3f64.ln(),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(
        counting_limit(&sym("sinc", 1.0), 1.5).unwrap().value,
        1.0 / PI,
        epsilon = 1e-15
    );
    let lim = counting_limit(&h_sym(), PI / PI.cosh()).unwrap();
    assert_abs_diff_eq!(lim.value, 1.0 / PI, epsilon = 1e-12);
    assert_eq!(counting_limit(&sym("min", 1.0), 2.5).unwrap().value, 0.0);
    assert!(counting_limit(&sym("sinc", 1.0), PI).unwrap().ambiguous);
}

#[test]
fn trace_identities_and_gaps() {
    let (a, b) = trace_identity(&h_sym(), 3).unwrap();
    assert_abs_diff_eq!(a, 11.0 / 12.0, epsilon = 1e-15);
    assert_abs_diff_eq!(b, 11.0 / 12.0, epsilon = 1e-15);
    assert_eq!(trace_identity(&sym("sinc", 1.0), 1).unwrap(), (1.0, 1.0));
    let (a, b) = trace_identity(&sym("min", 1.0), 10).unwrap();
    assert_abs_diff_eq!(a, 7381.0 / 2520.0, epsilon = 1e-14);
    assert_abs_diff_eq!(b, 7381.0 / 2520.0, epsilon = 1e-14);
    assert_abs_diff_eq!(
        moment_gap(&h_sym(), 1, 2, 8).unwrap(),
        (1.5 - 2f64.ln()) / 2.0,
        epsilon = 1e-15
    );
}

#[test]
fn min_kernel_square_gap_is_bounded() {
    let m = sym("min", 1.0);
    let gaps: Vec<f64> = [256, 1024]
        .iter()
        .map(|&n| moment_gap(&m, 2, n, 1024).unwrap().abs())
        .collect();
    assert!(gaps[1] <= 1.5 * gaps[0], "{gaps:?}");
}

#[test]
fn partial_zeta_and_eta() {
    assert_abs_diff_eq!(zeta_n(0.0, 3).re, 11.0 / 6.0, epsilon = 1e-15);
    let z = zeta_n(PI / 2f64.ln(), 2);
    assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
    assert_eq!(zeta_n(3.7, 1).re, 1.0);
    assert_abs_diff_eq!(eta_n(0.0, 2).re, 2f64.ln(), epsilon = 1e-15);
    let e = eta_n(PI / 2f64.ln(), 2);
    assert_abs_diff_eq!(e.re, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(e.im, -2.0 * 2f64.ln() / PI, epsilon = 1e-15);
}

#[test]
fn gram_small_cases() {
    let g = build_gram(&h_sym(), 1, GramMode::Zeta, None, 256).unwrap();
    assert_abs_diff_eq!(g.matrix.trace(), 0.5, epsilon = 1e-6);
    let spec = eigh(&g.matrix).unwrap();
    assert!(spec.values()[spec.len() - 2].abs() < 1e-10, "rank one");
    let g = build_gram(&sym("min", 1.0), 2, GramMode::Zeta, None, 256).unwrap();
    assert_abs_diff_eq!(g.matrix.trace(), 1.5, epsilon = 1e-6);
    let r = dn_report(&h_sym(), 1, None, 256).unwrap();
    assert_abs_diff_eq!(r.dn_trace_norm, 0.5, epsilon = 1e-5);
    let r = dn_report(&h_sym(), 2, None, 256).unwrap();
    assert!(r.dn_trace_norm >= 0.5 * (1.5 - 2f64.ln()) - 1e-8);
    assert_eq!(
        gram_operator_norms(&sym("min", 1.0), 1, None, 256)
            .unwrap()
            .1,
        0.0
    );
    let short = build_gram(&h_sym(), 4, GramMode::Eta, Some(2.0), 256);
    assert!(matches!(short, Err(HardyError::DomainTruncation { .. })));
}
