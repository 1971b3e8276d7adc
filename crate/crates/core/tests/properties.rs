//! Structural invariants checked on generated inputs.

use std::f64::consts::PI;

use hardy_spectra::linalg::{eigh, operator_norm, singular_values, DenseMatrix};
use hardy_spectra::operators::{build_k, build_pochhammer, kernel_entry, quadratic_form};
use hardy_spectra::symbols::{catalog_entry, scale_symbol, superlevel_measure, Family, Symbol};
use hardy_spectra::szego::counting_limit;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn symbol() -> impl Strategy<Value = Symbol> {
    (family(), 0.0..1.0_f64).prop_map(|(f, x)| {
        let alpha = match f {
            Family::Hilbert | Family::Min => 0.25 + 3.0 * x,
            Family::Power => 0.5 + 5.0 * x,
            Family::SinhRatio => 0.01 + 0.48 * x,
            Family::Log | Family::Sinc => 1.0,
        };
        Symbol::new(f, alpha).unwrap()
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-1.0..1.0_f64, n * n)
        .prop_map(move |v| DenseMatrix::symmetric_from_fn(n, |i, j| v[i * n + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_preserve_trace_and_frobenius(m in (1usize..40).prop_flat_map(symmetric)) {
        let s = eigh(&m).unwrap();
        let scale = m.frobenius_sq().sqrt().max(1.0);
        prop_assert!((s.sum() - m.trace()).abs() <= 1e-12 * m.rows() as f64 * scale);
        prop_assert!((s.power_sum(2) - m.frobenius_sq()).abs() <= 1e-12 * m.rows() as f64 * scale * scale);
        prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn weyl_perturbation_bound(
        (a, e) in (2usize..30).prop_flat_map(|n| (symmetric(n), symmetric(n))),
        eps in 1e-6..1e-1_f64,
    ) {
        let e = e.scaled(eps);
        let sa = eigh(&a).unwrap();
        let sb = eigh(&a.add(&e).unwrap()).unwrap();
        let bound = operator_norm(&e).unwrap() + 1e-12 * a.rows() as f64;
        for (x, y) in sa.values().iter().zip(sb.values()) {
            prop_assert!((x - y).abs() <= bound);
        }
    }

    #[test]
    fn singular_values_invariant_under_transposition(
        (r, c, v) in (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(-1.0..1.0_f64, r * c))
        })
    ) {
        let m = DenseMatrix::from_row_major(r, c, v).unwrap();
        let a = singular_values(&m).unwrap();
        let b = singular_values(&m.transpose()).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * a[0].max(1.0));
        }
    }

    #[test]
    fn symbols_are_even_and_bounded(s in symbol(), t in -30.0..30.0_f64) {
        prop_assert_eq!(s.eval(t), s.eval(-t));
        prop_assert_eq!(s.hat(t), s.hat(-t));
        prop_assert!(s.eval(t) >= 0.0 && s.eval(t) <= s.sup_norm() * (1.0 + 1e-14));
        prop_assert!(s.hat(t).abs() <= s.hat_zero() * (1.0 + 1e-14));
    }

    #[test]
    fn scaling_dilates_the_transform(s in symbol(), c in 0.2..8.0_f64, u in -5.0..5.0_f64, t in -5.0..5.0_f64) {
        let sc = scale_symbol(&s, c).unwrap();
        prop_assert!((sc.hat(u) - s.hat(c * u)).abs() <= 1e-14 * s.hat_zero().max(1.0));
        prop_assert!((sc.eval(t) - s.eval(t / c) / c).abs() <= 1e-13 * s.sup_norm().max(1.0));
    }

    #[test]
    fn superlevel_measure_scales(s in symbol(), c in 0.5..4.0_f64, frac in 0.05..0.95_f64) {
        let sc = scale_symbol(&s, c).unwrap();
        let lambda = frac * sc.sup_norm();
        let want = c * superlevel_measure(&s, c * lambda);
        prop_assert!((superlevel_measure(&sc, lambda) - want).abs() <= 1e-8 * want.max(1.0));
    }

    #[test]
    fn kernels_are_homogeneous_and_match_the_catalog(
        s in symbol(),
        x in 0.5..50.0_f64,
        y in 0.5..50.0_f64,
        a in 0.1..10.0_f64,
    ) {
        let f = catalog_entry(s.family()).kernel_fn;
        let k = s.kernel(x, y);
        let scale = s.hat_zero() / (x * y).sqrt();
        prop_assert!((f(s.alpha(), x, y) - k).abs() <= 1e-12 * scale);
        prop_assert!((s.kernel(a * x, a * y) - k / a).abs() <= 1e-12 * scale / a);
        prop_assert!((s.kernel(x, y) - s.kernel(y, x)).abs() <= 1e-14 * scale);
    }

    #[test]
    fn kernel_matrices_are_symmetric_psd_and_nested(s in symbol(), n in 1usize..48) {
        let k = build_k(&s, n).unwrap();
        prop_assert_eq!(k.matrix().symmetry_defect(), 0.0);
        let spec = k.spectrum().unwrap();
        prop_assert!(spec.min() >= -1e-12 * spec.norm());
        let bigger = build_k(&s, n + 1).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(k.get(i, j), bigger.get(i, j));
            }
            prop_assert_eq!(k.get(i, i), kernel_entry(&s, i + 1, i + 1));
        }
        // Cauchy interlacing for the bordered matrix.
        let sb = bigger.spectrum().unwrap();
        prop_assert!(sb.max() >= spec.max() - 1e-12);
        prop_assert!(sb.min() <= spec.min() + 1e-12);
    }

    #[test]
    fn pointwise_order_gives_form_order(v in prop::collection::vec(-1.0..1.0_f64, 1..24)) {
        let n = v.len();
        let pairs = [
            (Family::Log, Family::Hilbert, PI),
            (Family::Hilbert, Family::Min, PI / 2.0),
            (Family::Sinc, Family::Hilbert, 11.6),
        ];
        for (small, large, c) in pairs {
            let k1 = build_k(&Symbol::new(small, 1.0).unwrap(), n).unwrap();
            let k2 = build_k(&Symbol::new(large, 1.0).unwrap(), n).unwrap();
            let q1 = quadratic_form(&k1, &v).unwrap();
            let q2 = quadratic_form(&k2, &v).unwrap();
            prop_assert!(q1 <= c * q2 + 1e-12, "{small} vs {large}: {q1} > {c}*{q2}");
        }
    }
}

#[test]
fn counting_limit_scales_with_the_symbol() {
    for f in Family::ALL {
        let s = Symbol::new(f, f.default_alpha()).unwrap();
        let s2 = scale_symbol(&s, 2.0).unwrap();
        for frac in [0.1, 0.3, 0.6, 0.9] {
            let lambda = frac * s2.sup_norm();
            let a = counting_limit(&s2, lambda).unwrap().value;
            let b = 2.0 * counting_limit(&s, 2.0 * lambda).unwrap().value;
            assert!((a - b).abs() <= 1e-8 * b.max(1.0), "{f}: {a} vs {b}");
        }
    }
}

#[test]
fn pochhammer_diagonal_exceeds_kernel_diagonal_by_a_summable_amount() {
    let p = Symbol::new(Family::Power, 2.0).unwrap();
    let b = build_pochhammer(2, 200).unwrap();
    let k = build_k(&p, 200).unwrap();
    for n in 1..=200 {
        let diff = b.get(n - 1, n - 1) - k.get(n - 1, n - 1);
        let want = 1.0 / (4.0 * n as f64 * (2.0 * n as f64 - 1.0));
        assert!((diff - want).abs() <= 1e-15, "n={n}: {diff} vs {want}");
    }
}
