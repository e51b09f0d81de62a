//! Property tests for structural invariants that should hold across the
//! whole parameter space, not just at the frozen reference points.

use proptest::prelude::*;

use pitlab_core::coeffs::{
    combine_q, make_quadratic_phase, make_rational_phase, parse_alpha,
};
use pitlab_core::eval::{choose_truncation, eval_f};
use pitlab_core::panto::{eval_trig_sum, trig_sum_reduction};
use pitlab_core::{hp, Complex, Float};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Coefficient phases are unimodular: |a_n| n! = 1 exactly, so the
    /// stored Taylor coefficient has modulus 1/n!.
    #[test]
    fn quadratic_coefficients_are_unimodular(
        alpha in 0.0f64..1.0,
        n in 0u64..400,
    ) {
        let a = Float::with_val(192, alpha);
        let seq = make_quadratic_phase(a, 160).unwrap();
        let c = seq.coefficient(n);
        let log_mod = hp::log_abs_f64(&c);
        let expect = -hp::ln_factorial(n);
        prop_assert!((log_mod - expect).abs() < 1e-12 * (1.0 + expect.abs()));
    }

    /// A rational phase repeats with the period of n^2 p mod q.
    #[test]
    fn rational_phase_is_periodic(
        p in 1i64..40,
        q in 1u64..40,
        n in 0u64..100,
    ) {
        prop_assume!(gcd(p.unsigned_abs(), q) == 1);
        let seq = make_rational_phase(p, q, 160).unwrap();
        let period = seq.phase_rule().period.unwrap();
        let a = seq.phase_rule().angle(n, 192);
        let b = seq.phase_rule().angle(n + period, 192);
        let diff = Float::with_val(192, &a - &b).abs().to_f64();
        prop_assert!(diff < 1e-40, "angle drift {diff} at n={n}, period={period}");
    }

    /// The trigonometric-sum reduction reproduces pointwise evaluation.
    #[test]
    fn trig_sum_matches_series(
        p in 1i64..12,
        q in 1u64..12,
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        prop_assume!(gcd(p.unsigned_abs(), q) == 1);
        let prec = 192;
        let seq = make_rational_phase(p, q, prec).unwrap();
        let ts = trig_sum_reduction(p, q, prec).unwrap();
        let z = hp::complex(prec, re, im);
        let direct = eval_f(&seq, &z, 1e-35).unwrap();
        let reduced = eval_trig_sum(&ts, &z);
        let diff = hp::abs_f64(&Complex::with_val(prec, &direct.value - &reduced));
        prop_assert!(diff < 1e-30, "reduction mismatch {diff} for {p}/{q}");
    }

    /// Interleaving two unit-phase factorial families stays in the class:
    /// every coefficient of the combined sequence keeps modulus 1/n!.
    #[test]
    fn interleave_preserves_moduli(
        alpha in 0.0f64..1.0,
        beta in 0.0f64..1.0,
        theta1 in -3.0f64..3.0,
        theta2 in -3.0f64..3.0,
        n in 0u64..200,
    ) {
        let a = parse_alpha(&format!("{alpha:.15}"), 256).unwrap();
        let b = parse_alpha(&format!("{beta:.15}"), 256).unwrap();
        let f1 = make_quadratic_phase(a, 160).unwrap();
        let f2 = make_quadratic_phase(b, 160).unwrap();
        let combined = combine_q(&f1, &f2, theta1, theta2).unwrap();
        let log_mod = hp::log_abs_f64(&combined.coefficient(n));
        let expect = -hp::ln_factorial(n);
        prop_assert!((log_mod - expect).abs() < 1e-12 * (1.0 + expect.abs()));
    }

    /// Requesting a smaller tolerance never shortens the truncation, and
    /// the chosen truncation really meets the tolerance via the majorant.
    #[test]
    fn truncation_is_monotone_in_tolerance(
        r in 0.5f64..40.0,
        k in 1u32..12,
    ) {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 160).unwrap();
        let loose = 10f64.powi(-(k as i32));
        let tight = loose * 1e-6;
        let n_loose = choose_truncation(&seq, r, loose).unwrap();
        let n_tight = choose_truncation(&seq, r, tight).unwrap();
        prop_assert!(n_tight >= n_loose);
    }
}
