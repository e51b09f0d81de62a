//! The laboratory's acceptance suite: twelve property-based checks run at
//! desk scale with explicit tolerances. Each check returns a pass flag and a
//! human-readable detail line; callers decide how to render and whether a
//! failure is fatal.
//!
//! Check 9's r^{-2} decay clause is currently red: the measured quantity
//! r^2 |f(r e^{i phi})| grows over the probed range instead of staying
//! bounded by the constant fit at r = 5. The check is implemented exactly as
//! stated and reports the observed growth; it is not weakened to pass.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float};

use crate::coeffs::{
    combine_q, make_hardy, make_psi_phase, make_quadratic_phase, make_rational_phase,
    make_theorem5, CoefficientSequence,
};
use crate::error::Result;
use crate::eval;
use crate::growth::{self, HRef};
use crate::hp;
use crate::panto;
use crate::zeros::{self, SectorBox};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Reduced radii and point counts; seconds instead of minutes.
    Quick,
    /// The full desk-scale parameters.
    Full,
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<26} {}",
            if self.pass { "pass" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn outcome(id: u32, name: &'static str, pass: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome { id, name, pass, detail }
}

fn fail_err(id: u32, name: &'static str, e: crate::Error) -> CriterionOutcome {
    outcome(id, name, false, format!("error: {e}"))
}

fn sqrt2_seq(precision: u32) -> CoefficientSequence {
    make_quadratic_phase(hp::alpha_sqrt2(precision + 160), precision).expect("sqrt2 family")
}

fn random_disc_points(seed: u64, n: usize, r_max: f64, prec: u32) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = r_max * rng.gen::<f64>().sqrt();
            let th = std::f64::consts::PI * (2.0 * rng.gen::<f64>() - 1.0);
            hp::point_polar(prec, &Float::with_val(prec, r), &Float::with_val(prec, th))
        })
        .collect()
}

// -------------------------------------------------------------------------
// 1. pantograph identity
// -------------------------------------------------------------------------

pub fn check_pantograph(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 1;
    const NAME: &str = "pantograph-identity";
    let (n_pts, r_max) = match scale {
        Scale::Quick => (30, 10.0),
        Scale::Full => (200, 30.0),
    };
    let seq = sqrt2_seq(160);
    let points = random_disc_points(11, n_pts, r_max, 224);
    let results: Result<Vec<(f64, f64)>> = points
        .par_iter()
        .map(|z| {
            let r = hp::abs_f64(z);
            let eps = (seq.log_majorant_sum(r).min(700.0)).exp() * 1e-30;
            let chk = panto::pantograph_residual(&seq, z, eps)?;
            Ok((chk.residual, chk.bound))
        })
        .collect();
    match results {
        Ok(rb) => {
            let worst = rb
                .iter()
                .map(|(r, b)| r / b.max(f64::MIN_POSITIVE))
                .fold(0.0f64, f64::max);
            outcome(
                ID,
                NAME,
                rb.iter().all(|(r, b)| r <= b),
                format!("{n_pts} points |z|<={r_max}, worst residual/bound = {worst:.3e}"),
            )
        }
        Err(e) => fail_err(ID, NAME, e),
    }
}

// -------------------------------------------------------------------------
// 2. rational-phase trigonometric sums
// -------------------------------------------------------------------------

pub fn check_trig_sums(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 2;
    const NAME: &str = "rational-trig-sums";
    let (q_max, n_pts) = match scale {
        Scale::Quick => (8u64, 12),
        Scale::Full => (24u64, 100),
    };
    let mut pairs = Vec::new();
    for q in 1..=q_max {
        for p in 1..=q {
            if num_gcd(p, q) == 1 {
                pairs.push((p as i64, q));
            }
        }
    }
    let run = |(p, q): (i64, u64)| -> Result<f64> {
        let prec = 192u32;
        let seq = make_rational_phase(p, q, prec)?;
        let ts = panto::trig_sum_reduction(p, q, prec)?;
        let points = random_disc_points(1000 + 31 * p as u64 + q, n_pts, 15.0, prec);
        let mut worst = 0.0f64;
        for z in &points {
            let r = hp::abs_f64(z);
            let f = eval::eval_f(&seq, z, 1e-30)?;
            let t = panto::eval_trig_sum(&ts, z);
            let diff = hp::abs_f64(&Complex::with_val(prec, &f.value - &t));
            let trig_round =
                ts.terms.len() as f64 * (2.0f64).powi(2 - prec as i32) * r.exp();
            let bound = f.total_bound() + trig_round;
            if diff > bound {
                return Err(crate::Error::NonConvergence(format!(
                    "trig-sum mismatch at p/q = {p}/{q}: diff {diff} > bound {bound}"
                )));
            }
            worst = worst.max(diff / bound);
        }
        Ok(worst)
    };
    let results: Result<Vec<f64>> = pairs.par_iter().map(|&pq| run(pq)).collect();
    match results {
        Ok(ws) => {
            // special cases: q = 1 is e^z and q = 2 is e^{-z}
            let exact = (|| -> Result<bool> {
                let prec = 192u32;
                let z = hp::complex(prec, 1.25, -0.5);
                let e1 = panto::eval_trig_sum(&panto::trig_sum_reduction(1, 1, prec)?, &z);
                let e2 = panto::eval_trig_sum(&panto::trig_sum_reduction(1, 2, prec)?, &z);
                let expz = Complex::with_val(prec, &z).exp();
                let expmz = (-Complex::with_val(prec, &z)).exp();
                let d1 = hp::abs_f64(&Complex::with_val(prec, e1 - expz));
                let d2 = hp::abs_f64(&Complex::with_val(prec, e2 - expmz));
                Ok(d1 < 1e-40 && d2 < 1e-40)
            })()
            .unwrap_or(false);
            let worst = ws.iter().cloned().fold(0.0, f64::max);
            outcome(
                ID,
                NAME,
                exact,
                format!(
                    "{} (p,q) pairs, {n_pts} points each, worst diff/bound = {worst:.3e}, q=1/q=2 exact: {exact}",
                    pairs.len()
                ),
            )
        }
        Err(e) => fail_err(ID, NAME, e),
    }
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { num_gcd(b, a % b) }
}

// -------------------------------------------------------------------------
// 3-5. zero statistics (shared zero set)
// -------------------------------------------------------------------------

pub struct ZeroChecks {
    pub count_growth: CriterionOutcome,
    pub angular: CriterionOutcome,
    pub reciprocal: CriterionOutcome,
}

pub fn check_zero_statistics(scale: Scale) -> ZeroChecks {
    let radii: Vec<f64> = match scale {
        Scale::Quick => vec![8.0, 12.0, 15.0],
        Scale::Full => vec![15.0, 22.0, 30.0],
    };
    let r_big = *radii.last().unwrap();
    let seq = sqrt2_seq(160);
    const REL: f64 = 1e-30;

    let count_growth = (|| -> Result<CriterionOutcome> {
        let counts: Result<Vec<i64>> =
            radii.iter().map(|&r| zeros::count_zeros(&seq, r, REL)).collect();
        let counts = counts?;
        let n_big = counts[counts.len() - 1];
        let within = (n_big as f64 - r_big).abs() <= 6.0;
        let devs: Vec<f64> = counts
            .iter()
            .zip(&radii)
            .map(|(&n, &r)| (n as f64 / r - 1.0).abs())
            .collect();
        // non-increasing deviation, with a one-zero tolerance at each radius
        let mono = devs.windows(2).zip(radii.windows(2)).all(|(d, r)| d[1] <= d[0] + 1.0 / r[1]);
        Ok(outcome(
            3,
            "zero-count-growth",
            within && mono,
            format!("counts {counts:?} at radii {radii:?}, deviations {devs:.3?}"),
        ))
    })()
    .unwrap_or_else(|e| fail_err(3, "zero-count-growth", e));

    let zs = zeros::locate_zeros(&seq, &SectorBox::disc(r_big), REL);
    let (angular, reciprocal) = match zs {
        Ok(zs) if zs.completeness_certificate => {
            let ang = match zeros::angular_density(&zs, r_big, 4) {
                Ok(d) => {
                    let expected = r_big / 4.0;
                    let ok = d.sectors.iter().all(|&(c, _)| (c as f64 - expected).abs() <= 5.0);
                    outcome(
                        4,
                        "angular-uniformity",
                        ok,
                        format!(
                            "quadrant counts {:?}, expected {expected} +/- 5",
                            d.sectors.iter().map(|s| s.0).collect::<Vec<_>>()
                        ),
                    )
                }
                Err(e) => fail_err(4, "angular-uniformity", e),
            };
            let rec = (|| -> Result<CriterionOutcome> {
                // q = e^{2 pi i sqrt2}
                let prec = 256u32;
                let q = hp::to_c64(&hp::unit_from_frac(&hp::alpha_sqrt2(prec)));
                let mut devs = Vec::new();
                for &r in &radii {
                    let s = zeros::reciprocal_sum(&zs, r)?;
                    devs.push((s + q).norm());
                }
                let last = *devs.last().unwrap();
                let ok = last <= 0.3 && devs.last() <= devs.first();
                Ok(outcome(
                    5,
                    "reciprocal-zero-sum",
                    ok,
                    format!("|sum + q| over radii {radii:?} = {devs:.4?}"),
                ))
            })()
            .unwrap_or_else(|e| fail_err(5, "reciprocal-zero-sum", e));
            (ang, rec)
        }
        Ok(zs) => {
            let msg = format!(
                "zero set incomplete: {} zeros, {} unresolved clusters",
                zs.zeros.len(),
                zs.unresolved_clusters.len()
            );
            (
                outcome(4, "angular-uniformity", false, msg.clone()),
                outcome(5, "reciprocal-zero-sum", false, msg),
            )
        }
        Err(e) => {
            let msg = format!("error: {e}");
            (
                outcome(4, "angular-uniformity", false, msg.clone()),
                outcome(5, "reciprocal-zero-sum", false, msg),
            )
        }
    };
    ZeroChecks { count_growth, angular, reciprocal }
}

// -------------------------------------------------------------------------
// 6. indicator constancy + nonnegativity probe
// -------------------------------------------------------------------------

pub fn check_indicator(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 6;
    const NAME: &str = "indicator-constancy";
    let n_theta = match scale {
        Scale::Quick => 64,
        Scale::Full => 128,
    };
    let window = (20.0, 40.0);
    (|| -> Result<CriterionOutcome> {
        let seq = sqrt2_seq(160);
        let prof = growth::indicator_estimate(&seq, n_theta, window, 1.0)?;
        let max_dev = prof
            .h_est
            .iter()
            .zip(&prof.indeterminate)
            .filter(|(_, &ind)| !ind)
            .map(|(&h, _)| (h - 1.0).abs())
            .fold(0.0f64, f64::max);
        let constancy_ok = max_dev <= 0.15;

        // nonnegativity probe over the shipped non-exponential families
        let golden = make_quadratic_phase(hp::alpha_golden(320), 160)?;
        let probes: Vec<(&str, CoefficientSequence)> = vec![
            ("hardy", make_hardy(Complex64::new(0.0, 1.0), 1.0, 160)?),
            // Slow rate: the estimator converges to the true (nonnegative)
            // indicator only like the slowest phase frequency, so the probe
            // uses a fast-decaying psi to stay within the window's reach.
            ("psi-exp", make_psi_phase(&[1.0], &[4.0], 160)?),
            ("interleave", combine_q(&sqrt2_seq(160), &golden, 0.0, 0.0)?),
        ];
        let mut mins = Vec::new();
        let mut probe_ok = true;
        for (label, p) in &probes {
            let prof = growth::indicator_estimate(p, 64, window, 1.0)?;
            let m = prof.min_determinate().unwrap_or(f64::NAN);
            probe_ok &= m >= -0.05;
            mins.push(format!("{label}: {m:.4}"));
        }
        Ok(outcome(
            ID,
            NAME,
            constancy_ok && probe_ok,
            format!("max |h-1| = {max_dev:.4} ({n_theta} angles); probe minima {}", mins.join(", ")),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 7. maximum-modulus band
// -------------------------------------------------------------------------

pub fn check_max_modulus_band(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 7;
    const NAME: &str = "max-modulus-band";
    let radii: Vec<f64> = match scale {
        Scale::Quick => vec![10.0, 20.0],
        Scale::Full => vec![10.0, 20.0, 40.0],
    };
    (|| -> Result<CriterionOutcome> {
        let seq = sqrt2_seq(160);
        let mut gaps = Vec::new();
        let mut ok = true;
        for &r in &radii {
            let m = growth::max_modulus(&seq, r)?;
            let gap = r - m.log_max;
            ok &= gap >= -1e-9 && gap <= 0.35 * r.ln() + 1.0;
            gaps.push(format!("r={r}: {gap:.4}"));
        }
        Ok(outcome(ID, NAME, ok, format!("r - log M(r): {}", gaps.join(", "))))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 8. ratio dichotomy
// -------------------------------------------------------------------------

pub fn check_ratio_dichotomy(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 8;
    const NAME: &str = "ratio-dichotomy";
    let radii: Vec<f64> = match scale {
        Scale::Quick => vec![10.0, 20.0, 40.0],
        Scale::Full => vec![10.0, 20.0, 40.0, 80.0],
    };
    (|| -> Result<CriterionOutcome> {
        let rational = make_rational_phase(1, 3, 160)?;
        let rs = growth::levy_ratio(&rational, &radii)?;
        let increasing = rs.ratio.windows(2).all(|w| w[1] > w[0]);
        let span = rs.ratio.last().unwrap() / rs.ratio.first().unwrap();
        let span_need = match scale {
            Scale::Quick => 1.3,
            Scale::Full => 1.5,
        };
        let seq = sqrt2_seq(160);
        let irr = growth::levy_ratio(&seq, &radii)?;
        let bounded = irr.ratio.iter().all(|&x| x <= 10.0);
        let (_, _, rel) = growth::parseval_quadrature_check(&seq, 10.0, 2048)?;
        let ok = increasing && span >= span_need && bounded && rel <= 1e-8;
        Ok(outcome(
            ID,
            NAME,
            ok,
            format!(
                "rational ratios {:.3?} (span {span:.3}), irrational max {:.3}, quadrature rel {rel:.2e}",
                rs.ratio,
                irr.ratio.iter().cloned().fold(0.0f64, f64::max)
            ),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 9. decay sector (known red on the decay clause)
// -------------------------------------------------------------------------

pub fn check_decay_sector(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 9;
    const NAME: &str = "decay-sector";
    let r_hi = match scale {
        Scale::Quick => 15.0,
        Scale::Full => 30.0,
    };
    (|| -> Result<CriterionOutcome> {
        let seq = make_psi_phase(&[1.0], &[1.0], 160)?;
        let phis = [std::f64::consts::PI, std::f64::consts::PI - 1.3, std::f64::consts::PI + 1.3];
        let sample = |r: f64, phi: f64| -> Result<f64> {
            let prec = 224u32;
            let z = hp::point_polar(prec, &Float::with_val(prec, r), &Float::with_val(prec, phi));
            let eps = (-3.0 * r).max(-600.0).exp();
            let out = eval::eval_f(&seq, &z, eps)?;
            Ok(hp::abs_f64(&out.value) + out.total_bound())
        };
        // constant fit at r = 5
        let mut c_fit = 0.0f64;
        for &phi in &phis {
            c_fit = c_fit.max(25.0 * sample(5.0, phi)?);
        }
        let mut worst = 0.0f64;
        let mut r = 5.0;
        while r <= r_hi + 1e-9 {
            for &phi in &phis {
                worst = worst.max(r * r * sample(r, phi)? / c_fit);
            }
            r += 1.25;
        }
        let decay_ok = worst <= 1.0;

        // line-integral cross-check at 10 sample points
        let mut mb_worst = 0.0f64;
        for k in 0..10 {
            let r = 1.0 + 0.4 * k as f64;
            let phi = -1.2 + 2.4 * k as f64 / 9.0;
            let z = Complex64::from_polar(r, phi);
            let v = panto::mellin_barnes_eval(&seq, z, 0.5, 1e-7)?;
            let prec = 192u32;
            let zneg = hp::complex(prec, -z.re, -z.im);
            let s = eval::eval_f(&seq, &zneg, 1e-12)?;
            mb_worst = mb_worst.max((v - hp::to_c64(&s.value)).norm());
        }
        let mb_ok = mb_worst <= 1e-5;
        Ok(outcome(
            ID,
            NAME,
            decay_ok && mb_ok,
            format!(
                "max r^2|f| / fit over [5,{r_hi}] = {worst:.3} (bounded iff <= 1); line-integral max diff {mb_worst:.2e}"
            ),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 10. composition machinery
// -------------------------------------------------------------------------

pub fn check_composition(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 10;
    const NAME: &str = "composition-machinery";
    let (n_est, n_funk) = match scale {
        Scale::Quick => (10, 4),
        Scale::Full => (50, 10),
    };
    (|| -> Result<CriterionOutcome> {
        let seq = sqrt2_seq(160);

        // contour vs direct series, |z| <= 5
        let pts = random_disc_points(77, 6, 5.0, 192);
        let mut comp_worst = 0.0f64;
        for z in &pts {
            let za = hp::abs_f64(z);
            if za < 0.5 {
                continue;
            }
            let direct = panto::hadamard_direct(&seq, 0.5, z, 1e-20)?;
            let contour = panto::hadamard_compose(
                &seq,
                0.5,
                z,
                &panto::ContourSpec::around(za, 1.5),
                1e-12,
            )?;
            let d = hp::abs_f64(&Complex::with_val(192, &direct.value - &contour.value));
            comp_worst = comp_worst.max(d);
        }
        let comp_ok = comp_worst <= 1e-10;

        // kernel-bound inequality at sampled (z, r) pairs
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut est_ok = true;
        for _ in 0..n_est {
            let r = 8.0 * rng.gen::<f64>().sqrt() + 0.2;
            let th = std::f64::consts::PI * (2.0 * rng.gen::<f64>() - 1.0);
            let rp = 0.05 + 0.85 * rng.gen::<f64>();
            let z = hp::point_polar(192, &Float::with_val(192, r), &Float::with_val(192, th));
            let rep = panto::hadamard_estimate_check(&seq, 0.5, &z, rp, 1e-18)?;
            est_ok &= rep.pass;
        }

        // order-rho functional equation, direct path, |z| <= 3
        let t5 = make_theorem5(0.5, hp::alpha_sqrt2(320), 160)?;
        let fpts = random_disc_points(99, n_funk, 3.0, 192);
        let mut funk_worst = 0.0f64;
        for z in &fpts {
            let rep = panto::funk2_residual(&t5, z, 1e-25)?;
            funk_worst = funk_worst.max(rep.residual_direct);
        }
        let funk_ok = funk_worst <= 1e-15;
        Ok(outcome(
            ID,
            NAME,
            comp_ok && est_ok && funk_ok,
            format!(
                "contour/direct max diff {comp_worst:.2e}, kernel bound {}/{n_est} ok, functional-equation max residual {funk_worst:.2e}",
                if est_ok { n_est } else { 0 }
            ),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 11. order-two growth constant
// -------------------------------------------------------------------------

pub fn check_order_two_growth(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 11;
    const NAME: &str = "order-two-growth";
    let n_fit: u64 = match scale {
        Scale::Quick => 20_000,
        Scale::Full => 100_000,
    };
    (|| -> Result<CriterionOutcome> {
        let seq = make_theorem5(0.5, hp::alpha_sqrt2(320), 160)?;
        let log_cn = seq.log_coeff_modulus(n_fit);
        let nf = n_fit as f64;
        let s_fit = -log_cn / (nf * nf.ln());
        let fit_ok = (0.475..=0.525).contains(&s_fit);
        // linear-term constant of the coefficient asymptotics, then the
        // growth constant sigma = e^{c rho} / (e rho) with rho = 2
        let c_est = (log_cn + 0.5 * nf * nf.ln()) / nf;
        let sigma = (2.0 * c_est).exp() / (2.0 * std::f64::consts::E);
        let m = growth::max_modulus(&seq, 6.0)?;
        let x = m.log_max / 36.0;
        let sigma_ok = (x - sigma).abs() <= 0.25 * x;
        Ok(outcome(
            ID,
            NAME,
            fit_ok && sigma_ok,
            format!(
                "exponent fit {s_fit:.5} at n = {n_fit}, sigma(fit) = {sigma:.5}, log M(6)/36 = {x:.5}"
            ),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// 12. pit / zero correspondence
// -------------------------------------------------------------------------

pub fn check_pit_zero_correspondence(scale: Scale) -> CriterionOutcome {
    const ID: u32 = 12;
    const NAME: &str = "pit-zero-correspondence";
    let (r_lo, r_hi) = match scale {
        Scale::Quick => (12.0, 15.0),
        Scale::Full => (25.0, 30.0),
    };
    (|| -> Result<CriterionOutcome> {
        let seq = sqrt2_seq(160);
        const REL: f64 = 1e-30;
        let n_zeros =
            zeros::count_zeros(&seq, r_hi, REL)? - zeros::count_zeros(&seq, r_lo, REL)?;
        // pits this deep are exponentially small, so the multiscale driver
        // (coarse grid + local descent) is required; a uniform grid alone
        // cannot resolve them at any feasible resolution
        let n_r = ((r_hi - r_lo) / 0.25).round() as usize + 1;
        let rep = growth::pit_detect_multiscale(
            &seq,
            r_lo,
            r_hi,
            n_r,
            512,
            0.3,
            0.5,
            1.0,
            HRef::Const(1.0),
        )?;
        let n_pits = rep.pits.len() as i64;
        let ok = n_zeros > 0
            && (n_pits as f64) >= 0.5 * n_zeros as f64
            && (n_pits as f64) <= 1.5 * n_zeros as f64;
        Ok(outcome(
            ID,
            NAME,
            ok,
            format!("annulus [{r_lo},{r_hi}]: {n_pits} pits vs {n_zeros} zeros"),
        ))
    })()
    .unwrap_or_else(|e| fail_err(ID, NAME, e))
}

// -------------------------------------------------------------------------
// suite driver
// -------------------------------------------------------------------------

pub fn run_suite(scale: Scale) -> Vec<CriterionOutcome> {
    let mut out = Vec::with_capacity(12);
    out.push(check_pantograph(scale));
    out.push(check_trig_sums(scale));
    let zc = check_zero_statistics(scale);
    out.push(zc.count_growth);
    out.push(zc.angular);
    out.push(zc.reciprocal);
    out.push(check_indicator(scale));
    out.push(check_max_modulus_band(scale));
    out.push(check_ratio_dichotomy(scale));
    out.push(check_decay_sector(scale));
    out.push(check_composition(scale));
    out.push(check_order_two_growth(scale));
    out.push(check_pit_zero_correspondence(scale));
    out
}

/// Identifiers of checks that are currently expected to fail; see the
/// module documentation. Used by callers that gate on "everything else
/// green".
pub const KNOWN_RED: &[u32] = &[9];
