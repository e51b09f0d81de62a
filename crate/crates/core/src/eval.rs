//! Certified evaluation of f, f', and the disc function G.
//!
//! Plain ascending summation with a running power of z. No compensated
//! summation: `choose_precision` budgets enough bits that the tracked
//! rounding bound stays far below the truncation target.

use rug::{Complex, Float};

use crate::coeffs::{CoefficientSequence, ModulusKind, INDEX_CAP};
use crate::error::{Error, Result};
use crate::hp;

/// Function value with separated truncation and rounding bounds:
/// |true - value| <= truncation_bound + rounding_bound.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Complex,
    pub truncation_bound: f64,
    pub rounding_bound: f64,
    pub terms_used: u64,
    pub precision_bits: u32,
}

impl EvalResult {
    pub fn total_bound(&self) -> f64 {
        self.truncation_bound + self.rounding_bound
    }

    pub fn abs(&self) -> f64 {
        hp::abs_f64(&self.value)
    }

    /// True when the value is indistinguishable from zero at this bound.
    pub fn unresolved(&self) -> bool {
        hp::abs_f64(&self.value) <= self.total_bound()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Series {
    F,
    FPrime,
}

/// ln of the majorant of the n-th term at radius r.
fn log_term(seq: &CoefficientSequence, series: Series, n: u64, lr: f64) -> f64 {
    let nl = if n == 0 { 0.0 } else { n as f64 * lr };
    match series {
        Series::F => seq.log_majorant(n) + nl,
        Series::FPrime => ((n + 1) as f64).ln() + seq.log_majorant(n + 1) + nl,
    }
}

/// Certified tail bound ln of Sum_{k > N} majorant-term(k) r^k, or +inf when
/// no geometric bound is available yet at N.
fn log_tail_bound(seq: &CoefficientSequence, series: Series, n_last: u64, r: f64) -> f64 {
    let lr = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    match seq.modulus_rule().kind {
        ModulusKind::Factorial => {
            // r^{N+1}/((N+1)! (1 - r/(N+2))), valid when N+2 > r.
            // The same expression bounds the f' tail since
            // sum_{n>N} (n+1) r^n/(n+1)! = sum_{n>N} r^n/n!.
            let np1 = n_last + 1;
            if (np1 + 1) as f64 <= r {
                return f64::INFINITY;
            }
            let geom = 1.0 - r / (np1 + 1) as f64;
            np1 as f64 * lr - hp::ln_factorial(np1) - geom.ln() + 1e-6
        }
        _ => {
            // generic: first term after N, doubled once the term ratio is <= 1/2
            let t = log_term(seq, series, n_last + 1, lr);
            let ratio = log_term(seq, series, n_last + 2, lr) - t;
            if ratio <= -std::f64::consts::LN_2 {
                t + std::f64::consts::LN_2
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Smallest tested N whose majorant tail at radius r is below eps.
pub fn choose_truncation(seq: &CoefficientSequence, r: f64, eps: f64) -> Result<u64> {
    choose_truncation_series(seq, Series::F, r, eps)
}

fn choose_truncation_series(
    seq: &CoefficientSequence,
    series: Series,
    r: f64,
    eps: f64,
) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("truncation tolerance {eps} must be > 0")));
    }
    if r < 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius {r} must be finite and >= 0")));
    }
    let leps = eps.ln();
    let mut n = 0u64;
    loop {
        if log_tail_bound(seq, series, n, r) <= leps {
            return Ok(n);
        }
        n += 1;
        if n > INDEX_CAP {
            return Err(Error::TruncationUnattainable { r, eps, cap: INDEX_CAP });
        }
    }
}

/// Working precision: cancellation headroom of 1.4427 r bits (pit values can
/// be exponentially below the term peak), log2 N for the summation, the
/// tolerance budget, and 32 guard bits.
pub fn choose_precision(r: f64, eps: f64, n_terms: u64) -> u32 {
    let head = (1.4427 * r).ceil() as i64;
    let sum = (n_terms.max(1) as f64).log2().ceil() as i64;
    let tol = (1.0 / eps).log2().ceil() as i64;
    (head + sum + tol + 32).max(2) as u32
}

/// Truncation index and working precision for a point at radius r.
pub fn work_parameters(seq: &CoefficientSequence, r: f64, eps: f64) -> Result<(u64, u32)> {
    let n = choose_truncation(seq, r, eps)?;
    let p = choose_precision(r, eps, n.max(1)).max(64);
    Ok((n, p))
}

fn sum_series(
    seq: &CoefficientSequence,
    series: Series,
    z: &Complex,
    n_last: u64,
    prec: u32,
) -> (Complex, f64) {
    let r = hp::abs_upper(z);
    let lr = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    let zw = Complex::with_val(prec, z);
    let mut pow = Complex::with_val(prec, 1);
    let mut acc = Complex::new(prec);
    let mut majorant_sum = 0.0f64;
    for n in 0..=n_last {
        let coeff = match series {
            Series::F => seq.coefficient(n),
            Series::FPrime => seq.coefficient(n + 1) * Float::with_val(64, n + 1),
        };
        acc += Complex::with_val(prec, &coeff * &pow);
        pow = Complex::with_val(prec, &pow * &zw);
        let lt = log_term(seq, series, n, lr);
        if lt.is_finite() {
            majorant_sum += lt.exp();
        }
    }
    // per-operation relative error 2^{1-P}; coefficients carry <= 4 ulp at
    // the sequence precision
    let p_eff = prec.min(seq.precision());
    let rounding = 10.0 * (n_last + 2) as f64 * (2.0f64).powi(1 - p_eff as i32) * majorant_sum;
    (acc, rounding)
}

fn eval_series(
    seq: &CoefficientSequence,
    series: Series,
    z: &Complex,
    eps: f64,
) -> Result<EvalResult> {
    let r = hp::abs_upper(z);
    let n = choose_truncation_series(seq, series, r, eps)?;
    let prec = choose_precision(r, eps, n.max(1)).max(64);
    let (value, rounding_bound) = sum_series(seq, series, z, n, prec);
    let truncation_bound = log_tail_bound(seq, series, n, r).exp();
    Ok(EvalResult {
        value,
        truncation_bound,
        rounding_bound,
        terms_used: n + 1,
        precision_bits: prec,
    })
}

/// f(z) = Sum coefficient(n) z^n with certified bounds; the total bound is
/// at most eps plus a rounding term far below it.
pub fn eval_f(seq: &CoefficientSequence, z: &Complex, eps: f64) -> Result<EvalResult> {
    eval_series(seq, Series::F, z, eps)
}

/// f'(z) via the shifted series (n+1) coefficient(n+1) z^n.
pub fn eval_fprime(seq: &CoefficientSequence, z: &Complex, eps: f64) -> Result<EvalResult> {
    eval_series(seq, Series::FPrime, z, eps)
}

/// Fixed-budget evaluation (oracle route for bound-soundness checks).
pub fn eval_f_custom(
    seq: &CoefficientSequence,
    z: &Complex,
    n_terms: u64,
    prec: u32,
) -> EvalResult {
    let r = hp::abs_upper(z);
    let n_last = n_terms.saturating_sub(1);
    let (value, rounding_bound) = sum_series(seq, Series::F, z, n_last, prec);
    let truncation_bound = log_tail_bound(seq, Series::F, n_last, r).exp();
    EvalResult { value, truncation_bound, rounding_bound, terms_used: n_terms, precision_bits: prec }
}

/// G(w) = Sum_{n>=1} a_{n-1} w^n over the unit-modulus phase factors of the
/// sequence, |w| < 1. The unit circle is a natural boundary for the
/// irrational quadratic family, so |w| >= 0.999 is rejected outright.
pub fn eval_g(seq: &CoefficientSequence, w: &Complex, eps: f64) -> Result<EvalResult> {
    let r = hp::abs_upper(w);
    if r > 0.999 {
        return Err(Error::InvalidParameter(format!(
            "eval_g: |w| = {r} outside the certified disc (|w| <= 0.999)"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eval_g: tolerance must be > 0".into()));
    }
    // geometric tail r^{N+1}/(1-r)
    let mut n_last = 1u64;
    if r > 0.0 {
        let need = (eps.ln() + (1.0 - r).ln()) / r.ln();
        n_last = need.ceil().max(1.0) as u64;
    }
    let prec = choose_precision(0.0, eps, n_last).max(64);
    let ww = Complex::with_val(prec, w);
    let mut pow = Complex::with_val(prec, 1);
    let mut acc = Complex::new(prec);
    for n in 1..=n_last {
        pow = Complex::with_val(prec, &pow * &ww);
        if seq.phase_rule().vanishes_at(n - 1) {
            continue;
        }
        let angle = seq.phase_rule().angle(n - 1, prec);
        let unit = hp::unit_from_angle(&angle);
        acc += Complex::with_val(prec, unit * &pow);
    }
    let truncation_bound = if r > 0.0 {
        ((n_last + 1) as f64 * r.ln() - (1.0 - r).ln()).exp()
    } else {
        0.0
    };
    let rounding = 10.0 * (n_last + 2) as f64 * (2.0f64).powi(1 - prec as i32) / (1.0 - r);
    Ok(EvalResult {
        value: acc,
        truncation_bound,
        rounding_bound: rounding,
        terms_used: n_last,
        precision_bits: prec,
    })
}

// ---------------------------------------------------------------------------
// Polar grids
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GridSpec {
    /// Increasing positive radii.
    pub r_values: Vec<f64>,
    /// Equispaced angles on [-pi, pi).
    pub n_theta: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(Error::InvalidParameter("grid: r_values must be nonempty".into()));
        }
        if self.n_theta < 8 {
            return Err(Error::InvalidParameter(format!("grid: n_theta = {} < 8", self.n_theta)));
        }
        let mut prev = 0.0;
        for &r in &self.r_values {
            if !(r > prev) {
                return Err(Error::InvalidParameter(
                    "grid: r_values must be strictly increasing and positive".into(),
                ));
            }
            prev = r;
        }
        Ok(())
    }

    /// Radii for a geometric (or linear) annulus sweep.
    pub fn annulus(r_lo: f64, r_hi: f64, n_r: usize, n_theta: usize) -> GridSpec {
        let mut r_values = Vec::with_capacity(n_r);
        for i in 0..n_r {
            let t = if n_r == 1 { 0.5 } else { i as f64 / (n_r - 1) as f64 };
            r_values.push(r_lo + (r_hi - r_lo) * t);
        }
        GridSpec { r_values, n_theta }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GridPoint {
    pub r: f64,
    pub theta: f64,
    /// log|f| at the point; when `flagged`, only "log|f| <= this" is known.
    pub log_abs_f: f64,
    pub flagged: bool,
    pub trunc_bound: f64,
    pub round_bound: f64,
}

/// Evaluate log|f| on a polar grid. `rel_tol` scales the trivial majorant
/// of M(r), so the per-point absolute tolerance is rel_tol * Sum majorant.
/// Points where |f| sinks below the total bound are flagged, not errored.
pub fn eval_grid(seq: &CoefficientSequence, grid: &GridSpec, rel_tol: f64) -> Result<Vec<GridPoint>> {
    grid.validate()?;
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidParameter("grid: rel_tol must be > 0".into()));
    }
    use rayon::prelude::*;
    let mut jobs = Vec::new();
    for &r in &grid.r_values {
        for j in 0..grid.n_theta {
            jobs.push((r, j));
        }
    }
    let n_theta = grid.n_theta;
    jobs.into_par_iter()
        .map(|(r, j)| -> Result<GridPoint> {
            let eps = (seq.log_majorant_sum(r).min(700.0)).exp() * rel_tol;
            let out = eval_polar(seq, r, j, n_theta, eps)?;
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let flagged = out.unresolved();
            let log_abs_f = if flagged {
                out.total_bound().ln()
            } else {
                hp::log_abs_f64(&out.value)
            };
            Ok(GridPoint {
                r,
                theta,
                log_abs_f,
                flagged,
                trunc_bound: out.truncation_bound,
                round_bound: out.rounding_bound,
            })
        })
        .collect()
}

/// Evaluate f at r e^{i theta_j}, theta_j = -pi + 2 pi j / n_theta, with the
/// angle formed once at extended precision.
pub fn eval_polar(
    seq: &CoefficientSequence,
    r: f64,
    j: usize,
    n_theta: usize,
    eps: f64,
) -> Result<EvalResult> {
    let (_, prec) = work_parameters(seq, r, eps)?;
    let theta = theta_at(prec + 16, j, n_theta);
    let z = hp::point_polar(prec + 16, &Float::with_val(prec + 16, r), &theta);
    eval_f(seq, &z, eps)
}

/// theta_j = -pi + 2 pi j / n at precision `prec`.
pub fn theta_at(prec: u32, j: usize, n: usize) -> Float {
    let frac = rug::Rational::from(((2 * j as i64) - n as i64, 2 * n as u64));
    Float::with_val(prec, frac) * hp::two_pi(prec)
}

/// CSV serialization of a grid, 17 significant digits.
pub fn grid_to_csv(points: &[GridPoint]) -> String {
    let mut out = String::from("r,theta,log_abs_f,flag,trunc_bound,round_bound\n");
    for p in points {
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{},{:.17e},{:.17e}\n",
            p.r,
            p.theta,
            p.log_abs_f,
            u8::from(p.flagged),
            p.trunc_bound,
            p.round_bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{make_quadratic_phase, make_rational_phase};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn precision_formula_instances() {
        assert_eq!(choose_precision(0.0, 2.0f64.powi(-53), 2), 86);
        assert_eq!(choose_precision(40.0, 1e-10, 128), 131);
        assert_eq!(choose_precision(20.0, 1e-20, 96), 135);
    }

    #[test]
    fn truncation_first_term_suffices_near_zero() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        assert_eq!(choose_truncation(&seq, 1e-12, 0.5).unwrap(), 0);
    }

    #[test]
    fn truncation_tail_certified_by_direct_sum() {
        // oracle: direct summation of r^n/n! past N stays below eps
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let (r, eps) = (10.0, 1e-30);
        let n = choose_truncation(&seq, r, eps).unwrap();
        let mut tail = 0.0f64;
        for k in (n + 1)..(n + 200) {
            tail += (k as f64 * r.ln() - hp::ln_factorial(k)).exp();
        }
        assert!(tail <= eps, "tail {tail} at N={n}");
        // and N is not wastefully large: one step earlier fails the bound
        assert!(log_tail_bound(&seq, Series::F, n - 1, r) > eps.ln());
    }

    #[test]
    fn truncation_monotone_in_eps() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        for &r in &[1.0, 8.0, 25.0] {
            let a = choose_truncation(&seq, r, 1e-10).unwrap();
            let b = choose_truncation(&seq, r, 1e-11).unwrap();
            assert!(b >= a);
        }
    }

    #[test]
    fn exponential_values() {
        let seq = make_rational_phase(0, 1, 160).unwrap();
        let out = eval_f(&seq, &hp::complex(160, 1.0, 0.0), 1e-20).unwrap();
        close(out.value.real().to_f64(), std::f64::consts::E, 1e-15);
        assert!(out.total_bound() <= 1e-19);

        let neg = make_rational_phase(1, 2, 160).unwrap();
        let out = eval_f(&neg, &hp::complex(160, 3.0, 0.0), 1e-20).unwrap();
        close(out.value.real().to_f64(), (-3.0f64).exp(), 1e-15);
    }

    #[test]
    fn fprime_at_zero_is_first_coefficient() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let out = eval_fprime(&seq, &hp::complex(128, 0.0, 0.0), 1e-25).unwrap();
        let a1 = seq.coefficient(1);
        close(out.value.real().to_f64(), a1.real().to_f64(), 1e-20);
        close(out.value.imag().to_f64(), a1.imag().to_f64(), 1e-20);
    }

    #[test]
    fn bound_soundness_against_redundant_oracle() {
        // re-evaluating with doubled precision and doubled terms moves the
        // value by less than the reported bound
        let seq = make_quadratic_phase(hp::alpha_sqrt2(320), 160).unwrap();
        for &(re, im) in &[(5.0, 0.0), (3.0, -4.0), (-12.0, 7.0), (20.0, 15.0)] {
            let z = hp::complex(320, re, im);
            let eps = 1e-20;
            let base = eval_f(&seq, &z, eps).unwrap();
            let oracle = eval_f_custom(&seq, &z, 2 * base.terms_used, 2 * base.precision_bits);
            let diff = hp::abs_f64(&Complex::with_val(320, &base.value - &oracle.value));
            assert!(
                diff <= base.total_bound(),
                "diff {diff} exceeds bound {} at {re}+{im}i",
                base.total_bound()
            );
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(320), 192).unwrap();
        let z = hp::complex(320, 2.0, 1.0);
        let eps = 1e-30;
        let d = eval_fprime(&seq, &z, eps).unwrap();
        let h = 2.0f64.powi(-(192 / 3));
        let zp = Complex::with_val(320, &z + Float::with_val(320, h));
        let zm = Complex::with_val(320, &z - Float::with_val(320, h));
        let fp = eval_f(&seq, &zp, eps).unwrap();
        let fm = eval_f(&seq, &zm, eps).unwrap();
        let fd = Complex::with_val(320, &fp.value - &fm.value) / Float::with_val(320, 2.0 * h);
        let diff = hp::abs_f64(&Complex::with_val(320, &d.value - &fd));
        // |f'''| <= e^{|z|+h} majorant for unit-phase factorial families;
        // the f-evaluation bounds are amplified by the 1/(2h) of the
        // difference quotient
        let third = ((2.0f64 * 2.0 + 1.0).sqrt() + h).exp();
        let tol = d.total_bound()
            + (fp.total_bound() + fm.total_bound()) / (2.0 * h)
            + third * h * h / 6.0;
        assert!(diff <= tol, "diff {diff} tol {tol}");
    }

    #[test]
    fn disc_function_geometric_cases() {
        // e^z family: G(1/2) = sum (1/2)^n = 1
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let g = eval_g(&seq, &hp::complex(128, 0.5, 0.0), 1e-25).unwrap();
        close(g.value.real().to_f64(), 1.0, 1e-20);
        // alternating family: G(1/3) = sum (-1)^{n-1}(1/3)^n = 1/4
        let seq = make_rational_phase(1, 2, 128).unwrap();
        let g = eval_g(&seq, &hp::complex(128, 1.0 / 3.0, 0.0), 1e-25).unwrap();
        close(g.value.real().to_f64(), 0.25, 1e-20);
        // w = 0 -> 0 (sum starts at n = 1)
        let g = eval_g(&seq, &hp::complex(128, 0.0, 0.0), 1e-25).unwrap();
        assert_eq!(g.value.real().to_f64(), 0.0);
    }

    #[test]
    fn disc_function_rejects_boundary() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        assert!(eval_g(&seq, &hp::complex(128, 1.0, 0.0), 1e-10).is_err());
        assert!(eval_g(&seq, &hp::complex(128, 0.9999, 0.0), 1e-10).is_err());
    }

    #[test]
    fn grid_exponential_axis_values() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let grid = GridSpec { r_values: vec![10.0], n_theta: 8 };
        let pts = eval_grid(&seq, &grid, 1e-18).unwrap();
        assert_eq!(pts.len(), 8);
        // theta_0 = -pi -> log|f| = -10; theta_4 = 0 -> +10
        close(pts[0].theta, -std::f64::consts::PI, 1e-15);
        close(pts[0].log_abs_f, -10.0, 1e-9);
        close(pts[4].theta, 0.0, 1e-15);
        close(pts[4].log_abs_f, 10.0, 1e-9);
        assert!(pts.iter().all(|p| !p.flagged));
    }

    #[test]
    fn grid_trivial_maximum_bound() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let grid = GridSpec { r_values: vec![5.0, 12.0, 20.0], n_theta: 64 };
        let pts = eval_grid(&seq, &grid, 1e-18).unwrap();
        for p in &pts {
            assert!(p.log_abs_f <= p.r + 1e-6, "log|f| {} above r {}", p.log_abs_f, p.r);
        }
        // unflagged points at r = 20 sit in the certified band
        let lo = 20.0 - 0.25 * (20.0f64).ln() - 2.0;
        let n_high = pts
            .iter()
            .filter(|p| p.r == 20.0 && !p.flagged && p.log_abs_f >= lo)
            .count();
        assert!(n_high > 48, "only {n_high} of 64 points in the band");
    }

    #[test]
    fn grid_csv_shape() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let grid = GridSpec { r_values: vec![2.0], n_theta: 8 };
        let pts = eval_grid(&seq, &grid, 1e-12).unwrap();
        let csv = grid_to_csv(&pts);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r,theta,log_abs_f,flag,trunc_bound,round_bound");
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), 6);
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn grid_validation() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        assert!(eval_grid(&seq, &GridSpec { r_values: vec![], n_theta: 16 }, 1e-10).is_err());
        assert!(eval_grid(&seq, &GridSpec { r_values: vec![1.0], n_theta: 4 }, 1e-10).is_err());
        assert!(eval_grid(&seq, &GridSpec { r_values: vec![2.0, 1.0], n_theta: 16 }, 1e-10).is_err());
    }
}
