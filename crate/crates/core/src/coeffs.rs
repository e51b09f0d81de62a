//! Coefficient sequences a_n for the function families under study.
//!
//! A sequence is a phase rule (the argument of a_n) times a modulus rule
//! (|a_n|, including the 1/n! of the exponential-type families). Phases of
//! the quadratic family are reduced mod 1 by exact extended-precision
//! multiplication, never by repeated addition.

use std::sync::{Mutex, RwLock};

use rug::ops::CompleteRound;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp;

/// Hard cap on coefficient indices; requests beyond it indicate a runaway
/// truncation search.
pub const INDEX_CAP: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub enum PhaseKind {
    /// phase(n) = 2 pi n^2 alpha; `alpha` is treated as an exact binary
    /// value, so it must carry enough bits for the largest index in play.
    Quadratic { alpha: Float },
    /// phase(n) = 2 pi n^2 p / q, exact rational arithmetic.
    Rational { p: i64, q: u64 },
    /// phase(n) = sum_k c_k e^{-lambda_k n}, all lambda_k > 0.
    PsiExp { coeff: Vec<Float>, rate: Vec<Float> },
    /// a_n = (n+a)^{it} for n >= 1, a_0 = 0.
    Hardy { t: Float, a: Float },
    /// Explicit phase table (radians); indices past the table are rejected.
    Explicit { phases: Vec<Float> },
    /// Even indices from `even` rotated by theta_even, odd indices from
    /// `odd` rotated by theta_odd; the closure operation behind the
    /// convex-hull construction for indicator diagrams.
    Interleave {
        even: Box<PhaseRule>,
        odd: Box<PhaseRule>,
        theta_even: Float,
        theta_odd: Float,
    },
}

#[derive(Clone, Debug)]
pub struct PhaseRule {
    pub kind: PhaseKind,
    /// Minimal exact period of the phase sequence, when one exists.
    pub period: Option<u64>,
}

impl PhaseRule {
    /// Phase angle of a_n in radians, computed at precision `prec`.
    pub fn angle(&self, n: u64, prec: u32) -> Float {
        match &self.kind {
            PhaseKind::Quadratic { alpha } => {
                let frac = quadratic_frac(alpha, n);
                Float::with_val(prec, Float::with_val(prec + 8, frac) * hp::two_pi(prec + 8))
            }
            PhaseKind::Rational { p, q } => {
                let frac = rational_frac(*p, *q, n);
                Float::with_val(prec, Float::with_val(prec + 8, frac) * hp::two_pi(prec + 8))
            }
            PhaseKind::PsiExp { coeff, rate } => {
                let mut acc = Float::new(prec + 16);
                for (c, lam) in coeff.iter().zip(rate) {
                    let e = (-(lam.clone()) * n).exp();
                    acc += Float::with_val(prec + 16, c * e);
                }
                Float::with_val(prec, acc)
            }
            PhaseKind::Hardy { t, a } => {
                if n == 0 {
                    return Float::new(prec);
                }
                let ln = (a.clone() + n).ln();
                Float::with_val(prec, t * ln)
            }
            PhaseKind::Explicit { phases } => {
                Float::with_val(prec, &phases[n as usize % phases.len().max(1)])
            }
            PhaseKind::Interleave { even, odd, theta_even, theta_odd } => {
                let (base, theta) = if n % 2 == 0 {
                    (even, theta_even)
                } else {
                    (odd, theta_odd)
                };
                let rot = Float::with_val(prec + 40, theta * n);
                base.angle(n, prec + 40) - rot
            }
        }
    }

    /// True when a_n vanishes identically (only the Hardy family at n=0).
    pub fn vanishes_at(&self, n: u64) -> bool {
        match &self.kind {
            PhaseKind::Hardy { .. } => n == 0,
            PhaseKind::Interleave { even, odd, .. } => {
                if n % 2 == 0 {
                    even.vanishes_at(n)
                } else {
                    odd.vanishes_at(n)
                }
            }
            _ => false,
        }
    }
}

/// frac(n^2 alpha) by exact product of the binary value of alpha with the
/// integer n^2, so no bits are lost before the final reduction.
fn quadratic_frac(alpha: &Float, n: u64) -> Float {
    let nn = Rational::from((n, 1u32)).square();
    let bits = alpha.prec() + 2 * (64 - n.leading_zeros()).max(1) + 8;
    let t = (alpha * nn).complete(bits);
    let fl = t.clone().floor();
    t - fl
}

/// frac(n^2 p / q) as an exact rational in [0, 1).
fn rational_frac(p: i64, q: u64, n: u64) -> Rational {
    let q = q as i128;
    let n = n as i128 % q;
    let r = (n * n % q) * (p as i128).rem_euclid(q) % q;
    Rational::from((r as i64, q as u64))
}

/// Minimal period of n -> n^2 p mod q.
fn rational_period(p: i64, q: u64) -> u64 {
    let residue = |n: u64| -> u64 {
        let q = q as u128;
        let n = n as u128 % q;
        ((n * n % q) * (p.rem_euclid(q as i64) as u128) % q) as u64
    };
    'outer: for t in 1..=q {
        for n in 0..q {
            if residue(n + t) != residue(n) {
                continue 'outer;
            }
        }
        return t;
    }
    q
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModulusKind {
    /// |a_n| = 1/n!, the exponential-type normalization.
    Factorial,
    /// c_0 = 1, c_{n+1} = c_n b_n with b_n the Taylor coefficients of
    /// (1-w)^{-s_h}; order rho = 1/(1-s_h).
    Theorem5 { s_h: f64 },
    /// |a_n| = 1 (disc functions).
    Unit,
}

#[derive(Clone, Copy, Debug)]
pub struct ModulusRule {
    pub kind: ModulusKind,
    /// Declared order of the resulting entire function.
    pub rho: f64,
}

/// Memo tables for the Theorem-5 modulus: exact-precision prefix products
/// and a long f64 table of ln c_n for growth fits.
struct Theorem5Table {
    floats: Mutex<Vec<Float>>,
    logs: Mutex<Vec<f64>>,
}

pub struct CoefficientSequence {
    phase: PhaseRule,
    modulus: ModulusRule,
    precision: u32,
    cache: RwLock<Vec<Complex>>,
    t5: Option<Theorem5Table>,
}

impl CoefficientSequence {
    fn new(phase: PhaseRule, modulus: ModulusRule, precision: u32) -> Self {
        let t5 = match modulus.kind {
            ModulusKind::Theorem5 { .. } => Some(Theorem5Table {
                floats: Mutex::new(vec![Float::with_val(precision + 32, 1)]),
                logs: Mutex::new(vec![0.0]),
            }),
            _ => None,
        };
        CoefficientSequence {
            phase,
            modulus,
            precision,
            cache: RwLock::new(Vec::new()),
            t5,
        }
    }

    pub fn phase_rule(&self) -> &PhaseRule {
        &self.phase
    }

    pub fn modulus_rule(&self) -> &ModulusRule {
        &self.modulus
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rho(&self) -> f64 {
        self.modulus.rho
    }

    /// Full Taylor coefficient of z^n, memoized, correct to within 4 ulp
    /// at the sequence precision.
    pub fn coefficient(&self, n: u64) -> Complex {
        {
            let cache = self.cache.read().unwrap();
            if (n as usize) < cache.len() {
                return cache[n as usize].clone();
            }
        }
        let mut cache = self.cache.write().unwrap();
        while cache.len() <= n as usize {
            let k = cache.len() as u64;
            cache.push(self.compute_coefficient(k));
        }
        cache[n as usize].clone()
    }

    fn compute_coefficient(&self, n: u64) -> Complex {
        let prec = self.precision;
        if self.phase.vanishes_at(n) {
            return Complex::new(prec);
        }
        let angle = self.phase.angle(n, prec + 24);
        let unit = hp::unit_from_angle(&angle);
        let m = self.modulus_float(n, prec + 24);
        Complex::with_val(prec, unit * m)
    }

    /// |a_n| at the requested precision (phase-vanishing indices excluded).
    pub fn modulus_float(&self, n: u64, prec: u32) -> Float {
        match self.modulus.kind {
            ModulusKind::Factorial => {
                Float::with_val(prec, Float::factorial(n as u32)).recip()
            }
            ModulusKind::Unit => Float::with_val(prec, 1),
            ModulusKind::Theorem5 { s_h } => {
                let t5 = self.t5.as_ref().expect("theorem5 table");
                let mut floats = t5.floats.lock().unwrap();
                let p = self.precision + 32;
                while floats.len() <= n as usize {
                    let k = floats.len() as u64; // computing c_k from c_{k-1}
                    let b = taylor_b(s_h, k - 1, p);
                    let next = Float::with_val(p, floats.last().unwrap() * &b);
                    floats.push(next);
                }
                Float::with_val(prec, &floats[n as usize])
            }
        }
    }

    /// ln |a_n| as f64; -inf where a_n = 0.
    pub fn log_coeff_modulus(&self, n: u64) -> f64 {
        if self.phase.vanishes_at(n) {
            return f64::NEG_INFINITY;
        }
        match self.modulus.kind {
            ModulusKind::Factorial => -hp::ln_factorial(n),
            ModulusKind::Unit => 0.0,
            ModulusKind::Theorem5 { s_h } => {
                let t5 = self.t5.as_ref().expect("theorem5 table");
                let mut logs = t5.logs.lock().unwrap();
                while logs.len() <= n as usize {
                    let k = logs.len() as u64;
                    // ln c_k = ln c_{k-1} + ln b_{k-1}
                    let prev = *logs.last().unwrap();
                    logs.push(prev + log_taylor_b(s_h, k - 1));
                }
                logs[n as usize]
            }
        }
    }

    /// Upper bound on ln |a_n| (f64 slack over the true value).
    pub fn log_majorant(&self, n: u64) -> f64 {
        let v = self.log_coeff_modulus(n);
        if v == f64::NEG_INFINITY {
            v
        } else {
            v + 1e-9 + n as f64 * 1e-13
        }
    }

    /// ln of Sum_n |a_n| r^n plus slack: a certified majorant of ln M(r)
    /// and the scale used for relative tolerances.
    pub fn log_majorant_sum(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if matches!(self.modulus.kind, ModulusKind::Unit) && r >= 1.0 {
            return f64::INFINITY;
        }
        let lr = r.ln();
        let mut best = f64::NEG_INFINITY;
        let mut n = 0u64;
        let mut terms: Vec<f64> = Vec::new();
        loop {
            let t = self.log_majorant(n) + n as f64 * lr;
            if t.is_finite() {
                terms.push(t);
                if t > best {
                    best = t;
                }
            }
            // past the peak and negligible: stop
            if n > 4 && t < best - 60.0 && (self.ratio_decreasing(n, lr)) {
                break;
            }
            n += 1;
            if n > INDEX_CAP {
                break;
            }
        }
        let sum: f64 = terms.iter().map(|t| (t - best).exp()).sum();
        best + sum.ln() + 1e-6
    }

    fn ratio_decreasing(&self, n: u64, lr: f64) -> bool {
        self.log_majorant(n + 1) - self.log_majorant(n) + lr < 0.0
    }

    /// Quadratic mean of |f| on |z| = r via Parseval:
    /// m_2(r)^2 = Sum |a_n|^2 r^{2n}, summed in the log domain with a
    /// certified geometric tail bound below `rel_tol`.
    pub fn parseval_m2(&self, r: f64, rel_tol: f64) -> Result<ParsevalM2> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("parseval_m2: r = {r} must be > 0")));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidParameter("parseval_m2: tolerance must be > 0".into()));
        }
        let lr = r.ln();
        let term = |n: u64| -> f64 {
            let lm = self.log_coeff_modulus(n);
            if lm == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                2.0 * (lm + n as f64 * lr)
            }
        };
        // locate the peak
        let mut peak = f64::NEG_INFINITY;
        let mut n = 0u64;
        loop {
            let t = term(n);
            if t > peak {
                peak = t;
            }
            if n > 4 && t.is_finite() && t < peak - 80.0 {
                break;
            }
            n += 1;
            if n > INDEX_CAP {
                return Err(Error::TruncationUnattainable { r, eps: rel_tol, cap: INDEX_CAP });
            }
        }
        // accumulate relative to the peak
        let mut sum = 0.0f64;
        let mut k = 0u64;
        let tail_rel;
        loop {
            let t = term(k);
            if t.is_finite() {
                sum += (t - peak).exp();
            }
            let next = term(k + 1);
            let ratio = next - t;
            if k > 4 && t.is_finite() && ratio < -std::f64::consts::LN_2 {
                let tail = (next - peak).exp() * 2.0; // geometric, ratio <= 1/2
                if tail <= rel_tol * sum {
                    tail_rel = tail / sum;
                    break;
                }
            }
            k += 1;
            if k > INDEX_CAP {
                return Err(Error::TruncationUnattainable { r, eps: rel_tol, cap: INDEX_CAP });
            }
        }
        let log_m2 = 0.5 * (peak + sum.ln());
        Ok(ParsevalM2 { log_m2, m2: log_m2.exp(), tail_rel })
    }
}

/// Result of the coefficient-side quadratic-mean computation.
#[derive(Clone, Copy, Debug)]
pub struct ParsevalM2 {
    pub log_m2: f64,
    pub m2: f64,
    /// Relative size of the certified tail bound.
    pub tail_rel: f64,
}

/// b_n, the n-th Taylor coefficient of (1-w)^{-s}, at precision `prec`.
/// b_0 = 1, b_n = b_{n-1} (n-1+s)/n.
pub fn taylor_b(s: f64, n: u64, prec: u32) -> Float {
    let mut b = Float::with_val(prec, 1);
    for k in 1..=n {
        b *= Float::with_val(prec, k as f64 - 1.0 + s);
        b /= k as f64;
    }
    b
}

/// ln b_n for the same coefficients, at f64 accuracy.
pub fn log_taylor_b(s: f64, n: u64) -> f64 {
    // b_n = Gamma(n+s) / (Gamma(s) Gamma(n+1))
    if n == 0 {
        return 0.0;
    }
    hp::ln_gamma_f64(n as f64 + s) - hp::ln_gamma_f64(s) - hp::ln_factorial(n)
}

fn require_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be finite, got {x}")))
    }
}

/// Quadratic phase family: coefficient(n) = e^{2 pi i n^2 alpha} / n!.
pub fn make_quadratic_phase(alpha: Float, precision: u32) -> Result<CoefficientSequence> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("quadratic phase: alpha must be finite".into()));
    }
    if precision < 64 {
        return Err(Error::InvalidParameter(format!("precision {precision} < 64 bits")));
    }
    // keep headroom for the n^2 multiplication
    let mut alpha = alpha;
    if alpha.prec() < precision + 64 {
        alpha.set_prec(precision + 64);
    }
    Ok(CoefficientSequence::new(
        PhaseRule { kind: PhaseKind::Quadratic { alpha }, period: None },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

/// Rational phase family with exact phases and minimal period metadata.
pub fn make_rational_phase(p: i64, q: u64, precision: u32) -> Result<CoefficientSequence> {
    if q == 0 {
        return Err(Error::InvalidParameter("rational phase: q must be >= 1".into()));
    }
    let period = rational_period(p, q);
    Ok(CoefficientSequence::new(
        PhaseRule { kind: PhaseKind::Rational { p, q }, period: Some(period) },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

/// phase(n) = sum_k c_k e^{-lambda_k n}; all lambda_k > 0 so the phase is
/// o(|zeta|) in every right half-plane.
pub fn make_psi_phase(c: &[f64], lambda: &[f64], precision: u32) -> Result<CoefficientSequence> {
    if c.is_empty() || c.len() != lambda.len() {
        return Err(Error::InvalidParameter(
            "psi phase: c and lambda must be nonempty and the same length".into(),
        ));
    }
    for (i, &l) in lambda.iter().enumerate() {
        if !(l > 0.0) {
            return Err(Error::InvalidParameter(format!("psi phase: lambda[{i}] = {l} must be > 0")));
        }
    }
    for &x in c {
        require_finite(x, "psi phase coefficient")?;
    }
    let coeff = c.iter().map(|&x| Float::with_val(precision + 32, x)).collect();
    let rate = lambda.iter().map(|&x| Float::with_val(precision + 32, x)).collect();
    Ok(CoefficientSequence::new(
        PhaseRule { kind: PhaseKind::PsiExp { coeff, rate }, period: None },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

/// Hardy's E_{s,a} with purely imaginary s = i t: coefficient(n) =
/// (n+a)^{it}/n! for n >= 1 and coefficient(0) = 0.
pub fn make_hardy(s: num_complex::Complex64, a: f64, precision: u32) -> Result<CoefficientSequence> {
    if s.re != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "hardy family requires purely imaginary s, got Re s = {}",
            s.re
        )));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("hardy family requires a > 0, got {a}")));
    }
    Ok(CoefficientSequence::new(
        PhaseRule {
            kind: PhaseKind::Hardy {
                t: Float::with_val(precision + 32, s.im),
                a: Float::with_val(precision + 32, a),
            },
            period: None,
        },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

/// Order-rho generalization: coefficient(n) = c_n e^{2 pi i n^2 alpha} z^n
/// with c_n the prefix products of the Taylor coefficients of (1-w)^{-s_h};
/// rho = 1/(1-s_h).
pub fn make_theorem5(s_h: f64, alpha: Float, precision: u32) -> Result<CoefficientSequence> {
    if !(s_h > 0.0 && s_h < 1.0) {
        return Err(Error::InvalidParameter(format!("theorem5 exponent s_h = {s_h} outside (0,1)")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("theorem5: alpha must be finite".into()));
    }
    let mut alpha = alpha;
    if alpha.prec() < precision + 64 {
        alpha.set_prec(precision + 64);
    }
    Ok(CoefficientSequence::new(
        PhaseRule { kind: PhaseKind::Quadratic { alpha }, period: None },
        ModulusRule { kind: ModulusKind::Theorem5 { s_h }, rho: 1.0 / (1.0 - s_h) },
        precision,
    ))
}

/// Q operator: even coefficients from f1 rotated by theta1, odd from f2
/// rotated by theta2. Both inputs must be unit-phase factorial families so
/// the output stays in the same class.
pub fn combine_q(
    f1: &CoefficientSequence,
    f2: &CoefficientSequence,
    theta1: f64,
    theta2: f64,
) -> Result<CoefficientSequence> {
    for (i, f) in [f1, f2].iter().enumerate() {
        if f.modulus.kind != ModulusKind::Factorial {
            return Err(Error::FamilyMismatch(format!(
                "combine_q input {} does not have the factorial modulus",
                i + 1
            )));
        }
    }
    let precision = f1.precision.min(f2.precision);
    let p = precision + 64;
    Ok(CoefficientSequence::new(
        PhaseRule {
            kind: PhaseKind::Interleave {
                even: Box::new(f1.phase.clone()),
                odd: Box::new(f2.phase.clone()),
                theta_even: Float::with_val(p, theta1),
                theta_odd: Float::with_val(p, theta2),
            },
            period: None,
        },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

/// Explicit phase table (mostly for tests and perturbation experiments).
pub fn make_explicit_phase(phases: &[f64], precision: u32) -> Result<CoefficientSequence> {
    if phases.is_empty() {
        return Err(Error::InvalidParameter("explicit phase: empty table".into()));
    }
    Ok(CoefficientSequence::new(
        PhaseRule {
            kind: PhaseKind::Explicit {
                phases: phases.iter().map(|&x| Float::with_val(precision, x)).collect(),
            },
            period: Some(phases.len() as u64),
        },
        ModulusRule { kind: ModulusKind::Factorial, rho: 1.0 },
        precision,
    ))
}

// ---------------------------------------------------------------------------
// JSON sequence specifications (the CLI config surface)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SequenceSpec {
    pub phase: PhaseSpec,
    pub modulus: ModulusSpec,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseSpec {
    /// alpha accepted as a decimal literal, a fraction "p/q", or the
    /// symbolic tokens "sqrt2", "golden", "pi".
    Quadratic { alpha: String },
    Rational { p: i64, q: u64 },
    PsiExp { c: Vec<f64>, lambda: Vec<f64> },
    Hardy { s_im: f64, a: f64 },
    Explicit { phases: Vec<f64> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusSpec {
    Factorial,
    Theorem5 { s_h: f64 },
    Unit,
}

/// Parse an alpha token at the requested precision. Symbolic tokens expand
/// to full-precision values; decimals are read at `prec` bits.
pub fn parse_alpha(token: &str, prec: u32) -> Result<Float> {
    match token.trim() {
        "sqrt2" => Ok(hp::alpha_sqrt2(prec)),
        "golden" => Ok(hp::alpha_golden(prec)),
        "pi" => Ok(hp::alpha_pi_frac(prec)),
        s if s.contains('/') => {
            let (p, q) = s.split_once('/').unwrap();
            let p: i64 = p.trim().parse().map_err(|_| bad_alpha(s))?;
            let q: u64 = q.trim().parse().map_err(|_| bad_alpha(s))?;
            if q == 0 {
                return Err(bad_alpha(s));
            }
            Ok(Float::with_val(prec, Rational::from((p, q))))
        }
        s => Float::parse(s)
            .map(|incomplete| Float::with_val(prec, incomplete))
            .map_err(|_| bad_alpha(s)),
    }
}

fn bad_alpha(s: &str) -> Error {
    Error::InvalidParameter(format!(
        "cannot parse alpha {s:?}: expected sqrt2, golden, pi, p/q, or a decimal"
    ))
}

impl SequenceSpec {
    pub fn build(&self) -> Result<CoefficientSequence> {
        let prec = self.precision_bits;
        if prec < 64 {
            return Err(Error::InvalidParameter(format!("precision_bits {prec} < 64")));
        }
        let seq = match (&self.phase, &self.modulus) {
            (PhaseSpec::Quadratic { alpha }, ModulusSpec::Factorial) => {
                make_quadratic_phase(parse_alpha(alpha, prec + 96)?, prec)?
            }
            (PhaseSpec::Quadratic { alpha }, ModulusSpec::Theorem5 { s_h }) => {
                make_theorem5(*s_h, parse_alpha(alpha, prec + 96)?, prec)?
            }
            (PhaseSpec::Rational { p, q }, ModulusSpec::Factorial) => {
                make_rational_phase(*p, *q, prec)?
            }
            (PhaseSpec::PsiExp { c, lambda }, ModulusSpec::Factorial) => {
                make_psi_phase(c, lambda, prec)?
            }
            (PhaseSpec::Hardy { s_im, a }, ModulusSpec::Factorial) => {
                make_hardy(num_complex::Complex64::new(0.0, *s_im), *a, prec)?
            }
            (PhaseSpec::Explicit { phases }, ModulusSpec::Factorial) => {
                make_explicit_phase(phases, prec)?
            }
            (phase, modulus) => {
                return Err(Error::InvalidParameter(format!(
                    "unsupported phase/modulus combination: {phase:?} with {modulus:?}"
                )))
            }
        };
        Ok(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn quadratic_frac_sqrt2_n5() {
        // frac(25 sqrt(2)), independently computed to 20 digits
        let alpha = hp::alpha_sqrt2(256);
        let f = quadratic_frac(&alpha, 5);
        close(f.to_f64(), 0.35533905932737622004, 1e-15);
    }

    #[test]
    fn quadratic_coefficient_n5() {
        // e^{2 pi i frac(25 sqrt 2)} / 5!, frozen reference value
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let c = seq.coefficient(5);
        close(c.real().to_f64(), -0.00512157488433548923097, 1e-18);
        close(c.imag().to_f64(), 0.00657372916605090786196, 1e-18);
    }

    #[test]
    fn rational_periods_and_values() {
        let half = make_rational_phase(1, 2, 128).unwrap();
        assert_eq!(half.phase_rule().period, Some(2));
        // a_n = (-1)^n / n!
        for n in 0..8u64 {
            let c = half.coefficient(n);
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 } / (1..=n).product::<u64>().max(1) as f64;
            close(c.real().to_f64(), expect, 1e-15);
            close(c.imag().to_f64(), 0.0, 1e-25);
        }
        let quarter = make_rational_phase(1, 4, 128).unwrap();
        assert_eq!(quarter.phase_rule().period, Some(2));
        let c1 = quarter.coefficient(1);
        close(c1.real().to_f64(), 0.0, 1e-25);
        close(c1.imag().to_f64(), 1.0, 1e-25);
        let whole = make_rational_phase(1, 1, 128).unwrap();
        assert_eq!(whole.phase_rule().period, Some(1));
    }

    #[test]
    fn psi_phase_a2() {
        // phase(2) = 2 e^{-2} - e^{-4}; a_2 = e^{i phase}/2, frozen value
        let seq = make_psi_phase(&[2.0, -1.0], &[1.0, 2.0], 128).unwrap();
        let c = seq.coefficient(2);
        close(c.real().to_f64(), 0.4841635586006029, 1e-14);
        close(c.imag().to_f64(), 0.1248424948613272, 1e-14);
    }

    #[test]
    fn hardy_vanishes_at_zero_and_unit_modulus() {
        let seq = make_hardy(num_complex::Complex64::new(0.0, 1.0), 1.0, 128).unwrap();
        assert!(seq.phase_rule().vanishes_at(0));
        let c3 = seq.coefficient(3);
        // |a_3| = 1/3!
        let m = hp::abs_f64(&c3);
        close(m, 1.0 / 6.0, 1e-15);
        // arg a_3 = ln 4
        close(c3.imag().to_f64() / c3.real().to_f64(), (4.0f64).ln().tan(), 1e-10);
    }

    #[test]
    fn hardy_rejects_nonimaginary_s() {
        assert!(make_hardy(num_complex::Complex64::new(0.5, 1.0), 1.0, 128).is_err());
        assert!(make_hardy(num_complex::Complex64::new(0.0, 1.0), 0.0, 128).is_err());
    }

    #[test]
    fn theorem5_prefix_products() {
        // c_0..c_3 = 1, 1, 1/2, 3/16 for s_h = 1/2
        let seq = make_theorem5(0.5, hp::alpha_sqrt2(256), 128).unwrap();
        let expect = [1.0, 1.0, 0.5, 3.0 / 16.0];
        for (n, &e) in expect.iter().enumerate() {
            close(seq.modulus_float(n as u64, 96).to_f64(), e, 1e-20);
            close(seq.log_coeff_modulus(n as u64), e.ln(), 1e-9);
        }
        assert!((seq.rho() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn theorem5_order_fit_at_1e5() {
        // -ln c_n / (n ln n) at n = 1e5 approaches s_h = 1/2 (frozen: 0.50628)
        let seq = make_theorem5(0.5, hp::alpha_sqrt2(256), 128).unwrap();
        let n = 100_000u64;
        let v = -seq.log_coeff_modulus(n) / (n as f64 * (n as f64).ln());
        close(v, 0.50628, 2e-4);
        assert!(v > 0.475 && v < 0.525);
    }

    #[test]
    fn parseval_m2_exponential() {
        // m_2(1, e^z) = sqrt(I_0(2)), frozen from the Bessel series
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let p = seq.parseval_m2(1.0, 1e-12).unwrap();
        close(p.m2, 1.50982956069089708, 1e-10);
        assert!(p.tail_rel <= 1e-12);
    }

    #[test]
    fn parseval_m2_phase_independent() {
        // m_2 depends only on |a_n|: quadratic and rational families agree
        let a = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let b = make_rational_phase(1, 2, 128).unwrap();
        let pa = a.parseval_m2(10.0, 1e-12).unwrap();
        let pb = b.parseval_m2(10.0, 1e-12).unwrap();
        close(pa.log_m2, pb.log_m2, 1e-10);
    }

    #[test]
    fn combine_q_interleaves() {
        let f1 = make_rational_phase(0, 1, 128).unwrap(); // e^z
        let f2 = make_rational_phase(1, 2, 128).unwrap(); // e^{-z}
        let g = combine_q(&f1, &f2, 0.0, 0.0).unwrap();
        for n in 0..6u64 {
            let expect = g.modulus_float(n, 64).to_f64();
            let c = g.coefficient(n);
            let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
            close(c.real().to_f64(), sign * expect, 1e-15);
        }
        // unit-modulus closure: |a_n| n! = 1
        for n in 0..6u64 {
            let c = g.coefficient(n);
            close(hp::abs_f64(&c) * (1..=n).product::<u64>().max(1) as f64, 1.0, 1e-12);
        }
    }

    #[test]
    fn combine_q_rejects_nonfactorial() {
        let f1 = make_rational_phase(0, 1, 128).unwrap();
        let t5 = make_theorem5(0.5, hp::alpha_sqrt2(256), 128).unwrap();
        assert!(combine_q(&f1, &t5, 0.0, 0.0).is_err());
    }

    #[test]
    fn spec_round_trip_and_build() {
        let json = r#"{
            "phase": {"kind": "quadratic", "alpha": "sqrt2"},
            "modulus": {"kind": "factorial"},
            "precision_bits": 128
        }"#;
        let spec: SequenceSpec = serde_json::from_str(json).unwrap();
        let seq = spec.build().unwrap();
        let direct = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let a = seq.coefficient(7);
        let b = direct.coefficient(7);
        close(a.real().to_f64(), b.real().to_f64(), 1e-18);
        close(a.imag().to_f64(), b.imag().to_f64(), 1e-18);
    }

    #[test]
    fn parse_alpha_tokens() {
        close(parse_alpha("sqrt2", 128).unwrap().to_f64(), 2.0f64.sqrt(), 1e-15);
        close(parse_alpha("golden", 128).unwrap().to_f64(), (5.0f64.sqrt() - 1.0) / 2.0, 1e-15);
        close(parse_alpha("pi", 128).unwrap().to_f64(), std::f64::consts::PI - 3.0, 1e-15);
        close(parse_alpha("1/3", 128).unwrap().to_f64(), 1.0 / 3.0, 1e-15);
        close(parse_alpha("0.25", 128).unwrap().to_f64(), 0.25, 1e-15);
        assert!(parse_alpha("1/0", 128).is_err());
        assert!(parse_alpha("zzz", 128).is_err());
    }

    #[test]
    fn majorant_dominates_coefficients() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        for n in 0..40u64 {
            let lm = hp::abs_f64(&seq.coefficient(n)).ln();
            assert!(seq.log_majorant(n) >= lm, "n = {n}");
        }
    }

    #[test]
    fn unit_modulus_disc_guard() {
        let mut spec = SequenceSpec {
            phase: PhaseSpec::Rational { p: 1, q: 2 },
            modulus: ModulusSpec::Unit,
            precision_bits: 128,
        };
        // unit modulus is only exposed for the disc function path; the
        // factorial-series builder rejects it
        assert!(spec.build().is_err());
        spec.modulus = ModulusSpec::Factorial;
        assert!(spec.build().is_ok());
    }
}
