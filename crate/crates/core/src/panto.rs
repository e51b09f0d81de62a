//! Functional-equation and transform machinery: pantograph identities,
//! rational-phase trigonometric-sum reduction, Hadamard composition by
//! contour quadrature, and the vertical-line integral representation for
//! the psi-exponential families.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::coeffs::{CoefficientSequence, ModulusKind, PhaseKind};
use crate::error::{Error, Result};
use crate::eval::{self, EvalResult};
use crate::hp;

/// Extract the quadratic-phase alpha of a sequence as a Float (rational
/// phases p/q are quadratic with alpha = p/q).
fn phase_alpha(seq: &CoefficientSequence, prec: u32) -> Result<Float> {
    match &seq.phase_rule().kind {
        PhaseKind::Quadratic { alpha } => Ok(Float::with_val(prec.max(alpha.prec()), alpha)),
        PhaseKind::Rational { p, q } => {
            Ok(Float::with_val(prec, Rational::from((*p, *q))))
        }
        _ => Err(Error::FamilyMismatch(
            "pantograph identity requires a quadratic or rational phase".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PantographCheck {
    /// |f'(z) - e^{2 pi i alpha} f(z e^{i beta})|, beta = 4 pi alpha.
    pub residual: f64,
    /// Sum of both evaluations' certified bounds plus rotation slack; the
    /// identity holds iff residual <= bound.
    pub bound: f64,
}

/// Residual of the pantograph identity f'(z) = e^{2 pi i alpha} f(z e^{i beta}).
/// The identity is exact for every quadratic-phase factorial family, so the
/// residual doubles as an end-to-end evaluator cross-check.
pub fn pantograph_residual(
    seq: &CoefficientSequence,
    z: &Complex,
    eps: f64,
) -> Result<PantographCheck> {
    let prec = z.prec().0.max(seq.precision()) + 32;
    let alpha = phase_alpha(seq, prec)?;
    // q = e^{2 pi i alpha}; rotation e^{i beta} = e^{2 pi i (2 alpha)}
    let q = hp::unit_from_frac(&alpha);
    let two_alpha = Float::with_val(alpha.prec(), &alpha * 2u32);
    let rot = hp::unit_from_frac(&two_alpha);
    let zr = Complex::with_val(prec, z * rot);

    let lhs = eval::eval_fprime(seq, z, eps)?;
    let rhs = eval::eval_f(seq, &zr, eps)?;
    let rhs_val = Complex::with_val(prec, &rhs.value * &q);
    let diff = Complex::with_val(prec, &lhs.value - &rhs_val);
    let residual = hp::abs_f64(&diff);
    // slack for the rotation and the unit multiplication
    let slack = 8.0 * (2.0f64).powi(1 - prec.min(300) as i32)
        * (hp::abs_f64(&lhs.value) + hp::abs_f64(&rhs_val) + 1.0);
    Ok(PantographCheck { residual, bound: lhs.total_bound() + rhs.total_bound() + slack })
}

// ---------------------------------------------------------------------------
// Rational-phase trigonometric sums
// ---------------------------------------------------------------------------

/// Finite sum Sum_k c_k e^{b_k z} with every frequency b_k a root of unity.
#[derive(Clone, Debug)]
pub struct TrigSum {
    /// (c_k, b_k) pairs; b_k = omega^k for omega = e^{2 pi i / period}.
    pub terms: Vec<(Complex, Complex)>,
    pub period: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Reduce the rational-phase series to a trigonometric sum: with Q the
/// minimal period of n -> e^{2 pi i n^2 p / q} and omega = e^{2 pi i / Q},
/// the DFT coefficients chat_k = (1/Q) Sum_j a_j omega^{-kj} give
/// f(z) = Sum_k chat_k e^{omega^k z}. Terms below 2^{-prec/2} are dropped
/// only after an inverse-DFT round-trip confirms the reconstruction.
pub fn trig_sum_reduction(p: i64, q: u64, prec: u32) -> Result<TrigSum> {
    if q == 0 {
        return Err(Error::InvalidParameter("trig sum: q must be >= 1".into()));
    }
    if gcd(p.unsigned_abs(), q) != 1 {
        return Err(Error::InvalidParameter(format!(
            "trig sum requires gcd(p, q) = 1, got p = {p}, q = {q}"
        )));
    }
    let seq = crate::coeffs::make_rational_phase(p, q, prec)?;
    let big_q = seq.phase_rule().period.expect("rational phases are periodic");
    let wp = prec + 32;
    let phases: Vec<Complex> = (0..big_q)
        .map(|j| hp::unit_from_angle(&seq.phase_rule().angle(j, wp)))
        .collect();
    let omega_frac = |num: i64| -> Float {
        Float::with_val(wp, Rational::from((num.rem_euclid(big_q as i64), big_q)))
    };
    let mut terms = Vec::new();
    let mut all = Vec::new();
    for k in 0..big_q {
        let mut acc = Complex::new(wp);
        for (j, aj) in phases.iter().enumerate() {
            let w = hp::unit_from_frac(&omega_frac(-(k as i64) * j as i64));
            acc += Complex::with_val(wp, aj * w);
        }
        let c = Complex::with_val(wp, acc / Float::with_val(wp, big_q));
        all.push(c.clone());
        if hp::abs_f64(&c) >= (2.0f64).powi(-((prec / 2) as i32)) {
            let b = hp::unit_from_frac(&omega_frac(k as i64));
            terms.push((c, b));
        }
    }
    // round-trip confirmation: the inverse DFT of the full coefficient set
    // must reproduce the phases, which certifies the dropped terms as zero
    let tol = (2.0f64).powi(-((prec / 2) as i32)) * big_q as f64;
    for (j, aj) in phases.iter().enumerate() {
        let mut rec = Complex::new(wp);
        for (k, c) in all.iter().enumerate() {
            let w = hp::unit_from_frac(&omega_frac(k as i64 * j as i64));
            rec += Complex::with_val(wp, c * w);
        }
        let d = Complex::with_val(wp, rec - aj);
        if hp::abs_f64(&d) > tol {
            return Err(Error::NonConvergence(format!(
                "trig sum round-trip failed at index {j}: deviation {}",
                hp::abs_f64(&d)
            )));
        }
    }
    Ok(TrigSum { terms, period: big_q })
}

/// Sum_k c_k e^{b_k z} at the precision of z.
pub fn eval_trig_sum(ts: &TrigSum, z: &Complex) -> Complex {
    let prec = z.prec().0 + 16;
    let mut acc = Complex::new(prec);
    for (c, b) in &ts.terms {
        let e = Complex::with_val(prec, b * z).exp();
        acc += Complex::with_val(prec, c * e);
    }
    Complex::with_val(z.prec().0, acc)
}

// ---------------------------------------------------------------------------
// Hadamard composition
// ---------------------------------------------------------------------------

/// Origin-centered quadrature circle for the composition integral.
#[derive(Clone, Copy, Debug)]
pub struct ContourSpec {
    /// Circle radius |zeta| = radius; must satisfy |z| < radius <= 2|z|.
    pub radius: f64,
    /// Initial trapezoidal node count; a power of two >= 64.
    pub nodes: u32,
}

pub const MAX_CONTOUR_NODES: u32 = 1 << 16;

impl ContourSpec {
    pub fn validate(&self, z_abs: f64) -> Result<()> {
        if !(self.nodes >= 64 && self.nodes.is_power_of_two()) {
            return Err(Error::InvalidParameter(format!(
                "contour nodes {} must be a power of two >= 64",
                self.nodes
            )));
        }
        if !(z_abs > 0.0) {
            return Err(Error::InvalidParameter("contour: z must be nonzero".into()));
        }
        let s = self.radius / z_abs;
        if !(s > 1.0 && s <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "contour radius ratio s = {s} outside (1, 2]"
            )));
        }
        Ok(())
    }

    /// Circle |zeta| = s |z| with the default 64-node start.
    pub fn around(z_abs: f64, s: f64) -> ContourSpec {
        ContourSpec { radius: s * z_abs, nodes: 64 }
    }
}

/// H(w) = (1 - w)^{-s_h} on the principal branch.
fn h_kernel(w: &Complex, s_h: f64, prec: u32) -> Complex {
    let one_minus = Complex::with_val(prec, 1.0) - Complex::with_val(prec, w);
    one_minus.pow(Float::with_val(prec, -s_h))
}

/// Hadamard composition (f * H)(z) = (1/2 pi i) oint f(zeta) H(z/zeta)
/// d zeta / zeta over the circle |zeta| = s|z|, by trapezoidal quadrature
/// with node doubling until successive values differ by less than `tol`.
/// On the circle |z/zeta| = 1/s < 1, so the disc expansion of H converges
/// and termwise integration gives Sum a_n b_n z^n.
pub fn hadamard_compose(
    seq: &CoefficientSequence,
    s_h: f64,
    z: &Complex,
    contour: &ContourSpec,
    tol: f64,
) -> Result<EvalResult> {
    if !(s_h > 0.0 && s_h <= 1.0) {
        return Err(Error::InvalidParameter(format!("composition exponent s_h = {s_h} outside (0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("composition tolerance must be > 0".into()));
    }
    let z_abs = hp::abs_f64(z);
    contour.validate(z_abs)?;
    let eps_f = (tol / 100.0).min(1e-12);
    let (_, prec) = eval::work_parameters(seq, contour.radius, eps_f)?;
    let prec = prec + 16;
    let r = Float::with_val(prec, contour.radius);
    let zw = Complex::with_val(prec, z);

    let quadrature = |n: u32| -> Result<Complex> {
        let mut acc = Complex::new(prec);
        for j in 0..n {
            let theta = eval::theta_at(prec, j as usize, n as usize);
            let zeta = hp::point_polar(prec, &r, &theta);
            let f = eval::eval_f(seq, &zeta, eps_f)?;
            let w = Complex::with_val(prec, &zw / &zeta);
            let h = h_kernel(&w, s_h, prec);
            acc += Complex::with_val(prec, f.value * h);
        }
        Ok(acc / Float::with_val(prec, n))
    };

    let mut n = contour.nodes;
    let mut prev = quadrature(n)?;
    loop {
        n *= 2;
        if n > MAX_CONTOUR_NODES {
            return Err(Error::NonConvergence(format!(
                "composition quadrature did not reach {tol} within {MAX_CONTOUR_NODES} nodes"
            )));
        }
        let cur = quadrature(n)?;
        let diff = hp::abs_f64(&Complex::with_val(prec, &cur - &prev));
        if diff < tol {
            let rounding = 4.0 * n as f64 * (2.0f64).powi(1 - prec.min(300) as i32)
                * seq.log_majorant_sum(contour.radius).min(700.0).exp();
            return Ok(EvalResult {
                value: cur,
                truncation_bound: diff,
                rounding_bound: rounding,
                terms_used: n as u64,
                precision_bits: prec,
            });
        }
        prev = cur;
    }
}

/// Direct-series Hadamard composition Sum a_n b_n z^n with b_n the Taylor
/// coefficients of (1 - w)^{-s_h}. Since b_n in (0, 1] for s_h in (0, 1],
/// the majorant tail of the underlying series also bounds this one.
pub fn hadamard_direct(
    seq: &CoefficientSequence,
    s_h: f64,
    z: &Complex,
    eps: f64,
) -> Result<EvalResult> {
    if !(s_h > 0.0 && s_h <= 1.0) {
        return Err(Error::InvalidParameter(format!("composition exponent s_h = {s_h} outside (0, 1]")));
    }
    let r = hp::abs_upper(z);
    let (n_last, prec) = eval::work_parameters(seq, r, eps)?;
    let zw = Complex::with_val(prec, z);
    let mut pow = Complex::with_val(prec, 1);
    let mut acc = Complex::new(prec);
    let mut b = Float::with_val(prec, 1);
    let mut majorant = 0.0f64;
    let lr = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    for n in 0..=n_last {
        let term = Complex::with_val(prec, seq.coefficient(n) * &b);
        acc += Complex::with_val(prec, term * &pow);
        pow = Complex::with_val(prec, &pow * &zw);
        // b_{n+1} = b_n (n + s_h) / (n + 1)
        b *= Float::with_val(prec, n as f64 + s_h);
        b /= Float::with_val(prec, (n + 1) as f64);
        let lt = seq.log_majorant(n) + if n == 0 { 0.0 } else { n as f64 * lr };
        if lt.is_finite() {
            majorant += lt.exp();
        }
    }
    let p_eff = prec.min(seq.precision());
    Ok(EvalResult {
        value: acc,
        truncation_bound: eps,
        rounding_bound: 12.0 * (n_last + 2) as f64 * (2.0f64).powi(1 - p_eff as i32) * majorant,
        terms_used: n_last + 1,
        precision_bits: prec,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct Funk2Report {
    /// |f(z) - 1 - z e^{2 pi i alpha} (f * H)(z e^{i beta})| with the
    /// composition computed by the direct Hadamard-product series.
    pub residual_direct: f64,
    pub bound_direct: f64,
    /// Same residual with the contour-quadrature composition.
    pub residual_contour: f64,
    /// Quadrature tolerance used for the contour path.
    pub contour_tol: f64,
    /// Distance between the two composition values.
    pub path_agreement: f64,
}

/// Residual of the order-rho functional equation
/// f(z) = 1 + z e^{2 pi i alpha} (f * H)(z e^{i beta}), computed by both
/// composition paths.
pub fn funk2_residual(seq: &CoefficientSequence, z: &Complex, eps: f64) -> Result<Funk2Report> {
    let s_h = match seq.modulus_rule().kind {
        ModulusKind::Theorem5 { s_h } => s_h,
        _ => {
            return Err(Error::FamilyMismatch(
                "funk2 residual requires the prefix-product modulus family".into(),
            ))
        }
    };
    let prec = z.prec().0.max(seq.precision()) + 32;
    let alpha = phase_alpha(seq, prec)?;
    let q = hp::unit_from_frac(&alpha);
    let two_alpha = Float::with_val(alpha.prec(), &alpha * 2u32);
    let rot = hp::unit_from_frac(&two_alpha);
    let w = Complex::with_val(prec, z * rot);

    let lhs = eval::eval_f(seq, z, eps)?;
    let comp_direct = hadamard_direct(seq, s_h, &w, eps)?;
    let rhs_of = |comp: &Complex| -> Complex {
        let t = Complex::with_val(prec, comp * &q);
        Complex::with_val(prec, Complex::with_val(prec, &t * z) + Float::with_val(prec, 1))
    };
    let rhs_d = rhs_of(&comp_direct.value);
    let resid = |rhs: &Complex| hp::abs_f64(&Complex::with_val(prec, &lhs.value - rhs));
    let z_abs = hp::abs_f64(z);
    let slack = 16.0 * (2.0f64).powi(1 - prec.min(300) as i32) * (hp::abs_f64(&lhs.value) + 1.0);
    let bound_direct =
        lhs.total_bound() + z_abs * comp_direct.total_bound() + slack;

    let contour_tol = (eps * 1e4).clamp(1e-14, 1e-8);
    let (residual_contour, path_agreement) = if z_abs > 0.0 {
        let comp_contour =
            hadamard_compose(seq, s_h, &w, &ContourSpec::around(hp::abs_f64(&w), 1.5), contour_tol)?;
        let rhs_c = rhs_of(&comp_contour.value);
        let agree = hp::abs_f64(&Complex::with_val(prec, &comp_contour.value - &comp_direct.value));
        (resid(&rhs_c), agree)
    } else {
        (resid(&rhs_d), 0.0)
    };
    Ok(Funk2Report {
        residual_direct: resid(&rhs_d),
        bound_direct,
        residual_contour,
        contour_tol,
        path_agreement,
    })
}

// ---------------------------------------------------------------------------
// Vertical-line integral representation (validation oracle, f64 path)
// ---------------------------------------------------------------------------

/// ln Gamma(w), principal branch, by the Stirling series after shifting the
/// argument until Re >= 8. Double precision only.
fn ln_gamma_complex(mut w: Complex64) -> Complex64 {
    // Bernoulli-number coefficients B_{2n} / (2n (2n-1))
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 8.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * std::f64::consts::PI).ln();
    let w2 = w * w;
    let mut p = w.inv();
    for c in COEF {
        s += c * p;
        p /= w2;
    }
    s - shift
}

/// psi(zeta) = Sum c_k e^{-lambda_k zeta} extended to complex zeta.
fn psi_complex(c: &[f64], lambda: &[f64], zeta: Complex64) -> Complex64 {
    c.iter().zip(lambda).map(|(&ck, &lk)| ck * (-lk * zeta).exp()).sum()
}

/// f(-z) for a psi-exponential family by the vertical-line integral
/// (1/2 pi i) int_{Re zeta = -A} e^{i psi(zeta)} z^zeta Gamma(-zeta) d zeta,
/// valid for |arg z| < pi/2. Double-precision validation path: requested
/// tolerances below 1e-8 are rejected.
pub fn mellin_barnes_eval(
    seq: &CoefficientSequence,
    z: Complex64,
    a: f64,
    tol: f64,
) -> Result<Complex64> {
    let (c, lambda): (Vec<f64>, Vec<f64>) = match &seq.phase_rule().kind {
        PhaseKind::PsiExp { coeff, rate } => (
            coeff.iter().map(|x| x.to_f64()).collect(),
            rate.iter().map(|x| x.to_f64()).collect(),
        ),
        _ => {
            return Err(Error::FamilyMismatch(
                "the line-integral representation requires a psi-exponential phase".into(),
            ))
        }
    };
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("line offset A = {a} must be > 0")));
    }
    if tol < 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} below the 1e-8 floor of the double-precision path"
        )));
    }
    let phi = z.arg();
    if phi.abs() >= std::f64::consts::FRAC_PI_2 - 0.1 {
        return Err(Error::InvalidParameter(format!(
            "|arg z| = {} outside the decay sector (< pi/2 - 0.1)",
            phi.abs()
        )));
    }
    // integrand modulus decays like e^{(-pi/2 + |arg z|) |t|}
    let gamma_rate = std::f64::consts::FRAC_PI_2 - phi.abs();
    let psi_bound: f64 = c.iter().zip(&lambda).map(|(&ck, &lk)| ck.abs() * (lk * a).exp()).sum();
    let t_max = ((1.0 / tol).ln() + a * z.norm().ln().abs() + psi_bound + 30.0) / gamma_rate;

    let ln_z = z.ln();
    let integrand = |t: f64| -> Complex64 {
        let zeta = Complex64::new(-a, t);
        let i = Complex64::new(0.0, 1.0);
        let lg = ln_gamma_complex(-zeta);
        (i * psi_complex(&c, &lambda, zeta) + zeta * ln_z + lg).exp()
    };
    // composite Simpson with interval doubling
    let simpson = |n: usize| -> Complex64 {
        let h = 2.0 * t_max / n as f64;
        let mut s = integrand(-t_max) + integrand(t_max);
        for j in 1..n {
            let t = -t_max + j as f64 * h;
            let wgt = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += wgt * integrand(t);
        }
        s * (h / 3.0) / (2.0 * std::f64::consts::PI)
    };
    let mut n = 256usize;
    let mut prev = simpson(n);
    loop {
        n *= 2;
        if n > (1 << 20) {
            return Err(Error::NonConvergence(format!(
                "line-integral quadrature did not reach {tol}"
            )));
        }
        let cur = simpson(n);
        if (cur - prev).norm() < tol / 2.0 {
            return Ok(cur);
        }
        prev = cur;
    }
}

// ---------------------------------------------------------------------------
// Composition estimate check
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct EstimateReport {
    /// |(f * H)(z)| by the direct series.
    pub lhs: f64,
    /// K = max |H| on the circle |zeta - 1| = r/(1-r), sampled.
    pub k: f64,
    /// max |f| on |zeta - z| = r|z|, sampled at 256 boundary points.
    pub max_f: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Check the composition estimate |(f * H)(z)| <= K max_{|zeta-z|<=r|z|} |f|
/// with K = max_{|zeta-1|=r/(1-r)} |H(zeta)|; the inner max is realized on
/// the boundary circle by the maximum principle and sampled at 256 points.
pub fn hadamard_estimate_check(
    seq: &CoefficientSequence,
    s_h: f64,
    z: &Complex,
    r_param: f64,
    eps: f64,
) -> Result<EstimateReport> {
    if !(r_param > 0.0 && r_param < 1.0) {
        return Err(Error::InvalidParameter(format!("estimate radius r = {r_param} outside (0,1)")));
    }
    let prec = z.prec().0.max(seq.precision()) + 16;
    let lhs = hp::abs_f64(&hadamard_direct(seq, s_h, z, eps)?.value);

    const SAMPLES: usize = 256;
    let rr = r_param / (1.0 - r_param);
    let mut k = 0.0f64;
    for j in 0..SAMPLES {
        let theta = eval::theta_at(prec, j, SAMPLES);
        let zeta = Complex::with_val(prec, Float::with_val(prec, 1))
            + hp::point_polar(prec, &Float::with_val(prec, rr), &theta);
        k = k.max(hp::abs_f64(&h_kernel(&zeta, s_h, prec)));
    }

    let ring = r_param * hp::abs_f64(z);
    let mut max_f = 0.0f64;
    for j in 0..SAMPLES {
        let theta = eval::theta_at(prec, j, SAMPLES);
        let zeta = Complex::with_val(prec, z)
            + hp::point_polar(prec, &Float::with_val(prec, ring), &theta);
        let out = eval::eval_f(seq, &zeta, eps)?;
        max_f = max_f.max(hp::abs_f64(&out.value) + out.total_bound());
    }
    let rhs = k * max_f;
    Ok(EstimateReport { lhs, k, max_f, rhs, pass: lhs <= rhs * (1.0 + 1e-9) + eps })
}
