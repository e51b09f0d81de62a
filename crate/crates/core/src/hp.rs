//! Extended-precision scalar helpers.
//!
//! All heavy arithmetic runs on MPFR-backed `rug::Float` / `rug::Complex`.
//! Every operation on those types carries relative error at most `2^{1-P}`
//! at precision `P` bits; the evaluation layer budgets precision so that
//! accumulated rounding stays inside the reported bound.

use rug::float::Constant;
pub use rug::{Complex, Float};

/// Default working precision in bits when the caller does not override it.
pub const DEFAULT_PRECISION_BITS: u32 = 192;

pub fn float(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn complex(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec + 2) * 2u32
}

/// sqrt(2) at the requested precision.
pub fn alpha_sqrt2(prec: u32) -> Float {
    Float::with_val(prec, 2).sqrt()
}

/// (sqrt(5) - 1) / 2 at the requested precision.
pub fn alpha_golden(prec: u32) -> Float {
    (Float::with_val(prec + 8, 5).sqrt() - 1u32) / 2u32
}

/// pi mod 1 at the requested precision.
pub fn alpha_pi_frac(prec: u32) -> Float {
    pi(prec + 8) - 3u32
}

/// e^{i * angle} at the precision of `angle`.
pub fn unit_from_angle(angle: &Float) -> Complex {
    let prec = angle.prec();
    let (sin, cos) = angle.clone().sin_cos(Float::new(prec));
    Complex::with_val(prec, (cos, sin))
}

/// e^{2 pi i frac} where `frac` is a phase in turns.
pub fn unit_from_frac(frac: &Float) -> Complex {
    let prec = frac.prec();
    let angle = Float::with_val(prec + 8, frac * two_pi(prec + 8));
    unit_from_angle(&angle)
}

/// z = r e^{i theta} with `theta` carried at full precision, never by
/// repeated rotation.
pub fn point_polar(prec: u32, r: &Float, theta: &Float) -> Complex {
    let u = unit_from_angle(&Float::with_val(prec, theta));
    u * Float::with_val(prec, r)
}

/// |z| rounded toward +inf, as f64.
pub fn abs_upper(z: &Complex) -> f64 {
    let a = z.clone().abs().into_real_imag().0;
    let v = a.to_f64();
    // one-ulp slack covers the final f64 conversion
    v * (1.0 + 1e-14) + f64::MIN_POSITIVE
}

/// |z| as plain f64.
pub fn abs_f64(z: &Complex) -> f64 {
    z.clone().abs().into_real_imag().0.to_f64()
}

/// log|z| as f64, -inf for zero.
pub fn log_abs_f64(z: &Complex) -> f64 {
    let a = z.clone().abs().into_real_imag().0;
    if a.is_zero() {
        f64::NEG_INFINITY
    } else {
        a.ln().to_f64()
    }
}

pub fn to_c64(z: &Complex) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// ln Gamma(x) for positive real x, via MPFR.
pub fn ln_gamma_f64(x: f64) -> f64 {
    Float::with_val(64, x).ln_gamma().to_f64()
}

/// ln(n!) as f64, from a growable cumulative table (absolute error well
/// below 1e-9, which callers cover with slack).
pub fn ln_factorial(n: u64) -> f64 {
    use std::sync::RwLock;
    static TABLE: RwLock<Vec<f64>> = RwLock::new(Vec::new());
    {
        let t = TABLE.read().unwrap();
        if (n as usize) < t.len() {
            return t[n as usize];
        }
    }
    let mut t = TABLE.write().unwrap();
    if t.is_empty() {
        t.push(0.0);
    }
    while t.len() <= n as usize {
        let k = t.len() as f64;
        let prev = *t.last().unwrap();
        t.push(prev + k.ln());
    }
    t[n as usize]
}
