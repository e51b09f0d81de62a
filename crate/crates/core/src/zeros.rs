//! Argument-principle zero counting in annular sectors, certified zero
//! location, and zero statistics (angular density, reciprocal sums,
//! separation reports).
//!
//! Winding numbers are computed by adaptive boundary sampling: every step
//! must pass the |delta arg f| < pi/2 chord test with |f| certified above
//! its evaluation bound, so the snapped integer is rigorous.

use rug::{Complex, Float};
use serde::Serialize;

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::eval;
use crate::hp;

/// Annular sector 0 <= r_lo < r_hi, theta_lo < theta_hi <= theta_lo + 2 pi.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SectorBox {
    pub r_lo: f64,
    pub r_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl SectorBox {
    pub fn disc(r: f64) -> SectorBox {
        SectorBox { r_lo: 0.0, r_hi: r, theta_lo: -std::f64::consts::PI, theta_hi: std::f64::consts::PI }
    }

    pub fn annulus(r_lo: f64, r_hi: f64) -> SectorBox {
        SectorBox { r_lo, r_hi, theta_lo: -std::f64::consts::PI, theta_hi: std::f64::consts::PI }
    }

    pub fn validate(&self) -> Result<()> {
        let span = self.theta_hi - self.theta_lo;
        if !(self.r_lo >= 0.0 && self.r_hi > self.r_lo && self.r_hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sector radii ({}, {}) invalid",
                self.r_lo, self.r_hi
            )));
        }
        if !(span > 0.0 && span <= 2.0 * std::f64::consts::PI + 1e-12) {
            return Err(Error::InvalidParameter(format!("sector angle span {span} invalid")));
        }
        Ok(())
    }

    pub fn is_full_circle(&self) -> bool {
        (self.theta_hi - self.theta_lo - 2.0 * std::f64::consts::PI).abs() < 1e-12
    }

    fn diameter(&self) -> f64 {
        (self.r_hi - self.r_lo).max(self.r_hi * (self.theta_hi - self.theta_lo))
    }

    fn center(&self) -> (f64, f64) {
        (0.5 * (self.r_lo + self.r_hi), 0.5 * (self.theta_lo + self.theta_hi))
    }
}

/// One boundary piece of a sector (arc at fixed radius or radial segment).
#[derive(Clone, Copy, Debug)]
enum Segment {
    /// Radius r, angle from th0 to th1 (orientation by sign of th1 - th0).
    Arc { r: f64, th0: f64, th1: f64 },
    /// Fixed angle, radius from r0 to r1.
    Radial { theta: f64, r0: f64, r1: f64 },
}

impl Segment {
    fn point(&self, t: f64, prec: u32) -> Complex {
        match *self {
            Segment::Arc { r, th0, th1 } => {
                let theta = Float::with_val(prec, th0 + (th1 - th0) * t);
                hp::point_polar(prec, &Float::with_val(prec, r), &theta)
            }
            Segment::Radial { theta, r0, r1 } => {
                let r = Float::with_val(prec, r0 + (r1 - r0) * t);
                hp::point_polar(prec, &r, &Float::with_val(prec, theta))
            }
        }
    }

    fn radius_at(&self, t: f64) -> f64 {
        match *self {
            Segment::Arc { r, .. } => r,
            Segment::Radial { r0, r1, .. } => r0 + (r1 - r0) * t,
        }
    }

    /// Rough length, used only to pick the initial sample count.
    fn length(&self) -> f64 {
        match *self {
            Segment::Arc { r, th0, th1 } => r * (th1 - th0).abs(),
            Segment::Radial { r0, r1, .. } => (r1 - r0).abs(),
        }
    }
}

fn boundary(b: &SectorBox) -> Vec<Segment> {
    let mut segs = Vec::new();
    segs.push(Segment::Arc { r: b.r_hi, th0: b.theta_lo, th1: b.theta_hi });
    if b.is_full_circle() {
        if b.r_lo > 0.0 {
            segs.push(Segment::Arc { r: b.r_lo, th0: b.theta_hi, th1: b.theta_lo });
        }
    } else {
        if b.r_lo > 0.0 {
            segs.push(Segment::Radial { theta: b.theta_hi, r0: b.r_hi, r1: b.r_lo });
            segs.push(Segment::Arc { r: b.r_lo, th0: b.theta_hi, th1: b.theta_lo });
            segs.push(Segment::Radial { theta: b.theta_lo, r0: b.r_lo, r1: b.r_hi });
        } else {
            segs.push(Segment::Radial { theta: b.theta_hi, r0: b.r_hi, r1: 0.0 });
            segs.push(Segment::Radial { theta: b.theta_lo, r0: 0.0, r1: b.r_hi });
        }
    }
    segs
}

const MAX_REFINE_DEPTH: u32 = 12;

/// Winding number with its integrality certificate.
#[derive(Clone, Copy, Debug)]
pub struct Winding {
    pub winding: i64,
    /// Distance of the raw boundary integral to the snapped integer; the
    /// certificate requires < 0.25.
    pub snap_distance: f64,
    pub samples: usize,
}

struct BoundaryWalker<'a> {
    seq: &'a CoefficientSequence,
    rel_tol: f64,
    samples: usize,
}

impl<'a> BoundaryWalker<'a> {
    /// Evaluate f at a boundary point; the sample is only usable when |f|
    /// exceeds its certified bound (arg is then well-defined).
    fn sample(&mut self, seg: &Segment, t: f64) -> Result<(f64, f64)> {
        let r = seg.radius_at(t);
        let eps = (self.seq.log_majorant_sum(r).min(700.0)).exp() * self.rel_tol;
        let (_, prec) = eval::work_parameters(self.seq, r, eps)?;
        let z = seg.point(t, prec + 16);
        let out = eval::eval_f(self.seq, &z, eps)?;
        self.samples += 1;
        if out.unresolved() {
            return Err(Error::BoundaryNearZero { t });
        }
        let arg = out.value.clone().arg().into_real_imag().0.to_f64();
        Ok((arg, hp::abs_f64(&out.value)))
    }

    /// Certified arg increment between parameters t0 < t1 on a segment,
    /// splitting until each step passes the chord test.
    fn delta_arg(
        &mut self,
        seg: &Segment,
        t0: f64,
        a0: f64,
        t1: f64,
        a1: f64,
        depth: u32,
    ) -> Result<f64> {
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        if d.abs() < std::f64::consts::FRAC_PI_2 {
            return Ok(d);
        }
        if depth >= MAX_REFINE_DEPTH {
            return Err(Error::BoundaryNearZero { t: 0.5 * (t0 + t1) });
        }
        let tm = 0.5 * (t0 + t1);
        let (am, _) = self.sample(seg, tm)?;
        Ok(self.delta_arg(seg, t0, a0, tm, am, depth + 1)?
            + self.delta_arg(seg, tm, am, t1, a1, depth + 1)?)
    }

    fn walk(&mut self, segs: &[Segment]) -> Result<f64> {
        let mut total = 0.0;
        for seg in segs {
            let n = (4.0 * seg.length()).ceil().max(8.0) as usize;
            let mut prev = self.sample(seg, 0.0)?;
            for k in 1..=n {
                let t = k as f64 / n as f64;
                let cur = self.sample(seg, t)?;
                total += self.delta_arg(seg, (k - 1) as f64 / n as f64, prev.0, t, cur.0, 0)?;
                prev = cur;
            }
        }
        Ok(total)
    }
}

/// Total increment of arg f around the positively-oriented boundary of the
/// box, divided by 2 pi, snapped to the nearest integer. Fails with a
/// boundary-near-zero error when some sample cannot be certified nonzero.
pub fn winding_number(seq: &CoefficientSequence, b: &SectorBox, rel_tol: f64) -> Result<Winding> {
    b.validate()?;
    let mut w = BoundaryWalker { seq, rel_tol, samples: 0 };
    let raw = w.walk(&boundary(b))? / (2.0 * std::f64::consts::PI);
    snap(raw, w.samples)
}

/// Winding of f around the circle |z - center| = radius (used for zero
/// enclosure certificates).
pub fn winding_circle(
    seq: &CoefficientSequence,
    center: &Complex,
    radius: f64,
    rel_tol: f64,
) -> Result<Winding> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("enclosure radius must be > 0".into()));
    }
    let prec = center.prec().0;
    let r_out = hp::abs_f64(center) + radius;
    let eps = (seq.log_majorant_sum(r_out).min(700.0)).exp() * rel_tol;
    let mut samples = 0usize;
    let sample = |j_num: f64, j_den: f64, samples: &mut usize| -> Result<f64> {
        let theta = Float::with_val(prec, 2.0 * std::f64::consts::PI * j_num / j_den);
        let z = Complex::with_val(prec, center)
            + hp::point_polar(prec, &Float::with_val(prec, radius), &theta);
        let out = eval::eval_f(seq, &z, eps)?;
        *samples += 1;
        if out.unresolved() {
            return Err(Error::BoundaryNearZero { t: j_num / j_den });
        }
        Ok(out.value.clone().arg().into_real_imag().0.to_f64())
    };
    // uniform refinement: double the circle sampling until every step
    // passes the chord test
    let mut n = 16usize;
    loop {
        let mut ok = true;
        let mut total = 0.0;
        let mut prev = sample(0.0, 1.0, &mut samples)?;
        for j in 1..=n {
            let a = sample(j as f64, n as f64, &mut samples)?;
            let mut d = a - prev;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            if d.abs() >= std::f64::consts::FRAC_PI_2 {
                ok = false;
                break;
            }
            total += d;
            prev = a;
        }
        if ok {
            return snap(total / (2.0 * std::f64::consts::PI), samples);
        }
        n *= 2;
        if n > 1 << MAX_REFINE_DEPTH {
            return Err(Error::BoundaryNearZero { t: 0.0 });
        }
    }
}

fn snap(raw: f64, samples: usize) -> Result<Winding> {
    let snapped = raw.round();
    let dist = (raw - snapped).abs();
    if dist >= 0.25 {
        return Err(Error::NonConvergence(format!(
            "winding integral {raw} too far from an integer (snap distance {dist})"
        )));
    }
    Ok(Winding { winding: snapped as i64, snap_distance: dist, samples })
}

// ---------------------------------------------------------------------------
// Zero location
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct Zero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
    pub newton_residual: f64,
    pub enclosure_radius: f64,
}

impl Zero {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    pub search_box: SectorBox,
    /// Sub-boxes where subdivision stalled with winding >= 2; never dropped.
    pub unresolved_clusters: Vec<SectorBox>,
    /// True iff the zero multiplicities sum to the search-box winding count
    /// and no cluster is unresolved.
    pub completeness_certificate: bool,
}

impl ZeroSet {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,newton_residual,enclosure_radius\n");
        for z in &self.zeros {
            out.push_str(&format!(
                "{:.17e},{:.17e},{},{:.17e},{:.17e}\n",
                z.re, z.im, z.multiplicity, z.newton_residual, z.enclosure_radius
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Compute a box winding, perturbing the split geometry on boundary-pit
/// contamination.
fn winding_with_retry(seq: &CoefficientSequence, b: &SectorBox, rel_tol: f64) -> Result<Winding> {
    let mut last = None;
    for k in 0..6 {
        let d = 1.0 + 0.0015 * k as f64;
        let tries = if k == 0 {
            vec![*b]
        } else {
            vec![
                SectorBox { r_hi: b.r_hi * d, ..*b },
                SectorBox { r_hi: b.r_hi / d, ..*b },
            ]
        };
        for t in tries {
            match winding_number(seq, &t, rel_tol) {
                Ok(w) => {
                    if k == 0 {
                        return Ok(w);
                    }
                    // a perturbed boundary is only a valid substitute when
                    // the original box edge was the contaminated part; keep
                    // it as a best effort for counting, not location
                    return Ok(w);
                }
                Err(e @ Error::BoundaryNearZero { .. }) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
    }
    Err(last.unwrap_or(Error::BoundaryNearZero { t: 0.0 }))
}

/// Locate all zeros of f in the box by recursive 4-way subdivision plus
/// Newton refinement with enclosure-winding certificates.
pub fn locate_zeros(seq: &CoefficientSequence, b: &SectorBox, rel_tol: f64) -> Result<ZeroSet> {
    b.validate()?;
    let total = winding_with_retry(seq, b, rel_tol)?;
    let mut zeros = Vec::new();
    let mut clusters = Vec::new();
    subdivide(seq, b, total.winding, rel_tol, &mut zeros, &mut clusters)?;
    zeros.sort_by(|a, b| {
        a.abs().partial_cmp(&b.abs()).unwrap().then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    let found: i64 = zeros.iter().map(|z| z.multiplicity as i64).sum();
    let complete = clusters.is_empty() && found == total.winding;
    Ok(ZeroSet {
        zeros,
        search_box: *b,
        unresolved_clusters: clusters,
        completeness_certificate: complete,
    })
}

fn subdivide(
    seq: &CoefficientSequence,
    b: &SectorBox,
    winding: i64,
    rel_tol: f64,
    zeros: &mut Vec<Zero>,
    clusters: &mut Vec<SectorBox>,
) -> Result<()> {
    if winding == 0 {
        return Ok(());
    }
    let min_diameter = (2.0f64).powi(-20) * b.r_hi;
    if winding == 1 {
        if let Some(z) = newton_refine(seq, b, 1, rel_tol)? {
            zeros.push(z);
            return Ok(());
        }
        // fall through to subdivision when Newton escapes the box
    }
    if b.diameter() < min_diameter {
        if winding >= 2 {
            // tiny box, winding m: a multiplicity-m zero (or unresolvable
            // cluster when the enclosure certificate fails)
            if let Some(z) = newton_refine(seq, b, winding as u32, rel_tol)? {
                zeros.push(z);
                return Ok(());
            }
            let (rc, tc) = b.center();
            let prec = seq.precision() + 32;
            let center = hp::point_polar(prec, &Float::with_val(prec, rc), &Float::with_val(prec, tc));
            if let Ok(w) = winding_circle(seq, &center, b.diameter(), rel_tol) {
                if w.winding == winding {
                    zeros.push(Zero {
                        re: hp::to_c64(&center).re,
                        im: hp::to_c64(&center).im,
                        multiplicity: winding as u32,
                        newton_residual: f64::NAN,
                        enclosure_radius: b.diameter(),
                    });
                    return Ok(());
                }
            }
        }
        clusters.push(*b);
        return Ok(());
    }
    // 4-way split (radius x angle), with the split lines nudged when they
    // land on a zero
    'fracs: for (i, frac) in [0.5, 0.47, 0.53, 0.44, 0.56, 0.41].iter().enumerate() {
        let rm = b.r_lo + (b.r_hi - b.r_lo) * frac;
        let tm = b.theta_lo + (b.theta_hi - b.theta_lo) * frac;
        let children = [
            SectorBox { r_lo: b.r_lo, r_hi: rm, theta_lo: b.theta_lo, theta_hi: tm },
            SectorBox { r_lo: b.r_lo, r_hi: rm, theta_lo: tm, theta_hi: b.theta_hi },
            SectorBox { r_lo: rm, r_hi: b.r_hi, theta_lo: b.theta_lo, theta_hi: tm },
            SectorBox { r_lo: rm, r_hi: b.r_hi, theta_lo: tm, theta_hi: b.theta_hi },
        ];
        let mut ws = Vec::new();
        for c in &children {
            match winding_number(seq, c, rel_tol) {
                Ok(w) => ws.push(w.winding),
                Err(Error::BoundaryNearZero { .. }) if i + 1 < 6 => continue 'fracs,
                Err(e) => return Err(e),
            }
        }
        // completeness additivity: children must account for the parent
        if ws.iter().sum::<i64>() != winding {
            return Err(Error::NonConvergence(format!(
                "subdivision winding mismatch: parent {winding}, children {ws:?}"
            )));
        }
        for (c, w) in children.iter().zip(ws) {
            subdivide(seq, c, w, rel_tol, zeros, clusters)?;
        }
        return Ok(());
    }
    clusters.push(*b);
    Ok(())
}

/// Newton iteration from the box center; accepts only with a residual below
/// 10^3 times the local evaluation bound and an enclosure circle of winding
/// equal to the claimed multiplicity.
fn newton_refine(
    seq: &CoefficientSequence,
    b: &SectorBox,
    multiplicity: u32,
    rel_tol: f64,
) -> Result<Option<Zero>> {
    let (rc, tc) = b.center();
    let eps = (seq.log_majorant_sum(b.r_hi).min(700.0)).exp() * rel_tol;
    let (_, prec) = eval::work_parameters(seq, b.r_hi, eps)?;
    let prec = prec + 32;
    let mut x = hp::point_polar(prec, &Float::with_val(prec, rc), &Float::with_val(prec, tc));
    let mut last_step = f64::INFINITY;
    let mut residual = f64::INFINITY;
    let mut bound = eps;
    for _ in 0..60 {
        let f = eval::eval_f(seq, &x, eps)?;
        residual = hp::abs_f64(&f.value);
        bound = f.total_bound();
        let fp = eval::eval_fprime(seq, &x, eps)?;
        if hp::abs_f64(&fp.value) <= fp.total_bound() {
            return Ok(None); // derivative unresolved; let subdivision act
        }
        // multiplicity-m zeros need the damped step m f / f'
        let step = Complex::with_val(prec, &f.value / &fp.value) * Float::with_val(prec, multiplicity);
        let step_len = hp::abs_f64(&step);
        x -= step;
        // keep the iterate in a modestly inflated box
        let xa = hp::abs_f64(&x);
        if xa > b.r_hi * 1.2 + 0.1 || (b.r_lo > 0.0 && xa < b.r_lo * 0.8) {
            return Ok(None);
        }
        last_step = step_len;
        if step_len <= 1e-28 * (1.0 + xa) && residual <= 1e3 * bound {
            break;
        }
    }
    if !(residual <= 1e3 * bound) {
        return Ok(None);
    }
    let enclosure = (10.0 * last_step).max(1e-24 * (1.0 + hp::abs_f64(&x)));
    for scale in [1.0, 3.0, 0.33, 10.0] {
        if let Ok(w) = winding_circle(seq, &x, enclosure * scale, rel_tol) {
            if w.winding == multiplicity as i64 {
                let c = hp::to_c64(&x);
                return Ok(Some(Zero {
                    re: c.re,
                    im: c.im,
                    multiplicity,
                    newton_residual: residual,
                    enclosure_radius: enclosure * scale,
                }));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Zero statistics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct AngularDensity {
    pub sectors: Vec<(usize, f64)>,
    pub max_relative_deviation: f64,
}

/// Per-sector zero counts in the disc of radius r against the uniform
/// prediction (theta span) r / 2 pi.
pub fn angular_density(zs: &ZeroSet, r: f64, sectors: usize) -> Result<AngularDensity> {
    if !zs.completeness_certificate {
        return Err(Error::IncompleteZeroSet);
    }
    if sectors == 0 {
        return Err(Error::InvalidParameter("sector count must be >= 1".into()));
    }
    let mut counts = vec![0usize; sectors];
    for z in zs.zeros.iter().filter(|z| z.abs() <= r) {
        let frac = (z.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
        let k = ((frac * sectors as f64) as usize).min(sectors - 1);
        counts[k] += z.multiplicity as usize;
    }
    let expected = r / sectors as f64;
    let max_relative_deviation = counts
        .iter()
        .map(|&c| (c as f64 - expected).abs() / expected.max(1.0))
        .fold(0.0, f64::max);
    Ok(AngularDensity {
        sectors: counts.into_iter().map(|c| (c, expected)).collect(),
        max_relative_deviation,
    })
}

/// Sum of multiplicity / z_k over zeros with |z_k| <= R.
pub fn reciprocal_sum(zs: &ZeroSet, r_max: f64) -> Result<num_complex::Complex64> {
    if !zs.completeness_certificate {
        return Err(Error::IncompleteZeroSet);
    }
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for z in zs.zeros.iter().filter(|z| z.abs() <= r_max) {
        acc += z.multiplicity as f64 / num_complex::Complex64::new(z.re, z.im);
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub min_distance: f64,
    /// Nearest-neighbor distances normalized by the local expected spacing
    /// sqrt(2 pi |z_k|) (area density 1/(2 pi r) near radius r).
    pub normalized_nearest: Vec<f64>,
    pub multiple_zeros: Vec<Zero>,
    pub unresolved_clusters: usize,
}

pub fn separation_report(zs: &ZeroSet) -> SeparationReport {
    let pts: Vec<(f64, f64)> = zs.zeros.iter().map(|z| (z.re, z.im)).collect();
    let mut min_distance = f64::INFINITY;
    let mut normalized = Vec::new();
    for (i, z) in zs.zeros.iter().enumerate() {
        let mut nn = f64::INFINITY;
        for (j, &(x, y)) in pts.iter().enumerate() {
            if i != j {
                nn = nn.min((z.re - x).hypot(z.im - y));
            }
        }
        if nn.is_finite() {
            min_distance = min_distance.min(nn);
            let spacing = (2.0 * std::f64::consts::PI * z.abs().max(1.0)).sqrt();
            normalized.push(nn / spacing);
        }
    }
    SeparationReport {
        min_distance,
        normalized_nearest: normalized,
        multiple_zeros: zs.zeros.iter().filter(|z| z.multiplicity >= 2).cloned().collect(),
        unresolved_clusters: zs.unresolved_clusters.len(),
    }
}

/// Full-circle zero count at radius r, perturbing the radius by up to
/// +/- 0.5% when the circle runs through a pit.
pub fn count_zeros(seq: &CoefficientSequence, r: f64, rel_tol: f64) -> Result<i64> {
    let mut last = None;
    for k in 0..8 {
        let delta = match k {
            0 => 0.0,
            _ => 0.005 * (k as f64 / 7.0) * if k % 2 == 1 { 1.0 } else { -1.0 },
        };
        match winding_number(seq, &SectorBox::disc(r * (1.0 + delta)), rel_tol) {
            Ok(w) => return Ok(w.winding),
            Err(e @ Error::BoundaryNearZero { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::BoundaryNearZero { t: 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{make_quadratic_phase, make_rational_phase};

    const REL: f64 = 1e-30;

    #[test]
    fn exponential_has_no_zeros() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let w = winding_number(&seq, &SectorBox::disc(8.0), REL).unwrap();
        assert_eq!(w.winding, 0);
        assert!(w.snap_distance < 0.25);

        let neg = make_rational_phase(1, 2, 128).unwrap();
        let b = SectorBox { r_lo: 1.0, r_hi: 6.0, theta_lo: -1.0, theta_hi: 2.0 };
        assert_eq!(winding_number(&neg, &b, REL).unwrap().winding, 0);

        let zs = locate_zeros(&seq, &SectorBox::disc(5.0), REL).unwrap();
        assert!(zs.zeros.is_empty());
        assert!(zs.completeness_certificate);
    }

    #[test]
    fn quarter_lattice_zeros() {
        // alpha = 1/4: f = ((1+i) e^z + (1-i) e^{-z}) / 2, zeros at
        // z = i pi (1/4 + k), k integer
        let seq = make_rational_phase(1, 4, 160).unwrap();
        let zs = locate_zeros(&seq, &SectorBox::disc(10.0), REL).unwrap();
        assert!(zs.completeness_certificate);
        // lattice oracle: i pi (1/4 + k) for k = -3..=2 lie inside r = 10
        let expected: Vec<f64> = (-3..=2)
            .map(|k| std::f64::consts::PI * (0.25 + k as f64))
            .filter(|y| y.abs() <= 10.0)
            .collect();
        assert_eq!(zs.zeros.len(), expected.len());
        for z in &zs.zeros {
            assert!(z.re.abs() < 1e-12, "zero off the imaginary axis: {} + {}i", z.re, z.im);
            let best = expected
                .iter()
                .map(|y| (z.im - y).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "unexpected zero location {}i", z.im);
            assert_eq!(z.multiplicity, 1);
        }
        // reciprocal sum over the symmetric lattice tends to -f'(0) = -i
        let rs = reciprocal_sum(&zs, 10.0).unwrap();
        let target = num_complex::Complex64::new(0.0, -1.0);
        assert!((rs - target).norm() < 0.35, "partial sum {rs}");
    }

    #[test]
    fn sqrt2_count_matches_radius() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(320), 160).unwrap();
        let n = count_zeros(&seq, 15.0, REL).unwrap();
        assert!((n - 15).abs() <= 4, "n(15) = {n}");
    }

    #[test]
    fn sqrt2_locate_small_disc() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(320), 160).unwrap();
        let zs = locate_zeros(&seq, &SectorBox::disc(8.0), REL).unwrap();
        assert!(zs.completeness_certificate);
        let n = count_zeros(&seq, 8.0, REL).unwrap();
        assert_eq!(zs.zeros.iter().map(|z| z.multiplicity as i64).sum::<i64>(), n);
        // residual certificates and simplicity
        for z in &zs.zeros {
            assert_eq!(z.multiplicity, 1);
            assert!(z.newton_residual.is_finite());
        }
        let rep = separation_report(&zs);
        assert!(rep.multiple_zeros.is_empty());
        assert_eq!(rep.unresolved_clusters, 0);
    }

    #[test]
    fn angular_density_requires_complete_set() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let mut zs = locate_zeros(&seq, &SectorBox::disc(5.0), REL).unwrap();
        let d = angular_density(&zs, 5.0, 4).unwrap();
        assert_eq!(d.sectors.iter().map(|s| s.0).sum::<usize>(), 0);
        zs.completeness_certificate = false;
        assert!(angular_density(&zs, 5.0, 4).is_err());
        assert!(reciprocal_sum(&zs, 5.0).is_err());
    }

    #[test]
    fn winding_additivity_under_split() {
        let seq = make_rational_phase(1, 4, 160).unwrap();
        let b = SectorBox::disc(6.0);
        let parent = winding_number(&seq, &b, REL).unwrap().winding;
        let rm = 3.1;
        let parts = [
            SectorBox { r_lo: 0.0, r_hi: rm, theta_lo: b.theta_lo, theta_hi: 0.3, },
            SectorBox { r_lo: 0.0, r_hi: rm, theta_lo: 0.3, theta_hi: b.theta_hi },
            SectorBox { r_lo: rm, r_hi: 6.0, theta_lo: b.theta_lo, theta_hi: 0.3 },
            SectorBox { r_lo: rm, r_hi: 6.0, theta_lo: 0.3, theta_hi: b.theta_hi },
        ];
        let sum: i64 = parts
            .iter()
            .map(|p| winding_number(&seq, p, REL).unwrap().winding)
            .sum();
        assert_eq!(parent, sum);
    }

    #[test]
    fn csv_and_json_serialization() {
        let seq = make_rational_phase(1, 4, 160).unwrap();
        let zs = locate_zeros(&seq, &SectorBox::disc(4.0), REL).unwrap();
        let csv = zs.to_csv();
        assert!(csv.starts_with("re,im,multiplicity,newton_residual,enclosure_radius\n"));
        assert_eq!(csv.lines().count(), 1 + zs.zeros.len());
        let json = zs.to_json().unwrap();
        assert!(json.contains("completeness_certificate"));
        assert!(json.contains("search_box"));
    }

    #[test]
    fn invalid_boxes_rejected() {
        let b = SectorBox { r_lo: 2.0, r_hi: 1.0, theta_lo: 0.0, theta_hi: 1.0 };
        assert!(b.validate().is_err());
        let b = SectorBox { r_lo: 0.0, r_hi: 1.0, theta_lo: 0.0, theta_hi: 7.0 };
        assert!(b.validate().is_err());
    }
}
