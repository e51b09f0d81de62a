//! Growth diagnostics: maximum modulus, indicator estimation, regular-growth
//! deviation, pit statistics with covering sums, rescaling frames, and the
//! maximum-over-quadratic-mean ratio.

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::eval::{self, GridPoint, GridSpec};
use crate::hp;

/// Reference growth profile h_ref(theta), supplied explicitly by callers
/// (1 for unit-phase quadratic families, cos theta for the pure exponential,
/// sigma for prefix-product families). Never inferred silently.
#[derive(Clone, Copy, Debug)]
pub enum HRef {
    Const(f64),
    CosTheta,
}

impl HRef {
    pub fn value(&self, theta: f64) -> f64 {
        match *self {
            HRef::Const(c) => c,
            HRef::CosTheta => theta.cos(),
        }
    }
}

// ---------------------------------------------------------------------------
// Maximum modulus
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MaxModulus {
    pub log_max: f64,
    pub theta_at_max: f64,
    /// Width of the final golden-section bracket (angle accuracy).
    pub bracket: f64,
}

const SCAN_ANGLES: usize = 1024;

fn log_abs_at(seq: &CoefficientSequence, r: f64, theta: f64, rel_tol: f64) -> Result<f64> {
    let eps = (seq.log_majorant_sum(r).min(700.0)).exp() * rel_tol;
    let (_, prec) = eval::work_parameters(seq, r, eps)?;
    let prec = prec + 16;
    let z = hp::point_polar(prec, &Float::with_val(prec, r), &Float::with_val(prec, theta));
    let out = eval::eval_f(seq, &z, eps)?;
    if out.unresolved() {
        Ok(out.total_bound().ln())
    } else {
        Ok(hp::log_abs_f64(&out.value))
    }
}

/// log M(r, f) by a coarse 1024-angle scan followed by golden-section
/// refinement around the 8 best angles.
pub fn max_modulus(seq: &CoefficientSequence, r: f64) -> Result<MaxModulus> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("max_modulus: r = {r} must be > 0")));
    }
    let rel_tol = 1e-12;
    let coarse: Vec<(usize, f64)> = (0..SCAN_ANGLES)
        .into_par_iter()
        .map(|j| {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * j as f64 / SCAN_ANGLES as f64;
            log_abs_at(seq, r, theta, rel_tol).map(|v| (j, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut ranked = coarse.clone();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));

    let step = 2.0 * std::f64::consts::PI / SCAN_ANGLES as f64;
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut best = (f64::NEG_INFINITY, 0.0, step);
    for &(j, _) in ranked.iter().take(8) {
        let theta = -std::f64::consts::PI + step * j as f64;
        let (mut a, mut b) = (theta - step, theta + step);
        let mut x1 = b - golden * (b - a);
        let mut x2 = a + golden * (b - a);
        let mut f1 = log_abs_at(seq, r, x1, rel_tol)?;
        let mut f2 = log_abs_at(seq, r, x2, rel_tol)?;
        for _ in 0..40 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + golden * (b - a);
                f2 = log_abs_at(seq, r, x2, rel_tol)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - golden * (b - a);
                f1 = log_abs_at(seq, r, x1, rel_tol)?;
            }
            if b - a < 1e-10 {
                break;
            }
        }
        let (v, t) = if f1 > f2 { (f1, x1) } else { (f2, x2) };
        if v > best.0 {
            best = (v, t, b - a);
        }
    }
    Ok(MaxModulus { log_max: best.0, theta_at_max: best.1, bracket: best.2 })
}

// ---------------------------------------------------------------------------
// Indicator estimation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct IndicatorProfile {
    pub theta_grid: Vec<f64>,
    pub h_est: Vec<f64>,
    pub n_samples: Vec<usize>,
    pub indeterminate: Vec<bool>,
    pub r_window: (f64, f64),
    pub rho: f64,
}

impl IndicatorProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,h_est,n_samples,indeterminate\n");
        for i in 0..self.theta_grid.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{},{}\n",
                self.theta_grid[i],
                self.h_est[i],
                self.n_samples[i],
                u8::from(self.indeterminate[i])
            ));
        }
        out
    }

    pub fn min_determinate(&self) -> Option<f64> {
        self.h_est
            .iter()
            .zip(&self.indeterminate)
            .filter(|(_, &ind)| !ind)
            .map(|(&h, _)| h)
            .fold(None, |m, h| Some(m.map_or(h, |v: f64| v.min(h))))
    }
}

const WINDOW_RADII: usize = 16;

/// Indicator estimate h_est(theta) = max over a geometric radius window of
/// log|f(r e^{i theta})| / r^rho. Pit-flagged samples are skipped (the max
/// is robust to pits); an angle with every sample flagged is reported as
/// indeterminate rather than given a value.
pub fn indicator_estimate(
    seq: &CoefficientSequence,
    n_theta: usize,
    r_window: (f64, f64),
    rho: f64,
) -> Result<IndicatorProfile> {
    let (r_lo, r_hi) = r_window;
    if !(r_lo > 0.0 && r_hi / r_lo >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "indicator window ({r_lo}, {r_hi}) must have ratio >= 2"
        )));
    }
    if n_theta < 64 {
        return Err(Error::InvalidParameter(format!("indicator grid {n_theta} < 64 angles")));
    }
    // geometric radii including both endpoints
    let radii: Vec<f64> = (0..WINDOW_RADII)
        .map(|i| r_lo * (r_hi / r_lo).powf(i as f64 / (WINDOW_RADII - 1) as f64))
        .collect();
    let rows: Vec<(f64, f64, usize)> = (0..n_theta)
        .into_par_iter()
        .map(|j| -> Result<(f64, f64, usize)> {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let mut h = f64::NEG_INFINITY;
            let mut n_ok = 0usize;
            for &r in &radii {
                // resolve values down to e^{-2 r^rho} (indicator depth -2),
                // not just relative to the majorant peak
                let eps = ((seq.log_majorant_sum(r).min(700.0)).exp() * 1e-12)
                    .min((-2.0 * r.powf(rho)).max(-650.0).exp());
                let (_, prec) = eval::work_parameters(seq, r, eps)?;
                let prec = prec + 16;
                let z =
                    hp::point_polar(prec, &Float::with_val(prec, r), &Float::with_val(prec, theta));
                let out = eval::eval_f(seq, &z, eps)?;
                if !out.unresolved() {
                    h = h.max(hp::log_abs_f64(&out.value) / r.powf(rho));
                    n_ok += 1;
                }
            }
            Ok((theta, h, n_ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut profile = IndicatorProfile {
        theta_grid: Vec::new(),
        h_est: Vec::new(),
        n_samples: Vec::new(),
        indeterminate: Vec::new(),
        r_window,
        rho,
    };
    for (theta, h, n_ok) in rows {
        profile.theta_grid.push(theta);
        profile.h_est.push(if n_ok == 0 { f64::NAN } else { h });
        profile.n_samples.push(n_ok);
        profile.indeterminate.push(n_ok == 0);
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Regular-growth deviation and pits
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CrgSummary {
    /// (r, fraction of grid points with |log|f| / r^rho - h_ref| > delta);
    /// flagged (pit) points count as deviant.
    pub bad_fraction: Vec<(f64, f64)>,
}

pub fn crg_deviation(
    seq: &CoefficientSequence,
    grid: &GridSpec,
    delta: f64,
    rho: f64,
    h_ref: HRef,
) -> Result<CrgSummary> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("deviation threshold {delta} outside (0,1)")));
    }
    let points = eval::eval_grid(seq, grid, 1e-12)?;
    let mut bad_fraction = Vec::new();
    for &r in &grid.r_values {
        let ring: Vec<&GridPoint> = points.iter().filter(|p| p.r == r).collect();
        let bad = ring
            .iter()
            .filter(|p| p.flagged || (p.log_abs_f / r.powf(rho) - h_ref.value(p.theta)).abs() > delta)
            .count();
        bad_fraction.push((r, bad as f64 / ring.len().max(1) as f64));
    }
    Ok(CrgSummary { bad_fraction })
}

#[derive(Clone, Debug, Serialize)]
pub struct PitComponent {
    pub center_r: f64,
    pub center_theta: f64,
    /// Pit radius: half the larger of the radial extent and the angular
    /// arc-length extent.
    pub radius: f64,
    /// Most negative normalized deviation inside the component.
    pub depth: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PitReport {
    pub pits: Vec<PitComponent>,
    pub eta: f64,
    /// Sum of radius^eta over the components.
    pub covering_sum: f64,
}

/// Connected components (8-neighbor on the polar grid, wrapping in angle) of
/// the deep-deficiency set {log|f| / r^rho < h_ref - delta}.
pub fn pit_detect(
    seq: &CoefficientSequence,
    grid: &GridSpec,
    delta: f64,
    eta: f64,
    rho: f64,
    h_ref: HRef,
) -> Result<PitReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("pit threshold {delta} outside (0,1)")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("covering exponent {eta} outside (0,1]")));
    }
    let points = eval::eval_grid(seq, grid, 1e-12)?;
    let n_r = grid.r_values.len();
    let n_t = grid.n_theta;
    let deep = |p: &GridPoint| -> bool {
        // flagged points carry an upper bound, so the deficiency test stays
        // valid for them
        p.log_abs_f / p.r.powf(rho) - h_ref.value(p.theta) < -delta
    };
    let idx = |i: usize, j: usize| i * n_t + j;
    let mut label = vec![usize::MAX; points.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..points.len() {
        if label[start] != usize::MAX || !deep(&points[start]) {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        let mut comp = Vec::new();
        label[start] = id;
        while let Some(k) = stack.pop() {
            comp.push(k);
            let (i, j) = (k / n_t, k % n_t);
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ni = i as i64 + di;
                    if ni < 0 || ni >= n_r as i64 {
                        continue;
                    }
                    let nj = (j as i64 + dj).rem_euclid(n_t as i64) as usize;
                    let nk = idx(ni as usize, nj);
                    if label[nk] == usize::MAX && deep(&points[nk]) {
                        label[nk] = id;
                        stack.push(nk);
                    }
                }
            }
        }
        components.push(comp);
    }
    let mut pits = Vec::new();
    let mut covering_sum = 0.0;
    for comp in components {
        let rs: Vec<f64> = comp.iter().map(|&k| points[k].r).collect();
        let r_min = rs.iter().cloned().fold(f64::INFINITY, f64::min);
        let r_max = rs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let r_mid = 0.5 * (r_min + r_max);
        // angular extent with wraparound: smallest arc containing all angles
        let mut thetas: Vec<f64> = comp.iter().map(|&k| points[k].theta).collect();
        thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut max_gap = 2.0 * std::f64::consts::PI - (thetas.last().unwrap() - thetas[0]);
        let mut gap_at = 0usize;
        for w in 0..thetas.len().saturating_sub(1) {
            let g = thetas[w + 1] - thetas[w];
            if g > max_gap {
                max_gap = g;
                gap_at = w + 1;
            }
        }
        let span = 2.0 * std::f64::consts::PI - max_gap;
        let theta_mid = normalize_angle(thetas[gap_at % thetas.len()] + span / 2.0);
        let dr = if grid.r_values.len() > 1 {
            grid.r_values[1] - grid.r_values[0]
        } else {
            0.0
        };
        let dt = 2.0 * std::f64::consts::PI / n_t as f64;
        let radial_extent = (r_max - r_min) + dr;
        let angular_extent = (span + dt) * r_mid;
        let radius = 0.5 * radial_extent.max(angular_extent);
        let depth = comp
            .iter()
            .map(|&k| points[k].log_abs_f / points[k].r.powf(rho) - h_ref.value(points[k].theta))
            .fold(f64::INFINITY, f64::min);
        covering_sum += radius.powf(eta);
        pits.push(PitComponent {
            center_r: r_mid,
            center_theta: theta_mid,
            radius,
            depth,
            points: comp.len(),
        });
    }
    pits.sort_by(|a, b| {
        a.center_r
            .partial_cmp(&b.center_r)
            .unwrap()
            .then(a.center_theta.partial_cmp(&b.center_theta).unwrap())
    });
    Ok(PitReport { pits, eta, covering_sum })
}

/// Multiscale pit search on an annulus. The deficiency pits of unit-phase
/// families shrink exponentially with r (near a simple zero the set
/// {log|f| < (h - delta) r^rho} has radius ~ e^{-delta r^rho}), so a
/// uniform grid at any feasible resolution reports none. This driver takes
/// the candidate local minima of the normalized deficiency on a coarse grid
/// and refines each on shrinking local polar windows until it either
/// certifies a crossing of the -delta threshold (a pit) or stalls above it
/// (a shallow fluctuation). Refined centers closer than half a coarse cell
/// are merged; each pit's radius is the window half-width at which the
/// threshold crossing was first observed, an upper bound on the true pit
/// radius at grid certainty.
#[allow(clippy::too_many_arguments)]
pub fn pit_detect_multiscale(
    seq: &CoefficientSequence,
    r_lo: f64,
    r_hi: f64,
    n_r: usize,
    n_theta: usize,
    delta: f64,
    eta: f64,
    rho: f64,
    h_ref: HRef,
) -> Result<PitReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("pit threshold {delta} outside (0,1)")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("covering exponent {eta} outside (0,1]")));
    }
    let grid = GridSpec::annulus(r_lo, r_hi, n_r, n_theta);
    let points = eval::eval_grid(seq, &grid, 1e-12)?;
    let n_rr = grid.r_values.len();
    let dev = |p: &GridPoint| p.log_abs_f / p.r.powf(rho) - h_ref.value(p.theta);
    // local minima of the deficiency on the coarse grid (theta wraps)
    let idx = |i: i64, j: i64| -> usize {
        (i as usize) * n_theta + (j.rem_euclid(n_theta as i64) as usize)
    };
    let mut candidates: Vec<(f64, f64, f64)> = Vec::new(); // (d, r, theta)
    for i in 0..n_rr as i64 {
        for j in 0..n_theta as i64 {
            let d0 = dev(&points[idx(i, j)]);
            let mut is_min = true;
            'nb: for di in -1..=1i64 {
                for dj in -1..=1i64 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let ni = i + di;
                    if ni < 0 || ni >= n_rr as i64 {
                        continue;
                    }
                    if dev(&points[idx(ni, j + dj)]) <= d0 {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                let p = &points[idx(i, j)];
                candidates.push((d0, p.r, p.theta));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    candidates.truncate(64);

    let dr = if n_rr > 1 { grid.r_values[1] - grid.r_values[0] } else { r_hi - r_lo };
    let dt = 2.0 * std::f64::consts::PI / n_theta as f64;
    let eval_dev = |r: f64, theta: f64| -> Result<f64> {
        // tolerance placed just under the pit threshold: an unresolved
        // point then still certifies the crossing via its upper bound
        let lead = (h_ref.value(theta) - delta) * r.powf(rho) - 3.0;
        let eps = lead.clamp(-650.0, 650.0).exp();
        let prec = eval::work_parameters(seq, r, eps)?.1 + 16;
        let z = hp::point_polar(prec, &Float::with_val(prec, r), &Float::with_val(prec, theta));
        let out = eval::eval_f(seq, &z, eps)?;
        let log_abs = if out.unresolved() {
            out.total_bound().max(f64::MIN_POSITIVE).ln()
        } else {
            hp::log_abs_f64(&out.value)
        };
        Ok(log_abs / r.powf(rho) - h_ref.value(theta))
    };

    struct Found {
        r: f64,
        theta: f64,
        radius: f64,
        depth: f64,
    }
    let found: Vec<Option<Found>> = candidates
        .par_iter()
        .map(|&(d0, r0, th0)| -> Result<Option<Found>> {
            let (mut r_c, mut th_c, mut best) = (r0, th0, d0);
            let (mut h_r, mut h_t) = (dr, dt);
            let mut stale = 0usize;
            for _ in 0..60 {
                if best < -delta {
                    // estimate the pit radius by probing radially outward
                    // from the center for the largest offset still below
                    // the threshold (factor-2 bracket, upper estimate)
                    let cap = h_r.max(h_t * r_c) * 3.0;
                    let mut h = cap;
                    let mut radius = cap;
                    while h > 1e-9 {
                        if eval_dev((r_c + h).min(r_hi), th_c)? < -delta {
                            radius = (2.0 * h).min(cap);
                            break;
                        }
                        h *= 0.5;
                    }
                    if h <= 1e-9 {
                        radius = 2e-9;
                    }
                    return Ok(Some(Found { r: r_c, theta: th_c, radius, depth: best }));
                }
                let mut improved = false;
                for a in -2..=2i64 {
                    for b in -2..=2i64 {
                        if a == 0 && b == 0 {
                            continue;
                        }
                        let r = (r_c + a as f64 * h_r / 2.0).clamp(r_lo, r_hi);
                        let th = th_c + b as f64 * h_t / 2.0;
                        let d = eval_dev(r, th)?;
                        if d < best {
                            best = d;
                            r_c = r;
                            th_c = th;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    h_r *= 0.35;
                    h_t *= 0.35;
                    stale += 1;
                } else {
                    stale = 0;
                }
                if h_r < 1e-10 || stale > 18 {
                    break;
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;

    // merge descents that converged to the same pit
    let merge_dist = 0.5 * dr.max(dt * r_hi);
    let mut pits: Vec<PitComponent> = Vec::new();
    let mut kept: Vec<(f64, f64)> = Vec::new();
    let mut hits: Vec<Found> = found.into_iter().flatten().collect();
    hits.sort_by(|a, b| a.depth.partial_cmp(&b.depth).unwrap());
    for f in hits {
        let (x, y) = (f.r * f.theta.cos(), f.r * f.theta.sin());
        if kept.iter().any(|&(kx, ky)| (kx - x).hypot(ky - y) < merge_dist) {
            continue;
        }
        kept.push((x, y));
        pits.push(PitComponent {
            center_r: f.r,
            center_theta: normalize_angle(f.theta),
            radius: f.radius,
            depth: f.depth,
            points: 1,
        });
    }
    pits.sort_by(|a, b| {
        a.center_r
            .partial_cmp(&b.center_r)
            .unwrap()
            .then(a.center_theta.partial_cmp(&b.center_theta).unwrap())
    });
    let covering_sum = pits.iter().map(|p| p.radius.powf(eta)).sum();
    Ok(PitReport { pits, eta, covering_sum })
}

fn normalize_angle(mut t: f64) -> f64 {
    while t > std::f64::consts::PI {
        t -= 2.0 * std::f64::consts::PI;
    }
    while t < -std::f64::consts::PI {
        t += 2.0 * std::f64::consts::PI;
    }
    t
}

// ---------------------------------------------------------------------------
// Levy ratio and Parseval checks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RatioSeries {
    pub r_values: Vec<f64>,
    pub log_m: Vec<f64>,
    pub m2: Vec<f64>,
    /// M(r) / m_2(r) per radius; always >= 1.
    pub ratio: Vec<f64>,
}

impl RatioSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,logM,m2,ratio\n");
        for i in 0..self.r_values.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.r_values[i], self.log_m[i], self.m2[i], self.ratio[i]
            ));
        }
        out
    }
}

/// Maximum modulus over quadratic mean; m_2 comes from the coefficient-side
/// sum (exact), M from the angle scan.
pub fn levy_ratio(seq: &CoefficientSequence, r_values: &[f64]) -> Result<RatioSeries> {
    let mut prev = 0.0;
    for &r in r_values {
        if !(r > prev) {
            return Err(Error::InvalidParameter("ratio radii must be increasing".into()));
        }
        prev = r;
    }
    let mut out = RatioSeries {
        r_values: r_values.to_vec(),
        log_m: Vec::new(),
        m2: Vec::new(),
        ratio: Vec::new(),
    };
    for &r in r_values {
        let m = max_modulus(seq, r)?;
        let p = seq.parseval_m2(r, 1e-12)?;
        out.log_m.push(m.log_max);
        out.m2.push(p.m2);
        out.ratio.push((m.log_max - p.log_m2).exp());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RescaleFrame {
    pub t: f64,
    /// sup over unflagged grid points of |t^{-rho} log|f(tz)| - h_ref(arg z) |z|^rho|.
    pub deviation: f64,
    pub flagged_points: usize,
}

/// Rescaled growth frame u_t(z) = t^{-rho} log|f(tz)| on a polar grid of the
/// unit disc, with its distance to the limit profile h_ref(arg z) |z|^rho.
pub fn azarin_rescale(
    seq: &CoefficientSequence,
    t: f64,
    n_r: usize,
    n_theta: usize,
    rho: f64,
    h_ref: HRef,
) -> Result<RescaleFrame> {
    if !(t >= 1.0) {
        return Err(Error::InvalidParameter(format!("rescale parameter t = {t} must be >= 1")));
    }
    if n_r == 0 || n_theta < 8 {
        return Err(Error::InvalidParameter("rescale grid too small".into()));
    }
    let r_values: Vec<f64> = (1..=n_r).map(|i| t * i as f64 / n_r as f64).collect();
    let grid = GridSpec { r_values, n_theta };
    // tolerance floor low enough to resolve the deepest regular values
    // u = -|z|^rho on the frame, so only true pits stay flagged
    let rel_tol = 1e-12 * (-2.0 * t.powf(rho)).max(-450.0).exp();
    let points = eval::eval_grid(seq, &grid, rel_tol)?;
    let mut deviation = 0.0f64;
    let mut flagged = 0usize;
    for p in &points {
        if p.flagged {
            flagged += 1;
            continue;
        }
        let zr = p.r / t;
        let u = p.log_abs_f / t.powf(rho);
        deviation = deviation.max((u - h_ref.value(p.theta) * zr.powf(rho)).abs());
    }
    Ok(RescaleFrame { t, deviation, flagged_points: flagged })
}

/// Trapezoidal quadrature of m_2(r)^2 = (1/2 pi) int |f(r e^{i theta})|^2
/// d theta against the exact coefficient-side sum.
pub fn parseval_quadrature_check(
    seq: &CoefficientSequence,
    r: f64,
    n_nodes: usize,
) -> Result<(f64, f64, f64)> {
    if !(n_nodes >= 256 && n_nodes.is_power_of_two()) {
        return Err(Error::InvalidParameter(format!(
            "quadrature nodes {n_nodes} must be a power of two >= 256"
        )));
    }
    let exact = seq.parseval_m2(r, 1e-14)?;
    let eps = (seq.log_majorant_sum(r).min(700.0)).exp() * 1e-14;
    let sum: f64 = (0..n_nodes)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let out = eval::eval_polar(seq, r, j, n_nodes, eps)?;
            let a = hp::abs_f64(&out.value);
            Ok(a * a)
        })
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();
    let quad = (sum / n_nodes as f64).sqrt();
    let rel = (quad - exact.m2).abs() / exact.m2;
    Ok((exact.m2, quad, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{make_quadratic_phase, make_rational_phase, make_theorem5};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn max_modulus_exponential() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let m = max_modulus(&seq, 10.0).unwrap();
        close(m.log_max, 10.0, 1e-8);
        close(m.theta_at_max, 0.0, 1e-6);
    }

    #[test]
    fn max_modulus_sqrt2_band() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let m = max_modulus(&seq, 20.0).unwrap();
        assert!(m.log_max <= 20.0 + 1e-9);
        assert!(m.log_max >= 20.0 - 0.25 * (20.0f64).ln() - 1.0, "log M = {}", m.log_max);
    }

    #[test]
    fn theorem5_sigma_growth() {
        // sigma = e^{c rho}/(e rho) = 1/(2 pi) for s_h = 1/2; at desk scale
        // log M(6)/36 is within 25% of its own value of sigma (frozen 0.21042)
        let seq = make_theorem5(0.5, hp::alpha_sqrt2(256), 128).unwrap();
        let m = max_modulus(&seq, 6.0).unwrap();
        let x = m.log_max / 36.0;
        close(x, 0.21042, 5e-3);
        let sigma = 1.0 / (2.0 * std::f64::consts::PI);
        assert!((x - sigma).abs() <= 0.25 * x, "x = {x}, sigma = {sigma}");
    }

    #[test]
    fn indicator_exponential_cosine() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let p = indicator_estimate(&seq, 64, (20.0, 40.0), 1.0).unwrap();
        for i in 0..p.theta_grid.len() {
            assert!(!p.indeterminate[i]);
            close(p.h_est[i], p.theta_grid[i].cos(), 0.01);
        }
        // alternating family: indicator cos(pi - theta) = -cos theta
        let neg = make_rational_phase(1, 2, 128).unwrap();
        let p = indicator_estimate(&neg, 64, (20.0, 40.0), 1.0).unwrap();
        for i in 0..p.theta_grid.len() {
            close(p.h_est[i], -p.theta_grid[i].cos(), 0.01);
        }
    }

    #[test]
    fn indicator_csv_shape() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let p = indicator_estimate(&seq, 64, (10.0, 20.0), 1.0).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("theta,h_est,n_samples,indeterminate\n"));
        assert_eq!(csv.lines().count(), 65);
        assert!(indicator_estimate(&seq, 32, (10.0, 20.0), 1.0).is_err());
        assert!(indicator_estimate(&seq, 64, (10.0, 15.0), 1.0).is_err());
    }

    #[test]
    fn crg_exponential_perfect_fit() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let grid = GridSpec { r_values: vec![5.0, 10.0], n_theta: 64 };
        let s = crg_deviation(&seq, &grid, 0.05, 1.0, HRef::CosTheta).unwrap();
        for (_, frac) in s.bad_fraction {
            assert_eq!(frac, 0.0);
        }
    }

    #[test]
    fn pits_absent_for_exponential() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let grid = GridSpec { r_values: vec![8.0, 9.0, 10.0], n_theta: 128 };
        let rep = pit_detect(&seq, &grid, 0.1, 0.5, 1.0, HRef::CosTheta).unwrap();
        assert!(rep.pits.is_empty());
        assert_eq!(rep.covering_sum, 0.0);
    }

    #[test]
    fn pits_present_for_sqrt2() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 128).unwrap();
        let r_values: Vec<f64> = (0..12).map(|i| 12.0 + 0.25 * i as f64).collect();
        let grid = GridSpec { r_values, n_theta: 256 };
        let rep = pit_detect(&seq, &grid, 0.3, 0.5, 1.0, HRef::Const(1.0)).unwrap();
        assert!(!rep.pits.is_empty());
        assert!(rep.covering_sum > 0.0);
    }

    #[test]
    fn multiscale_pits_track_zeros_sqrt2() {
        let seq = make_quadratic_phase(hp::alpha_sqrt2(256), 160).unwrap();
        let rep =
            pit_detect_multiscale(&seq, 12.0, 15.0, 13, 256, 0.3, 0.5, 1.0, HRef::Const(1.0))
                .unwrap();
        let n_zeros = crate::zeros::count_zeros(&seq, 15.0, 1e-30).unwrap()
            - crate::zeros::count_zeros(&seq, 12.0, 1e-30).unwrap();
        assert!(n_zeros > 0);
        let n_pits = rep.pits.len() as i64;
        assert!(
            (n_pits as f64) >= 0.5 * n_zeros as f64 && (n_pits as f64) <= 1.5 * n_zeros as f64,
            "{n_pits} pits vs {n_zeros} zeros"
        );
        for p in &rep.pits {
            assert!(p.depth < -0.3);
            assert!(p.radius > 0.0 && p.radius < 3.0);
        }
        assert!(rep.covering_sum > 0.0);
    }

    #[test]
    fn multiscale_pits_absent_for_exponential() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let rep =
            pit_detect_multiscale(&seq, 8.0, 10.0, 5, 128, 0.1, 0.5, 1.0, HRef::CosTheta)
                .unwrap();
        assert!(rep.pits.is_empty(), "{:?}", rep.pits);
    }

    #[test]
    fn levy_ratio_exponential() {
        // M/m_2 at r = 10 for e^z: e^10 / sqrt(I_0(20)), frozen value
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let s = levy_ratio(&seq, &[10.0]).unwrap();
        close(s.ratio[0], 3.337409094918649, 1e-6);
        assert!(s.ratio[0] >= 1.0);
        let csv = s.to_csv();
        assert!(csv.starts_with("r,logM,m2,ratio\n"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn azarin_exponential_exact() {
        let seq = make_rational_phase(0, 1, 128).unwrap();
        let f = azarin_rescale(&seq, 10.0, 8, 64, 1.0, HRef::CosTheta).unwrap();
        assert!(f.deviation < 1e-9, "deviation {}", f.deviation);
    }

    #[test]
    fn parseval_quadrature_agrees() {
        let seq = make_rational_phase(0, 1, 160).unwrap();
        let (exact, quad, rel) = parseval_quadrature_check(&seq, 5.0, 1024).unwrap();
        assert!(rel <= 1e-10, "exact {exact} quad {quad} rel {rel}");
        assert!(parseval_quadrature_check(&seq, 5.0, 100).is_err());
    }
}
