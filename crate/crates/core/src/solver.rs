//! Uniform approximation of `f = log r` by log-radial functions of ellipses.
//!
//! For a fixed level `d`, the condition `‖f - g‖∞ ≤ d` on a finite angle grid
//! reads `e^{-2d} e^{-2f(φ)} ≤ a₂ + b₂ cos 2φ + c₂ sin 2φ ≤ e^{2d} e^{-2f(φ)}`,
//! which is linear in the ellipse coefficients. Feasibility is monotone in
//! `d`, so the optimal level is found by bisection over a sequence of small
//! linear programs. The bisection result is then polished by a Remez-style
//! exchange on four equioscillation points.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::angle::{self, AngleGrid};
use crate::deviation::{self, deviation, Extremum, ExtremumKind, Profile};
use crate::ellipse::EllipseParams;
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::lp::{LinearProgram, LpOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Uniform angles per period π (kinks of the gauge are added on top).
    pub grid_size: usize,
    /// Stop bisecting once the bracket on the defect is narrower than this.
    pub bisect_tol: f64,
    pub max_bisect: usize,
    /// Re-measure the sup norm with local extremum refinement.
    pub refine: bool,
    /// Run the Remez exchange after bisection.
    pub polish: bool,
    /// Residual tolerance for the alternance certificate.
    pub cert_tol: f64,
    /// Seed of the constraint permutation fed to the LP.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_size: 4096,
            bisect_tol: 1e-12,
            max_bisect: 80,
            refine: true,
            polish: true,
            cert_tol: 1e-8,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 64 {
            return Err(Error::InvalidOptions(format!("grid_size must be >= 64, got {}", self.grid_size)));
        }
        if !(self.bisect_tol > 0.0 && self.cert_tol > 0.0) {
            return Err(Error::InvalidOptions("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self, gauge: &Gauge) -> AngleGrid {
        deviation::evaluation_grid(gauge, self.grid_size)
    }
}

/// A feasible ellipse at a given level together with its LP margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasible {
    pub params: EllipseParams,
    /// Smallest slack over all grid constraints, in units of `ρ⁻²`.
    pub margin: f64,
}

/// The margin-maximizing LP over a fixed grid, reused across levels.
struct FeasibilityModel {
    /// `(cos 2φ, sin 2φ, e^{-2f(φ)} / scale)` per grid angle.
    rows: Vec<(f64, f64, f64)>,
    scale: f64,
    seed: u64,
}

impl FeasibilityModel {
    fn new(gauge: &Gauge, grid: &AngleGrid, seed: u64) -> Self {
        let raw: Vec<(f64, f64, f64)> = grid
            .angles()
            .iter()
            .map(|&phi| {
                let (s, c) = (2.0 * phi).sin_cos();
                (c, s, (-2.0 * gauge.log_eval(phi)).exp())
            })
            .collect();
        let scale = raw.iter().map(|r| r.2).fold(0.0, f64::max);
        let rows = raw.into_iter().map(|(c, s, w)| (c, s, w / scale)).collect();
        FeasibilityModel { rows, scale, seed }
    }

    fn solve(&self, level: f64) -> Option<Feasible> {
        let lower = (-2.0 * level).exp();
        let upper = (2.0 * level).exp();
        let box_size = 2.0 * upper;
        let mut lp = LinearProgram::new(
            &[0.0, 0.0, 0.0, 1.0],
            &[(0.0, box_size), (-box_size, box_size), (-box_size, box_size), (-2.0 * box_size, upper)],
        );
        for &(c, s, w) in &self.rows {
            // lower·w + m ≤ a + b c + c s ≤ upper·w - m
            lp.push(&[-1.0, -c, -s, 1.0], -lower * w);
            lp.push(&[1.0, c, s, 1.0], upper * w);
        }
        lp.shuffle(self.seed);
        let LpOutcome::Optimal(x) = lp.maximize() else {
            return None;
        };
        let margin = x[3];
        if margin < 0.0 {
            return None;
        }
        let (a, b, c) = (x[0], x[1], x[2]);
        if !(a > 0.0 && a - b.hypot(c) > 1e-12 * a) {
            return None;
        }
        let params = EllipseParams::new(a * self.scale, b * self.scale, c * self.scale).ok()?;
        Some(Feasible {
            params,
            margin: margin * self.scale,
        })
    }
}

/// An ellipse whose log-radial function is within `level` of `f` on every
/// grid angle, if one exists. Among all such ellipses the one with the
/// largest constraint slack is returned.
pub fn feasible_at(gauge: &Gauge, level: f64, grid: &AngleGrid, seed: u64) -> Option<Feasible> {
    if !(level >= 0.0) || grid.is_empty() {
        return None;
    }
    FeasibilityModel::new(gauge, grid, seed).solve(level)
}

/// Four interleaved angles `φ₁ < ψ₁ < φ₂ < ψ₂ < φ₁ + π` where `f - g` reaches
/// `+d, -d, +d, -d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternanceCertificate {
    /// `[φ₁, φ₂]`, maxima of `f - g`.
    pub phi: [f64; 2],
    /// `[ψ₁, ψ₂]`, minima of `f - g`.
    pub psi: [f64; 2],
    /// Deviation of `±(f - g)` from the level at `φ₁, ψ₁, φ₂, ψ₂`.
    pub residuals: [f64; 4],
}

impl AlternanceCertificate {
    /// `[φ₁, ψ₁, φ₂, ψ₂]`.
    pub fn points(&self) -> [f64; 4] {
        [self.phi[0], self.psi[0], self.phi[1], self.psi[1]]
    }

    pub fn is_interleaved(&self) -> bool {
        let [p1, q1, p2, q2] = self.points();
        p1 < q1 && q1 < p2 && p2 < q2 && q2 < p1 + PI
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

const SIGNS: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

fn residuals_at(gauge: &Gauge, params: &EllipseParams, points: [f64; 4], level: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = SIGNS[i] * deviation(gauge, params, points[i]) - level;
    }
    out
}

/// Certificate with the canonical points `0, π/4, π/2, 3π/4`, valid when `g = f`.
fn canonical_certificate(gauge: &Gauge, params: &EllipseParams, level: f64) -> AlternanceCertificate {
    let points = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
    AlternanceCertificate {
        phi: [points[0], points[2]],
        psi: [points[1], points[3]],
        residuals: residuals_at(gauge, params, points, level),
    }
}

/// Builds the alternance certificate of a (near-)optimal ellipse on the
/// default 4096-point evaluation grid.
pub fn extract_certificate(gauge: &Gauge, params: &EllipseParams, tol: f64) -> Result<AlternanceCertificate> {
    extract_certificate_on(gauge, params, tol, &deviation::evaluation_grid(gauge, 4096))
}

/// `φ₁` is the global maximum of `f - g`; `ψ₁, ψ₂` are the first and last
/// near-minima after it within one period, and `φ₂` is the largest
/// near-maximum between them.
pub fn extract_certificate_on(
    gauge: &Gauge,
    params: &EllipseParams,
    tol: f64,
    grid: &AngleGrid,
) -> Result<AlternanceCertificate> {
    let profile = Profile::new(gauge, params, grid);
    let extrema = profile.extrema();
    let sup = extrema.iter().fold(profile.grid_sup(), |m, e| m.max(e.value.abs()));
    if sup < tol {
        return Ok(canonical_certificate(gauge, params, sup));
    }
    let near = |e: &&Extremum, kind| e.kind == kind && e.signed_height() >= sup - tol;
    let maxima: Vec<&Extremum> = extrema.iter().filter(|e| near(e, ExtremumKind::Max)).collect();
    let minima: Vec<&Extremum> = extrema.iter().filter(|e| near(e, ExtremumKind::Min)).collect();
    if maxima.is_empty() {
        return Err(Error::NoAlternance(format!("f - g never reaches +{sup:.3e} within {tol:.1e}")));
    }
    if minima.is_empty() {
        return Err(Error::NoAlternance(format!("f - g never reaches -{sup:.3e} within {tol:.1e}")));
    }
    let top = maxima.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-12 * (1.0 + sup);
    let phi1 = maxima
        .iter()
        .filter(|e| e.value >= top - tie)
        .map(|e| e.angle)
        .fold(f64::INFINITY, f64::min);
    let unwrapped: Vec<f64> = minima
        .iter()
        .map(|e| angle::reduce_from(e.angle, phi1))
        .filter(|a| *a > phi1)
        .collect();
    let psi1 = unwrapped.iter().cloned().fold(f64::INFINITY, f64::min);
    let psi2 = unwrapped.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(psi1 < psi2) {
        return Err(Error::NoAlternance("only one minimum of f - g reaches the defect".into()));
    }
    let phi2 = maxima
        .iter()
        .map(|e| (angle::reduce_from(e.angle, phi1), e.value))
        .filter(|(a, _)| *a > psi1 && *a < psi2)
        .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.total_cmp(&x.0)))
        .map(|(a, _)| a)
        .ok_or_else(|| Error::NoAlternance("no maximum of f - g between the extreme minima".into()))?;
    let points = [phi1, psi1, phi2, psi2];
    Ok(AlternanceCertificate {
        phi: [phi1, phi2],
        psi: [psi1, psi2],
        residuals: residuals_at(gauge, params, points, sup),
    })
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateVerdict {
    pub ordering: bool,
    pub residuals: bool,
    pub sup_norm: bool,
    /// Mean of `±(f - g)` over the four points.
    pub level: f64,
    pub max_residual: f64,
    pub measured_sup: f64,
}

impl CertificateVerdict {
    pub fn passed(&self) -> bool {
        self.ordering && self.residuals && self.sup_norm
    }
}

pub fn verify_certificate(
    gauge: &Gauge,
    params: &EllipseParams,
    cert: &AlternanceCertificate,
    tol: f64,
) -> CertificateVerdict {
    verify_certificate_on(gauge, params, cert, tol, &deviation::evaluation_grid(gauge, 4096))
}

/// Checks interleaving, that `±(f - g)` takes one common level at the four
/// points, and that `‖f - g‖∞` does not exceed that level.
pub fn verify_certificate_on(
    gauge: &Gauge,
    params: &EllipseParams,
    cert: &AlternanceCertificate,
    tol: f64,
    grid: &AngleGrid,
) -> CertificateVerdict {
    let points = cert.points();
    let heights: Vec<f64> = (0..4).map(|i| SIGNS[i] * deviation(gauge, params, points[i])).collect();
    let level = heights.iter().sum::<f64>() / 4.0;
    let max_residual = heights.iter().fold(0.0f64, |m, h| m.max((h - level).abs()));
    let measured_sup = deviation::sup_norm(gauge, params, grid);
    CertificateVerdict {
        ordering: cert.is_interleaved(),
        residuals: max_residual <= tol,
        sup_norm: measured_sup <= level + tol,
        level,
        max_residual,
        measured_sup,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub grid_points: usize,
    pub bisect_iterations: usize,
    /// Final bisection bracket on the grid defect.
    pub bracket: [f64; 2],
    pub polished: bool,
    pub polish_iterations: usize,
    /// Tolerance the certificate was extracted with.
    pub certificate_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformSolution {
    pub params: EllipseParams,
    /// `‖f - g‖∞` of `params`.
    pub defect: f64,
    pub certificate: AlternanceCertificate,
    pub diagnostics: SolverDiagnostics,
}

/// Solves `min ‖f - g‖∞` over the log-ellipse family.
pub fn solve_uniform(gauge: &Gauge, opts: &SolverOptions) -> Result<UniformSolution> {
    opts.validate()?;
    let grid = opts.grid(gauge);
    let logs: Vec<f64> = grid.angles().iter().map(|&a| gauge.log_eval(a)).collect();
    let fmax = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let fmin = logs.iter().cloned().fold(f64::INFINITY, f64::min);

    // the circle through the midrange of f is always feasible at half the oscillation
    let mut params = EllipseParams::new((-(fmax + fmin)).exp(), 0.0, 0.0)?;
    let mut lo = 0.0;
    let mut hi = 0.5 * (fmax - fmin);
    let mut iterations = 0;
    if hi > 0.0 {
        let model = FeasibilityModel::new(gauge, &grid, opts.seed);
        while hi - lo > opts.bisect_tol {
            if iterations >= opts.max_bisect {
                return Err(Error::NoConvergence {
                    iterations,
                    width: hi - lo,
                });
            }
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            match model.solve(mid) {
                Some(found) => {
                    hi = mid;
                    params = found.params;
                }
                None => lo = mid,
            }
        }
    }

    let measure = |p: &EllipseParams| {
        if opts.refine {
            deviation::sup_norm(gauge, p, &grid)
        } else {
            Profile::new(gauge, p, &grid).grid_sup()
        }
    };
    let mut defect = measure(&params);
    let mut polished = false;
    let mut polish_iterations = 0;
    if opts.polish && defect > 0.0 {
        if let Some(result) = remez_polish(gauge, &params, &grid, opts.cert_tol) {
            polish_iterations = result.iterations;
            let polished_defect = measure(&result.params);
            if polished_defect < defect {
                params = result.params;
                defect = polished_defect;
                polished = true;
            }
        }
    }

    let mut certificate_tol = opts.cert_tol;
    let certificate = match extract_certificate_on(gauge, &params, certificate_tol, &grid) {
        Ok(c) => c,
        Err(Error::NoAlternance(_)) => {
            // the unpolished optimum is only as good as the grid; widen to
            // the proven suboptimality gap
            certificate_tol = opts.cert_tol.max(2.0 * (defect - lo));
            extract_certificate_on(gauge, &params, certificate_tol, &grid)?
        }
        Err(e) => return Err(e),
    };

    Ok(UniformSolution {
        params,
        defect,
        certificate,
        diagnostics: SolverDiagnostics {
            grid_points: grid.len(),
            bisect_iterations: iterations,
            bracket: [lo, hi],
            polished,
            polish_iterations,
            certificate_tol,
        },
    })
}

struct Polished {
    params: EllipseParams,
    iterations: usize,
}

/// Picks four alternating extrema `+, -, +, -` from the local extrema of
/// `f - g`, dropping the smallest ones pairwise (multiple exchange).
fn select_reference(extrema: &[Extremum]) -> Option<[f64; 4]> {
    let mut seq: Vec<(f64, f64)> = extrema
        .iter()
        .filter(|e| match e.kind {
            ExtremumKind::Max => e.value > 0.0,
            ExtremumKind::Min => e.value < 0.0,
        })
        .map(|e| (e.angle, e.value))
        .collect();
    // merge runs of equal sign, circularly
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for p in seq.drain(..) {
        match merged.last_mut() {
            Some(last) if (last.1 > 0.0) == (p.1 > 0.0) => {
                if p.1.abs() > last.1.abs() {
                    *last = p;
                }
            }
            _ => merged.push(p),
        }
    }
    while merged.len() > 1 && (merged[0].1 > 0.0) == (merged[merged.len() - 1].1 > 0.0) {
        let last = merged.pop()?;
        if last.1.abs() > merged[0].1.abs() {
            merged[0] = last;
        }
    }
    if merged.len() < 4 {
        return None;
    }
    while merged.len() > 4 {
        let n = merged.len();
        let k = (0..n).min_by(|&i, &j| merged[i].1.abs().total_cmp(&merged[j].1.abs()))?;
        let (prev, next) = ((k + n - 1) % n, (k + 1) % n);
        let partner = if merged[prev].1.abs() < merged[next].1.abs() { prev } else { next };
        let (a, b) = (k.max(partner), k.min(partner));
        merged.remove(a);
        merged.remove(b);
    }
    let start = (0..4).find(|&i| merged[i].1 > 0.0)?;
    let phi1 = merged[start].0;
    let mut out = [0.0; 4];
    for (t, slot) in out.iter_mut().enumerate() {
        let a = merged[(start + t) % 4].0;
        *slot = if t == 0 { a } else { angle::reduce_from(a, phi1) };
    }
    if out[0] < out[1] && out[1] < out[2] && out[2] < out[3] {
        Some(out)
    } else {
        None
    }
}

/// Newton's method on `f(pᵢ) + ½ log ℜ(pᵢ) = ±d` in the unknowns `(a, b, c, d)`.
fn equioscillate(gauge: &Gauge, start: &EllipseParams, points: [f64; 4]) -> Option<(EllipseParams, f64)> {
    let logs = points.map(|p| gauge.log_eval(p));
    let trig_rows = points.map(|p| {
        let (s, c) = (2.0 * p).sin_cos();
        [1.0, c, s]
    });
    let residual = |x: &Vector4<f64>| -> Option<Vector4<f64>> {
        let mut r = Vector4::zeros();
        for i in 0..4 {
            let t = trig_rows[i][0] * x[0] + trig_rows[i][1] * x[1] + trig_rows[i][2] * x[2];
            if !(t > 0.0) {
                return None;
            }
            r[i] = logs[i] + 0.5 * t.ln() - SIGNS[i] * x[3];
        }
        Some(r)
    };
    let level0 = (0..4).map(|i| SIGNS[i] * deviation(gauge, start, points[i])).sum::<f64>() / 4.0;
    let mut x = Vector4::new(start.a2(), start.b2(), start.c2(), level0);
    let mut r = residual(&x)?;
    for _ in 0..50 {
        let mut jac = Matrix4::zeros();
        for i in 0..4 {
            let t = trig_rows[i][0] * x[0] + trig_rows[i][1] * x[1] + trig_rows[i][2] * x[2];
            for k in 0..3 {
                jac[(i, k)] = 0.5 * trig_rows[i][k] / t;
            }
            jac[(i, 3)] = -SIGNS[i];
        }
        let step = jac.lu().solve(&(-r))?;
        let mut damping = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let candidate = x + step * damping;
            if EllipseParams::new(candidate[0], candidate[1], candidate[2]).is_ok() {
                if let Some(rc) = residual(&candidate) {
                    if rc.amax() < r.amax() || damping == 1.0 {
                        accepted = Some((candidate, rc));
                        break;
                    }
                }
            }
            damping *= 0.5;
        }
        let (next, rn) = accepted?;
        let moved = (next - x).amax();
        x = next;
        r = rn;
        if r.amax() < 1e-15 || moved <= 1e-16 * x.amax() {
            break;
        }
    }
    if r.amax() > 1e-10 {
        return None;
    }
    let params = EllipseParams::new(x[0], x[1], x[2]).ok()?;
    Some((params, x[3]))
}

fn remez_polish(gauge: &Gauge, start: &EllipseParams, grid: &AngleGrid, tol: f64) -> Option<Polished> {
    let mut params = *start;
    let mut best: Option<(EllipseParams, f64)> = None;
    let mut iterations = 0;
    for _ in 0..40 {
        iterations += 1;
        let profile = Profile::new(gauge, &params, grid);
        let extrema = profile.extrema();
        let sup = extrema.iter().fold(profile.grid_sup(), |m, e| m.max(e.value.abs()));
        if best.map_or(true, |(_, s)| sup < s) {
            best = Some((params, sup));
        }
        let reference = select_reference(&extrema)?;
        let (next, level) = equioscillate(gauge, &params, reference)?;
        let gap = sup - level.abs();
        if gap <= 1e-3 * tol && params == *start {
            break;
        }
        if gap <= 1e-14 * (1.0 + sup) {
            break;
        }
        let unchanged = next
            .as_array()
            .iter()
            .zip(params.as_array())
            .all(|(x, y)| (x - y).abs() <= 1e-16 * next.a2());
        params = next;
        if unchanged {
            break;
        }
    }
    let profile = Profile::new(gauge, &params, grid);
    let sup = profile.sup_norm();
    if best.map_or(true, |(_, s)| sup < s) {
        best = Some((params, sup));
    }
    best.map(|(params, _)| Polished { params, iterations })
}

/// The inscribed ellipse: the uniform optimum shifted down by the defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedSolution {
    pub params: EllipseParams,
    /// `max (f - g)` of the shifted ellipse, equal to twice the defect.
    pub value: f64,
}

pub fn to_one_sided(gauge: &Gauge, sol: &UniformSolution) -> Result<OneSidedSolution> {
    to_one_sided_on(gauge, sol, &deviation::evaluation_grid(gauge, 4096))
}

pub fn to_one_sided_on(gauge: &Gauge, sol: &UniformSolution, grid: &AngleGrid) -> Result<OneSidedSolution> {
    let params = sol.params.shifted_log(-sol.defect)?;
    let (value, _) = deviation::range(gauge, &params, grid);
    Ok(OneSidedSolution { params, value })
}

/// `d₂ = exp(2 · defect)`.
pub fn distance(gauge: &Gauge, opts: &SolverOptions) -> Result<f64> {
    solve_uniform(gauge, opts).map(|s| (2.0 * s.defect).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::regular_polygon;

    fn square() -> Gauge {
        Gauge::from_lp(f64::INFINITY).unwrap()
    }

    const QUARTER_LN2: f64 = 0.173_286_795_139_986_3;

    #[test]
    fn feasibility_examples() {
        let grid = AngleGrid::uniform(256);
        let found = feasible_at(&Gauge::circle(), 0.0, &grid, 1).unwrap();
        let p = found.params.as_array();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
        assert!(found.margin.abs() < 1e-12);

        let sq = square();
        let grid = deviation::evaluation_grid(&sq, 256);
        assert!(feasible_at(&sq, 0.9 * QUARTER_LN2, &grid, 1).is_none());
        let found = feasible_at(&sq, 1.1 * QUARTER_LN2, &grid, 1).unwrap();
        assert!(found.margin >= 0.0);
    }

    #[test]
    fn feasibility_is_monotone() {
        let g = Gauge::from_polygon(&[[2.0, 0.3], [0.4, 1.0], [-0.8, 0.9], [-2.0, -0.3], [-0.4, -1.0], [0.8, -0.9]], false)
            .unwrap();
        let grid = deviation::evaluation_grid(&g, 128);
        let levels: Vec<f64> = (0..40).map(|k| k as f64 * 0.01).collect();
        let feasible: Vec<bool> = levels.iter().map(|&d| feasible_at(&g, d, &grid, 3).is_some()).collect();
        let first = feasible.iter().position(|f| *f).unwrap();
        assert!(first > 0);
        assert!(feasible[first..].iter().all(|f| *f));
    }

    #[test]
    fn circle_is_exact() {
        let sol = solve_uniform(&Gauge::circle(), &SolverOptions::default()).unwrap();
        assert_eq!(sol.defect, 0.0);
        assert_eq!(sol.params.as_array(), [1.0, 0.0, 0.0]);
        assert_eq!(sol.certificate.points(), [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4]);
        assert_eq!(sol.certificate.residuals, [0.0; 4]);
        assert_eq!(distance(&Gauge::circle(), &SolverOptions::default()).unwrap(), 1.0);
    }

    #[test]
    fn square_solution() {
        let sol = solve_uniform(&square(), &SolverOptions::default()).unwrap();
        assert!((sol.defect - QUARTER_LN2).abs() < 1e-10, "{}", sol.defect);
        let p = sol.params.as_array();
        assert!((p[0] - 0.5f64.sqrt()).abs() < 1e-6 && p[1].abs() < 1e-6 && p[2].abs() < 1e-6);
        let pts = sol.certificate.points();
        let expected = [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];
        for (a, b) in pts.iter().zip(expected) {
            assert!((a - b).abs() < 1e-4, "{pts:?}");
        }
        assert!(verify_certificate(&square(), &sol.params, &sol.certificate, 1e-6).passed());
    }

    #[test]
    fn one_sided_square() {
        let sq = square();
        let sol = solve_uniform(&sq, &SolverOptions::default()).unwrap();
        let one = to_one_sided(&sq, &sol).unwrap();
        let p = one.params.as_array();
        assert!((p[0] - 1.0).abs() < 1e-6 && p[1].abs() < 1e-6 && p[2].abs() < 1e-6);
        assert!((one.value - 0.5 * 2f64.ln()).abs() < 1e-8);

        let circle = solve_uniform(&Gauge::circle(), &SolverOptions::default()).unwrap();
        let one = to_one_sided(&Gauge::circle(), &circle).unwrap();
        assert_eq!(one.params, circle.params);
        assert_eq!(one.value, 0.0);
    }

    #[test]
    fn hexagon_distance() {
        let hex = Gauge::from_polygon(&regular_polygon(6, 0.0), false).unwrap();
        let d = distance(&hex, &SolverOptions::default()).unwrap();
        assert!((d - 2.0 / 3f64.sqrt()).abs() < 1e-6, "{d}");
    }

    #[test]
    fn suboptimal_square_has_no_alternance() {
        let p = EllipseParams::new(0.9 * 0.5f64.sqrt(), 0.0, 0.0).unwrap();
        assert!(matches!(extract_certificate(&square(), &p, 1e-6), Err(Error::NoAlternance(_))));
    }

    #[test]
    fn verify_detects_tampering() {
        let sq = square();
        let sol = solve_uniform(&sq, &SolverOptions::default()).unwrap();
        let mut bad = sol.certificate;
        bad.psi[1] = bad.phi[0] + PI + 0.1;
        let v = verify_certificate(&sq, &sol.params, &bad, 1e-6);
        assert!(!v.ordering && !v.passed());

        // move φ₂ off the vertex so f - g drops by ~10·tol there
        let tol = 1e-6;
        let mut off = sol.certificate;
        let slope = 1.0; // |d/dφ log r| at the square's vertex is 1
        off.phi[1] -= 10.0 * tol / slope;
        let v = verify_certificate(&sq, &sol.params, &off, tol);
        assert!(v.ordering && !v.residuals && !v.passed(), "{v:?}");
    }

    #[test]
    fn reference_selection_alternates() {
        let mk = |angle: f64, value: f64| Extremum {
            angle,
            value,
            kind: if value > 0.0 { ExtremumKind::Max } else { ExtremumKind::Min },
        };
        let ex = vec![mk(0.1, 0.5), mk(0.3, -0.2), mk(0.5, 0.01), mk(0.6, -0.01), mk(1.0, 0.4), mk(2.0, -0.45)];
        let r = select_reference(&ex).unwrap();
        assert_eq!(r, [0.1, 0.3, 1.0, 2.0]);
        assert!(select_reference(&ex[..2]).is_none());
    }
}
