//! Brute-force minimization of `‖f - g‖∞` over a box grid in the standard
//! chart `(a, b', θ)`, `ρ⁻² = a + b' cos 2(φ - θ)`.
//!
//! The oracle shares no code with the solver beyond gauge evaluation. For
//! each candidate it computes `w(φ) = e^{2f(φ)} ρ⁻²(φ)` on the angle grid,
//! using `sup |f - g| = ½ max(log max w, -log min w)`, so the inner loop is
//! multiply-adds only. A coarse exhaustive pass is followed by zoomed passes
//! around the incumbent.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::AngleGrid;
use crate::ellipse::{EllipseParams, StdEllipseParams};
use crate::error::{Error, Result};
use crate::gauge::Gauge;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    pub n_a: usize,
    pub n_b: usize,
    pub n_theta: usize,
    /// Search interval for the inverse squared semi-axes `a ± b'`; derived
    /// from the gauge when absent.
    pub a_range: Option<(f64, f64)>,
    /// Uniform angles per period; the gauge's kinks are added.
    pub n_phi: usize,
    /// Angles for the exhaustive coarse pass (capped at `n_phi`); the
    /// zoomed passes use `n_phi`.
    pub n_phi_coarse: usize,
    /// Zoomed passes after the coarse one (0 = plain grid search).
    pub refine_stages: usize,
    /// Points per axis in each zoomed pass.
    pub refine_points: usize,
    /// Radius of the near-optimal cluster reported as `runner_up_distance`.
    pub neighborhood: f64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Cap on the number of candidate ellipses evaluated.
    pub max_evaluations: u64,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid {
            n_a: 64,
            n_b: 64,
            n_theta: 64,
            a_range: None,
            n_phi: 8192,
            n_phi_coarse: 1024,
            refine_stages: 10,
            refine_points: 17,
            neighborhood: 1e-3,
            threads: None,
            max_evaluations: 1_000_000_000,
        }
    }
}

impl OracleGrid {
    pub fn coarse(n_a: usize, n_b: usize, n_theta: usize, n_phi: usize) -> Self {
        OracleGrid {
            n_a,
            n_b,
            n_theta,
            n_phi,
            n_phi_coarse: n_phi,
            refine_stages: 0,
            ..OracleGrid::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_a < 8 || self.n_b < 8 || self.n_theta < 8 || self.n_phi < 8 || self.n_phi_coarse < 8 {
            return Err(Error::InvalidOptions("oracle grid resolutions must be >= 8".into()));
        }
        if self.refine_stages > 0 && self.refine_points < 3 {
            return Err(Error::InvalidOptions("refine_points must be >= 3".into()));
        }
        if let Some((lo, hi)) = self.a_range {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::InvalidOptions(format!("a_range must satisfy 0 < lo < hi, got ({lo}, {hi})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub params: StdEllipseParams,
    /// Grid sup norm of `f - g` at `params`.
    pub value: f64,
    /// Largest distance (in `(a₂, b₂, c₂)`, relative to `a`) from the best
    /// coarse point to any coarse point whose value is within the
    /// neighborhood of the best; small when the optimum is unique.
    pub runner_up_distance: f64,
    pub evaluations: u64,
}

/// Max of `|f - g|` over `n_phi` uniform angles; a lower bound on the sup norm.
pub fn oracle_value(gauge: &Gauge, params: &EllipseParams, n_phi: usize) -> f64 {
    let n = n_phi.max(1);
    (0..n)
        .map(|k| {
            let phi = k as f64 * PI / n as f64;
            (gauge.log_eval(phi) - params.log_rho(phi)).abs()
        })
        .fold(0.0, f64::max)
}

/// Gauge samples prepared for fast candidate evaluation.
struct Samples {
    /// `e^{2f(φ)}`
    weight: Vec<f64>,
    cos2: Vec<f64>,
    sin2: Vec<f64>,
}

impl Samples {
    fn new(gauge: &Gauge, grid: &AngleGrid) -> Self {
        let mut s = Samples {
            weight: Vec::with_capacity(grid.len()),
            cos2: Vec::with_capacity(grid.len()),
            sin2: Vec::with_capacity(grid.len()),
        };
        for &phi in grid.angles() {
            s.weight.push((2.0 * gauge.log_eval(phi)).exp());
            let (sn, cs) = (2.0 * phi).sin_cos();
            s.cos2.push(cs);
            s.sin2.push(sn);
        }
        s
    }

    /// `(e^{2f}, e^{2f} cos 2(φ - θ))` for one `θ`.
    fn slice(&self, theta: f64) -> (Vec<f64>, Vec<f64>) {
        let (st, ct) = (2.0 * theta).sin_cos();
        let tilted = (0..self.weight.len())
            .map(|k| self.weight[k] * (self.cos2[k] * ct + self.sin2[k] * st))
            .collect();
        (self.weight.clone(), tilted)
    }
}

/// `sup |f - g|` for `ρ⁻² = a + b' cos 2(φ - θ)`, or `None` once it provably
/// exceeds `cutoff`.
fn evaluate(weight: &[f64], tilted: &[f64], a: f64, b: f64, cutoff: f64) -> Option<f64> {
    let upper = (2.0 * cutoff).exp();
    let lower = 1.0 / upper;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (w, t) in weight.iter().zip(tilted) {
        let v = a * w + b * t;
        hi = hi.max(v);
        lo = lo.min(v);
        if hi > upper || lo < lower {
            return None;
        }
    }
    Some(0.5 * hi.ln().max(-lo.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    value: f64,
    /// `(log λ₋, log(λ₊/λ₋), θ)`.
    point: [f64; 3],
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        match self.value.total_cmp(&other.value) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => self.point.iter().zip(&other.point).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y),
        }
    }

    /// `(a, b', θ)`.
    fn std(&self) -> [f64; 3] {
        let [u, v, theta] = self.point;
        let (small, large) = (u.exp(), (u + v).exp());
        [0.5 * (large + small), 0.5 * (large - small), theta]
    }

    fn coefficients(&self) -> [f64; 3] {
        let [a, b, theta] = self.std();
        [a, b * (2.0 * theta).cos(), b * (2.0 * theta).sin()]
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// One exhaustive pass; returns the best candidate and every candidate
/// within `keep` of it (per θ-slice, merged deterministically).
fn search(
    samples: &Samples,
    u_values: &[f64],
    v_values: &[f64],
    thetas: &[f64],
    keep: f64,
) -> (Option<Candidate>, Vec<Candidate>) {
    let per_theta: Vec<(Option<Candidate>, Vec<Candidate>)> = thetas
        .par_iter()
        .map(|&theta| {
            let (weight, tilted) = samples.slice(theta);
            let mut best: Option<Candidate> = None;
            let mut near = Vec::new();
            for &u in u_values {
                for &v in v_values {
                    let cutoff = best.map_or(f64::INFINITY, |b| b.value + keep);
                    let c = Candidate {
                        value: f64::INFINITY,
                        point: [u, v, theta],
                    };
                    let [a, b, _] = c.std();
                    if let Some(value) = evaluate(&weight, &tilted, a, b, cutoff) {
                        let c = Candidate { value, ..c };
                        if best.is_none_or(|b| c.better_than(&b)) {
                            best = Some(c);
                        }
                        near.push(c);
                    }
                }
            }
            (best, near)
        })
        .collect();
    let mut best: Option<Candidate> = None;
    for (b, _) in &per_theta {
        if let Some(b) = b {
            if best.is_none_or(|x| b.better_than(&x)) {
                best = Some(*b);
            }
        }
    }
    let near = match best {
        Some(b) => per_theta
            .into_iter()
            .flat_map(|(_, n)| n)
            .filter(|c| c.value <= b.value + keep)
            .collect(),
        None => Vec::new(),
    };
    (best, near)
}

/// Default interval for the inverse squared semi-axes: `[e^{-2 max f},
/// e^{-2 min f}]`, widened by the oscillation of `f` on each side.
fn default_a_range(samples: &Samples) -> (f64, f64) {
    let hi = samples.weight.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = samples.weight.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi / lo).sqrt();
    (1.0 / (hi * spread), spread / lo)
}

/// Axis values of one zoomed pass and whether the ends are true box edges.
fn zoom_axis(center: f64, half: f64, n: usize, floor: Option<f64>) -> (Vec<f64>, bool) {
    let lo = center - half;
    match floor {
        Some(f) if lo <= f => (linspace(f, center + half, n), true),
        _ => (linspace(lo, center + half, n), false),
    }
}

/// Grid search for the best ellipse in the standard chart.
///
/// The box is laid out in `(log λ₋, log(λ₊/λ₋), θ)` where
/// `λ± = a ± b'` are the inverse squared semi-axes; `n_a`, `n_b` and
/// `a_range` refer to the first two axes. This is the same family as
/// `a > b' ≥ 0`, but thin ellipses stay resolvable.
pub fn oracle_uniform(gauge: &Gauge, grid: &OracleGrid) -> Result<OracleResult> {
    grid.validate()?;
    let kinks = gauge.kinks();
    let samples = Samples::new(gauge, &AngleGrid::uniform(grid.n_phi).with_points(&kinks));
    let coarse_samples = Samples::new(gauge, &AngleGrid::uniform(grid.n_phi_coarse.min(grid.n_phi)).with_points(&kinks));
    let (a_lo, a_hi) = grid.a_range.unwrap_or_else(|| default_a_range(&samples));
    let coarse = (grid.n_a * grid.n_b * grid.n_theta) as u64;
    let zoom = (grid.refine_points as u64).pow(3) * 4 * grid.refine_stages as u64;
    let evaluations = coarse + zoom;
    if evaluations > grid.max_evaluations {
        return Err(Error::InvalidOptions(format!(
            "oracle grid needs up to {evaluations} evaluations, cap is {}",
            grid.max_evaluations
        )));
    }

    let run = || -> Result<OracleResult> {
        let span = (a_hi / a_lo).ln();
        let u_values = linspace(a_lo.ln(), a_hi.ln(), grid.n_a);
        let v_values = linspace(0.0, span, grid.n_b);
        let thetas: Vec<f64> = (0..grid.n_theta).map(|i| i as f64 * PI / grid.n_theta as f64).collect();
        let (best, near) = search(&coarse_samples, &u_values, &v_values, &thetas, grid.neighborhood);
        let best = best.ok_or(Error::EmptyGrid)?;

        let origin = best.coefficients();
        let runner_up_distance = near
            .iter()
            .map(|c| {
                let p = c.coefficients();
                let d = (0..3).map(|i| (p[i] - origin[i]).powi(2)).sum::<f64>().sqrt();
                d / origin[0]
            })
            .fold(0.0, f64::max);

        // zoom around the incumbent: recentre while it sits on the box
        // boundary, otherwise shrink by 4
        let mut half = [
            2.0 * span / (grid.n_a - 1) as f64,
            2.0 * span / (grid.n_b - 1) as f64,
            2.0 * PI / grid.n_theta as f64,
        ];
        // re-score the incumbent on the full angle grid
        let mut best = search(&samples, &[best.point[0]], &[best.point[1]], &[best.point[2]], 0.0)
            .0
            .ok_or(Error::EmptyGrid)?;
        let (mut shrinks, mut passes) = (0, 0);
        while shrinks < grid.refine_stages && passes < 4 * grid.refine_stages {
            passes += 1;
            let [u, v, theta] = best.point;
            let n = grid.refine_points;
            let (us, _) = zoom_axis(u, half[0], n, None);
            let (vs, v_floor) = zoom_axis(v, half[1], n, Some(0.0));
            let (ts, _) = zoom_axis(theta, half[2], n, None);
            let ts: Vec<f64> = ts.into_iter().map(|t| t.rem_euclid(PI)).collect();
            let (stage_best, _) = search(&samples, &us, &vs, &ts, 0.0);
            let mut on_edge = false;
            if let Some(c) = stage_best {
                let [cu, cv, ct] = c.point;
                on_edge = cu == us[0]
                    || cu == us[n - 1]
                    || (cv == vs[0] && !v_floor)
                    || cv == vs[n - 1]
                    || ct == ts[0]
                    || ct == ts[n - 1];
                if c.better_than(&best) {
                    best = c;
                }
            }
            if !on_edge {
                half = half.map(|h| h / 4.0);
                shrinks += 1;
            }
        }

        let [a, b, _] = best.std();
        let params = StdEllipseParams::new(a, b, best.point[2].rem_euclid(PI))?;
        Ok(OracleResult {
            params,
            value: best.value,
            runner_up_distance,
            evaluations,
        })
    };

    match grid.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidOptions(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUARTER_LN2: f64 = 0.173_286_795_139_986_3;

    #[test]
    fn value_examples() {
        let circle = Gauge::circle();
        assert_eq!(oracle_value(&circle, &EllipseParams::new(1.0, 0.0, 0.0).unwrap(), 64), 0.0);
        let v = oracle_value(&circle, &EllipseParams::new(0.5, 0.0, 0.0).unwrap(), 64);
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
        let square = Gauge::from_lp(f64::INFINITY).unwrap();
        let v = oracle_value(&square, &EllipseParams::new(0.5f64.sqrt(), 0.0, 0.0).unwrap(), 4096);
        assert!((v - QUARTER_LN2).abs() < 1e-6);
    }

    #[test]
    fn evaluate_matches_direct_sup() {
        let g = Gauge::from_lp(3.0).unwrap();
        let grid = AngleGrid::uniform(128);
        let samples = Samples::new(&g, &grid);
        let (w, t) = samples.slice(0.4);
        let fast = evaluate(&w, &t, 1.1, 0.3, f64::INFINITY).unwrap();
        let params = StdEllipseParams::new(1.1, 0.3, 0.4).unwrap().to_params();
        let direct = oracle_value(&g, &params, 128);
        assert!((fast - direct).abs() < 1e-14);
        assert!(evaluate(&w, &t, 1.1, 0.3, 0.5 * fast).is_none());
    }

    #[test]
    fn circle_is_found_exactly() {
        let grid = OracleGrid {
            a_range: Some((0.5, 2.0)),
            n_a: 9,
            ..OracleGrid::coarse(9, 8, 8, 64)
        };
        let r = oracle_uniform(&Gauge::circle(), &grid).unwrap();
        assert!(r.value < 1e-15);
        assert!((r.params.a() - 1.0).abs() < 1e-15 && r.params.bprime() == 0.0);
    }

    #[test]
    fn ellipse_on_grid_is_found() {
        let e = EllipseParams::new(1.0, 0.2, 0.1).unwrap();
        let std = e.to_std();
        // the grids miss the true parameters; zooming closes the gap
        let r = oracle_uniform(&Gauge::from_ellipse(e), &OracleGrid::default()).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
        assert!((r.params.a() - std.a()).abs() < 1e-5);
        assert!((r.params.bprime() - std.bprime()).abs() < 1e-5);
        assert!((r.params.theta() - std.theta()).abs() < 1e-4);
    }

    #[test]
    fn square_coarse_and_refined() {
        let square = Gauge::from_lp(f64::INFINITY).unwrap();
        let coarse = oracle_uniform(&square, &OracleGrid::coarse(40, 40, 16, 512)).unwrap();
        assert!((coarse.value - QUARTER_LN2).abs() < 2e-2);
        let fine = oracle_uniform(&square, &OracleGrid::default()).unwrap();
        assert!((fine.value - QUARTER_LN2).abs() < 1e-6, "{}", fine.value);
        assert!((fine.params.a() - 0.5f64.sqrt()).abs() < 1e-5);
        assert!(fine.params.bprime() < 1e-5);
        assert!(fine.runner_up_distance < 0.2);
    }

    #[test]
    fn rejects_bad_grids() {
        let g = Gauge::circle();
        assert!(matches!(oracle_uniform(&g, &OracleGrid::coarse(4, 8, 8, 64)), Err(Error::InvalidOptions(_))));
        let capped = OracleGrid {
            max_evaluations: 10,
            ..OracleGrid::default()
        };
        assert!(oracle_uniform(&g, &capped).is_err());
    }
}
