//! The error function `e(φ) = f(φ) - g(φ)` between a gauge and an ellipse,
//! with refinement of its local extrema between grid points.

use std::f64::consts::PI;

use crate::angle::{self, AngleGrid};
use crate::ellipse::EllipseParams;
use crate::gauge::Gauge;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// In `[0, π)`.
    pub angle: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

impl Extremum {
    /// `value` for maxima, `-value` for minima.
    pub fn signed_height(&self) -> f64 {
        match self.kind {
            ExtremumKind::Max => self.value,
            ExtremumKind::Min => -self.value,
        }
    }
}

#[inline]
pub fn deviation(gauge: &Gauge, params: &EllipseParams, phi: f64) -> f64 {
    gauge.log_eval(phi) - params.log_rho(phi)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `h` on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(h: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = h(x1);
    let mut f2 = h(x2);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = h(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Sampled deviation on a grid.
pub struct Profile<'a> {
    gauge: &'a Gauge,
    params: &'a EllipseParams,
    angles: &'a [f64],
    values: Vec<f64>,
}

impl<'a> Profile<'a> {
    pub fn new(gauge: &'a Gauge, params: &'a EllipseParams, grid: &'a AngleGrid) -> Self {
        let angles = grid.angles();
        let values = angles.iter().map(|&a| deviation(gauge, params, a)).collect();
        Profile {
            gauge,
            params,
            angles,
            values,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest `|e|` on the grid points alone.
    pub fn grid_sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Local extrema of `e`, each refined by golden-section search between
    /// its grid neighbours, sorted by angle.
    pub fn extrema(&self) -> Vec<Extremum> {
        let n = self.values.len();
        if n < 3 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for k in 0..n {
            let prev = self.values[(k + n - 1) % n];
            let next = self.values[(k + 1) % n];
            let v = self.values[k];
            let kind = if v > prev && v >= next {
                ExtremumKind::Max
            } else if v < prev && v <= next {
                ExtremumKind::Min
            } else {
                continue;
            };
            out.push(self.refine(k, kind));
        }
        out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        out
    }

    fn refine(&self, k: usize, kind: ExtremumKind) -> Extremum {
        let n = self.angles.len();
        let center = self.angles[k];
        let mut lo = self.angles[(k + n - 1) % n];
        let mut hi = self.angles[(k + 1) % n];
        if lo > center {
            lo -= PI;
        }
        if hi < center {
            hi += PI;
        }
        let sign = match kind {
            ExtremumKind::Max => 1.0,
            ExtremumKind::Min => -1.0,
        };
        let h = |phi: f64| sign * deviation(self.gauge, self.params, phi);
        let (x, hx) = golden_max(h, lo, hi);
        let grid_height = sign * self.values[k];
        let (angle, height) = if hx > grid_height { (x, hx) } else { (center, grid_height) };
        Extremum {
            angle: angle::reduce(angle),
            value: sign * height,
            kind,
        }
    }

    /// `max |e|` over the grid and the refined extrema.
    pub fn sup_norm(&self) -> f64 {
        sup_of(&self.extrema(), self.grid_sup())
    }
}

fn sup_of(extrema: &[Extremum], grid_sup: f64) -> f64 {
    extrema.iter().fold(grid_sup, |m, e| m.max(e.value.abs()))
}

/// Refined `‖f - g‖∞`.
pub fn sup_norm(gauge: &Gauge, params: &EllipseParams, grid: &AngleGrid) -> f64 {
    Profile::new(gauge, params, grid).sup_norm()
}

/// Refined `max (f - g)` and `min (f - g)`.
pub fn range(gauge: &Gauge, params: &EllipseParams, grid: &AngleGrid) -> (f64, f64) {
    let profile = Profile::new(gauge, params, grid);
    let mut hi = profile.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = profile.values.iter().cloned().fold(f64::INFINITY, f64::min);
    for e in profile.extrema() {
        hi = hi.max(e.value);
        lo = lo.min(e.value);
    }
    (hi, lo)
}

/// Default evaluation grid for a gauge: `n` uniform angles plus the kinks.
pub fn evaluation_grid(gauge: &Gauge, n: usize) -> AngleGrid {
    AngleGrid::uniform(n).with_points(&gauge.kinks())
}
