//! Shared bodies and random generators for the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use bm2d::gauge::regular_polygon;
use bm2d::{EllipseParams, Gauge, Interpolation};
use rand::Rng;

pub const QUARTER_LN2: f64 = 0.173_286_795_139_986_3;

pub fn square() -> Gauge {
    Gauge::from_lp(f64::INFINITY).unwrap()
}

/// `ℓ1` ball scaled to inradius 1.
pub fn diamond() -> Gauge {
    let s = 2f64.sqrt();
    Gauge::from_polygon(&[[s, 0.0], [0.0, s], [-s, 0.0], [0.0, -s]], false).unwrap()
}

pub fn hexagon() -> Gauge {
    Gauge::from_polygon(&regular_polygon(6, 0.0), false).unwrap()
}

/// Convex hull of a point set (counterclockwise, no collinear points).
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Symmetric convex polygon: hull of `k` random points and their antipodes.
pub fn random_convex_polygon<R: Rng>(rng: &mut R) -> Vec<[f64; 2]> {
    let k = rng.gen_range(2..=7);
    let mut pts = Vec::new();
    for _ in 0..k {
        let r = rng.gen_range(0.3..2.0);
        let a = rng.gen_range(0.0..PI);
        let p = [r * f64::cos(a), r * f64::sin(a)];
        pts.push(p);
        pts.push([-p[0], -p[1]]);
    }
    convex_hull(&pts)
}

/// Symmetric star-shaped (usually non-convex) polygon with vertices at
/// increasing angles and random radii.
pub fn random_star_polygon<R: Rng>(rng: &mut R) -> Vec<[f64; 2]> {
    let k = rng.gen_range(2..=8);
    let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut a = rng.gen_range(0.0..PI / k as f64);
    let mut half = Vec::new();
    for w in &weights {
        let r = rng.gen_range(0.5..1.5);
        half.push([r * a.cos(), r * a.sin()]);
        a += w / total * PI;
    }
    let mut all = half.clone();
    all.extend(half.iter().map(|p| [-p[0], -p[1]]));
    all
}

pub fn random_ellipse<R: Rng>(rng: &mut R) -> EllipseParams {
    let a = rng.gen_range(0.2..5.0);
    let r = rng.gen_range(0.0..0.95) * a;
    let t: f64 = rng.gen_range(0.0..2.0 * PI);
    EllipseParams::new(a, r * t.cos(), r * t.sin()).unwrap()
}

/// Random invertible map with bounded condition number.
pub fn random_linear_map<R: Rng>(rng: &mut R) -> [[f64; 2]; 2] {
    loop {
        let m = [
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let frob2: f64 = m.iter().flatten().map(|x| x * x).sum();
        if det.abs() > 0.1 * frob2 {
            return m;
        }
    }
}

/// Named bodies covering every gauge kind.
pub fn corpus() -> Vec<(String, Gauge)> {
    let mut out: Vec<(String, Gauge)> = vec![
        ("circle".into(), Gauge::circle()),
        ("square".into(), square()),
        ("l1".into(), Gauge::from_lp(1.0).unwrap()),
        ("diamond".into(), diamond()),
        ("hexagon".into(), hexagon()),
        ("octagon".into(), Gauge::from_polygon(&regular_polygon(8, 0.1), false).unwrap()),
        ("l1.5".into(), Gauge::from_lp(1.5).unwrap()),
        ("l3".into(), Gauge::from_lp(3.0).unwrap()),
        ("l8".into(), Gauge::from_lp(8.0).unwrap()),
        ("ellipse".into(), Gauge::from_ellipse(EllipseParams::new(1.0, 0.2, 0.1).unwrap())),
        (
            "rectangle".into(),
            Gauge::from_polygon(&[[2.0, 0.5], [-2.0, 0.5], [-2.0, -0.5], [2.0, -0.5]], false).unwrap(),
        ),
        (
            "parallelogram".into(),
            Gauge::from_polygon(&[[1.0, 0.0], [1.5, 1.0], [-1.0, 0.0], [-1.5, -1.0]], false).unwrap(),
        ),
    ];
    let bumpy: Vec<f64> = (0..256)
        .map(|k| {
            let phi = k as f64 * PI / 256.0;
            1.0 + 0.1 * (2.0 * phi).cos() + 0.05 * (6.0 * phi).sin()
        })
        .collect();
    out.push(("samples-linear".into(), Gauge::from_samples(&bumpy).unwrap()));
    out.push((
        "samples-cubic".into(),
        Gauge::from_samples_with(&bumpy, Interpolation::MonotoneCubic).unwrap(),
    ));
    let star: Vec<[f64; 2]> = (0..8)
        .map(|k| {
            let r = if k % 2 == 0 { 1.3 } else { 1.0 };
            let a = k as f64 * PI / 4.0 + 0.2;
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    out.push(("star8".into(), Gauge::from_polygon(&star, false).unwrap()));
    out.push((
        "bowtie".into(),
        Gauge::from_polygon(&[[3.0, 1.0], [3.0, 2.0], [4.0, 2.0], [4.0, 1.0]], true).unwrap(),
    ));
    out
}
