//! Radial functions of centrally symmetric star bodies in the plane.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::angle;
use crate::ellipse::EllipseParams;
use crate::error::{Error, Result};

/// Interpolation scheme for sampled radial functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Linear,
    /// Periodic monotone (Fritsch–Carlson) cubic Hermite.
    MonotoneCubic,
}

/// The radial function `r(φ)` of a symmetric star body: the boundary point in
/// direction `φ` is `r(φ)(cos φ, sin φ)`. Evaluation always reduces `φ` mod π.
#[derive(Debug, Clone, PartialEq)]
pub enum Gauge {
    Circle,
    Lp(LpBall),
    Samples(SampledRadial),
    Ellipse(EllipseParams),
    Polygon(StarPolygon),
}

impl Gauge {
    pub fn circle() -> Self {
        Gauge::Circle
    }

    /// Unit ball of ℓp; pass `f64::INFINITY` for ℓ∞.
    pub fn from_lp(p: f64) -> Result<Self> {
        LpBall::new(p).map(Gauge::Lp)
    }

    pub fn from_samples(values: &[f64]) -> Result<Self> {
        Self::from_samples_with(values, Interpolation::Linear)
    }

    pub fn from_samples_with(values: &[f64], interpolation: Interpolation) -> Result<Self> {
        SampledRadial::new(values, interpolation).map(Gauge::Samples)
    }

    pub fn from_ellipse(params: EllipseParams) -> Self {
        Gauge::Ellipse(params)
    }

    pub fn from_polygon(vertices: &[[f64; 2]], symmetrize: bool) -> Result<Self> {
        StarPolygon::new(vertices, symmetrize).map(Gauge::Polygon)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gauge::Circle => "circle",
            Gauge::Lp(_) => "lp",
            Gauge::Samples(_) => "samples",
            Gauge::Ellipse(_) => "ellipse",
            Gauge::Polygon(_) => "polygon",
        }
    }

    /// `r(φ)`.
    pub fn eval(&self, phi: f64) -> f64 {
        let phi = angle::reduce(phi);
        match self {
            Gauge::Circle => 1.0,
            Gauge::Lp(b) => b.log_radius(phi).exp(),
            Gauge::Samples(s) => s.radius(phi),
            Gauge::Ellipse(e) => e.rho(phi),
            Gauge::Polygon(p) => p.radius(phi),
        }
    }

    /// `f(φ) = log r(φ)`.
    pub fn log_eval(&self, phi: f64) -> f64 {
        let phi = angle::reduce(phi);
        match self {
            Gauge::Circle => 0.0,
            Gauge::Lp(b) => b.log_radius(phi),
            Gauge::Samples(s) => s.radius(phi).ln(),
            Gauge::Ellipse(e) => e.log_rho(phi),
            Gauge::Polygon(p) => p.radius(phi).ln(),
        }
    }

    pub fn boundary_point(&self, phi: f64) -> [f64; 2] {
        let r = self.eval(phi);
        [r * phi.cos(), r * phi.sin()]
    }

    /// Angles in `[0, π)` where `r` may fail to be smooth.
    pub fn kinks(&self) -> Vec<f64> {
        let mut out = match self {
            Gauge::Circle | Gauge::Ellipse(_) => Vec::new(),
            Gauge::Lp(b) => b.kinks(),
            Gauge::Samples(s) => s.kinks(),
            Gauge::Polygon(p) => p.kinks(),
        };
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        out
    }

    /// Image of the body under the invertible linear map `m` (row-major).
    /// Exact for circles, ellipses and polygons; other kinds are rejected.
    pub fn transformed(&self, m: [[f64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || det.abs() < 1e-300 {
            return Err(Error::InvalidInput("linear map is singular".into()));
        }
        let apply = |v: [f64; 2]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
        match self {
            Gauge::Polygon(p) => {
                let mapped: Vec<[f64; 2]> = p.vertices().iter().map(|v| apply(*v)).collect();
                Gauge::from_polygon(&mapped, false)
            }
            Gauge::Circle | Gauge::Ellipse(_) => {
                // boundary {x : xᵀQx = 1} maps to {y : yᵀ A⁻ᵀ Q A⁻¹ y = 1}
                let (q11, q12, q22) = match self {
                    Gauge::Ellipse(e) => (e.a2() + e.b2(), e.c2(), e.a2() - e.b2()),
                    _ => (1.0, 0.0, 1.0),
                };
                let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
                let q = [[q11, q12], [q12, q22]];
                let mut out = [[0.0; 2]; 2];
                for (i, row) in out.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        for k in 0..2 {
                            for l in 0..2 {
                                *cell += inv[k][i] * q[k][l] * inv[l][j];
                            }
                        }
                    }
                }
                let c2 = 0.5 * (out[0][1] + out[1][0]);
                EllipseParams::new(0.5 * (out[0][0] + out[1][1]), 0.5 * (out[0][0] - out[1][1]), c2)
                    .map(Gauge::Ellipse)
            }
            _ => Err(Error::InvalidInput(format!(
                "linear images of {} gauges are not supported",
                self.kind_name()
            ))),
        }
    }

    /// Body rotated counterclockwise by `theta`. Lp and sampled gauges are
    /// resampled on a 4096-point grid.
    pub fn rotated(&self, theta: f64) -> Result<Self> {
        match self {
            Gauge::Lp(_) | Gauge::Samples(_) => {
                let n = 4096;
                let values: Vec<f64> = (0..n)
                    .map(|k| self.eval(k as f64 * PI / n as f64 - theta))
                    .collect();
                let interpolation = match self {
                    Gauge::Samples(s) => s.interpolation,
                    _ => Interpolation::Linear,
                };
                Gauge::from_samples_with(&values, interpolation)
            }
            _ => {
                let (s, c) = theta.sin_cos();
                self.transformed([[c, -s], [s, c]])
            }
        }
    }
}

/// Unit ball of the ℓp norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBall {
    p: f64,
}

impl LpBall {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(LpBall { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn log_radius(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let (hi, lo) = if c.abs() >= s.abs() { (c.abs(), s.abs()) } else { (s.abs(), c.abs()) };
        if self.p.is_infinite() {
            return -hi.ln();
        }
        // r = (hi^p + lo^p)^(-1/p) = hi⁻¹ (1 + (lo/hi)^p)^(-1/p)
        -hi.ln() - (lo / hi).powf(self.p).ln_1p() / self.p
    }

    fn kinks(&self) -> Vec<f64> {
        if self.p.is_infinite() {
            vec![FRAC_PI_4, 3.0 * FRAC_PI_4]
        } else if self.p < 2.0 {
            vec![0.0, FRAC_PI_2]
        } else {
            Vec::new()
        }
    }
}

/// Radial function sampled at `φ_k = kπ/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledRadial {
    values: Vec<f64>,
    slopes: Vec<f64>,
    interpolation: Interpolation,
}

impl SampledRadial {
    pub const MIN_SAMPLES: usize = 8;

    pub fn new(values: &[f64], interpolation: Interpolation) -> Result<Self> {
        if values.len() < Self::MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: Self::MIN_SAMPLES,
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NonPositiveSample { index, value });
        }
        let n = values.len();
        let slopes = match interpolation {
            Interpolation::Linear => Vec::new(),
            Interpolation::MonotoneCubic => (0..n)
                .map(|k| {
                    let before = values[k] - values[(k + n - 1) % n];
                    let after = values[(k + 1) % n] - values[k];
                    if before * after <= 0.0 {
                        0.0
                    } else {
                        2.0 * before * after / (before + after)
                    }
                })
                .collect(),
        };
        Ok(SampledRadial {
            values: values.to_vec(),
            slopes,
            interpolation,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    fn radius(&self, phi: f64) -> f64 {
        let n = self.values.len();
        let mut x = phi * n as f64 / PI;
        let nearest = x.round();
        if (x - nearest).abs() < 1e-9 {
            x = nearest;
        }
        let k = (x.floor() as usize).min(n - 1);
        let t = (x - k as f64).clamp(0.0, 1.0);
        let (v0, v1) = (self.values[k], self.values[(k + 1) % n]);
        if t == 0.0 {
            return v0;
        }
        match self.interpolation {
            Interpolation::Linear => v0 + (v1 - v0) * t,
            Interpolation::MonotoneCubic => {
                let (m0, m1) = (self.slopes[k], self.slopes[(k + 1) % n]);
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * v0
                    + (t3 - 2.0 * t2 + t) * m0
                    + (-2.0 * t3 + 3.0 * t2) * v1
                    + (t3 - t2) * m1
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self.interpolation {
            Interpolation::Linear => {
                let n = self.values.len();
                (0..n).map(|k| k as f64 * PI / n as f64).collect()
            }
            Interpolation::MonotoneCubic => Vec::new(),
        }
    }
}

/// Polygon that is star-shaped about the origin, with vertices in
/// counterclockwise angular order.
#[derive(Debug, Clone, PartialEq)]
pub struct StarPolygon {
    vertices: Vec<[f64; 2]>,
    /// Vertex angles in `[0, 2π)`, ascending; `vertices` is rotated to match.
    angles: Vec<f64>,
    /// Edge `i` (from vertex `i` to `i + 1`) lies on `normal · x = offset`, `offset > 0`.
    edges: Vec<([f64; 2], f64)>,
}

const SYMMETRY_TOL: f64 = 1e-12;

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl StarPolygon {
    pub fn new(vertices: &[[f64; 2]], symmetrize: bool) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("vertex coordinates must be finite".into()));
        }
        let scale = vertices.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
        if vertices.iter().any(|v| v[0].hypot(v[1]) <= 1e-14 * scale) || scale == 0.0 {
            return Err(Error::OriginOutside);
        }
        let tol = SYMMETRY_TOL * scale.max(1.0);

        let ordered = if symmetrize {
            let mut all: Vec<[f64; 2]> = vertices.iter().flat_map(|v| [*v, [-v[0], -v[1]]]).collect();
            all.sort_by(|a, b| {
                let ta = angle_2pi(*a);
                let tb = angle_2pi(*b);
                ta.total_cmp(&tb)
            });
            let mut unique: Vec<[f64; 2]> = Vec::with_capacity(all.len());
            for v in all {
                if !unique.iter().any(|u| (u[0] - v[0]).hypot(u[1] - v[1]) <= tol) {
                    unique.push(v);
                }
            }
            unique
        } else {
            for (i, v) in vertices.iter().enumerate() {
                if !vertices.iter().any(|w| (w[0] + v[0]).hypot(w[1] + v[1]) <= tol) {
                    return Err(Error::NotSymmetric(i));
                }
            }
            vertices.to_vec()
        };
        Self::from_ordered(ordered)
    }

    fn from_ordered(mut vertices: Vec<[f64; 2]>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let turns: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                cross(a, b).atan2(dot(a, b))
            })
            .collect();
        let winding = turns.iter().sum::<f64>() / (2.0 * PI);
        if winding.abs() < 0.5 {
            return Err(Error::OriginOutside);
        }
        let ccw = winding > 0.0;
        if turns.iter().any(|t| (*t > 0.0) != ccw || *t == 0.0) {
            return Err(Error::NotStarShaped(
                "vertex angles are not strictly monotone around the origin".into(),
            ));
        }
        if (winding.abs() - 1.0).abs() > 1e-9 {
            return Err(Error::NotStarShaped(format!("boundary winds {winding:.3} times around the origin")));
        }
        if turns.iter().any(|t| t.abs() >= PI) {
            return Err(Error::OriginOutside);
        }
        if !ccw {
            vertices.reverse();
        }
        let start = (0..n)
            .min_by(|&i, &j| angle_2pi(vertices[i]).total_cmp(&angle_2pi(vertices[j])))
            .unwrap_or(0);
        vertices.rotate_left(start);
        let angles: Vec<f64> = vertices.iter().map(|v| angle_2pi(*v)).collect();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let normal = [b[1] - a[1], a[0] - b[0]];
            let offset = dot(normal, a);
            if offset <= 0.0 {
                return Err(Error::OriginOutside);
            }
            edges.push((normal, offset));
        }
        Ok(StarPolygon { vertices, angles, edges })
    }

    /// Vertices in counterclockwise order, starting from the smallest angle in `[0, 2π)`.
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    fn radius(&self, phi: f64) -> f64 {
        let n = self.angles.len();
        // edge i spans [angles[i], angles[i+1]); the last edge wraps through 2π
        let i = match self.angles.partition_point(|a| *a <= phi) {
            0 => n - 1,
            k => k - 1,
        };
        let (normal, offset) = self.edges[i];
        offset / (normal[0] * phi.cos() + normal[1] * phi.sin())
    }

    fn kinks(&self) -> Vec<f64> {
        self.angles.iter().map(|a| angle::reduce(*a)).collect()
    }
}

fn angle_2pi(v: [f64; 2]) -> f64 {
    let a = v[1].atan2(v[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Regular polygon with `n` (even) vertices and inradius 1, first edge normal along `phase`.
pub fn regular_polygon(n: usize, phase: f64) -> Vec<[f64; 2]> {
    let circumradius = 1.0 / (PI / n as f64).cos();
    (0..n)
        .map(|k| {
            let a = phase + (2 * k + 1) as f64 * PI / n as f64;
            [circumradius * a.cos(), circumradius * a.sin()]
        })
        .collect()
}
