//! Origin-centred ellipses in polar coordinates.
//!
//! An ellipse is stored through the coefficients of its inverse squared
//! radial function `ρ⁻²(φ) = a₂ + b₂ cos 2φ + c₂ sin 2φ`. The triple is a
//! genuine ellipse exactly when it lies in the open cone
//! `a₂ > 0, a₂² > b₂² + c₂²`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angle;
use crate::error::{Error, Result};

/// Value of the trigonometric form `a + b cos 2φ + c sin 2φ`.
#[inline]
pub fn trig_form(coeffs: [f64; 3], phi: f64) -> f64 {
    let (s, c) = (2.0 * phi).sin_cos();
    coeffs[0] + coeffs[1] * c + coeffs[2] * s
}

/// Derivative in `φ` of the trigonometric form.
#[inline]
pub fn trig_form_derivative(coeffs: [f64; 3], phi: f64) -> f64 {
    let (s, c) = (2.0 * phi).sin_cos();
    2.0 * (coeffs[2] * c - coeffs[1] * s)
}

/// Derivative of `g = -½ log ℜ` given the value and derivative of `ℜ`.
pub fn log_derivative_from_trig(value: f64, derivative: f64) -> f64 {
    -0.5 * derivative / value
}

/// Inverse of [`log_derivative_from_trig`].
pub fn trig_derivative_from_log(value: f64, log_derivative: f64) -> f64 {
    -2.0 * value * log_derivative
}

fn in_cone(a2: f64, b2: f64, c2: f64) -> bool {
    a2.is_finite() && b2.is_finite() && c2.is_finite() && a2 > 0.0 && a2 * a2 > b2 * b2 + c2 * c2
}

/// Coefficients `(a₂, b₂, c₂)` of an ellipse in the open cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    a2: f64,
    b2: f64,
    c2: f64,
}

impl EllipseParams {
    pub fn new(a2: f64, b2: f64, c2: f64) -> Result<Self> {
        if in_cone(a2, b2, c2) {
            Ok(EllipseParams { a2, b2, c2 })
        } else {
            Err(Error::NotInCone(a2, b2, c2))
        }
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self> {
        Self::new(c[0], c[1], c[2])
    }

    /// Circle of the given radius.
    pub fn circle(radius: f64) -> Result<Self> {
        Self::new(radius.powi(-2), 0.0, 0.0)
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a2, self.b2, self.c2]
    }

    /// `ρ⁻²(φ)`.
    #[inline]
    pub fn trig(&self, phi: f64) -> f64 {
        trig_form(self.as_array(), phi)
    }

    #[inline]
    pub fn trig_derivative(&self, phi: f64) -> f64 {
        trig_form_derivative(self.as_array(), phi)
    }

    pub fn rho(&self, phi: f64) -> f64 {
        self.trig(phi).powf(-0.5)
    }

    /// `g(φ) = log ρ(φ) = -½ log ρ⁻²(φ)`.
    #[inline]
    pub fn log_rho(&self, phi: f64) -> f64 {
        -0.5 * self.trig(phi).ln()
    }

    pub fn log_rho_derivative(&self, phi: f64) -> f64 {
        log_derivative_from_trig(self.trig(phi), self.trig_derivative(phi))
    }

    /// Multiplies the triple by `factor > 0`, i.e. shifts `g` by `-½ log factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.a2 * factor, self.b2 * factor, self.c2 * factor)
    }

    /// Ellipse whose log-radial function is `g + shift`.
    pub fn shifted_log(&self, shift: f64) -> Result<Self> {
        self.scaled((-2.0 * shift).exp())
    }

    pub fn to_std(&self) -> StdEllipseParams {
        let bprime = self.b2.hypot(self.c2);
        let theta = if bprime == 0.0 {
            0.0
        } else {
            angle::reduce(0.5 * self.c2.atan2(self.b2))
        };
        StdEllipseParams {
            a: self.a2,
            bprime,
            theta,
        }
    }

    /// The positive definite `T̃` mapping the unit circle onto this ellipse.
    pub fn to_matrix(&self) -> PdMatrix2 {
        params_to_matrix(self)
    }

    /// Boundary point in direction `phi`.
    pub fn point(&self, phi: f64) -> [f64; 2] {
        let r = self.rho(phi);
        [r * phi.cos(), r * phi.sin()]
    }
}

impl Serialize for EllipseParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EllipseParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = <[f64; 3]>::deserialize(d)?;
        EllipseParams::from_array(c).map_err(serde::de::Error::custom)
    }
}

/// Standard form `ρ⁻² = a + b' cos 2(φ - θ)` with `a > b' ≥ 0`, `θ ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StdEllipseParams {
    a: f64,
    bprime: f64,
    theta: f64,
}

impl StdEllipseParams {
    pub fn new(a: f64, bprime: f64, theta: f64) -> Result<Self> {
        if !(a.is_finite() && bprime.is_finite() && theta.is_finite()) || !(a > bprime && bprime >= 0.0) {
            return Err(Error::NotInCone(a, bprime, theta));
        }
        let theta = if bprime == 0.0 { 0.0 } else { angle::reduce(theta) };
        Ok(StdEllipseParams { a, bprime, theta })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn bprime(&self) -> f64 {
        self.bprime
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_params(&self) -> EllipseParams {
        let (s, c) = (2.0 * self.theta).sin_cos();
        EllipseParams {
            a2: self.a,
            b2: self.bprime * c,
            c2: self.bprime * s,
        }
    }

    /// Semi-axes `(along θ, along θ + π/2)`.
    pub fn semi_axes(&self) -> (f64, f64) {
        ((self.a + self.bprime).powf(-0.5), (self.a - self.bprime).powf(-0.5))
    }
}

/// Symmetric 2×2 matrix `[[m11, m12], [m12, m22]]`, positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdMatrix2 {
    m11: f64,
    m12: f64,
    m22: f64,
}

impl PdMatrix2 {
    pub fn new(m11: f64, m12: f64, m22: f64) -> Result<Self> {
        let ok = m11.is_finite() && m12.is_finite() && m22.is_finite() && m11 > 0.0 && m11 * m22 - m12 * m12 > 0.0;
        if ok {
            Ok(PdMatrix2 { m11, m12, m22 })
        } else {
            Err(Error::NotPd)
        }
    }

    pub fn identity() -> Self {
        PdMatrix2 { m11: 1.0, m12: 0.0, m22: 1.0 }
    }

    pub fn diag(d1: f64, d2: f64) -> Result<Self> {
        Self::new(d1, 0.0, d2)
    }

    pub fn m11(&self) -> f64 {
        self.m11
    }

    pub fn m12(&self) -> f64 {
        self.m12
    }

    pub fn m22(&self) -> f64 {
        self.m22
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m12, self.m22]]
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m12 * v[0] + self.m22 * v[1]]
    }

    pub fn inverse(&self) -> PdMatrix2 {
        let det = self.det();
        PdMatrix2 {
            m11: self.m22 / det,
            m12: -self.m12 / det,
            m22: self.m11 / det,
        }
    }

    /// `S²`, which is again symmetric positive definite.
    pub fn squared(&self) -> PdMatrix2 {
        PdMatrix2 {
            m11: self.m11 * self.m11 + self.m12 * self.m12,
            m12: self.m12 * (self.m11 + self.m22),
            m22: self.m12 * self.m12 + self.m22 * self.m22,
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_trace = 0.5 * self.trace();
        let spread = (0.5 * (self.m11 - self.m22)).hypot(self.m12);
        let hi = half_trace + spread;
        // smaller eigenvalue through the determinant to avoid cancellation
        (self.det() / hi, hi)
    }

    /// Spectral norm, i.e. the largest eigenvalue.
    pub fn norm(&self) -> f64 {
        self.eigenvalues().1
    }

    /// Unique positive definite square root, `(S + √Δ I) / √(tr S + 2√Δ)`.
    pub fn sqrt(&self) -> PdMatrix2 {
        let root_det = self.det().sqrt();
        let scale = (self.trace() + 2.0 * root_det).sqrt();
        PdMatrix2 {
            m11: (self.m11 + root_det) / scale,
            m12: self.m12 / scale,
            m22: (self.m22 + root_det) / scale,
        }
    }

    pub fn sqrt_inverse(&self) -> PdMatrix2 {
        self.sqrt().inverse()
    }

    /// Largest absolute entry difference relative to the largest entry.
    pub fn relative_distance(&self, other: &PdMatrix2) -> f64 {
        let scale = self.m11.abs().max(self.m12.abs()).max(self.m22.abs());
        let diff = (self.m11 - other.m11)
            .abs()
            .max((self.m12 - other.m12).abs())
            .max((self.m22 - other.m22).abs());
        diff / scale
    }
}

impl Serialize for PdMatrix2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PdMatrix2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[f64; 2]; 2]>::deserialize(d)?;
        if (rows[0][1] - rows[1][0]).abs() > 1e-12 * (rows[0][1].abs() + 1.0) {
            return Err(serde::de::Error::custom("matrix is not symmetric"));
        }
        PdMatrix2::new(rows[0][0], rows[0][1], rows[1][1]).map_err(serde::de::Error::custom)
    }
}

pub fn pd_sqrt(s: &PdMatrix2) -> PdMatrix2 {
    s.sqrt()
}

pub fn pd_sqrt_inverse(s: &PdMatrix2) -> PdMatrix2 {
    s.sqrt_inverse()
}

/// `T̃` with `T̃⁻² = [[a₂+b₂, c₂], [c₂, a₂-b₂]]`.
pub fn params_to_matrix(e: &EllipseParams) -> PdMatrix2 {
    let quadratic = PdMatrix2 {
        m11: e.a2 + e.b2,
        m12: e.c2,
        m22: e.a2 - e.b2,
    };
    quadratic.sqrt_inverse()
}

/// Inverse of [`params_to_matrix`].
pub fn matrix_to_params(t: &PdMatrix2) -> EllipseParams {
    let m = t.inverse().squared();
    EllipseParams {
        a2: 0.5 * (m.m11 + m.m22),
        b2: 0.5 * (m.m11 - m.m22),
        c2: m.m12,
    }
}

/// Result of a linear interpolation solve: the triple may fall outside the cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interpolated {
    InCone(EllipseParams),
    OutOfCone([f64; 3]),
}

impl Interpolated {
    fn from_coeffs(c: [f64; 3]) -> Self {
        match EllipseParams::from_array(c) {
            Ok(p) => Interpolated::InCone(p),
            Err(_) => Interpolated::OutOfCone(c),
        }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        match self {
            Interpolated::InCone(p) => p.as_array(),
            Interpolated::OutOfCone(c) => *c,
        }
    }

    pub fn is_in_cone(&self) -> bool {
        matches!(self, Interpolated::InCone(_))
    }

    pub fn into_params(self) -> Result<EllipseParams> {
        match self {
            Interpolated::InCone(p) => Ok(p),
            Interpolated::OutOfCone(c) => Err(Error::NotInCone(c[0], c[1], c[2])),
        }
    }
}

fn check_window(angles: &[f64; 3]) -> Result<()> {
    let [p1, p2, p3] = *angles;
    if !angles.iter().all(|a| a.is_finite()) || !(p1 < p2 && p2 < p3 && p3 < p1 + PI) {
        return Err(Error::BadAngleOrder(format!(
            "need φ1 < φ2 < φ3 < φ1 + π, got ({p1}, {p2}, {p3})"
        )));
    }
    Ok(())
}

/// Evaluation matrix with rows `(1, cos 2φᵢ, sin 2φᵢ)`.
pub fn three_point_matrix(angles: [f64; 3]) -> Matrix3<f64> {
    let row = |phi: f64| {
        let (s, c) = (2.0 * phi).sin_cos();
        [1.0, c, s]
    };
    let [r1, r2, r3] = angles.map(row);
    Matrix3::new(r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2])
}

/// Closed form `4 sin(φ₂-φ₁) sin(φ₃-φ₁) sin(φ₃-φ₂)` of the evaluation determinant.
pub fn three_point_determinant(angles: [f64; 3]) -> f64 {
    let [p1, p2, p3] = angles;
    4.0 * (p2 - p1).sin() * (p3 - p1).sin() * (p3 - p2).sin()
}

/// Matrix of the value/derivative/value system at `φ₁, φ₁, φ₂`.
pub fn tangent_matrix(phi1: f64, phi2: f64) -> Matrix3<f64> {
    let (s1, c1) = (2.0 * phi1).sin_cos();
    let (s2, c2) = (2.0 * phi2).sin_cos();
    Matrix3::new(1.0, c1, s1, 0.0, -2.0 * s1, 2.0 * c1, 1.0, c2, s2)
}

/// Closed form `4 sin²(φ₂-φ₁)` of the tangent system determinant.
pub fn tangent_determinant(phi1: f64, phi2: f64) -> f64 {
    4.0 * (phi2 - phi1).sin().powi(2)
}

fn solve3(m: Matrix3<f64>, rhs: [f64; 3]) -> Result<[f64; 3]> {
    let x = m
        .lu()
        .solve(&Vector3::from(rhs))
        .ok_or_else(|| Error::BadAngleOrder("singular interpolation system".into()))?;
    Ok([x[0], x[1], x[2]])
}

/// The unique trigonometric form taking the values `targets` at the three angles.
pub fn interpolate_three_points(angles: [f64; 3], targets: [f64; 3]) -> Result<Interpolated> {
    check_window(&angles)?;
    if !targets.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("interpolation targets must be finite".into()));
    }
    Ok(Interpolated::from_coeffs(solve3(three_point_matrix(angles), targets)?))
}

/// The unique trigonometric form with value `value1` and derivative `derivative1`
/// at `phi1` and value `value2` at `phi2`. Derivatives are of the form itself,
/// see [`trig_derivative_from_log`] for converting from log-radial slopes.
pub fn interpolate_tangent(
    phi1: f64,
    value1: f64,
    derivative1: f64,
    phi2: f64,
    value2: f64,
) -> Result<Interpolated> {
    let gap = (phi1 - phi2).abs();
    if !(gap > 0.0 && gap < PI) {
        return Err(Error::BadAngleOrder(format!("need 0 < |φ1 - φ2| < π, got {gap}")));
    }
    if ![value1, derivative1, value2].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("interpolation targets must be finite".into()));
    }
    let c = solve3(tangent_matrix(phi1, phi2), [value1, derivative1, value2])?;
    Ok(Interpolated::from_coeffs(c))
}

/// Moves the ellipse down by `t` in log scale at the midpoint of `(α, β)` while
/// keeping it fixed at `α` and `β`. The new `g` lies below the old one on
/// `(α, β)` and above it on `(β, α + π)`.
pub fn perturb(e: &EllipseParams, alpha: f64, beta: f64, t: f64) -> Result<EllipseParams> {
    if !(alpha < beta && beta < alpha + PI) {
        return Err(Error::BadAngleOrder(format!("need α < β < α + π, got ({alpha}, {beta})")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("perturbation step must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(*e);
    }
    let gamma = 0.5 * (alpha + beta);
    let targets = [e.trig(alpha), (2.0 * t).exp() * e.trig(gamma), e.trig(beta)];
    match interpolate_three_points([alpha, gamma, beta], targets)? {
        Interpolated::InCone(p) => Ok(p),
        Interpolated::OutOfCone(_) => Err(Error::LeftCone),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cone_membership() {
        assert!(EllipseParams::new(1.0, 0.3, 0.0).is_ok());
        assert!(matches!(EllipseParams::new(1.0, 0.8, 0.6), Err(Error::NotInCone(..))));
        assert!(EllipseParams::new(-1.0, 0.0, 0.0).is_err());
        assert!(EllipseParams::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn rho_examples() {
        let unit = EllipseParams::new(1.0, 0.0, 0.0).unwrap();
        for phi in [0.0, 0.3, 2.0, -5.0] {
            assert!(close(unit.rho(phi), 1.0, 1e-15));
            assert!(close(unit.log_rho(phi), 0.0, 1e-15));
        }
        let big = EllipseParams::new(0.5, 0.0, 0.0).unwrap();
        assert!(close(big.rho(1.234), SQRT2, 1e-15));
        let e = EllipseParams::new(1.0, 0.3, 0.0).unwrap();
        assert!(close(e.rho(0.0), 0.877_058_019_307_029, 1e-12));
        assert!(close(e.rho(0.0), 1.0 / 1.3f64.sqrt(), 1e-15));
    }

    #[test]
    fn params_to_matrix_examples() {
        let id = params_to_matrix(&EllipseParams::new(1.0, 0.0, 0.0).unwrap());
        assert!(id.relative_distance(&PdMatrix2::identity()) < 1e-15);
        let t = params_to_matrix(&EllipseParams::new(0.5, 0.0, 0.0).unwrap());
        assert!(close(t.m11(), SQRT2, 1e-15) && close(t.m22(), SQRT2, 1e-15) && t.m12() == 0.0);
        let t = params_to_matrix(&EllipseParams::new(1.0, 0.3, 0.0).unwrap());
        assert!(close(t.m11(), 1.0 / 1.3f64.sqrt(), 1e-15));
        assert!(close(t.m22(), 1.0 / 0.7f64.sqrt(), 1e-15));
        assert!(close(t.m22(), 1.195_228_609_334_393_8, 1e-12));
    }

    #[test]
    fn matrix_to_params_examples() {
        let p = matrix_to_params(&PdMatrix2::identity());
        assert_eq!(p.as_array(), [1.0, 0.0, 0.0]);
        let p = matrix_to_params(&PdMatrix2::diag(2.0, 1.0).unwrap());
        assert!(close(p.a2(), 0.625, 1e-15) && close(p.b2(), -0.375, 1e-15) && p.c2() == 0.0);
        let t = PdMatrix2::new(1.366_025_4, 0.366_025_4, 1.366_025_4).unwrap();
        let p = matrix_to_params(&t);
        assert!(p.c2().abs() > 0.1);
        assert!(params_to_matrix(&p).relative_distance(&t) < 1e-10);
    }

    #[test]
    fn sqrt_examples() {
        assert!(PdMatrix2::identity().sqrt().relative_distance(&PdMatrix2::identity()) < 1e-15);
        let r = PdMatrix2::diag(4.0, 9.0).unwrap().sqrt();
        assert!(close(r.m11(), 2.0, 1e-15) && close(r.m22(), 3.0, 1e-15) && r.m12() == 0.0);
        let s = PdMatrix2::new(2.0, 1.0, 2.0).unwrap();
        let r = s.sqrt();
        let h = 0.5 * 3f64.sqrt();
        assert!(close(r.m11(), h + 0.5, 1e-15) && close(r.m12(), h - 0.5, 1e-15));
        assert!(r.squared().relative_distance(&s) < 1e-12);
        assert!(PdMatrix2::new(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn std_form_round_trip() {
        let p = EllipseParams::new(2.0, 0.3, -0.4).unwrap();
        let s = p.to_std();
        assert!(close(s.a(), 2.0, 0.0) && close(s.bprime(), 0.5, 1e-15));
        assert!(close(s.bprime() * (2.0 * s.theta()).cos(), 0.3, 1e-15));
        assert!(close(s.bprime() * (2.0 * s.theta()).sin(), -0.4, 1e-15));
        assert!((0.0..PI).contains(&s.theta()));
        let back = s.to_params();
        assert!(close(back.b2(), 0.3, 1e-15) && close(back.c2(), -0.4, 1e-15));
        let c = EllipseParams::circle(2.0).unwrap().to_std();
        assert_eq!((c.bprime(), c.theta()), (0.0, 0.0));
        assert!(StdEllipseParams::new(1.0, 1.0, 0.0).is_err());
        assert!(StdEllipseParams::new(1.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn three_point_examples() {
        let a = [0.0, PI / 3.0, 2.0 * PI / 3.0];
        let p = interpolate_three_points(a, [1.3, 0.85, 0.85]).unwrap().into_params().unwrap();
        assert!(close(p.a2(), 1.0, 1e-14) && close(p.b2(), 0.3, 1e-14) && close(p.c2(), 0.0, 1e-14));
        let p = interpolate_three_points([0.0, PI / 4.0, PI / 2.0], [1.0; 3]).unwrap();
        let c = p.coefficients();
        assert!(close(c[0], 1.0, 1e-15) && close(c[1], 0.0, 1e-15) && close(c[2], 0.0, 1e-15));
        let det = three_point_determinant(a);
        assert!(close(det, 1.5 * 3f64.sqrt(), 1e-15));
        assert!(close(three_point_matrix(a).determinant(), det, 1e-12));
        assert!(matches!(
            interpolate_three_points([0.0, 2.0, 1.0], [1.0; 3]),
            Err(Error::BadAngleOrder(_))
        ));
        assert!(interpolate_three_points([0.0, 1.0, 3.2], [1.0; 3]).is_err());
        // linear solve succeeds even when the triple is not an ellipse
        let out = interpolate_three_points([0.0, PI / 4.0, PI / 2.0], [1.0, 3.0, 1.0]).unwrap();
        assert!(!out.is_in_cone());
        assert!(close(out.coefficients()[2], 2.0, 1e-14));
    }

    #[test]
    fn tangent_examples() {
        let p = interpolate_tangent(0.0, 1.3, 0.0, PI / 2.0, 0.7).unwrap().into_params().unwrap();
        assert!(close(p.a2(), 1.0, 1e-15) && close(p.b2(), 0.3, 1e-15) && close(p.c2(), 0.0, 1e-15));
        let p = interpolate_tangent(0.0, 1.0, 0.0, PI / 3.0, 1.0).unwrap().into_params().unwrap();
        assert!(close(p.a2(), 1.0, 1e-15) && p.b2().abs() < 1e-15 && p.c2().abs() < 1e-15);

        let truth = EllipseParams::new(1.0, 0.2, 0.1).unwrap();
        let (p1, p2) = (PI / 4.0, 1.9);
        let p = interpolate_tangent(p1, truth.trig(p1), truth.trig_derivative(p1), p2, truth.trig(p2))
            .unwrap()
            .into_params()
            .unwrap();
        for (x, y) in p.as_array().iter().zip(truth.as_array()) {
            assert!(close(*x, y, 1e-10));
        }
        assert!(interpolate_tangent(0.0, 1.0, 0.0, PI, 1.0).is_err());
        assert!(interpolate_tangent(0.5, 1.0, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn log_derivative_conversion() {
        let e = EllipseParams::new(1.0, 0.2, 0.1).unwrap();
        let phi = 0.7;
        let h = 1e-6;
        let numeric = (e.log_rho(phi + h) - e.log_rho(phi - h)) / (2.0 * h);
        assert!(close(e.log_rho_derivative(phi), numeric, 1e-9));
        let back = trig_derivative_from_log(e.trig(phi), e.log_rho_derivative(phi));
        assert!(close(back, e.trig_derivative(phi), 1e-14));
    }

    #[test]
    fn perturb_examples() {
        let unit = EllipseParams::new(1.0, 0.0, 0.0).unwrap();
        let p = perturb(&unit, 0.0, PI / 2.0, 0.1).unwrap();
        assert!(close(p.a2(), 1.0, 1e-14) && p.b2().abs() < 1e-14);
        assert!(close(p.c2(), 0.2f64.exp() - 1.0, 1e-14));
        assert!(close(p.c2(), 0.221_402_758, 1e-8));
        assert_eq!(perturb(&unit, 0.0, PI / 2.0, 0.0).unwrap(), unit);
        assert!(matches!(perturb(&unit, 0.0, PI / 2.0, 0.4), Err(Error::LeftCone)));
        assert!(perturb(&unit, 1.0, 0.5, 0.1).is_err());
    }

    fn arb_params() -> impl Strategy<Value = EllipseParams> {
        (0.05f64..20.0, 0.0f64..0.95, 0.0f64..PI)
            .prop_map(|(a, frac, th)| StdEllipseParams::new(a, a * frac, th).unwrap().to_params())
    }

    fn arb_pd() -> impl Strategy<Value = PdMatrix2> {
        (0.05f64..10.0, 0.05f64..10.0, 0.0f64..PI).prop_map(|(l1, l2, th)| {
            let (s, c) = th.sin_cos();
            PdMatrix2::new(l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matrix_params_round_trip(t in arb_pd()) {
            let back = params_to_matrix(&matrix_to_params(&t));
            prop_assert!(back.relative_distance(&t) < 1e-12);
        }

        #[test]
        fn sqrt_squares_back(s in arb_pd()) {
            prop_assert!(s.sqrt().squared().relative_distance(&s) < 1e-12);
        }

        #[test]
        fn matrix_maps_circle_to_ellipse(p in arb_params(), phi in 0.0f64..PI) {
            // T̃⁻¹ sends the boundary point back to the unit circle
            let t = p.to_matrix();
            let y = t.inverse().apply(p.point(phi));
            prop_assert!((y[0].hypot(y[1]) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn interpolation_reproduces_values(p in arb_params(), a in 0.0f64..PI, d1 in 0.05f64..1.4, d2 in 0.05f64..1.4) {
            prop_assume!(d1 + d2 < PI - 0.05);
            let angles = [a, a + d1, a + d1 + d2];
            let targets = angles.map(|x| p.trig(x));
            let c = interpolate_three_points(angles, targets).unwrap().coefficients();
            let scale = targets.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (x, t) in angles.iter().zip(targets) {
                prop_assert!((trig_form(c, *x) - t).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn std_round_trip(p in arb_params()) {
            let s = p.to_std();
            prop_assert!(s.a() > s.bprime() && s.bprime() >= 0.0 && (0.0..PI).contains(&s.theta()));
            let back = s.to_params();
            for (x, y) in back.as_array().iter().zip(p.as_array()) {
                prop_assert!((x - y).abs() <= 1e-12 * p.a2());
            }
        }

        #[test]
        fn perturb_sign_pattern(p in arb_params(), alpha in 0.0f64..PI, width in 0.1f64..3.0, t in 1e-4f64..0.05) {
            let beta = alpha + width;
            let q = match perturb(&p, alpha, beta, t) {
                Ok(q) => q,
                Err(Error::LeftCone) => return Ok(()),
                Err(e) => panic!("{e}"),
            };
            prop_assert!((q.log_rho(alpha) - p.log_rho(alpha)).abs() < 1e-12);
            prop_assert!((q.log_rho(beta) - p.log_rho(beta)).abs() < 1e-12);
            let gamma = 0.5 * (alpha + beta);
            prop_assert!((q.log_rho(gamma) - (p.log_rho(gamma) - t)).abs() < 1e-12);
            for k in 1..256 {
                let inside = alpha + width * k as f64 / 256.0;
                prop_assert!(q.log_rho(inside) < p.log_rho(inside));
                let outside = beta + (PI - width) * k as f64 / 256.0;
                prop_assert!(q.log_rho(outside) > p.log_rho(outside));
            }
        }
    }
}
