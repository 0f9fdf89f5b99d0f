//! Geometric form of a solution: the operator `T̂` with `B ⊂ T̂(B_X) ⊂ d₂·B`,
//! extremal points `x₁, x₂` with `|T̂xᵢ| = d₂`, and contact points `y₁, y₂`
//! with `|T̂yᵢ| = 1`.
//!
//! Labeling: `xᵢ` and `yᵢ` are the boundary points in the certificate
//! directions `φᵢ`, `ψᵢ`. Since the certificate satisfies
//! `φ₁ < ψ₁ < φ₂ < ψ₂ < φ₁ + π`, all four points lie in the half-plane
//! window starting at `x₁`, with `y₁` between `x₁` and `x₂` and `y₂`
//! between `x₂` and `-x₁`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ellipse::{params_to_matrix, EllipseParams, PdMatrix2};
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::solver::{to_one_sided, AlternanceCertificate, SolverDiagnostics, UniformSolution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDiagnostics {
    pub solver: Option<SolverDiagnostics>,
    /// `T̂xᵢ / |T̂xᵢ|` on the unit circle.
    pub u_points: [[f64; 2]; 2],
    /// `T̂yᵢ`, on the unit circle.
    pub v_points: [[f64; 2]; 2],
    /// `max (f - g)` of the inscribed ellipse.
    pub one_sided_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub d2: f64,
    pub defect: f64,
    pub params_uniform: EllipseParams,
    pub params_inscribed: EllipseParams,
    #[serde(rename = "T_hat")]
    pub t_hat: PdMatrix2,
    /// Maps the unit circle onto the inscribed ellipse; absent in reports
    /// written by other tools.
    #[serde(rename = "T_tilde", default, skip_serializing_if = "Option::is_none")]
    pub t_tilde: Option<PdMatrix2>,
    pub x_points: [[f64; 2]; 2],
    pub y_points: [[f64; 2]; 2],
    pub certificate: AlternanceCertificate,
    pub cone_condition_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<ReportDiagnostics>,
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn polar(v: [f64; 2]) -> f64 {
    v[1].atan2(v[0])
}

/// `θ` shifted into `[start, start + period)`.
fn wrap(theta: f64, start: f64, period: f64) -> f64 {
    start + (theta - start).rem_euclid(period)
}

/// Interleaving `x₁ < y₁ < x₂ < y₂ < -x₁` in angular order. With `relabel`,
/// `x₂, y₁, y₂` may each be replaced by their antipodes first, which leaves
/// every condition of the characterization unchanged.
pub fn cone_condition(x: [[f64; 2]; 2], y: [[f64; 2]; 2], relabel: bool) -> bool {
    let start = polar(x[0]);
    let period = if relabel { PI } else { 2.0 * PI };
    let [t_y1, t_x2, t_y2] = [y[0], x[1], y[1]].map(|p| wrap(polar(p), start, period));
    start < t_y1 && t_y1 < t_x2 && t_x2 < t_y2 && t_y2 < start + PI
}

/// Smallest angle between the lines through `p` and `q`.
fn line_separation(p: [f64; 2], q: [f64; 2]) -> f64 {
    let d = (polar(p) - polar(q)).rem_euclid(PI);
    d.min(PI - d)
}

pub fn build_report(gauge: &Gauge, sol: &UniformSolution) -> Result<SolveReport> {
    let one = to_one_sided(gauge, sol)?;
    let t_tilde = params_to_matrix(&one.params);
    let t_hat = t_tilde.inverse();
    let cert = sol.certificate;
    let x_points = cert.phi.map(|a| gauge.boundary_point(a));
    let y_points = cert.psi.map(|a| gauge.boundary_point(a));
    let cone_ok = cone_condition(x_points, y_points, false);
    if !cone_ok {
        return Err(Error::ConeViolation(format!(
            "certificate angles {:?} do not interleave",
            cert.points()
        )));
    }
    let unit = |p: [f64; 2]| {
        let q = t_hat.apply(p);
        let n = norm(q);
        [q[0] / n, q[1] / n]
    };
    Ok(SolveReport {
        d2: (2.0 * sol.defect).exp(),
        defect: sol.defect,
        params_uniform: sol.params,
        params_inscribed: one.params,
        t_hat,
        t_tilde: Some(t_tilde),
        x_points,
        y_points,
        certificate: cert,
        cone_condition_ok: cone_ok,
        diagnostics: Some(ReportDiagnostics {
            solver: Some(sol.diagnostics.clone()),
            u_points: x_points.map(unit),
            v_points: y_points.map(|p| t_hat.apply(p)),
            one_sided_value: one.value,
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem1Verdict {
    /// `|T̂xᵢ| = d₂`.
    pub x_distance: bool,
    /// `|T̂yᵢ| = 1`.
    pub y_contact: bool,
    pub cone: bool,
    /// `x₁ ≠ ±x₂` and `y₁ ≠ ±y₂`.
    pub distinct: bool,
    /// `d₂ = exp(2·defect)` and `T̂ = T̃⁻¹` when `T̃` is present.
    pub consistent: bool,
    pub max_x_error: f64,
    pub max_y_error: f64,
}

impl Theorem1Verdict {
    pub fn passed(&self) -> bool {
        self.x_distance && self.y_contact && self.cone && self.distinct && self.consistent
    }
}

/// Re-checks the characterization on a report, with antipodal relabeling.
pub fn verify_theorem1(report: &SolveReport, tol: f64) -> Theorem1Verdict {
    verify_theorem1_with(report, tol, true)
}

pub fn verify_theorem1_with(report: &SolveReport, tol: f64, relabel: bool) -> Theorem1Verdict {
    let t = &report.t_hat;
    let max_x_error = report
        .x_points
        .iter()
        .map(|&x| (norm(t.apply(x)) - report.d2).abs())
        .fold(0.0, f64::max);
    let max_y_error = report
        .y_points
        .iter()
        .map(|&y| (norm(t.apply(y)) - 1.0).abs())
        .fold(0.0, f64::max);
    let separation = line_separation(report.x_points[0], report.x_points[1])
        .min(line_separation(report.y_points[0], report.y_points[1]));
    let inverse_ok = report.t_tilde.is_none_or(|tt| {
        let p = tt.inverse();
        p.relative_distance(t) <= 1e-10
    });
    let d2_ok = ((2.0 * report.defect).exp() - report.d2).abs() <= tol;
    Theorem1Verdict {
        x_distance: max_x_error <= tol,
        y_contact: max_y_error <= tol,
        cone: cone_condition(report.x_points, report.y_points, relabel),
        distinct: separation > 1e-6,
        consistent: inverse_ok && d2_ok,
        max_x_error,
        max_y_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_uniform, SolverOptions};

    fn square_report() -> SolveReport {
        let g = Gauge::from_lp(f64::INFINITY).unwrap();
        let sol = solve_uniform(&g, &SolverOptions::default()).unwrap();
        build_report(&g, &sol).unwrap()
    }

    fn close(p: [f64; 2], q: [f64; 2], tol: f64) -> bool {
        (p[0] - q[0]).abs() < tol && (p[1] - q[1]).abs() < tol
    }

    #[test]
    fn square_geometry() {
        let r = square_report();
        assert!((r.d2 - 2f64.sqrt()).abs() < 1e-9);
        assert!(close(r.x_points[0], [1.0, 1.0], 1e-6) && close(r.x_points[1], [-1.0, 1.0], 1e-6));
        assert!(close(r.y_points[0], [0.0, 1.0], 1e-6) && close(r.y_points[1], [-1.0, 0.0], 1e-6));
        assert!(r.t_hat.relative_distance(&PdMatrix2::identity()) < 1e-6);
        assert!(r.cone_condition_ok);
        assert!(verify_theorem1(&r, 1e-6).passed());
    }

    #[test]
    fn circle_report_is_identity() {
        let g = Gauge::circle();
        let sol = solve_uniform(&g, &SolverOptions::default()).unwrap();
        let r = build_report(&g, &sol).unwrap();
        assert_eq!(r.d2, 1.0);
        assert_eq!(r.t_hat, PdMatrix2::identity());
        assert!(verify_theorem1(&r, 1e-12).passed());
    }

    #[test]
    fn antipodal_relabeling() {
        let mut r = square_report();
        r.y_points[1] = [-r.y_points[1][0], -r.y_points[1][1]];
        assert!(verify_theorem1(&r, 1e-6).passed());
        let strict = verify_theorem1_with(&r, 1e-6, false);
        assert!(!strict.cone && !strict.passed());
    }

    #[test]
    fn radial_perturbation_fails() {
        let mut r = square_report();
        r.x_points[1] = r.x_points[1].map(|c| c * (1.0 + 1e-3));
        let v = verify_theorem1(&r, 1e-6);
        assert!(!v.x_distance && !v.passed());
    }

    #[test]
    fn tampered_d2_fails() {
        let mut r = square_report();
        r.d2 *= 1.01;
        assert!(!verify_theorem1(&r, 1e-6).passed());
    }

    #[test]
    fn json_schema() {
        let r = square_report();
        let v: serde_json::Value = serde_json::from_str(&crate::json::to_string(&r).unwrap()).unwrap();
        for key in ["d2", "defect", "params_uniform", "params_inscribed", "T_hat", "x_points", "y_points", "certificate", "cone_condition_ok"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["certificate"]["phi"].as_array().unwrap().len(), 2);
        assert_eq!(v["T_hat"].as_array().unwrap().len(), 2);
        let back: SolveReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
