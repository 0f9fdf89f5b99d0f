//! Banach–Mazur distance from a two-dimensional normed space to the
//! Euclidean plane.
//!
//! The unit sphere of the space is described by its radial function `r(φ)`
//! (a [`Gauge`]). Writing `f = log r`, the distance equals `exp(2 d)` where
//! `d` is the uniform distance from `f` to the family of log-radial functions
//! of origin-centred ellipses,
//! `g(φ) = -½ log(a₂ + b₂ cos 2φ + c₂ sin 2φ)`.
//! The optimal ellipse is unique and is certified by four interleaved
//! extremal angles (an [`AlternanceCertificate`]).
//!
//! ```
//! use bm2d::{Gauge, SolverOptions, distance};
//!
//! let square = Gauge::from_lp(f64::INFINITY).unwrap();
//! let d = distance(&square, &SolverOptions::default()).unwrap();
//! assert!((d - 2f64.sqrt()).abs() < 1e-6);
//! ```

pub mod angle;
pub mod body;
pub mod cli;
pub mod deviation;
pub mod ellipse;
mod error;
pub mod gauge;
pub mod json;
pub mod lp;
pub mod oracle;
pub mod report;
pub mod solver;
pub mod svg;

pub use angle::AngleGrid;
pub use body::BodyDescriptor;
pub use ellipse::{EllipseParams, Interpolated, PdMatrix2, StdEllipseParams};
pub use error::{Error, Result};
pub use gauge::{Gauge, Interpolation};
pub use oracle::{oracle_uniform, oracle_value, OracleGrid, OracleResult};
pub use report::{build_report, verify_theorem1, SolveReport, Theorem1Verdict};
pub use solver::{
    distance, extract_certificate, feasible_at, solve_uniform, to_one_sided,
    verify_certificate, AlternanceCertificate, CertificateVerdict, Feasible, OneSidedSolution,
    SolverOptions, UniformSolution,
};
pub use svg::{render_svg, View};
