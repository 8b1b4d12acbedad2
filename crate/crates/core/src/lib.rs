//! Exact symbolic calculus on graded symplectic charts: supercommutative
//! polynomials, Poisson brackets, derived brackets of odd potentials and the
//! checks built on them.

#![allow(clippy::needless_range_loop)]

pub mod charts;
pub mod complexes;
pub mod courant;
pub mod dirac;
pub mod error;
pub mod gallery;
pub mod instance;
pub mod lifts;
pub mod linalg;
pub mod poisson;
pub mod report;
pub mod sampling;
pub mod superpoly;

pub use charts::{make_cotangent_antivb_chart, make_darboux_chart, validate_chart, Chart, ChartSpec, Metric};
pub use error::{Error, Result};
pub use superpoly::{parse_expr, format_poly, Parity, Rational, SuperPoly, WeightVec};
