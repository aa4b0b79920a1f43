//! Exact computations for the Artin-Tate subcategory of R-motivic spectra at the prime 2.
//!
//! Tri-graded homotopy of points, the tri-graded Steenrod algebra, Ext over the
//! BP Hopf algebroid via the cobar complex, the assembled homotopy of `Cta` and
//! its variants, vanishing regions, the `ta`-Bockstein spectral sequence engine
//! and SVG charts.

pub mod bockstein;
pub mod charts;
pub mod cobar;
pub mod cta;
pub mod grading;
pub mod group;
pub mod linalg;
pub mod point;
pub mod regions;
pub mod steenrod;

pub use grading::{RODegree, TriDegree};
pub use group::{GroupPresentation, GroupTable, Order, Summand};
