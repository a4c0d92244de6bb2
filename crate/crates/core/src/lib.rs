//! Random simplicial complexes and their F2 cohomology.
//!
//! The crate builds k-dimensional complexes in the downward-closed model
//! (`G`) and the full-skeleton model (`Y`), computes cohomology over the
//! two-element field, detects flower-based obstructions to cohomological
//! connectedness, scans the birth-time process for hitting times, and runs
//! Monte Carlo experiments around the connectivity threshold.

pub mod cohomology;
pub mod complex;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod obstructions;
pub mod process;
pub mod simplex;
pub mod stats;
pub mod thresholds;
pub mod unionfind;

pub use cohomology::{Cochain, CohomologySummary};
pub use complex::{Complex, Model, SimplexIndex};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
pub use simplex::{Simplex, Vertex};
