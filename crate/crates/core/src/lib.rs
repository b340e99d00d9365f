//! Splitting tessellations of the unit sphere.
//!
//! Starting from the two hemispheres, every cell is cut by a random great
//! circle after an exponential time whose rate is the measure of circles
//! hitting it. [`process`] simulates this, [`gc`] simulates the Poisson
//! great-circle tessellation for comparison, and [`stats`] holds the exact
//! means together with Monte Carlo estimators.
//!
//! ```
//! use sphsplit::process::{run, ProcessConfig};
//! use sphsplit::stats::closed_form;
//! use sphsplit::tessellation::Class;
//!
//! let r = run(&ProcessConfig::new(1.0, 42).unwrap()).unwrap();
//! let s = r.tessellation.summarize();
//! assert_eq!(s.cells, 2 + r.jumps);
//! assert_eq!(closed_form(1.0).unwrap().intensity(Class::Cell), 5.0);
//! ```

pub mod geometry;
pub mod tessellation;
pub mod process;
pub mod gc;
pub mod stats;
pub mod report;
pub mod selftest;
