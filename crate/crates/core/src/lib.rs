//! Exact revealed-preference analysis.
//!
//! Purchase datasets are held in exact rationals. On top of them sit the
//! GARP family of consistency tests, goodness-of-fit indices (Afriat, Varian,
//! Houtman-Maks, Swaps, money pump), robust welfare relations with
//! compensation levels, and rationalizability tests for homothetic and
//! objective expected utility.

pub mod afriat;
pub mod caps;
pub mod classes;
pub mod csvio;
pub mod dataset;
pub mod error;
pub mod indices;
pub mod lp;
pub mod orders;
pub mod rational;
pub mod relations;
pub mod report;
pub mod robust;
pub mod synth;
pub mod utility;

pub use caps::Caps;
pub use dataset::{Bundle, Observation, PriceVector, PurchaseDataset};
pub use error::{Error, Result};
pub use rational::Rational;
pub use relations::{CycleClass, CycleWitness, EfficiencyVector, RelationMatrix};
