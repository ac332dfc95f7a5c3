//! Planar generic rigidity: exact rank and stress computations, a pebble-game
//! oracle, certified stress-preserving graph reductions and the lower bounds
//! on the rigidity rank of 4- and 5-regular graphs.
//!
//! ```
//! use rigidity_core::{generators, pebble, rigidity};
//!
//! let k5 = generators::complete(5);
//! assert_eq!(rigidity::generic_rank(&k5, 3, 0), 7);
//! assert_eq!(pebble::pebble_rank(&k5), 7);
//! ```

pub mod bounds;
pub mod error;
pub mod field;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod pebble;
pub mod realization;
pub mod reductions;
pub mod rigidity;

pub use bounds::{batch_verify, BatchSummary, BoundReport, Family, Theorem};
pub use error::{Error, Result};
pub use field::Fp;
pub use graph::{CutReport, Edge, Graph};
pub use realization::{AnyRealization, Point, Realization, ScalarDomain};
pub use reductions::{
    ReductionKind, ReductionStep, ReductionTrace, StressCertificate, StressRelation,
};
pub use rigidity::{RigidityMatrix, StressBasis};
