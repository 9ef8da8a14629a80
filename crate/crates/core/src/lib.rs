//! Multivalued arithmetic-geometric means.
//!
//! Every geometric mean has two roots. Choosing the far one at some of the
//! first iterations of the AGM (and of its extension to the quartet
//! `(a, g, u, v)`) yields a cloud of values of K, F, E, E/K and the Jacobi
//! Zeta function instead of a single number. This crate computes those
//! clouds, predicts the lattices and circles they fall on from
//! independently computed complete integrals, and measures the residuals.

pub mod complex;
pub mod eagm;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod magm;
pub mod oracle;

pub use complex::ComplexValue;
pub use eagm::{eagm_step, run_eagm, EagmParams, EagmTrace, Quartet, Sign, SignSchedule};
pub use error::{EagmError, LatticeError, OracleError};
pub use oracle::{IncompleteReference, ReferenceSet};
pub use enumerate::{enumerate_cloud, CloudRequest, FunctionKind, MultivaluePoint};
pub use lattice::{fit_cloud, predict_locus, CircleSpec, FitReport, LatticeSpec, Locus};
pub use magm::{magm_equivalence, magm_negative_experiment, magm_step, MagmTriplet};
