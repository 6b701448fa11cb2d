//! Range and inner-boundary statistics of lattice random walks.
//!
//! * [`lattice`]: points, step laws, support validation, reproducible walks.
//! * [`tracker`]: streaming visited set, inner boundary and multiplicities.
//! * [`oracle`]: exact enumeration and lattice dynamic programming.
//! * [`estimators`]: parallel Monte Carlo engine and the limit-constant estimators.

pub mod error;
pub mod estimators;
pub mod lattice;
pub mod oracle;
pub mod tracker;

pub use error::{Error, Result};
