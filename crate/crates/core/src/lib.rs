//! Exact computations on tropical fans: balancing, divisors and tropical
//! modifications, canonical compactifications, tropical (co)homology,
//! Poincaré duality and smoothness checks, Chow rings of simplicial fans and
//! the tropical Deligne sequence.
//!
//! All arithmetic is exact: lattices use `i64` with overflow checks, linear
//! algebra over the rationals uses arbitrary precision.

pub mod error;
pub mod exactla;
pub mod chow;
pub mod cli;
pub mod compact;
pub mod deligne;
pub mod fan;
pub mod homology;
pub mod io;
pub mod sheaf;
pub mod weights;
pub mod zoo;

pub use error::{Error, Result};
pub use fan::{product, Cone, ConeId, Fan, RawFan, StarData};
pub use weights::{Orientation, PLFunction};
