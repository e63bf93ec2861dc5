//! Exact strength computations for homogeneous forms over field towers,
//! together with the vector-group torsor calculus and finite-level GL checks
//! they rest on.

pub mod batch;
pub mod error;
pub mod fields;
pub mod glcase;
pub mod groebner;
pub mod poly;
pub mod strength;
pub mod torsor;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{FieldDescriptor, FieldElement};
pub use poly::{Poly, PolyRing};
