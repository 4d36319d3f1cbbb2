//! Exact computations for face rings of simplicial posets: the ideal `I_P`,
//! the multigraded injective envelopes `*E_x`, clean homomorphisms between
//! them, and the incidence-signed complexes built from these pieces.

pub mod bundled;
pub mod complex;
pub mod cleanmap;
pub mod envelope;
pub mod linalg;
pub mod poset;
pub mod ring;
pub mod scalar;

pub use poset::{ElementId, SimplicialPoset};
pub use ring::{Multidegree, Polynomial};
pub use scalar::{Field, Scalar};
