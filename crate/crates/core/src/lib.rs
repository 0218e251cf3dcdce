//! Numerical laboratory for sharp L² division estimates: gain triples,
//! weighted Bergman-space minimization, ∂̄ equality cases, positivity of
//! Hermitian tensor forms and extension constants.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod dbar;
pub mod division;
pub mod error;
pub mod extension;
pub mod poly;
pub mod positivity;
pub mod profile;
pub mod quad;
pub mod report;
pub mod suite;
pub mod triples;

pub use bergman::{Domain, DomainKind, Weight};
pub use error::{Result, SdlError};
pub use report::{Status, VerificationReport};
pub use triples::{GainTriple, RealFn, TripleBuilderSpec};
pub use poly::{MultiIndex, MultiPoly};
