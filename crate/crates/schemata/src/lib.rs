//! Scheme-level first-order logic over the TMM axiom schemes.
//!
//! Metaformulas and schemes, a proof kernel with explicit justifications,
//! object-level instantiation and finite first-order models, many-valued,
//! modal and neighborhood countermodels packaged as independence
//! certificates, bound-variable-capturing transforms, a catalog of axiom
//! schemes and a small verifier for a Metamath subset.

pub mod syntax;
pub mod schemes;
pub mod axiomdb;
pub mod transforms;
pub mod proof;
pub mod objectlevel;
pub mod models;
pub mod script;
pub mod microkernel;
pub mod bundled;
pub mod suite;
