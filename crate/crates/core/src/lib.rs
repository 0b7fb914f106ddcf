//! Perfect matchings, toric crepant resolutions and the geometric McKay correspondence for
//! consistent dimer models.
//!
//! The pipeline runs in dependency order: a [`dimer::DimerModel`] is validated, its perfect
//! matchings are enumerated and placed on a lattice polygon ([`matchings`]), the stable matchings
//! for a generic stability parameter build a unimodular fan ([`moduli`]), arrows are labelled by
//! torus-invariant divisors ([`divisors`]), and finally each vertex simple is classified by the
//! shape of its image under the derived equivalence ([`reid`]).

pub mod cli;
pub mod dimer;
pub mod divisors;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod matchings;
pub mod moduli;
pub mod reid;
pub mod report;
pub mod svg;

pub use error::{Diagnostic, Error, Result};
