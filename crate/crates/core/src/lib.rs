//! Finite posets, double tailed diamond structures, and d-completeness.

pub mod axioms;
pub mod certify;
pub mod enumerate;
pub mod error;
pub mod generators;
pub mod harness;
pub mod io;
pub mod poset;
pub mod structures;

pub use axioms::{Analysis, AxiomId, AxiomName, AxiomReport, Check, PropertyId, PropertyName};
pub use certify::{certify, Certificate, Criterion};
pub use error::{Error, Result};
pub use poset::Poset;
