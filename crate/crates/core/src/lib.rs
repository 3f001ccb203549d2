//! Computational laboratory for finite p-groups given by power-commutator
//! presentations, centred on powerfully nilpotent groups.

pub mod analysis;
pub mod ancestry;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod enumeration;
pub mod error;
pub mod group;
pub mod linalg;
pub mod pc;
pub mod presentation;
pub mod subgroup;
pub mod suite;

pub use engine::{check_consistency, collect, ConsistencyReport};
pub use error::{Error, Result};
pub use group::Group;
pub use presentation::{ElementNF, Presentation, Shape, Word};
pub use subgroup::{Quotient, Subgroup};
