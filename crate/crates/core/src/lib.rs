//! Boolean-group single axioms: a parity decision procedure, candidate
//! enumeration, a finite model finder and an ordered-completion prover,
//! tied together by a batch classifier.

pub mod decision;
pub mod enumeration;
pub mod fixtures;
pub mod models;
pub mod pipeline;
pub mod prover;
pub mod term;
