//! Finite Δ-complexes, their cochains and cohomology, and multiplicative
//! torsors of degree `n` in trivialized form.
//!
//! Simplices carry face maps only; degeneracies are left implicit and all
//! cochains are normalized, so they never need to be stored.

mod cohomology;
mod complex;
mod torsor;

pub use cohomology::{coboundary, cohomology, Cochain, Cohomology};
pub use complex::{SimplicialSet, DIM_CAP};
pub use torsor::{
    check_mult_torsor, classify_torsor, evaluate_even_odd, gerbe_to_torsor, iso_decide, paste, street_boundaries,
    symbolic_even_odd, Composite, GerbeRep, MultTorsorRep, Step, StreetBoundaries, TorsorReport,
};

use thiserror::Error;

use crate::dimtorsor::DimError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimpError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("simplex `{simplex}` refers to unknown face `{face}`")]
    Dangling { simplex: String, face: String },
    #[error("simplicial identity d{i} d{j} = d{} d{i} fails on `{simplex}`", j - 1)]
    Identity { simplex: String, i: usize, j: usize },
    #[error("dimension {0} exceeds the cap {DIM_CAP}")]
    TooDeep(usize),
    #[error("simplex `{0}` has dimension {1}, expected {2}")]
    WrongDimension(String, usize, usize),
    #[error("unknown simplex `{0}`")]
    Unknown(String),
    #[error("degree {0} outside the supported range")]
    Degree(usize),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("group: {0}")]
    Group(String),
}

impl From<DimError> for SimpError {
    fn from(e: DimError) -> Self {
        SimpError::Group(e.to_string())
    }
}
