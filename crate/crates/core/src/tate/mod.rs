//! Tate spaces `k((t))^n`, their lattices, and admissible sequences given by
//! Laurent-polynomial matrices.

mod lattice;
mod laurent;
pub mod random;
mod ses;

pub use lattice::{Lattice, TateSpace};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use ses::{
    check_tate_ses, lattice_grid, lattice_grid_from, rewindow, window_matrix, LatticeGrid, LatticeQuotient,
    TateDiagnosis, TateSes,
};

use crate::exactlin::LinError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TateError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entries are over different fields")]
    FieldMismatch,
    #[error("lattices live in different spaces")]
    SpaceMismatch,
    #[error("lower bound {0} exceeds upper bound {1}")]
    Bounds(i64, i64),
    #[error("lattices are not nested")]
    NotNested,
    #[error("not an admissible short exact sequence: {0}")]
    NotExact(TateDiagnosis),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}
