//! Exact linear algebra over `F_p` and `Q`, and Smith normal form over `Z`.

mod field;
mod matrix;
mod snf;
mod subspace;

pub use field::{Field, Scalar};
pub use matrix::Matrix;
pub use snf::{integer_kernel, integer_solve, smith_normal_form, snf_with_transforms, IntMatrix, Smith};
pub use subspace::{Subquotient, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unrecognised field `{0}` (expected F<p> or Q)")]
    BadField(String),
    #[error("unrecognised scalar `{0}`")]
    BadScalar(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("scalars from different fields")]
    FieldMismatch,
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("subspaces are not nested")]
    NotNested,
}
