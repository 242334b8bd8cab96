//! Dense exact linear algebra over `Q`, `F_p`, and `Z_(p)`.

mod elim;
pub mod idempotents;
pub mod matrix;
pub mod spaces;

pub use idempotents::{
    idempotent_between, idempotent_certificate, kernel_idempotent_avoiding_fix, kernel_projection,
    min_valuation_dependence, orthogonal_sum_idempotent, DependenceWitness, IdempotentCertificate, NestedSplit,
};
pub use matrix::{product, Matrix, Vector};
pub use spaces::{complement, conjugate, ColumnSpan, PeirceBasis, Segment, SplitBasis};
