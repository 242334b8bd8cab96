//! Exact factorization of singular matrices into idempotents of rank `n - 1`,
//! over fields and over the local ring `Z_(p)`, together with a
//! factorization engine for finite monoids ordered by fixed-point sets and a
//! brute-force oracle for small matrix monoids.

pub mod dvd;
pub mod error;
pub mod factorization;
pub mod field;
pub mod json;
pub mod linalg;
pub mod oracle;
pub mod preorder;
pub mod rings;
pub mod sample;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rings::{Ring, RingKind, Scalar, Valuation};
