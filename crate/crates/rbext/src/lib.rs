//! Exact-arithmetic computer algebra for Rota-Baxter algebras, dendriform
//! algebras, their abelian and non-abelian extensions, cohomology in low
//! degrees, and the Wells theory of automorphism lifting.
//!
//! All computations are exact, over the rationals or a prime field, and
//! deterministic: the same input always yields bit-identical output.

pub mod assoc;
pub mod cohomology;
pub mod dend;
pub mod dendext;
pub mod doc;
pub mod error;
pub mod ext;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod rb;
pub mod report;
pub mod wells;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{Matrix, Tensor3};
pub use report::{VerificationReport, Violation};
