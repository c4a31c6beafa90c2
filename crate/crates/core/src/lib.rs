//! Exact homological algebra for A-infinity structures over Q, F_p and Z.
//!
//! The crate covers the pre-Lie calculus on `End(V)`, homology of chain
//! complexes with explicit splittings, the comparison between the homology
//! of Hom complexes and Hom of homologies, bigraded Hochschild cohomology,
//! and the obstruction procedure that extends an `A_r`-structure to an
//! `A_{r+1}`-structure when the relevant Hochschild class vanishes.

pub mod ainfty;
pub mod complexes;
pub mod hochschild;
pub mod homology;
pub mod error;
pub mod generate;
pub mod matrix;
pub mod obstruction;
pub mod prelie;
pub mod scalars;
pub mod snf;

pub use error::{Error, Result};
pub use matrix::{solve_exact, Matrix};
pub use scalars::{RingSpec, Scalar};
pub use snf::{smith_normal_form, Snf};
