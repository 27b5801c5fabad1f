//! Fully nonconforming H(grad curl) finite elements on axis-aligned cubical
//! meshes (24 and 36 DOFs per cell), the discrete Stokes complex they belong
//! to, and a mixed solver for the singularly perturbed quad-curl problem
//!
//! ```text
//! -ε curl Δ curl u + α curl curl u + β u = f,   div u = 0,
//! u × n = 0,  curl u = 0  on ∂Ω.
//! ```

pub mod analysis;
pub mod assembly_solve;
pub mod error;
pub mod exact;
pub mod fespace;
pub mod mesh;
pub mod polynomials;
pub mod reference_element;
pub mod sparse;

pub use error::{Error, Result};
