//! Singularity conditions, zeta products and density estimates for Weierstrass fibrations
//! over projective space over a finite field.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf`]: finite fields `F_{p^n}` with embeddings between them.
//! - [`sections`]: homogeneous forms on `P^m`, dehomogenization, partials, exact division.
//! - [`base`]: rational and closed points of `P^m`, first-order jets of forms at closed points.
//! - [`linalg`]: rank over `F_p`.
//! - [`weier`]: Weierstrass data, discriminant, minimality and singularity detection.
//! - [`zeta`]: point counts, closed-point counts and truncated Euler products.
//! - [`density`]: jet census, surjectivity check, exact and Monte-Carlo densities.
//! - [`cli`]: the command-line driver behind the `elldensity` binary.

pub mod base;
pub mod cli;
pub mod density;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod sections;
pub mod weier;
pub mod zeta;

pub use error::{Error, Result};
