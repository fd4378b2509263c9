//! Closed-form geometry of biharmonic and λ-biharmonic products of spheres,
//! with an independent finite-difference check on flat tori.
//!
//! * [`geometry`]: mean curvature, shape operator and characterization
//!   residuals of products of minimal factors in `S^n(r)`.
//! * [`gap`]: bounds, gap endpoints, splitting radii and spectra for PMC
//!   λ-biharmonic immersions.
//! * [`product`]: the biharmonic system for `M1 x M2`, the case
//!   enumeration, the bound functions and the range summary.
//! * [`oracle`]: tension and bitension fields of circle products by finite
//!   differences.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod gap;
pub mod geometry;
pub mod oracle;
pub mod product;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{FactorSpec, ProductConfig};
pub use scalar::{Number, Quantity, Rational, Scalar};
