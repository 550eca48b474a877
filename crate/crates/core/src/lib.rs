//! Exact GIT stability computations for complete intersections of the
//! quadric `x0*x4 + x1*x3 + x2^2` with a hypersurface of degree `d` in P^4.
//!
//! Forms live in the quotient by multiples of the quadric, with the monomial
//! basis `a0 * a4 = 0`. The crate enumerates destabilizing monomial families
//! for the normalized one-parameter subgroups, analyzes the resulting
//! singularities in an affine chart of the quadric, checks orbit closedness
//! of the type xi forms, and evaluates Chow weights.

pub mod chart;
pub mod chow;
pub mod error;
pub mod families;
pub mod orbits;
pub mod parse;
pub mod poly;
pub mod suite;
pub mod weights;

pub use error::{Error, Result};
