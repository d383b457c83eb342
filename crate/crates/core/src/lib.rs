//! Exact arithmetic for power-free values of binary forms.
//!
//! The crate splits into six areas:
//!
//! - [`weighted_algebra`]: monomials, graded order, weighted homogeneous
//!   forms, binary forms, resultants, and the `v`-elimination substitution.
//! - [`hilbert`]: Hilbert functions of principal weighted homogeneous
//!   ideals and the exact limit coefficients of their exponent sums.
//! - [`densities`]: local root counts and truncated Euler products.
//! - [`sieve`]: direct power-free counting, the three-term decomposition,
//!   representable values, and capped local prime-power products.
//! - [`detmethod`]: point enumeration on `f(x,y) = v z^k`, residue
//!   reduction, valuation certification, and auxiliary-form extraction.
//! - [`exponents`]: the closed-form exponent calculus and admissibility
//!   thresholds.
//!
//! Everything algebraic is exact: big integers and big rationals
//! throughout, with floating point confined to display values and
//! threshold comparisons that are provably slack.

pub mod densities;
pub mod detmethod;
pub mod error;
pub mod exponents;
pub mod factor;
pub mod hilbert;
pub mod linalg;
pub mod sieve;
pub mod weighted_algebra;

pub use error::{Error, Result};
pub use weighted_algebra::{
    compare_graded, eliminate_v, enumerate_monomials, is_well_formed, monomial_count,
    weighted_degree, BinaryForm, ExponentVector, UnivariatePoly, WeightVector, WeightedForm,
};

pub use detmethod::{make_surface, LatticePoint, PrimeConstraint, ResiduePoint, SearchBox, SurfaceX};
pub use hilbert::PrincipalIdeal;
