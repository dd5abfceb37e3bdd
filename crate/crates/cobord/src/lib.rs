//! Exact symbolic computation in the complex-cobordism coefficient ring.
//!
//! The crate models `MU_* ⊗ ℚ` as the graded polynomial ring `ℚ[b1, b2, …]`
//! (with `bn` the class of complex projective n-space, in homological degree
//! `2n`) under a configurable weight cap, builds the universal formal group
//! law from its logarithm `Σ bn u^{n+1}/(n+1)`, and on top of that implements
//!
//! * the algebra of SU-linear operations `Σ μi ∂i` with its composition
//!   structure constants,
//! * the c1-spherical bordism theory `W = ker Δ` at the coefficient level:
//!   Stong-type projections, the twisted multiplications `a*b = ab + δ ∂a ∂b`,
//!   the quadratic extension `Γ = MU[t]/(t² = -b1·t + δ)`, complex
//!   orientations and the resulting formal group laws `F_W`,
//! * exact integer-lattice analysis (Hermite normal form, kernels,
//!   characteristic-number gcds) of the integral subrings sitting inside the
//!   rational model,
//! * the small number-theoretic lemmas (`m_k`, Fermat-prime powers, the
//!   `c_k` solvability analysis) the lattice results reduce to.
//!
//! Everything is exact: `BigRational` scalars, truncated series, and integer
//! matrices. No floating point is used anywhere.
//!
//! ```
//! use cobord::wtheory::{w_multiply, MultiplicationSpec};
//! use cobord::{FglContext, GradedPoly};
//!
//! let ctx = FglContext::build(10, 8)?;
//! let b1 = GradedPoly::generator(1, 8)?;
//! let stong = MultiplicationSpec::stong(&ctx)?;
//! let square = w_multiply(&b1, &b1, &stong, &ctx)?;
//! assert_eq!(square.to_string(), "9*b1^2 - 8*b2");
//! # Ok::<(), cobord::Error>(())
//! ```

pub mod fgl;
pub mod lattice;
pub mod numtheory;
pub mod ops;
pub mod parse;
pub mod poly;
pub mod series;
pub mod verify;
pub mod wtheory;

mod error;

pub use error::Error;
pub use fgl::FglContext;
pub use lattice::LatticeBasis;
pub use ops::SuOp;
pub use poly::{GradedPoly, Monomial, Rational};
pub use series::{Series1, Series2};
pub use wtheory::{GammaElt, MultiplicationSpec, OrientationSpec, ProjectionSpec};

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
