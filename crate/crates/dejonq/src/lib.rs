//! Exact symbolic machinery for triangular birational maps of affine n-space.
//!
//! Everything here runs over the rationals with arbitrary-precision integer
//! backing; there is no floating point and no numeric tolerance anywhere.
//! The crate is organised bottom-up:
//!
//! - [`arith`]: rational scalars, integer matrices, Smith normal form,
//!   integer kernel bases.
//! - [`poly`]: sparse multivariate polynomials over the rationals with exact
//!   gcd and squarefree machinery.
//! - [`ratfunc`]: canonical-form rational functions, substitution, and the
//!   variable-flag predicates the triangular theory needs.
//! - [`expr`]: a plain-text expression grammar plus the JSON document formats
//!   used to ship maps, flows, and algebras across the CLI boundary.
//! - [`jonq`]: triangular map elements (`x_i ↦ μ_i·x_i + f_i` with `μ_i`, `f_i`
//!   depending only on later variables), composition, inversion, order
//!   detection, and finite closure.
//! - [`invariants`]: bounded-degree searches for invariant generators along
//!   the variable flag, monomial invariants of diagonal torus actions, and an
//!   exact algebraic-independence check.
//! - [`slice`](mod@slice): one-parameter additive flows, rational cross-sections of
//!   unipotent triangular actions, and coadjoint flows of nilpotent Lie
//!   algebras with strictly triangular structure constants.
//! - [`torus`]: faithfulness reports for weight actions and exact generic
//!   root counts certifying the absence of invariant affine lines.
//!
//! # Example
//!
//! Build the map `x1 ↦ -x1 + x2^2, x2 ↦ x2 + 1`, then check that composing
//! it with its inverse gives the identity:
//!
//! ```
//! use dejonq::expr::parse_ratfunc;
//! use dejonq::jonq::{JonqElement, Variant};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g = JonqElement::new(
//!     Variant::J,
//!     2,
//!     vec![parse_ratfunc("-1")?, parse_ratfunc("1")?],
//!     vec![parse_ratfunc("x2^2")?, parse_ratfunc("1")?],
//! )?;
//! assert!(g.compose(&g.invert()).is_identity());
//! # Ok(())
//! # }
//! ```

pub mod arith;
pub mod expr;
pub mod invariants;
pub mod jonq;
pub mod poly;
pub mod ratfunc;
pub mod slice;
pub mod torus;

pub use arith::{kernel_basis, rank, rat, smith_normal_form, IntMatrix, Integer, Rational};
pub use ratfunc::{Eval, RatFunc, Substitution};
