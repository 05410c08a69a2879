//! Hall algebra of n-dimensional skew shapes.
//!
//! This crate computes with finite pointed-set modules over the free
//! commutative monoid on `n` generators and with the Hall algebra their
//! extensions generate. The indecomposable modules that act by partial
//! permutations, admit a `Z^n`-grading, and are supported at the origin are
//! exactly the connected n-dimensional skew shapes, and the Hall product of
//! two connected shapes enumerates the ways of stacking one onto the other.
//! Everything is exact (rational coefficients, no floats) and small enough
//! to verify by brute force, which the test suites do.
//!
//! Module map:
//!
//! - [`shapes`]: canonical skew shapes, convexity, enumeration, filters.
//! - [`modules`]: pointed modules, predicates (type α, gradability,
//!   support), constructions, decomposition, isomorphism classes.
//! - [`hall`]: Hall product and coproduct, Lie bracket, Hopf dual, axiom
//!   verification over selectable subcategories.
//! - [`tableaux`]: standard and semistandard skew tableaux as filtrations
//!   of shape modules (n = 2).
//!
//! Values are immutable after construction and operations are pure;
//! [`hall::HallAlgebra`] guards its memo tables with locks, so everything
//! can be shared across threads. Enumerations charge a [`Budget`] and
//! abort with an error when it runs out.

#![forbid(unsafe_code)]

pub mod budget;
pub mod hall;
pub mod modules;
pub mod shapes;
pub mod tableaux;

pub use budget::{Budget, BudgetExceeded};
pub use hall::{DualElement, HallAlgebra, HallElement, TensorElement};
pub use modules::{CategorySpec, ModuleClass, PointedModule};
pub use shapes::SkewShape;
