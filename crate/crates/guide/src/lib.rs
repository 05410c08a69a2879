//! Doc-test shim for the book.
//!
//! mdbook does not run code blocks with external dependencies, so every
//! chapter is included here as module documentation and `cargo test --doc`
//! executes the snippets against the real library. One module per chapter
//! keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/shapes.md")]
pub mod shapes {}

#[doc = include_str!("../../../book/src/modules.md")]
pub mod modules {}

#[doc = include_str!("../../../book/src/shapes-as-modules.md")]
pub mod shapes_as_modules {}

#[doc = include_str!("../../../book/src/hall-algebra.md")]
pub mod hall_algebra {}

#[doc = include_str!("../../../book/src/duality.md")]
pub mod duality {}

#[doc = include_str!("../../../book/src/tableaux.md")]
pub mod tableaux {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
