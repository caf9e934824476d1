//! Runs every code listing in `book/src` as a doctest.
//!
//! mdbook cannot test listings that use an external crate, so each chapter
//! is pulled in as the documentation of an empty module and `cargo test
//! --doc` does the work. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/power-indices.md")]
pub mod power_indices {}
#[doc = include_str!("../../../book/src/trees.md")]
pub mod trees {}
#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}
#[doc = include_str!("../../../book/src/reductions.md")]
pub mod reductions {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
