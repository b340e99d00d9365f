//! mdbook cannot test snippets that use outside crates, so every chapter of
//! the guide is included here as module docs and `cargo test --doc` runs the
//! `rust` blocks. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}
#[doc = include_str!("../../../book/src/tessellation.md")]
pub mod tessellation {}
#[doc = include_str!("../../../book/src/process.md")]
pub mod process {}
#[doc = include_str!("../../../book/src/means.md")]
pub mod means {}
#[doc = include_str!("../../../book/src/capacity.md")]
pub mod capacity {}
#[doc = include_str!("../../../book/src/sections.md")]
pub mod sections {}
#[doc = include_str!("../../../book/src/great_circles.md")]
pub mod great_circles {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
