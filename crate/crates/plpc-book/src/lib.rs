//! Runs every Rust snippet of the guide in `book/` as a doc-test, so
//! `cargo test` keeps the book and the library in sync. One module per
//! chapter makes a failing snippet easy to locate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/programs.md")]
pub mod programs {}

#[doc = include_str!("../../../book/src/grounding.md")]
pub mod grounding {}

#[doc = include_str!("../../../book/src/compilation.md")]
pub mod compilation {}

#[doc = include_str!("../../../book/src/set-preferences.md")]
pub mod set_preferences {}

#[doc = include_str!("../../../book/src/solving.md")]
pub mod solving {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
