//! Runs the guide's code blocks as doc tests.
//!
//! Each chapter of `book/` is included as the documentation of an empty
//! module, so `cargo test --doc` compiles and executes every Rust snippet
//! in the guide. One module per chapter keeps test names pointing at the
//! file that broke. Non-Rust fences (`sh`, `json`, `text`) are skipped by
//! rustdoc as long as they are tagged, which the chapters do.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/levels-and-depth.md")]
pub mod levels_and_depth {}

#[doc = include_str!("../../../book/src/first-move-rules.md")]
pub mod first_move_rules {}

#[doc = include_str!("../../../book/src/boards.md")]
pub mod boards {}

#[doc = include_str!("../../../book/src/agents.md")]
pub mod agents {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
