// mdbook cannot run a book's Rust snippets against an external crate, so each
// chapter is included here as the documentation of an empty module and
// `cargo test --doc` runs its code blocks. One module per chapter keeps the
// failing chapter visible in the test name.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/hypergeometric.md")]
pub mod hypergeometric {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/degrees.md")]
pub mod degrees {}
#[doc = include_str!("../../../book/src/hecke.md")]
pub mod hecke {}
#[doc = include_str!("../../../book/src/polyfit.md")]
pub mod polyfit {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
