// Compiles every book chapter as the docs of an empty module so that
// `cargo test --doc` runs the snippets. One module per chapter keeps failure
// messages pointing at the right file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/level-schemes.md")]
pub mod level_schemes {}
#[doc = include_str!("../../../book/src/excitation.md")]
pub mod excitation {}
#[doc = include_str!("../../../book/src/engraving.md")]
pub mod engraving {}
#[doc = include_str!("../../../book/src/diffraction.md")]
pub mod diffraction {}
#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../book/src/config.md")]
pub mod config {}
