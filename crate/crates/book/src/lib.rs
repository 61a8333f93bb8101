//! Compiles the guide's code blocks as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/placements.md")]
pub mod placements {}

#[doc = include_str!("../../../book/src/proximity.md")]
pub mod proximity {}

#[doc = include_str!("../../../book/src/attacks.md")]
pub mod attacks {}

#[doc = include_str!("../../../book/src/communities.md")]
pub mod communities {}

#[doc = include_str!("../../../book/src/null_models.md")]
pub mod null_models {}

#[doc = include_str!("../../../book/src/statistics.md")]
pub mod statistics {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
