//! The guide's chapters, compiled as doc-tests so every snippet stays runnable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}

#[doc = include_str!("../../../book/src/cayley.md")]
pub mod cayley {}

#[doc = include_str!("../../../book/src/normal-form.md")]
pub mod normal_form {}

#[doc = include_str!("../../../book/src/sign-perturbation.md")]
pub mod sign_perturbation {}

#[doc = include_str!("../../../book/src/identities.md")]
pub mod identities {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
