//! Error vector magnitude (EVM) of a data-aided receiver operating in
//! co-channel interference, with the desired link and the interferers under
//! κ-μ shadowed fading (and its Rayleigh, Rician, Nakagami-m and κ-μ special
//! cases).
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Γ, ₁F₁, ₂F₁, Tricomi U, the confluent Lauricella Φ₂ and the
//!   fourth Lauricella function F_D, each with an independent second route.
//! * [`fading`]: the unit-mean κ-μ shadowed power law, the density of a sum of
//!   independent non-identical powers, and samplers.
//! * [`evm`]: closed-form EVM for interference-limited and
//!   interference-plus-noise links, dispatched from an [`evm::EvmScenario`].
//! * [`mcsim`]: a block-fading Monte Carlo link simulator with deterministic
//!   counter-based substreams, used as the oracle for every closed form.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod error;
pub mod evm;
pub mod fading;
pub mod mcsim;
pub mod specfun;

pub use error::{Error, Result};
pub use evm::{evaluate, EvmResult, EvmScenario, Formula};
pub use fading::{InterfererProfile, ShadowedFadingParams, SpecialCaseTag};
pub use mcsim::{empirical_evm, BlockSampler, Constellation, McConfig, McEstimate};
pub use specfun::PrecisionPolicy;
