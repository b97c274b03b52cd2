//! Finite-strain neo-Hooke workbench.
//!
//! The same compressible neo-Hooke material is driven through three
//! constitutive pathways:
//!
//! * [`Pathway::Total`]: stress evaluated directly from the deformation
//!   gradient (hyperelastic, history-free).
//! * [`Pathway::RateUnmodified`]: Cauchy stress advanced incrementally with a
//!   Jaumann corotational update and the Kirchhoff-rate tangent `ℂ`.
//! * [`Pathway::RateModified`]: the same update with `ℂ_mod = ℂ − σ ⊗ I`.
//!
//! The pathways are compared at a material point ([`rateint`]) and inside a
//! plane-strain finite element solver ([`fem2d`]) on canned experiments
//! ([`scenarios`]).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod check;
pub mod config;
pub mod error;
pub mod fem2d;
pub mod materials;
pub mod output;
pub mod rateint;
pub mod scenarios;
pub mod tensor;

pub use error::{Error, Result};
pub use materials::{MaterialResponse, NeoHookeParams, UhyperDerivs};
pub use rateint::{GaussPointState, IncrementKin, Pathway};
pub use tensor::{Spectral, SymTensor2, Tensor2, Tensor4Sym};
