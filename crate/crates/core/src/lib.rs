//! Exact computer algebra for (restricted) Lie algebras, their enveloping
//! algebras, and the free product `Q(L) * k[x]` in which universal
//! derivatives and universal endomorphisms are tested via primitivity.
//!
//! The crate is `no_std` (it needs `alloc`). Enabling the `parallel`
//! feature pulls in `std` and assembles defect matrices column-wise on a
//! rayon pool; results are identical either way.

#![cfg_attr(not(feature = "std"), no_std)]

#[macro_use]
extern crate alloc;

pub mod comb;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod freeprod;
pub mod hopf;
pub mod liealg;
pub mod linalg;
mod par;
pub mod scalar;
pub mod theorems;

pub use comb::Combination;
pub use envelope::{EnvElement, EnvMode, Envelope, PbwMonomial, PmapReport, PmapViolation};
pub use error::Error;
pub use freeprod::{FpElement, FpWord, FreeProduct, Letter};
pub use hopf::{PrimitivityCheck, TensorElement};
pub use liealg::{
    lyndon::{lyndon_basis, witt_dimension, Bracketing, LyndonWord},
    LieElement, LiePresentation, PresentationBuilder, PresentationReport,
};
pub use linalg::{Matrix, SparseEchelon, SubspaceBasis};
pub use scalar::{Field, Scalar};
pub use theorems::{
    AdjoinClosure, CheckLine, DerivativeCheck, EndoSpace, Theorem, VerificationReport, Verifier, Witness, WitnessKind,
};
