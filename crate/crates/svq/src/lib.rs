//! Stochastic vector quantisers built from chains of folded Markov chains.
//!
//! An encoder stage turns an input vector into a categorical posterior over
//! `M` code indices, samples `n` indices from it, and decodes by averaging
//! the addressed reconstruction vectors. Training minimizes a two-term
//! upper bound (`d1 + d2`) on the mean Euclidean reconstruction distortion
//! with hand-coded analytic gradients and a normalized gradient-descent
//! rule. Stages chain by feeding each stage's posterior vector to the next,
//! which lets a weighted multi-stage objective steer the kind of code that
//! self-organises (factorial, joint, or separation-invariant).
//!
//! Modules:
//! - [`chain`] - parameter types, posteriors, bound terms, chain objective
//! - [`gradients`] - analytic derivatives plus a finite-difference oracle
//! - [`codec`] - seeded sampling encoder/decoder and a Monte-Carlo
//!   distortion estimator that cross-checks the bound identity
//! - [`scene`] - synthetic two-object training distribution with exact
//!   enumeration
//! - [`trainer`] - initialization, normalized updates, schedules, snapshots
//! - [`diagnostics`] - peak profiles and the separation-invariance score
//! - [`recipes`] - the five bundled experiment setups

pub mod chain;
pub mod codec;
pub mod diagnostics;
pub mod error;
pub mod gradients;
pub mod recipes;
pub mod scene;
pub mod trainer;

pub use chain::{
    BoundTerms, ChainObjective, ChainParams, StageActivation, StageParams, WeightedDataset,
    WeightedItem,
};
pub use error::SvqError;
