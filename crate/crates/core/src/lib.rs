//! Stability of the triangular libration points in the restricted three-body
//! problem with a radiating primary, Poynting-Robertson drag and an oblate
//! secondary.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod kam;
pub mod linear;
pub mod normal_form;
pub mod params;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use params::SystemParams;
