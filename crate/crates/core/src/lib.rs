//! Nonlocal diffusion on bounded 2D domains with a Neumann-type volume
//! constraint that converges to the local Neumann problem at second order in
//! the horizon, plus an asymptotically compatible meshfree (GMLS) collocation
//! discretization.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. Linear solves, IO and the command line live in the `nlneumann`
//! companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod assembly;
pub mod convergence;
pub mod error;
pub mod geometry;
pub mod gmls;
pub mod kernels;
pub mod manufactured;
pub mod quadrature;
mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;
