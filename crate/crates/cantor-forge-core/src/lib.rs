//! Exact computation with finitely presented self-similar Cantor sets on the line:
//! thickness and epsilon-thickness, Newhouse / Hunt-Kan-Yorke condition checking,
//! certified intersection enclosures, circle-map windows with distortion control,
//! and constant-gap-length tree placements in planar products.
//!
//! All coordinates are arbitrary-precision rationals; irrational quantities
//! (square roots, logarithms) are only ever produced as outward-rounded
//! enclosures. Every operation is pure and deterministic.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cantor;
pub mod circlemap;
pub mod error;
pub mod intersect;
pub mod scalar;
pub mod thickness;
pub mod tree;

pub use cantor::{Address, Approximant, CantorSpec, Classification, Gap, GapList, SubCantor};
pub use error::{Error, Result};
pub use scalar::{Enclosure, Rational};
pub use thickness::{Bridge, HkyResult, Side, ThicknessReport};
