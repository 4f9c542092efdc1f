//! Core algorithms for blink-based attention estimation.
//!
//! The crate covers the full analytical pipeline with no IO:
//!
//! - [`tensor`]: dense row-major `f64` arrays used for images, activations,
//!   weights, and gradients.
//! - [`nn`]: a small deterministic neural-network engine (conv / pool / dense /
//!   activations / dropout, binary cross-entropy, Adam, finite-difference
//!   gradient checking).
//! - [`blink`]: the two-branch eye-blink detector built on [`nn`], with
//!   training and per-frame scoring.
//! - [`geometry`]: 68-point facial landmarks to aligned, cropped, resized
//!   50x50x3 eye images.
//! - [`temporal`]: per-frame scores to sample decisions, blink events, and
//!   blinks-per-minute windows.
//! - [`attention`]: minute-level attention labeling, blink-rate
//!   classification, and threshold calibration.
//! - [`metrics`]: precision/recall/F1, FAR/FRR curves, EER, and
//!   leave-one-subject-out folds.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of the default `std` feature for `no_std` builds.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("enable either the `std` feature or the `libm` feature");

extern crate alloc;

pub mod attention;
pub mod blink;
mod error;
pub mod geometry;
pub(crate) mod math;
pub mod metrics;
pub mod nn;
pub mod temporal;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::Tensor;
