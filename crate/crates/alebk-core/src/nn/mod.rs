//! Minimal deterministic neural-network engine.
//!
//! Forward and backward passes are hand-written per layer kind; gradients are
//! analytic and verifiable against the central finite differences in
//! [`gradcheck`]. Everything runs on `f64` so gradient checks are reliable.

mod activation;
mod adam;
mod conv;
mod dense;
mod dropout;
pub mod gradcheck;
mod init;
mod loss;
mod pool;
mod spec;

pub use activation::{relu, relu_backward, relu_tensor, sigmoid, sigmoid_backward, sigmoid_tensor};
pub use adam::{adam_step, AdamConfig, AdamState};
pub use conv::{conv2d_backward, conv2d_forward, ConvGrads};
pub use dense::{dense_backward, dense_forward, DenseGrads};
pub use dropout::{dropout_apply, dropout_backward, dropout_mask};
pub use init::{glorot_uniform, he_uniform};
pub use loss::{bce_loss, bce_sigmoid_grad, BCE_EPSILON};
pub use pool::{maxpool2d_backward, maxpool2d_forward, pooled_extent};
pub use spec::{LayerSpec, PaddingMode};
