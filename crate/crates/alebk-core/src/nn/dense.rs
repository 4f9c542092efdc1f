//! Fully connected affine layer `y = Wx + b`.
//!
//! Weights are row-major `[out, in]`: row `o` holds the input weights of
//! output unit `o`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::tensor::Tensor;
use crate::{Error, Result};

fn check_dense_shapes(input: &[f64], weights: &Tensor, bias: &Tensor) -> Result<(usize, usize)> {
    let wshape = weights.shape();
    if wshape.len() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "dense weights must be [out, in], got {wshape:?}"
        )));
    }
    let (out_dim, in_dim) = (wshape[0], wshape[1]);
    if input.len() != in_dim {
        return Err(Error::ShapeMismatch(format!(
            "dense input length {} does not match weight input dimension {in_dim}",
            input.len()
        )));
    }
    if bias.shape() != [out_dim] {
        return Err(Error::ShapeMismatch(format!(
            "dense bias must be [{out_dim}], got {:?}",
            bias.shape()
        )));
    }
    Ok((out_dim, in_dim))
}

/// Affine map over a flat input vector.
pub fn dense_forward(input: &[f64], weights: &Tensor, bias: &Tensor) -> Result<Vec<f64>> {
    let (out_dim, in_dim) = check_dense_shapes(input, weights, bias)?;
    let w = weights.data();
    let mut out = bias.data().to_vec();
    for (o, y) in out.iter_mut().enumerate().take(out_dim) {
        let row = &w[o * in_dim..][..in_dim];
        let mut acc = 0.0;
        for (&wv, &xv) in row.iter().zip(input) {
            acc += wv * xv;
        }
        *y += acc;
    }
    Ok(out)
}

/// Gradients produced by [`dense_backward`].
pub struct DenseGrads {
    pub input: Vec<f64>,
    pub weights: Tensor,
    pub bias: Tensor,
}

/// Backward pass of the affine map for an upstream gradient `grad_out`.
pub fn dense_backward(input: &[f64], weights: &Tensor, grad_out: &[f64]) -> Result<DenseGrads> {
    let wshape = weights.shape();
    if wshape.len() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "dense weights must be [out, in], got {wshape:?}"
        )));
    }
    let (out_dim, in_dim) = (wshape[0], wshape[1]);
    if input.len() != in_dim || grad_out.len() != out_dim {
        return Err(Error::ShapeMismatch(format!(
            "dense backward: input {} / grad_out {} vs weights {wshape:?}",
            input.len(),
            grad_out.len()
        )));
    }
    let w = weights.data();
    let mut gw = vec![0.0f64; w.len()];
    let mut gx = vec![0.0f64; in_dim];
    for o in 0..out_dim {
        let g = grad_out[o];
        if g == 0.0 {
            continue;
        }
        let row = &w[o * in_dim..][..in_dim];
        let grow = &mut gw[o * in_dim..][..in_dim];
        for i in 0..in_dim {
            grow[i] += g * input[i];
            gx[i] += g * row[i];
        }
    }
    Ok(DenseGrads {
        input: gx,
        weights: Tensor::new(vec![out_dim, in_dim], gw)?,
        bias: Tensor::new(vec![out_dim], grad_out.to_vec())?,
    })
}
