//! 3x3 same-padded 2D convolution over `[H, W, C]` tensors.
//!
//! Kernels are stored as `[3, 3, c_in, c_out]` so the innermost loop runs over
//! contiguous output channels.

use alloc::format;
use alloc::vec;

use crate::tensor::Tensor;
use crate::{Error, Result};

fn check_conv_shapes<'k>(
    input: &Tensor,
    kernels: &'k Tensor,
    bias: &Tensor,
) -> Result<(usize, usize, usize, usize)> {
    let ishape = input.shape();
    let kshape = kernels.shape();
    if ishape.len() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "conv input must be [H, W, C], got {ishape:?}"
        )));
    }
    if kshape.len() != 4 || kshape[0] != 3 || kshape[1] != 3 {
        return Err(Error::ShapeMismatch(format!(
            "conv kernels must be [3, 3, c_in, c_out], got {kshape:?}"
        )));
    }
    let (h, w, c_in) = (ishape[0], ishape[1], ishape[2]);
    let c_out = kshape[3];
    if kshape[2] != c_in {
        return Err(Error::ShapeMismatch(format!(
            "kernel depth {} does not match input channels {c_in} (input {ishape:?}, kernels {kshape:?})",
            kshape[2]
        )));
    }
    if bias.shape() != [c_out] {
        return Err(Error::ShapeMismatch(format!(
            "conv bias must be [{c_out}], got {:?}",
            bias.shape()
        )));
    }
    Ok((h, w, c_in, c_out))
}

/// Same-padded convolution: output is `[H, W, c_out]`.
pub fn conv2d_forward(input: &Tensor, kernels: &Tensor, bias: &Tensor) -> Result<Tensor> {
    let (h, w, c_in, c_out) = check_conv_shapes(input, kernels, bias)?;
    let x = input.data();
    let k = kernels.data();
    let b = bias.data();
    let mut out = vec![0.0f64; h * w * c_out];

    for oh in 0..h {
        for ow in 0..w {
            let out_row = &mut out[(oh * w + ow) * c_out..][..c_out];
            out_row.copy_from_slice(b);
            for kh in 0..3 {
                let ih = (oh + kh).wrapping_sub(1);
                if ih >= h {
                    continue;
                }
                for kw in 0..3 {
                    let iw = (ow + kw).wrapping_sub(1);
                    if iw >= w {
                        continue;
                    }
                    let in_base = (ih * w + iw) * c_in;
                    let k_base = (kh * 3 + kw) * c_in * c_out;
                    for ci in 0..c_in {
                        let v = x[in_base + ci];
                        let k_row = &k[k_base + ci * c_out..][..c_out];
                        for (o, &kv) in out_row.iter_mut().zip(k_row) {
                            *o += v * kv;
                        }
                    }
                }
            }
        }
    }
    Tensor::new(vec![h, w, c_out], out)
}

/// Gradients produced by [`conv2d_backward`].
pub struct ConvGrads {
    /// Gradient with respect to the layer input; `None` when not requested.
    pub input: Option<Tensor>,
    pub kernels: Tensor,
    pub bias: Tensor,
}

/// Backward pass of the same-padded convolution.
///
/// `need_input_grad` skips the input-gradient accumulation for the first
/// layer of a network, where it has no consumer.
pub fn conv2d_backward(
    input: &Tensor,
    kernels: &Tensor,
    grad_out: &Tensor,
    need_input_grad: bool,
) -> Result<ConvGrads> {
    let bias_probe = Tensor::zeros(vec![kernels.shape()[3]]);
    let (h, w, c_in, c_out) = check_conv_shapes(input, kernels, &bias_probe)?;
    grad_out.expect_shape(&[h, w, c_out], "conv grad_out")?;

    let x = input.data();
    let k = kernels.data();
    let g = grad_out.data();
    let mut gk = vec![0.0f64; k.len()];
    let mut gb = vec![0.0f64; c_out];
    let mut gx = vec![0.0f64; if need_input_grad { x.len() } else { 0 }];

    for oh in 0..h {
        for ow in 0..w {
            let g_row = &g[(oh * w + ow) * c_out..][..c_out];
            for (acc, &gv) in gb.iter_mut().zip(g_row) {
                *acc += gv;
            }
            for kh in 0..3 {
                let ih = (oh + kh).wrapping_sub(1);
                if ih >= h {
                    continue;
                }
                for kw in 0..3 {
                    let iw = (ow + kw).wrapping_sub(1);
                    if iw >= w {
                        continue;
                    }
                    let in_base = (ih * w + iw) * c_in;
                    let k_base = (kh * 3 + kw) * c_in * c_out;
                    if need_input_grad {
                        for ci in 0..c_in {
                            let v = x[in_base + ci];
                            let gk_row = &mut gk[k_base + ci * c_out..][..c_out];
                            let k_row = &k[k_base + ci * c_out..][..c_out];
                            let mut acc = 0.0;
                            for co in 0..c_out {
                                gk_row[co] += v * g_row[co];
                                acc += k_row[co] * g_row[co];
                            }
                            gx[in_base + ci] += acc;
                        }
                    } else {
                        for ci in 0..c_in {
                            let v = x[in_base + ci];
                            let gk_row = &mut gk[k_base + ci * c_out..][..c_out];
                            for (gkv, &gv) in gk_row.iter_mut().zip(g_row) {
                                *gkv += v * gv;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(ConvGrads {
        input: if need_input_grad {
            Some(Tensor::new(vec![h, w, c_in], gx)?)
        } else {
            None
        },
        kernels: Tensor::new(kernels.shape().to_vec(), gk)?,
        bias: Tensor::new(vec![c_out], gb)?,
    })
}
