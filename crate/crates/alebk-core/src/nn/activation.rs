//! Element-wise activations. Both are total functions on finite inputs.

use crate::math;
use crate::tensor::Tensor;

use super::loss::BCE_EPSILON;

#[inline]
pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Numerically stable logistic function.
///
/// The raw formula saturates to exactly 0.0 or 1.0 in `f64` once `|x|` is
/// large enough; the output is clamped to `[BCE_EPSILON, 1 - BCE_EPSILON]`
/// so scores stay strictly inside (0, 1) and feed the loss without further
/// guards.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    let s = if x >= 0.0 {
        1.0 / (1.0 + math::exp(-x))
    } else {
        let e = math::exp(x);
        e / (1.0 + e)
    };
    s.clamp(BCE_EPSILON, 1.0 - BCE_EPSILON)
}

pub fn relu_tensor(input: &Tensor) -> Tensor {
    let data = input.data().iter().map(|&v| relu(v)).collect();
    Tensor::new(input.shape().to_vec(), data).expect("shape preserved")
}

pub fn sigmoid_tensor(input: &Tensor) -> Tensor {
    let data = input.data().iter().map(|&v| sigmoid(v)).collect();
    Tensor::new(input.shape().to_vec(), data).expect("shape preserved")
}

/// Gradient through ReLU given the pre-activation input.
#[inline]
pub fn relu_backward(pre_activation: f64, grad_out: f64) -> f64 {
    if pre_activation > 0.0 {
        grad_out
    } else {
        0.0
    }
}

/// Gradient through the logistic function given its output.
#[inline]
pub fn sigmoid_backward(output: f64, grad_out: f64) -> f64 {
    grad_out * output * (1.0 - output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_of_zero_is_half() {
        assert_eq!(sigmoid(0.0), 0.5);
    }

    #[test]
    fn relu_clamps_negatives() {
        assert_eq!(relu(-3.0), 0.0);
        assert_eq!(relu(3.0), 3.0);
        assert_eq!(relu(0.0), 0.0);
    }

    #[test]
    fn sigmoid_saturates_within_1e8() {
        assert!((sigmoid(20.0) - 1.0).abs() < 1e-8);
        assert!(sigmoid(-20.0) < 1e-8);
    }

    #[test]
    fn sigmoid_stays_strictly_inside_unit_interval() {
        for &x in &[-900.0, -50.0, 0.0, 50.0, 900.0] {
            let s = sigmoid(x);
            assert!(s > 0.0 && s < 1.0, "sigmoid({x}) = {s}");
        }
    }
}
