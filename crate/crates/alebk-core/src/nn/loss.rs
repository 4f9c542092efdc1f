//! Binary cross-entropy for a single sigmoid output.

use alloc::format;

use crate::math;
use crate::{Error, Result};

/// Clamp applied to predictions before taking logarithms.
pub const BCE_EPSILON: f64 = 1e-12;

/// Binary cross-entropy `-[y ln p + (1 - y) ln(1 - p)]`.
///
/// `label` must be exactly 0.0 or 1.0; `prediction` is clamped to
/// `[BCE_EPSILON, 1 - BCE_EPSILON]`.
pub fn bce_loss(prediction: f64, label: f64) -> Result<f64> {
    if label != 0.0 && label != 1.0 {
        return Err(Error::InvalidInput(format!(
            "label must be 0 or 1, got {label}"
        )));
    }
    let p = prediction.clamp(BCE_EPSILON, 1.0 - BCE_EPSILON);
    Ok(-(label * math::ln(p) + (1.0 - label) * math::ln(1.0 - p)))
}

/// Gradient of the BCE loss with respect to the pre-sigmoid logit, given the
/// sigmoid output `p`. The sigmoid and loss derivatives combine to `p - y`,
/// which is the numerically stable route.
#[inline]
pub fn bce_sigmoid_grad(p: f64, label: f64) -> f64 {
    p - label
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_prediction_costs_nothing_after_clamp() {
        // p = 1 clamps to 1 - eps; -ln(1 - eps) ~ eps.
        let loss = bce_loss(1.0, 1.0).unwrap();
        assert!(loss >= 0.0 && loss < 2e-12, "loss = {loss}");
        let loss0 = bce_loss(0.0, 0.0).unwrap();
        assert!(loss0 >= 0.0 && loss0 < 2e-12);
    }

    #[test]
    fn indifferent_prediction_costs_ln2() {
        let ln2 = core::f64::consts::LN_2;
        assert!((bce_loss(0.5, 1.0).unwrap() - ln2).abs() < 1e-15);
        assert!((bce_loss(0.5, 0.0).unwrap() - ln2).abs() < 1e-15);
    }

    #[test]
    fn confident_wrong_prediction_costs_ln10() {
        // p = 0.9, y = 0 -> -ln(0.1)
        let expected = -(0.1f64).ln();
        assert!((bce_loss(0.9, 0.0).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 2.302585092994046).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_binary_labels() {
        assert!(bce_loss(0.5, 0.5).is_err());
        assert!(bce_loss(0.5, -1.0).is_err());
        assert!(bce_loss(0.5, 2.0).is_err());
    }

    #[test]
    fn loss_is_nonnegative() {
        for &p in &[0.001, 0.25, 0.5, 0.75, 0.999] {
            for &y in &[0.0, 1.0] {
                assert!(bce_loss(p, y).unwrap() >= 0.0);
            }
        }
    }
}
