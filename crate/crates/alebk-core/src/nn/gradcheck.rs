//! Central finite-difference gradient verification.
//!
//! These helpers only ever call the forward path, so they stay independent of
//! the analytic backward implementations they are used to check.

/// Central difference `(f(x + h) - f(x - h)) / 2h`, where `f` evaluates the
/// loss with the probed parameter set to the given value.
pub fn central_difference<F: FnMut(f64) -> f64>(x: f64, h: f64, mut loss_at: F) -> f64 {
    (loss_at(x + h) - loss_at(x - h)) / (2.0 * h)
}

/// Relative error between an analytic and a numeric derivative.
///
/// The denominator is floored at `scale_floor` so near-zero gradient pairs
/// are compared absolutely instead of amplifying finite-difference noise.
pub fn relative_error(analytic: f64, numeric: f64, scale_floor: f64) -> f64 {
    let scale = analytic.abs().max(numeric.abs()).max(scale_floor);
    (analytic - numeric).abs() / scale
}

/// Default probe step for central differences.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Default denominator floor for [`relative_error`].
pub const DEFAULT_SCALE_FLOOR: f64 = 1e-3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_difference_recovers_polynomial_derivative() {
        // f(x) = x^3 - 2x, f'(2) = 10
        let d = central_difference(2.0, 1e-5, |x| x * x * x - 2.0 * x);
        assert!((d - 10.0).abs() < 1e-8, "d = {d}");
    }

    #[test]
    fn relative_error_floors_small_scales() {
        assert_eq!(relative_error(0.0, 0.0, 1e-3), 0.0);
        // 1e-9 absolute disagreement near zero stays small on the floored scale.
        assert!(relative_error(1e-9, 2e-9, 1e-3) < 1e-5);
        // Large values compare relatively.
        assert!((relative_error(100.0, 101.0, 1e-3) - 1.0 / 101.0).abs() < 1e-12);
    }
}
