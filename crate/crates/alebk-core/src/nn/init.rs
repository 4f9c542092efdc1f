//! Seeded weight initialization: He-uniform for ReLU-activated layers,
//! Glorot-uniform for the sigmoid output layer.

use alloc::vec::Vec;

use rand::Rng;

use crate::tensor::Tensor;

fn uniform_tensor<R: Rng>(rng: &mut R, shape: Vec<usize>, limit: f64) -> Tensor {
    let n: usize = shape.iter().product();
    let data = (0..n)
        .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * limit)
        .collect();
    Tensor::new(shape, data).expect("element count matches shape")
}

/// He-uniform: samples from `U(-sqrt(6 / fan_in), sqrt(6 / fan_in))`.
pub fn he_uniform<R: Rng>(rng: &mut R, fan_in: usize, shape: Vec<usize>) -> Tensor {
    let limit = (6.0 / fan_in as f64).sqrt();
    uniform_tensor(rng, shape, limit)
}

/// Glorot-uniform: samples from
/// `U(-sqrt(6 / (fan_in + fan_out)), sqrt(6 / (fan_in + fan_out)))`.
pub fn glorot_uniform<R: Rng>(
    rng: &mut R,
    fan_in: usize,
    fan_out: usize,
    shape: Vec<usize>,
) -> Tensor {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    uniform_tensor(rng, shape, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_weights() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        let ta = he_uniform(&mut a, 27, alloc::vec![3, 3, 3, 4]);
        let tb = he_uniform(&mut b, 27, alloc::vec![3, 3, 3, 4]);
        assert_eq!(ta.data(), tb.data());
    }

    #[test]
    fn samples_stay_within_fan_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fan_in = 64;
        let limit = (6.0f64 / fan_in as f64).sqrt();
        let t = he_uniform(&mut rng, fan_in, alloc::vec![64, 16]);
        assert!(t.data().iter().all(|v| v.abs() <= limit));

        let g = glorot_uniform(&mut rng, 64, 1, alloc::vec![1, 64]);
        let glimit = (6.0f64 / 65.0).sqrt();
        assert!(g.data().iter().all(|v| v.abs() <= glimit));
    }
}
