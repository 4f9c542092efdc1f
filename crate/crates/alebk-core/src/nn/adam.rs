//! Adam with bias correction, operating on a fixed list of parameter tensors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Optimizer hyperparameters. The defaults match the common Adam defaults
/// (learning rate 0.001).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First/second moment buffers and the step counter, one buffer pair per
/// parameter tensor.
#[derive(Debug, Clone)]
pub struct AdamState {
    config: AdamConfig,
    step: u64,
    beta1_pow: f64,
    beta2_pow: f64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl AdamState {
    /// Creates zeroed moment buffers for parameters of the given lengths.
    pub fn new(config: AdamConfig, param_lens: &[usize]) -> Self {
        Self {
            config,
            step: 0,
            beta1_pow: 1.0,
            beta2_pow: 1.0,
            m: param_lens.iter().map(|&n| vec![0.0; n]).collect(),
            v: param_lens.iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    pub fn config(&self) -> &AdamConfig {
        &self.config
    }

    /// Number of updates applied so far.
    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Applies one bias-corrected Adam update in place.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::ShapeMismatch(format!(
                "adam state holds {} parameter buffers, got {} params / {} grads",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        for (i, (p, g)) in params.iter().zip(grads).enumerate() {
            if p.len() != self.m[i].len() || g.len() != self.m[i].len() {
                return Err(Error::ShapeMismatch(format!(
                    "adam buffer {i} has length {}, got param {} / grad {}",
                    self.m[i].len(),
                    p.len(),
                    g.len()
                )));
            }
        }

        self.step += 1;
        self.beta1_pow *= self.config.beta1;
        self.beta2_pow *= self.config.beta2;
        let c = self.config;
        let m_corr = 1.0 / (1.0 - self.beta1_pow);
        let v_corr = 1.0 / (1.0 - self.beta2_pow);

        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            for i in 0..p.len() {
                let grad = g[i];
                m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad;
                v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * grad * grad;
                let m_hat = m[i] * m_corr;
                let v_hat = v[i] * v_corr;
                p[i] -= c.learning_rate * m_hat / (v_hat.sqrt() + c.epsilon);
            }
        }
        Ok(())
    }
}

/// One-shot convenience over [`AdamState::step`].
pub fn adam_step(state: &mut AdamState, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
    state.step(params, grads)
}
