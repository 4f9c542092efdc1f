//! Two-branch convolutional eye-blink detector.
//!
//! Each 50x50x3 eye crop runs through its own convolutional block
//! (conv32-pool, conv32-pool, conv64-pool, ReLU after every conv); the two
//! 6x6x64 feature maps are flattened, concatenated, and fed to a dense-64
//! ReLU layer with dropout 0.5 and a single sigmoid output unit. Higher
//! scores mean "more likely closed".

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nn::{
    bce_loss, bce_sigmoid_grad, conv2d_backward, conv2d_forward, dense_backward, dense_forward,
    dropout_apply, dropout_backward, dropout_mask, glorot_uniform, he_uniform, maxpool2d_backward,
    maxpool2d_forward, relu, relu_backward, relu_tensor, sigmoid, AdamConfig, AdamState, LayerSpec,
};
use crate::tensor::Tensor;
use crate::{Error, Result};

/// Side length of an eye crop in pixels.
pub const EYE_SIDE: usize = 50;
/// Channels of an eye crop.
pub const EYE_CHANNELS: usize = 3;
/// Filters of the three convolutions in each branch.
pub const BRANCH_FILTERS: [usize; 3] = [32, 32, 64];
/// Units of the dense head layer.
pub const DENSE_UNITS: usize = 64;
/// Dropout rate applied after the dense head layer during training.
pub const DROPOUT_RATE: f64 = 0.5;
/// Flattened feature count per branch after the third pooling (6 * 6 * 64).
pub const BRANCH_FEATURES: usize = 6 * 6 * 64;
/// Input width of the dense head layer (both branches concatenated).
pub const HEAD_INPUT: usize = 2 * BRANCH_FEATURES;

/// Acquisition spectrum of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spectrum {
    Rgb,
    Nir,
}

/// Ground-truth eye state; closed is the positive class (label 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EyeState {
    Open,
    Closed,
}

impl EyeState {
    /// Training target: closed = 1, open = 0.
    pub fn target(self) -> f64 {
        match self {
            EyeState::Closed => 1.0,
            EyeState::Open => 0.0,
        }
    }
}

/// A left/right pair of 50x50x3 eye crops with its label and provenance.
#[derive(Debug, Clone)]
pub struct EyePairSample {
    pub left: Tensor,
    pub right: Tensor,
    pub label: EyeState,
    pub subject_id: String,
    pub spectrum: Spectrum,
}

impl EyePairSample {
    pub fn new(
        left: Tensor,
        right: Tensor,
        label: EyeState,
        subject_id: String,
        spectrum: Spectrum,
    ) -> Result<Self> {
        check_crop(&left, "left eye crop")?;
        check_crop(&right, "right eye crop")?;
        if subject_id.is_empty() {
            return Err(Error::InvalidInput("subject id must be non-empty".into()));
        }
        Ok(Self {
            left,
            right,
            label,
            subject_id,
            spectrum,
        })
    }
}

fn check_crop(crop: &Tensor, what: &str) -> Result<()> {
    crop.expect_shape(&[EYE_SIDE, EYE_SIDE, EYE_CHANNELS], what)?;
    if let Some(v) = crop.data().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidInput(format!(
            "{what}: pixel value {v} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Parameters of one convolutional branch.
#[derive(Debug, Clone, PartialEq)]
struct ConvBlock {
    conv1_kernel: Tensor,
    conv1_bias: Tensor,
    conv2_kernel: Tensor,
    conv2_bias: Tensor,
    conv3_kernel: Tensor,
    conv3_bias: Tensor,
}

impl ConvBlock {
    fn init<R: Rng>(rng: &mut R) -> Self {
        let [f1, f2, f3] = BRANCH_FILTERS;
        Self {
            conv1_kernel: he_uniform(rng, 9 * EYE_CHANNELS, vec![3, 3, EYE_CHANNELS, f1]),
            conv1_bias: Tensor::zeros(vec![f1]),
            conv2_kernel: he_uniform(rng, 9 * f1, vec![3, 3, f1, f2]),
            conv2_bias: Tensor::zeros(vec![f2]),
            conv3_kernel: he_uniform(rng, 9 * f2, vec![3, 3, f2, f3]),
            conv3_bias: Tensor::zeros(vec![f3]),
        }
    }
}

/// The assembled two-branch blink detector.
#[derive(Debug, Clone, PartialEq)]
pub struct BlinkModel {
    left: ConvBlock,
    right: ConvBlock,
    dense_weight: Tensor,
    dense_bias: Tensor,
    output_weight: Tensor,
    output_bias: Tensor,
    seed: u64,
}

/// Names of the model's parameter tensors, in canonical order.
pub const TENSOR_NAMES: [&str; 16] = [
    "left.conv1.kernel",
    "left.conv1.bias",
    "left.conv2.kernel",
    "left.conv2.bias",
    "left.conv3.kernel",
    "left.conv3.bias",
    "right.conv1.kernel",
    "right.conv1.bias",
    "right.conv2.kernel",
    "right.conv2.bias",
    "right.conv3.kernel",
    "right.conv3.bias",
    "head.dense.weight",
    "head.dense.bias",
    "head.output.weight",
    "head.output.bias",
];

/// Builds the detector with deterministic seeded initialization: He-uniform
/// for ReLU-activated layers, Glorot-uniform for the sigmoid output, zero
/// biases.
pub fn build_model(seed: u64) -> BlinkModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = ConvBlock::init(&mut rng);
    let right = ConvBlock::init(&mut rng);
    let dense_weight = he_uniform(&mut rng, HEAD_INPUT, vec![DENSE_UNITS, HEAD_INPUT]);
    let dense_bias = Tensor::zeros(vec![DENSE_UNITS]);
    let output_weight = glorot_uniform(&mut rng, DENSE_UNITS, 1, vec![1, DENSE_UNITS]);
    let output_bias = Tensor::zeros(vec![1]);
    BlinkModel {
        left,
        right,
        dense_weight,
        dense_bias,
        output_weight,
        output_bias,
        seed,
    }
}

impl BlinkModel {
    /// Seed the model was initialized from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total number of trainable parameters.
    pub fn param_count(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    /// Layer stack of one convolutional branch.
    pub fn branch_layer_specs() -> Vec<LayerSpec> {
        let mut specs = Vec::new();
        for filters in BRANCH_FILTERS {
            specs.push(LayerSpec::conv2d(filters));
            specs.push(LayerSpec::Relu);
            specs.push(LayerSpec::MaxPool2d);
        }
        specs
    }

    /// Layer stack of the shared head.
    pub fn head_layer_specs() -> Vec<LayerSpec> {
        vec![
            LayerSpec::Concat,
            LayerSpec::Dense { units: DENSE_UNITS },
            LayerSpec::Relu,
            LayerSpec::Dropout { rate: DROPOUT_RATE },
            LayerSpec::Dense { units: 1 },
            LayerSpec::Sigmoid,
        ]
    }

    /// Parameter tensors in canonical order, paired with their names.
    pub fn tensors(&self) -> Vec<(&'static str, &Tensor)> {
        let names = TENSOR_NAMES;
        let refs = [
            &self.left.conv1_kernel,
            &self.left.conv1_bias,
            &self.left.conv2_kernel,
            &self.left.conv2_bias,
            &self.left.conv3_kernel,
            &self.left.conv3_bias,
            &self.right.conv1_kernel,
            &self.right.conv1_bias,
            &self.right.conv2_kernel,
            &self.right.conv2_bias,
            &self.right.conv3_kernel,
            &self.right.conv3_bias,
            &self.dense_weight,
            &self.dense_bias,
            &self.output_weight,
            &self.output_bias,
        ];
        names.into_iter().zip(refs).collect()
    }

    /// Mutable view of the parameter tensors in canonical order.
    pub fn tensors_mut(&mut self) -> Vec<(&'static str, &mut Tensor)> {
        let names = TENSOR_NAMES;
        let refs: [&mut Tensor; 16] = [
            &mut self.left.conv1_kernel,
            &mut self.left.conv1_bias,
            &mut self.left.conv2_kernel,
            &mut self.left.conv2_bias,
            &mut self.left.conv3_kernel,
            &mut self.left.conv3_bias,
            &mut self.right.conv1_kernel,
            &mut self.right.conv1_bias,
            &mut self.right.conv2_kernel,
            &mut self.right.conv2_bias,
            &mut self.right.conv3_kernel,
            &mut self.right.conv3_bias,
            &mut self.dense_weight,
            &mut self.dense_bias,
            &mut self.output_weight,
            &mut self.output_bias,
        ];
        names.into_iter().zip(refs).collect()
    }

    /// Inference score in (0, 1); higher means more likely closed. Dropout is
    /// disabled.
    pub fn predict(&self, left: &Tensor, right: &Tensor) -> Result<f64> {
        check_crop(left, "left eye crop")?;
        check_crop(right, "right eye crop")?;
        let cache = self.forward(left, right, None)?;
        Ok(cache.score)
    }

    /// Training-mode forward pass; draws a fresh dropout mask from `rng`.
    pub fn forward_train<R: Rng>(
        &self,
        left: &Tensor,
        right: &Tensor,
        dropout_rate: f64,
        rng: &mut R,
    ) -> Result<ForwardCache> {
        let mask = if dropout_rate > 0.0 {
            Some(dropout_mask(rng, DENSE_UNITS, dropout_rate)?)
        } else {
            None
        };
        self.forward(left, right, mask)
    }

    /// Forward pass with an explicit (possibly absent) dropout mask.
    pub fn forward(
        &self,
        left: &Tensor,
        right: &Tensor,
        dropout_mask: Option<Vec<f64>>,
    ) -> Result<ForwardCache> {
        left.expect_shape(&[EYE_SIDE, EYE_SIDE, EYE_CHANNELS], "left eye crop")?;
        right.expect_shape(&[EYE_SIDE, EYE_SIDE, EYE_CHANNELS], "right eye crop")?;
        let left_cache = branch_forward(&self.left, left)?;
        let right_cache = branch_forward(&self.right, right)?;

        let mut head_input = Vec::with_capacity(HEAD_INPUT);
        head_input.extend_from_slice(left_cache.pool3_out.data());
        head_input.extend_from_slice(right_cache.pool3_out.data());

        let dense_pre = dense_forward(&head_input, &self.dense_weight, &self.dense_bias)?;
        let dense_act: Vec<f64> = dense_pre.iter().map(|&v| relu(v)).collect();
        let dropped = match &dropout_mask {
            Some(mask) => dropout_apply(&dense_act, mask)?,
            None => dense_act.clone(),
        };
        let logit = dense_forward(&dropped, &self.output_weight, &self.output_bias)?[0];
        let score = sigmoid(logit);

        Ok(ForwardCache {
            left: left_cache,
            right: right_cache,
            head_input,
            dense_pre,
            dropout_mask,
            dropped,
            score,
        })
    }

    /// Analytic gradients of the BCE loss for the forward pass held in
    /// `cache`. Deterministic given the cache's dropout mask.
    pub fn backward(&self, cache: &ForwardCache, label: EyeState) -> Result<Gradients> {
        let d_logit = bce_sigmoid_grad(cache.score, label.target());

        let out_grads = dense_backward(&cache.dropped, &self.output_weight, &[d_logit])?;
        let d_dropped = out_grads.input;
        let d_dense_act = match &cache.dropout_mask {
            Some(mask) => dropout_backward(&d_dropped, mask)?,
            None => d_dropped,
        };
        let d_dense_pre: Vec<f64> = cache
            .dense_pre
            .iter()
            .zip(&d_dense_act)
            .map(|(&pre, &g)| relu_backward(pre, g))
            .collect();
        let dense_grads = dense_backward(&cache.head_input, &self.dense_weight, &d_dense_pre)?;

        let (d_left_flat, d_right_flat) = dense_grads.input.split_at(BRANCH_FEATURES);
        let left_grads = branch_backward(&self.left, &cache.left, d_left_flat)?;
        let right_grads = branch_backward(&self.right, &cache.right, d_right_flat)?;

        let mut tensors = Vec::with_capacity(16);
        tensors.extend(left_grads);
        tensors.extend(right_grads);
        tensors.push(dense_grads.weights);
        tensors.push(dense_grads.bias);
        tensors.push(out_grads.weights);
        tensors.push(out_grads.bias);
        Ok(Gradients { tensors })
    }
}

/// Cached activations of one branch, kept for the backward pass.
#[derive(Debug, Clone)]
pub struct BranchCache {
    input: Tensor,
    conv1_pre: Tensor,
    pool1_arg: Vec<u32>,
    pool1_out: Tensor,
    conv2_pre: Tensor,
    pool2_arg: Vec<u32>,
    pool2_out: Tensor,
    conv3_pre: Tensor,
    pool3_arg: Vec<u32>,
    pool3_out: Tensor,
}

impl BranchCache {
    /// Shape of the final pooled feature map.
    pub fn feature_shape(&self) -> &[usize] {
        self.pool3_out.shape()
    }
}

/// Everything the backward pass needs from a forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub left: BranchCache,
    pub right: BranchCache,
    head_input: Vec<f64>,
    dense_pre: Vec<f64>,
    dropout_mask: Option<Vec<f64>>,
    dropped: Vec<f64>,
    /// Sigmoid output in (0, 1).
    pub score: f64,
}

fn branch_forward(block: &ConvBlock, input: &Tensor) -> Result<BranchCache> {
    let conv1_pre = conv2d_forward(input, &block.conv1_kernel, &block.conv1_bias)?;
    let (pool1_out, pool1_arg) = maxpool2d_forward(&relu_tensor(&conv1_pre))?;
    let conv2_pre = conv2d_forward(&pool1_out, &block.conv2_kernel, &block.conv2_bias)?;
    let (pool2_out, pool2_arg) = maxpool2d_forward(&relu_tensor(&conv2_pre))?;
    let conv3_pre = conv2d_forward(&pool2_out, &block.conv3_kernel, &block.conv3_bias)?;
    let (pool3_out, pool3_arg) = maxpool2d_forward(&relu_tensor(&conv3_pre))?;
    Ok(BranchCache {
        input: input.clone(),
        conv1_pre,
        pool1_arg,
        pool1_out,
        conv2_pre,
        pool2_arg,
        pool2_out,
        conv3_pre,
        pool3_arg,
        pool3_out,
    })
}

fn relu_backward_tensor(pre: &Tensor, grad: &Tensor) -> Tensor {
    let data = pre
        .data()
        .iter()
        .zip(grad.data())
        .map(|(&p, &g)| relu_backward(p, g))
        .collect();
    Tensor::new(pre.shape().to_vec(), data).expect("shape preserved")
}

/// Returns the six parameter gradients of a branch in declaration order.
fn branch_backward(block: &ConvBlock, cache: &BranchCache, d_flat: &[f64]) -> Result<Vec<Tensor>> {
    let d_pool3 = Tensor::new(cache.pool3_out.shape().to_vec(), d_flat.to_vec())?;
    let d_act3 = maxpool2d_backward(&cache.pool3_arg, &d_pool3, cache.conv3_pre.shape())?;
    let d_conv3 = relu_backward_tensor(&cache.conv3_pre, &d_act3);
    let g3 = conv2d_backward(&cache.pool2_out, &block.conv3_kernel, &d_conv3, true)?;

    let d_pool2 = g3.input.expect("input gradient requested");
    let d_act2 = maxpool2d_backward(&cache.pool2_arg, &d_pool2, cache.conv2_pre.shape())?;
    let d_conv2 = relu_backward_tensor(&cache.conv2_pre, &d_act2);
    let g2 = conv2d_backward(&cache.pool1_out, &block.conv2_kernel, &d_conv2, true)?;

    let d_pool1 = g2.input.expect("input gradient requested");
    let d_act1 = maxpool2d_backward(&cache.pool1_arg, &d_pool1, cache.conv1_pre.shape())?;
    let d_conv1 = relu_backward_tensor(&cache.conv1_pre, &d_act1);
    // The branch input is the image itself; its gradient has no consumer.
    let g1 = conv2d_backward(&cache.input, &block.conv1_kernel, &d_conv1, false)?;

    Ok(vec![
        g1.kernels, g1.bias, g2.kernels, g2.bias, g3.kernels, g3.bias,
    ])
}

/// Parameter gradients in the same canonical order as
/// [`BlinkModel::tensors`].
#[derive(Debug, Clone)]
pub struct Gradients {
    pub tensors: Vec<Tensor>,
}

impl Gradients {
    pub fn zeros_like(model: &BlinkModel) -> Self {
        Self {
            tensors: model
                .tensors()
                .iter()
                .map(|(_, t)| Tensor::zeros(t.shape().to_vec()))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        for (acc, g) in self.tensors.iter_mut().zip(&other.tensors) {
            for (a, b) in acc.data_mut().iter_mut().zip(g.data()) {
                *a += b;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in &mut self.tensors {
            for v in t.data_mut() {
                *v *= factor;
            }
        }
    }

    /// Gradient tensor by canonical name.
    pub fn by_name(&self, name: &str) -> Option<&Tensor> {
        TENSOR_NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| &self.tensors[i])
    }
}

/// Training hyperparameters. The defaults follow the detector's recipe:
/// batch size 32, Adam with learning rate 0.001, dropout 0.5, early stop on
/// a training-loss plateau with patience 10.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub dropout_rate: f64,
    /// Seed for shuffling and dropout masks.
    pub seed: u64,
    /// Stop after this many epochs without the training loss improving by at
    /// least `early_stop_min_delta`. `None` disables plateau stopping.
    pub early_stop_patience: Option<usize>,
    pub early_stop_min_delta: f64,
    /// Stop as soon as the epoch-end training accuracy reaches this value.
    pub target_accuracy: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 50,
            batch_size: 32,
            adam: AdamConfig::default(),
            dropout_rate: DROPOUT_RATE,
            seed: 0,
            early_stop_patience: Some(10),
            early_stop_min_delta: 1e-6,
            target_accuracy: None,
        }
    }
}

/// Loss and accuracy of one epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean per-sample BCE over the training pass (dropout active).
    pub train_loss: f64,
    /// Fraction of training samples classified correctly at threshold 0.5
    /// with dropout disabled.
    pub train_accuracy: f64,
}

/// Per-epoch history of a training run.
#[derive(Debug, Clone, Default)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
}

impl TrainHistory {
    pub fn final_loss(&self) -> Option<f64> {
        self.epochs.last().map(|e| e.train_loss)
    }

    pub fn best_accuracy(&self) -> Option<f64> {
        self.epochs
            .iter()
            .map(|e| e.train_accuracy)
            .fold(None, |best, a| Some(best.map_or(a, |b: f64| b.max(a))))
    }
}

/// Trains the model in place and returns the per-epoch history.
///
/// Requires at least one sample of each class and at least one epoch. The
/// run is fully determined by (model, samples, config).
pub fn train(
    model: &mut BlinkModel,
    samples: &[EyePairSample],
    config: &TrainConfig,
) -> Result<TrainHistory> {
    if config.epochs == 0 {
        return Err(Error::InvalidInput("epochs must be at least 1".into()));
    }
    if config.batch_size == 0 {
        return Err(Error::InvalidInput("batch size must be at least 1".into()));
    }
    if samples.is_empty() {
        return Err(Error::Empty("training sample set"));
    }
    let n_closed = samples.iter().filter(|s| s.label == EyeState::Closed).count();
    if n_closed == 0 || n_closed == samples.len() {
        return Err(Error::InvalidInput(
            "training set must contain both open and closed samples".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let param_lens: Vec<usize> = model.tensors().iter().map(|(_, t)| t.len()).collect();
    let mut adam = AdamState::new(config.adam, &param_lens);

    let mut history = TrainHistory::default();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut best_loss = f64::INFINITY;
    let mut stale_epochs = 0usize;

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;

        for batch in order.chunks(config.batch_size) {
            let mut grad_acc = Gradients::zeros_like(model);
            for &idx in batch {
                let sample = &samples[idx];
                let cache =
                    model.forward_train(&sample.left, &sample.right, config.dropout_rate, &mut rng)?;
                loss_sum += bce_loss(cache.score, sample.label.target())?;
                let grads = model.backward(&cache, sample.label)?;
                grad_acc.add_assign(&grads);
            }
            grad_acc.scale(1.0 / batch.len() as f64);

            let mut tensors = model.tensors_mut();
            let mut params: Vec<&mut [f64]> =
                tensors.iter_mut().map(|(_, t)| t.data_mut()).collect();
            let grads: Vec<&[f64]> = grad_acc.tensors.iter().map(|t| t.data()).collect();
            adam.step(&mut params, &grads)?;
        }

        let mut correct = 0usize;
        for sample in samples {
            let score = model.forward(&sample.left, &sample.right, None)?.score;
            let predicted_closed = score > 0.5;
            if predicted_closed == (sample.label == EyeState::Closed) {
                correct += 1;
            }
        }
        let train_loss = loss_sum / samples.len() as f64;
        let train_accuracy = correct as f64 / samples.len() as f64;
        history.epochs.push(EpochStats {
            epoch,
            train_loss,
            train_accuracy,
        });

        if model.tensors().iter().any(|(_, t)| !t.all_finite()) {
            return Err(Error::InvalidInput(
                "training produced non-finite parameters".into(),
            ));
        }

        if let Some(target) = config.target_accuracy {
            if train_accuracy >= target {
                break;
            }
        }
        if let Some(patience) = config.early_stop_patience {
            if train_loss < best_loss - config.early_stop_min_delta {
                best_loss = train_loss;
                stale_epochs = 0;
            } else {
                stale_epochs += 1;
                if stale_epochs >= patience {
                    break;
                }
            }
        }
    }

    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Synthetic separable crops: closed eyes show a dark horizontal band in
    /// the crop center, open eyes are uniformly bright.
    pub(crate) fn synthetic_crop<R: Rng>(state: EyeState, rng: &mut R) -> Tensor {
        let mut t = Tensor::filled(vec![EYE_SIDE, EYE_SIDE, EYE_CHANNELS], 0.8);
        if state == EyeState::Closed {
            for h in 20..30 {
                for w in 0..EYE_SIDE {
                    for c in 0..EYE_CHANNELS {
                        let idx = t.idx3(h, w, c);
                        t.data_mut()[idx] = 0.05;
                    }
                }
            }
        }
        for v in t.data_mut() {
            *v = (*v + rng.random::<f64>() * 0.05).clamp(0.0, 1.0);
        }
        t
    }

    pub(crate) fn synthetic_samples(n: usize, seed: u64) -> Vec<EyePairSample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let state = if i % 2 == 0 {
                    EyeState::Open
                } else {
                    EyeState::Closed
                };
                EyePairSample::new(
                    synthetic_crop(state, &mut rng),
                    synthetic_crop(state, &mut rng),
                    state,
                    format!("s{:02}", i % 3),
                    Spectrum::Rgb,
                )
                .unwrap()
            })
            .collect()
    }

    fn zero_head(model: &mut BlinkModel) {
        for (name, t) in model.tensors_mut() {
            if name == "head.output.weight" || name == "head.output.bias" {
                t.data_mut().fill(0.0);
            }
        }
    }

    #[test]
    fn parameter_count_matches_architecture_arithmetic() {
        // Per branch: 896 + 9,248 + 18,496 = 28,640; head: 294,976 + 65.
        let model = build_model(9);
        assert_eq!(model.param_count(), 352_321);
        let per_branch: usize = model
            .tensors()
            .iter()
            .filter(|(n, _)| n.starts_with("left."))
            .map(|(_, t)| t.len())
            .sum();
        assert_eq!(per_branch, 28_640);
    }

    #[test]
    fn branch_features_flatten_to_2304_and_concat_to_4608() {
        let model = build_model(3);
        let crop = Tensor::filled(vec![EYE_SIDE, EYE_SIDE, EYE_CHANNELS], 0.5);
        let cache = model.forward(&crop, &crop, None).unwrap();
        assert_eq!(cache.left.feature_shape(), &[6, 6, 64]);
        assert_eq!(cache.right.feature_shape(), &[6, 6, 64]);
        assert_eq!(cache.head_input.len(), HEAD_INPUT);
        assert_eq!(BRANCH_FEATURES, 2304);
        assert_eq!(HEAD_INPUT, 4608);
    }

    #[test]
    fn same_seed_builds_identical_models() {
        let a = build_model(1234);
        let b = build_model(1234);
        assert_eq!(a, b);
        let c = build_model(1235);
        assert_ne!(a, c);
    }

    #[test]
    fn zeroed_head_scores_half_for_any_input() {
        let mut model = build_model(5);
        zero_head(&mut model);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..3 {
            let left = synthetic_crop(EyeState::Open, &mut rng);
            let right = synthetic_crop(EyeState::Closed, &mut rng);
            assert_eq!(model.predict(&left, &right).unwrap(), 0.5);
        }
    }

    #[test]
    fn zeroed_head_mean_score_is_half_on_balanced_set() {
        let mut model = build_model(5);
        zero_head(&mut model);
        let samples = synthetic_samples(8, 3);
        let mean: f64 = samples
            .iter()
            .map(|s| model.predict(&s.left, &s.right).unwrap())
            .sum::<f64>()
            / samples.len() as f64;
        assert_eq!(mean, 0.5);
    }

    #[test]
    fn zero_weight_output_layer_bias_gradient_is_score_minus_label() {
        let mut model = build_model(2);
        zero_head(&mut model);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let left = synthetic_crop(EyeState::Closed, &mut rng);
        let right = synthetic_crop(EyeState::Closed, &mut rng);
        let cache = model.forward(&left, &right, None).unwrap();
        assert_eq!(cache.score, 0.5);
        for (label, expected) in [(EyeState::Closed, -0.5), (EyeState::Open, 0.5)] {
            let grads = model.backward(&cache, label).unwrap();
            let gb = grads.by_name("head.output.bias").unwrap();
            assert!((gb.data()[0] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn identical_branches_and_inputs_give_identical_branch_gradients() {
        let mut model = build_model(7);
        // Copy the left block's tensors into the right block.
        let left_tensors: Vec<Tensor> = model
            .tensors()
            .iter()
            .filter(|(n, _)| n.starts_with("left."))
            .map(|(_, t)| (*t).clone())
            .collect();
        for ((name, t), src) in model
            .tensors_mut()
            .into_iter()
            .filter(|(n, _)| n.starts_with("right."))
            .zip(left_tensors)
        {
            debug_assert!(name.starts_with("right."));
            t.data_mut().copy_from_slice(src.data());
        }

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let crop = synthetic_crop(EyeState::Closed, &mut rng);
        let cache = model.forward(&crop, &crop, None).unwrap();
        let grads = model.backward(&cache, EyeState::Closed).unwrap();
        for (l, r) in TENSOR_NAMES.iter().take(6).zip(TENSOR_NAMES.iter().skip(6)) {
            let gl = grads.by_name(l).unwrap();
            let gr = grads.by_name(r).unwrap();
            assert_eq!(gl.data(), gr.data(), "{l} vs {r}");
        }
    }

    #[test]
    fn swapping_eyes_changes_the_score() {
        let model = build_model(21);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = synthetic_crop(EyeState::Open, &mut rng);
        let b = synthetic_crop(EyeState::Closed, &mut rng);
        let s_ab = model.predict(&a, &b).unwrap();
        let s_ba = model.predict(&b, &a).unwrap();
        assert!((s_ab - s_ba).abs() > 1e-12);
    }

    #[test]
    fn predict_rejects_wrong_shapes_and_out_of_range_pixels() {
        let model = build_model(1);
        let bad_shape = Tensor::zeros(vec![49, 50, 3]);
        let good = Tensor::filled(vec![50, 50, 3], 0.5);
        assert!(matches!(
            model.predict(&bad_shape, &good),
            Err(Error::ShapeMismatch(_))
        ));
        let out_of_range = Tensor::filled(vec![50, 50, 3], 1.5);
        assert!(matches!(
            model.predict(&good, &out_of_range),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn repeated_prediction_is_identical() {
        let model = build_model(13);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let left = synthetic_crop(EyeState::Open, &mut rng);
        let right = synthetic_crop(EyeState::Open, &mut rng);
        let a = model.predict(&left, &right).unwrap();
        let b = model.predict(&left, &right).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a > 0.0 && a < 1.0);
    }

    #[test]
    fn train_rejects_zero_epochs_and_single_class_sets() {
        let mut model = build_model(1);
        let samples = synthetic_samples(4, 1);
        let cfg = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        assert!(train(&mut model, &samples, &cfg).is_err());

        let closed_only: Vec<_> = synthetic_samples(4, 1)
            .into_iter()
            .map(|mut s| {
                s.label = EyeState::Closed;
                s
            })
            .collect();
        assert!(train(&mut model, &closed_only, &TrainConfig::default()).is_err());
    }

    #[test]
    fn short_training_run_reduces_loss_on_separable_data() {
        let mut model = build_model(40);
        let samples = synthetic_samples(8, 9);
        let cfg = TrainConfig {
            epochs: 4,
            seed: 9,
            ..TrainConfig::default()
        };
        let history = train(&mut model, &samples, &cfg).unwrap();
        assert_eq!(history.epochs.len(), 4);
        let first = history.epochs.first().unwrap().train_loss;
        let last = history.final_loss().unwrap();
        assert!(last < first, "loss did not decrease: {first} -> {last}");
        assert!(model.tensors().iter().all(|(_, t)| t.all_finite()));
    }

    #[test]
    fn training_is_deterministic_for_a_fixed_seed() {
        let samples = synthetic_samples(6, 5);
        let cfg = TrainConfig {
            epochs: 2,
            seed: 77,
            ..TrainConfig::default()
        };
        let mut a = build_model(8);
        let mut b = build_model(8);
        let ha = train(&mut a, &samples, &cfg).unwrap();
        let hb = train(&mut b, &samples, &cfg).unwrap();
        assert_eq!(a, b);
        for (ea, eb) in ha.epochs.iter().zip(&hb.epochs) {
            assert_eq!(ea.train_loss.to_bits(), eb.train_loss.to_bits());
        }
    }
}
