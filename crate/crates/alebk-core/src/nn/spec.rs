use alloc::format;

use crate::{Error, Result};

/// Zero-padding behaviour for convolutions. Only same-padding is used by the
/// blink detector; the enum exists so serialized architectures are explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaddingMode {
    /// Zero-pad so the spatial extent is preserved.
    Same,
}

/// Declarative description of one layer of a network.
#[derive(Debug, Clone, PartialEq)]
pub enum LayerSpec {
    /// 3x3 convolution with `filters` output channels.
    Conv2d {
        filters: usize,
        kernel: usize,
        padding: PaddingMode,
    },
    /// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
    MaxPool2d,
    Relu,
    /// Fully connected layer with `units` outputs.
    Dense { units: usize },
    Sigmoid,
    /// Inverted dropout applied only in training mode.
    Dropout { rate: f64 },
    /// Concatenation of the two branch feature vectors.
    Concat,
}

impl LayerSpec {
    /// 3x3 same-padded convolution (the only kernel size the detector uses).
    pub fn conv2d(filters: usize) -> Self {
        LayerSpec::Conv2d {
            filters,
            kernel: 3,
            padding: PaddingMode::Same,
        }
    }

    /// Validates the fixed constraints on a spec.
    pub fn validate(&self) -> Result<()> {
        match *self {
            LayerSpec::Conv2d { filters, kernel, .. } => {
                if kernel != 3 {
                    return Err(Error::InvalidInput(format!(
                        "conv kernel size is fixed at 3, got {kernel}"
                    )));
                }
                if filters == 0 {
                    return Err(Error::InvalidInput("conv needs at least one filter".into()));
                }
            }
            LayerSpec::Dense { units } => {
                if units == 0 {
                    return Err(Error::InvalidInput("dense needs at least one unit".into()));
                }
            }
            LayerSpec::Dropout { rate } => {
                if !(0.0..1.0).contains(&rate) {
                    return Err(Error::InvalidInput(format!(
                        "dropout rate must be in [0, 1), got {rate}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_kernel_and_dropout() {
        assert!(LayerSpec::conv2d(32).validate().is_ok());
        assert!(LayerSpec::Conv2d {
            filters: 32,
            kernel: 5,
            padding: PaddingMode::Same
        }
        .validate()
        .is_err());
        assert!(LayerSpec::Dropout { rate: 0.5 }.validate().is_ok());
        assert!(LayerSpec::Dropout { rate: 1.0 }.validate().is_err());
        assert!(LayerSpec::Dropout { rate: -0.1 }.validate().is_err());
    }
}
