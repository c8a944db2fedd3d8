//! Activations h and the laws Ψ of h(Z), Z ∼ N(0,1).

use crate::error::{Error, Result};
use crate::quad::expect_std_normal;
use crate::special::{norm_cdf, norm_quantile};

const LOGIT_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActivationKind {
    Linear,
    Sigmoid,
    Relu,
}

impl ActivationKind {
    pub const ALL: [ActivationKind; 3] = [Self::Linear, Self::Sigmoid, Self::Relu];

    /// h(z).
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Self::Linear => z,
            Self::Sigmoid => sigmoid(z),
            Self::Relu => z.max(0.0),
        }
    }

    /// Whether Ψ is continuous and strictly increasing on its support.
    pub fn is_strictly_increasing(self) -> bool {
        !matches!(self, Self::Relu)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Sigmoid => "sigmoid",
            Self::Relu => "relu",
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

fn logit(v: f64) -> f64 {
    let v = v.clamp(LOGIT_CLAMP, 1.0 - LOGIT_CLAMP);
    libm::log(v / (1.0 - v))
}

/// Ψ(v) = P(h(Z) ≤ v).
pub fn activation_cdf(kind: ActivationKind, v: f64) -> f64 {
    match kind {
        ActivationKind::Linear => norm_cdf(v),
        ActivationKind::Sigmoid => {
            if v <= 0.0 {
                0.0
            } else if v >= 1.0 {
                1.0
            } else {
                norm_cdf(logit(v))
            }
        }
        ActivationKind::Relu => {
            if v < 0.0 {
                0.0
            } else {
                norm_cdf(v)
            }
        }
    }
}

/// Ψ⁻¹(p) = h(Φ⁻¹(p)); the ReLU law maps p ≤ ½ onto its atom at 0.
pub fn activation_quantile(kind: ActivationKind, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain("activation quantile needs p in (0,1)"));
    }
    Ok(kind.apply(norm_quantile(p)?))
}

/// (E[h(Z)], Var h(Z)).
pub fn activation_moments(kind: ActivationKind) -> (f64, f64) {
    match kind {
        ActivationKind::Linear => (0.0, 1.0),
        ActivationKind::Relu => {
            let pi = core::f64::consts::PI;
            (1.0 / libm::sqrt(2.0 * pi), (pi - 1.0) / (2.0 * pi))
        }
        ActivationKind::Sigmoid => {
            let m = expect_std_normal(sigmoid);
            let v = expect_std_normal(|z| {
                let d = sigmoid(z) - m;
                d * d
            });
            (m, v)
        }
    }
}
