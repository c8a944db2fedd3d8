//! SGD with momentum on the 1-D W1 objective, driven by the sign residuals
//! with a kernel-smoothed CDF.

use crate::activation::ActivationKind;
use crate::error::{Error, Result};
use crate::kde::{Bandwidth, KdeModel};
use crate::rng;
use crate::wgan1d::{sign_with_deadband, Generator1D};
use alloc::vec::Vec;

pub const MIN_SAMPLES: usize = 100;
pub const THETA2_FLOOR: f64 = 1e-6;
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub iterations: usize,
    pub seed: u64,
    /// (θ₁⁰, θ₂⁰) with θ₂⁰ > 0.
    pub init: (f64, f64),
    pub activation: ActivationKind,
    pub bandwidth: Bandwidth,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 256,
            iterations: 5000,
            seed: 0,
            init: (0.0, 1.0),
            activation: ActivationKind::Linear,
            bandwidth: Bandwidth::CdfPlugIn,
        }
    }
}

impl SgdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Domain("learning rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Domain("momentum must lie in [0, 1)"));
        }
        if self.batch_size == 0 {
            return Err(Error::Domain("batch size must be positive"));
        }
        if !(self.init.1 > 0.0 && self.init.0.is_finite() && self.init.1.is_finite()) {
            return Err(Error::Domain("initial theta2 must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub theta1: f64,
    pub theta2: f64,
    /// Euclidean norm of the full-sample residual pair.
    pub residual_norm: f64,
}

/// Iterates 0..=iterations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SgdTrace {
    pub points: Vec<TracePoint>,
}

struct Residuals<'a> {
    x: &'a [f64],
    hz: Vec<f64>,
}

impl Residuals<'_> {
    fn term(&self, i: usize, t1: f64, t2: f64) -> (f64, f64) {
        let (x, hz) = (self.x[i], self.hz[i]);
        let s = sign_with_deadband(t1 + t2 * hz - x, 1.0 + x.abs() + t1.abs() + (t2 * hz).abs());
        (s, s * hz)
    }

    fn full_norm(&self, t1: f64, t2: f64) -> f64 {
        let (mut a, mut b) = (0.0, 0.0);
        for i in 0..self.x.len() {
            let (r1, r2) = self.term(i, t1, t2);
            a += r1;
            b += r2;
        }
        let n = self.x.len() as f64;
        libm::hypot(a / n, b / n)
    }
}

/// Fits θ by momentum SGD: v ← βv + ĝ, θ ← θ − ηv, with θ₂ projected onto [10⁻⁶, ∞).
pub fn fit_w1(samples: &[f64], cfg: &SgdConfig) -> Result<(Generator1D, SgdTrace)> {
    cfg.validate()?;
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Precondition("SGD needs at least 100 samples"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("samples must be finite"));
    }
    let kde = KdeModel::fit_with(samples, cfg.bandwidth)?;
    let res = Residuals {
        x: samples,
        hz: samples
            .iter()
            .map(|&x| cfg.activation.apply(kde.normal_score(x)))
            .collect(),
    };
    let mut r = rng::stream(cfg.seed, 0);
    let (mut t1, mut t2) = cfg.init;
    let (mut v1, mut v2) = (0.0, 0.0);
    let mut points = Vec::with_capacity(cfg.iterations + 1);
    points.push(TracePoint {
        theta1: t1,
        theta2: t2,
        residual_norm: res.full_norm(t1, t2),
    });
    let inv_b = 1.0 / cfg.batch_size as f64;
    for _ in 0..cfg.iterations {
        let (mut g1, mut g2) = (0.0, 0.0);
        for _ in 0..cfg.batch_size {
            let (a, b) = res.term(rng::index_below(&mut r, samples.len()), t1, t2);
            g1 += a;
            g2 += b;
        }
        v1 = cfg.momentum * v1 + g1 * inv_b;
        v2 = cfg.momentum * v2 + g2 * inv_b;
        t1 -= cfg.learning_rate * v1;
        t2 = (t2 - cfg.learning_rate * v2).max(THETA2_FLOOR);
        if !(t1.abs() <= DIVERGENCE_LIMIT && t2 <= DIVERGENCE_LIMIT) {
            return Err(Error::NonConvergence("SGD diverged: |theta| exceeded 1e6"));
        }
        points.push(TracePoint {
            theta1: t1,
            theta2: t2,
            residual_norm: res.full_norm(t1, t2),
        });
    }
    Ok((
        Generator1D::new(t1, t2, cfg.activation),
        SgdTrace { points },
    ))
}
