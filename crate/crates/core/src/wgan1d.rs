//! Closed-form optimal parameters of the one-dimensional W2 generator
//! θ₁ + θ₂·h(Z), and the W1 stationarity residuals.

use crate::activation::{activation_moments, ActivationKind};
use crate::distributions::{Law1D, RankNode, RankQuadrature};
use crate::error::{Error, Result};
use crate::kde::{KdeModel, PlugIn};
use crate::quad::{expect_std_normal, GaussLegendre};
use crate::special::{norm_cdf, norm_sf, ppnd, ppnd_upper};
use core::f64::consts::PI;

const TIE_TOL: f64 = 1e-12;
const DUAL_TOL: f64 = 1e-6;

/// G(Z) = θ₁ + θ₂·h(Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator1D {
    pub theta1: f64,
    pub theta2: f64,
    pub activation: ActivationKind,
}

impl Generator1D {
    pub fn new(theta1: f64, theta2: f64, activation: ActivationKind) -> Self {
        Self {
            theta1,
            theta2,
            activation,
        }
    }

    /// Generator quantile at a coupling node: the monotone partner of x.
    pub fn coupled(&self, n: &RankNode) -> f64 {
        let z = if self.theta2 >= 0.0 { n.z } else { -n.z };
        self.theta1 + self.theta2 * self.activation.apply(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    NonNegativeTheta2,
    NonPositiveTheta2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub params: Generator1D,
    pub branch: Branch,
    /// Squared W2 distance at the optimum.
    pub objective_value: f64,
    /// The covariance statistic deciding the branch.
    pub condition_value: f64,
}

/// E_μ[f(X)] as ∫₀¹ f(F⁻¹(u)) du.
pub fn expect<L: Law1D + ?Sized>(mu: &L, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    mu.rank_quadrature()?.integrate(|n| f(n.x))
}

struct Centered {
    q: RankQuadrature,
    mean: f64,
    var: f64,
}

fn centered<L: Law1D + ?Sized>(mu: &L) -> Result<Centered> {
    let q = mu.rank_quadrature()?;
    let mean = q.integrate(|n| n.x)?;
    let var = q.integrate(|n| (n.x - mean) * (n.x - mean))?;
    let scale = mean.abs().max(1.0);
    if !(var > 1e-24 * scale * scale) {
        return Err(Error::Precondition("degenerate data law (zero variance)"));
    }
    Ok(Centered { q, mean, var })
}

fn continuous_only<L: Law1D + ?Sized>(mu: &L) -> Result<()> {
    if mu.has_atoms() {
        return Err(Error::Precondition("data law must be continuous"));
    }
    Ok(())
}

/// Optimal (θ₁, θ₂) for a generator whose activation law is continuous and
/// strictly increasing (linear, sigmoid).
pub fn solve_w2_general<L: Law1D + ?Sized>(
    mu: &L,
    activation: ActivationKind,
) -> Result<SolveReport> {
    if !activation.is_strictly_increasing() {
        return Err(Error::Precondition(
            "activation law has an atom; use solve_w2_relu",
        ));
    }
    continuous_only(mu)?;
    let c = centered(mu)?;
    let (mh, vh) = activation_moments(activation);
    let cov_up = c.q.integrate(|n| (n.x - c.mean) * activation.apply(n.z))?;
    let cov_down = c.q.integrate(|n| (n.x - c.mean) * activation.apply(-n.z))?;
    let condition = cov_up + cov_down;
    let first = condition >= -TIE_TOL * libm::sqrt(c.var * vh);
    let (cov, branch) = if first {
        (cov_up, Branch::NonNegativeTheta2)
    } else {
        (cov_down, Branch::NonPositiveTheta2)
    };
    let theta2 = cov / vh;
    Ok(SolveReport {
        params: Generator1D::new(c.mean - theta2 * mh, theta2, activation),
        branch,
        objective_value: (c.var - cov * cov / vh).max(0.0),
        condition_value: condition,
    })
}

/// Optimal (θ₁, θ₂) for the ReLU generator.
pub fn solve_w2_relu<L: Law1D + ?Sized>(mu: &L) -> Result<SolveReport> {
    continuous_only(mu)?;
    let c = centered(mu)?;
    let k = 2.0 * PI / (PI - 1.0);
    let cov_up = c.q.integrate(|n| (n.x - c.mean) * n.z.max(0.0))?;
    let cov_down = c.q.integrate(|n| (n.x - c.mean) * n.z.min(0.0))?;
    let condition = cov_up - cov_down;
    let vh = activation_moments(ActivationKind::Relu).1;
    let first = condition >= -TIE_TOL * libm::sqrt(c.var * vh);
    let sqrt_2pi = libm::sqrt(2.0 * PI);
    let (theta1, theta2, objective, branch) = if first {
        let t2 = k * cov_up;
        (
            c.mean - t2 / sqrt_2pi,
            t2,
            c.var - k * cov_up * cov_up,
            Branch::NonNegativeTheta2,
        )
    } else {
        let t2 = -k * cov_down;
        (
            c.mean + sqrt_2pi / (PI - 1.0) * cov_down,
            t2,
            c.var - k * cov_down * cov_down,
            Branch::NonPositiveTheta2,
        )
    };
    Ok(SolveReport {
        params: Generator1D::new(theta1, theta2, ActivationKind::Relu),
        branch,
        objective_value: objective.max(0.0),
        condition_value: condition,
    })
}

/// Dispatches to the solver matching the activation.
pub fn solve_w2<L: Law1D + ?Sized>(mu: &L, activation: ActivationKind) -> Result<SolveReport> {
    match activation {
        ActivationKind::Relu => solve_w2_relu(mu),
        ActivationKind::Linear => solve_w2_linear(mu),
        ActivationKind::Sigmoid => solve_w2_general(mu, activation),
    }
}

/// θ₂ = E_g[F⁻¹(Φ(Z))·Z], integrated over the Gaussian input.
pub fn theta2_linear_dual<L: Law1D + ?Sized>(mu: &L) -> Result<f64> {
    let mut failure = None;
    let v = expect_std_normal(|z| {
        let x = if z <= 0.0 {
            mu.quantile(norm_cdf(z))
        } else {
            mu.quantile_upper(norm_sf(z))
        };
        match x {
            Ok(x) => x * z,
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Linear generator: θ₁ = E X and θ₂ = E[X·Φ⁻¹(F(X))], cross-checked against
/// the dual Gaussian-side formula.
pub fn solve_w2_linear<L: Law1D + ?Sized>(mu: &L) -> Result<SolveReport> {
    continuous_only(mu)?;
    let c = centered(mu)?;
    let theta2 = c.q.integrate(|n| (n.x - c.mean) * n.z)?;
    let dual = theta2_linear_dual(mu)?;
    if !((theta2 - dual).abs() <= DUAL_TOL * theta2.abs().max(1.0)) {
        return Err(Error::Numeric("primal and dual linear formulas disagree"));
    }
    Ok(SolveReport {
        params: Generator1D::new(c.mean, theta2, ActivationKind::Linear),
        branch: Branch::NonNegativeTheta2,
        objective_value: (c.var - theta2 * theta2).max(0.0),
        condition_value: 0.0,
    })
}

/// (1/M) Σ xᵢ·Φ⁻¹(F̂(xᵢ)) with the clamped KDE rank.
pub fn empirical_theta2_linear(samples: &[f64], kde: &KdeModel) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Precondition("need at least 2 samples"));
    }
    let s: f64 = samples.iter().map(|&x| x * kde.normal_score(x)).sum();
    Ok(s / samples.len() as f64)
}

/// Closed-form parameters from a sample: sample means with KDE ranks. The
/// linear θ₂ is (1/M) Σ xᵢ·Φ⁻¹(F̂(xᵢ)); no population cross-check applies, and
/// the reported value is measured on the sample.
pub fn solve_w2_plugin(
    samples: &[f64],
    kde: &KdeModel,
    activation: ActivationKind,
) -> Result<SolveReport> {
    let law = PlugIn::new(samples, kde)?;
    let q = law.rank_quadrature()?;
    if activation != ActivationKind::Linear {
        let mut rep = solve_w2(&law, activation)?;
        rep.objective_value = objective_w2_on(&q, &rep.params)?;
        return Ok(rep);
    }
    let mean = q.integrate(|n| n.x)?;
    let params = Generator1D::new(mean, empirical_theta2_linear(samples, kde)?, activation);
    Ok(SolveReport {
        params,
        branch: Branch::NonNegativeTheta2,
        objective_value: objective_w2_on(&q, &params)?,
        condition_value: 0.0,
    })
}

/// Squared W2 distance between μ and the law of the generator.
pub fn objective_w2<L: Law1D + ?Sized>(mu: &L, params: &Generator1D) -> Result<f64> {
    objective_w2_on(&mu.rank_quadrature()?, params)
}

/// [`objective_w2`] on prebuilt coupling nodes, for repeated evaluation.
pub fn objective_w2_on(q: &RankQuadrature, params: &Generator1D) -> Result<f64> {
    q.integrate(|n| {
        let d = n.x - params.coupled(n);
        d * d
    })
}

pub(crate) fn sign_with_deadband(d: f64, scale: f64) -> f64 {
    if d.abs() <= 1e-12 * scale {
        0.0
    } else if d > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// W1 stationarity residuals (E[sign(t(X) − X)], E[sign(t(X) − X)·h(Φ⁻¹(F(X)))])
/// with t the coupled generator map; θ₂ must be positive.
pub fn w1_residuals<L: Law1D + ?Sized>(mu: &L, params: &Generator1D) -> Result<(f64, f64)> {
    if !(params.theta2 > 0.0) {
        return Err(Error::Precondition("W1 residuals need theta2 > 0"));
    }
    let q = mu.rank_quadrature()?;
    if q.is_exact() {
        let mut r = (0.0, 0.0);
        for n in q.nodes() {
            let hz = params.activation.apply(n.z);
            let t = params.theta1 + params.theta2 * hz;
            let s = sign_with_deadband(
                t - n.x,
                1.0 + n.x.abs() + params.theta1.abs() + (params.theta2 * hz).abs(),
            );
            r.0 += n.w * s;
            r.1 += n.w * s * hz;
        }
        return Ok(r);
    }
    SignIntegrator::new(mu, params).run()
}

struct SignIntegrator<'a, L: ?Sized> {
    mu: &'a L,
    p: &'a Generator1D,
    gl: GaussLegendre,
}

const SIGN_DEPTH: i32 = 48;
const SIGN_SPLITS: usize = 32;

impl<'a, L: Law1D + ?Sized> SignIntegrator<'a, L> {
    fn new(mu: &'a L, p: &'a Generator1D) -> Self {
        Self {
            mu,
            p,
            gl: GaussLegendre::new(12),
        }
    }

    /// (x, z) at tail parameter t of the lower (u = t) or upper (v = t) half.
    fn point(&self, t: f64, upper: bool) -> Result<(f64, f64)> {
        if upper {
            Ok((self.mu.quantile_upper(t)?, ppnd_upper(t)))
        } else {
            Ok((self.mu.quantile(t)?, ppnd(t)))
        }
    }

    fn class(&self, t: f64, upper: bool) -> Result<f64> {
        let (x, z) = self.point(t, upper)?;
        let hz = self.p.activation.apply(z);
        let g = self.p.theta1 + self.p.theta2 * hz;
        Ok(sign_with_deadband(
            g - x,
            1.0 + x.abs() + self.p.theta1.abs() + (self.p.theta2 * hz).abs(),
        ))
    }

    fn run(&self) -> Result<(f64, f64)> {
        let mut r = (0.0, 0.0);
        for upper in [false, true] {
            for k in 1..=SIGN_DEPTH {
                let hi = libm::ldexp(1.0, -k);
                let lo = 0.5 * hi;
                let step = (hi - lo) / SIGN_SPLITS as f64;
                let mut a = lo;
                let mut ca = self.class(a, upper)?;
                for j in 1..=SIGN_SPLITS {
                    let b = if j == SIGN_SPLITS {
                        hi
                    } else {
                        lo + step * j as f64
                    };
                    let cb = self.class(b, upper)?;
                    self.piece(a, b, ca, cb, upper, 60, &mut r)?;
                    a = b;
                    ca = cb;
                }
            }
        }
        Ok(r)
    }

    #[allow(clippy::too_many_arguments)]
    fn piece(
        &self,
        a: f64,
        b: f64,
        ca: f64,
        cb: f64,
        upper: bool,
        depth: u32,
        r: &mut (f64, f64),
    ) -> Result<()> {
        let m = 0.5 * (a + b);
        let cm = self.class(m, upper)?;
        if ca == cb && cb == cm {
            if ca != 0.0 {
                let act = self.p.activation;
                let hz = self.gl.integrate(a, b, |t| {
                    act.apply(if upper { ppnd_upper(t) } else { ppnd(t) })
                });
                r.0 += ca * (b - a);
                r.1 += ca * hz;
            }
            return Ok(());
        }
        if depth == 0 || !(m > a && m < b) {
            for (t, w) in self.gl.mapped(a, b) {
                let s = self.class(t, upper)?;
                let z = if upper { ppnd_upper(t) } else { ppnd(t) };
                r.0 += w * s;
                r.1 += w * s * self.p.activation.apply(z);
            }
            return Ok(());
        }
        self.piece(a, m, ca, cm, upper, depth - 1, r)?;
        self.piece(m, b, cm, cb, upper, depth - 1, r)
    }
}
