//! One-dimensional laws, quantile-space quadrature, and synthetic data.

use crate::activation::{activation_moments, sigmoid, ActivationKind};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::rng::{self, Stream};
use crate::special::{norm_cdf, norm_sf, ppnd, ppnd_upper};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand_core::RngCore;
use rand_distr::{Distribution, StudentT};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// A point of the quantile coupling: rank u = F(x), its complement v = 1 − u,
/// the sample value x = F⁻¹(u) and the normal score z = Φ⁻¹(u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankNode {
    pub u: f64,
    pub v: f64,
    pub x: f64,
    pub z: f64,
    pub w: f64,
}

/// Node set for E[g(F(X), X)]. Continuous laws carry a coarse and a refined
/// rule whose disagreement flags non-convergence; discrete laws are exact sums.
#[derive(Debug, Clone)]
pub struct RankQuadrature {
    coarse: Vec<RankNode>,
    fine: Vec<RankNode>,
}

const PANEL_DEPTH: i32 = 48;
const PANEL_ORDER: usize = 12;
const REFINE_TOL: f64 = 1e-7;
const REFINE_FLOOR: f64 = 1e-13;

impl RankQuadrature {
    /// Graded dyadic partition of (0, ½] and [½, 1), mirrored through v = 1 − u.
    pub fn continuous<L: Law1D + ?Sized>(law: &L) -> Result<Self> {
        let gl = GaussLegendre::new(PANEL_ORDER);
        let mut coarse = Vec::with_capacity(2 * PANEL_DEPTH as usize * PANEL_ORDER);
        let mut fine = Vec::with_capacity(4 * PANEL_DEPTH as usize * PANEL_ORDER);
        for k in 1..=PANEL_DEPTH {
            let hi = libm::ldexp(1.0, -k);
            let lo = 0.5 * hi;
            let mid = 0.5 * (lo + hi);
            for (a, b, refined) in [(lo, hi, false), (lo, mid, true), (mid, hi, true)] {
                let out = if refined { &mut fine } else { &mut coarse };
                for (t, w) in gl.mapped(a, b) {
                    out.push(lower_node(law, t, w)?);
                    out.push(upper_node(law, t, w)?);
                }
            }
        }
        Ok(Self { coarse, fine })
    }

    /// Equal-weight nodes; no refinement check.
    pub fn exact(nodes: Vec<RankNode>) -> Self {
        Self {
            coarse: Vec::new(),
            fine: nodes,
        }
    }

    /// True for finite-support laws whose sums are exact.
    pub fn is_exact(&self) -> bool {
        self.coarse.is_empty()
    }

    pub fn nodes(&self) -> &[RankNode] {
        &self.fine
    }

    /// ∫ g over the coupling.
    pub fn integrate(&self, mut g: impl FnMut(&RankNode) -> f64) -> Result<f64> {
        let mut fine = 0.0;
        let mut mass = 0.0;
        for n in &self.fine {
            let v = g(n);
            fine += n.w * v;
            mass += n.w * v.abs();
        }
        if !fine.is_finite() {
            return Err(Error::Numeric("non-finite expectation"));
        }
        if !self.coarse.is_empty() {
            let coarse: f64 = self.coarse.iter().map(|n| n.w * g(n)).sum();
            if (fine - coarse).abs() > REFINE_TOL * mass + REFINE_FLOOR {
                return Err(Error::NonConvergence(
                    "quantile quadrature refinement stagnated",
                ));
            }
        }
        Ok(fine)
    }
}

fn lower_node<L: Law1D + ?Sized>(law: &L, u: f64, w: f64) -> Result<RankNode> {
    Ok(RankNode {
        u,
        v: 1.0 - u,
        x: law.quantile(u)?,
        z: ppnd(u),
        w,
    })
}

fn upper_node<L: Law1D + ?Sized>(law: &L, v: f64, w: f64) -> Result<RankNode> {
    Ok(RankNode {
        u: 1.0 - v,
        v,
        x: law.quantile_upper(v)?,
        z: ppnd_upper(v),
        w,
    })
}

/// Nodes of an equal-weight empirical law at midpoint ranks (i − ½)/n.
pub fn midpoint_nodes(sorted: &[f64]) -> Vec<RankNode> {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let u = (i as f64 + 0.5) / n;
            let v = (n - i as f64 - 0.5) / n;
            let z = if u <= 0.5 { ppnd(u) } else { ppnd_upper(v) };
            RankNode {
                u,
                v,
                x,
                z,
                w: 1.0 / n,
            }
        })
        .collect()
}

/// What the solvers need from a law on ℝ.
pub trait Law1D {
    fn cdf(&self, x: f64) -> f64;

    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    fn quantile(&self, p: f64) -> Result<f64>;

    /// F⁻¹(1 − v), accurate for small v.
    fn quantile_upper(&self, v: f64) -> Result<f64> {
        self.quantile(1.0 - v)
    }

    /// True when the law has atoms, which the closed forms exclude.
    fn has_atoms(&self) -> bool {
        false
    }

    fn rank_quadrature(&self) -> Result<RankQuadrature> {
        RankQuadrature::continuous(self)
    }
}

/// The data laws used throughout.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousDistribution1D {
    Gaussian {
        mean: f64,
        sd: f64,
    },
    Laplace {
        mean: f64,
        scale: f64,
    },
    /// Law of sigmoid(Z).
    LogitNormal,
    /// Law of max(Z, 0); has an atom of mass ½ at 0.
    RectifiedGaussian,
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Gumbel law of maxima.
    Gumbel {
        loc: f64,
        scale: f64,
    },
    /// Law of a·Y + b with Y from `base`.
    Affine {
        base: Box<ContinuousDistribution1D>,
        scale: f64,
        shift: f64,
    },
    /// Equal-weight atoms at sorted samples.
    Empirical(Vec<f64>),
}

fn positive(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain(what))
    }
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(what))
    }
}

impl ContinuousDistribution1D {
    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        Ok(Self::Gaussian {
            mean: finite(mean, "mean must be finite")?,
            sd: positive(sd, "sd must be positive")?,
        })
    }

    pub fn laplace(mean: f64, scale: f64) -> Result<Self> {
        Ok(Self::Laplace {
            mean: finite(mean, "mean must be finite")?,
            scale: positive(scale, "scale must be positive")?,
        })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain("uniform needs finite lo < hi"));
        }
        Ok(Self::Uniform { lo, hi })
    }

    pub fn gumbel(loc: f64, scale: f64) -> Result<Self> {
        Ok(Self::Gumbel {
            loc: finite(loc, "loc must be finite")?,
            scale: positive(scale, "scale must be positive")?,
        })
    }

    pub fn affine(base: Self, scale: f64, shift: f64) -> Result<Self> {
        if !(scale.is_finite() && scale != 0.0) {
            return Err(Error::Domain("affine scale must be finite and nonzero"));
        }
        Ok(Self::Affine {
            base: Box::new(base),
            scale,
            shift: finite(shift, "shift must be finite")?,
        })
    }

    /// Empirical law of the samples; they are copied and sorted.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("empirical law needs finite samples"));
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        Ok(Self::Empirical(s))
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Gaussian { mean, .. } | Self::Laplace { mean, .. } => *mean,
            Self::LogitNormal => 0.5,
            Self::RectifiedGaussian => activation_moments(ActivationKind::Relu).0,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Gumbel { loc, scale } => loc + EULER_GAMMA * scale,
            Self::Affine { base, scale, shift } => scale * base.mean() + shift,
            Self::Empirical(s) => s.iter().sum::<f64>() / s.len() as f64,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Gaussian { sd, .. } => sd * sd,
            Self::Laplace { scale, .. } => 2.0 * scale * scale,
            Self::LogitNormal => activation_moments(ActivationKind::Sigmoid).1,
            Self::RectifiedGaussian => activation_moments(ActivationKind::Relu).1,
            Self::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 12.0,
            Self::Gumbel { scale, .. } => PI * PI * scale * scale / 6.0,
            Self::Affine { base, scale, .. } => scale * scale * base.variance(),
            Self::Empirical(s) => {
                let m = self.mean();
                s.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / s.len() as f64
            }
        }
    }

    /// One draw.
    pub fn sample(&self, rng: &mut impl RngCore) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => mean + sd * rng::normal(rng),
            Self::LogitNormal => sigmoid(rng::normal(rng)),
            Self::RectifiedGaussian => rng::normal(rng).max(0.0),
            Self::Affine { base, scale, shift } => scale * base.sample(rng) + shift,
            Self::Empirical(s) => s[rng::index_below(rng, s.len())],
            _ => {
                let u = rng::uniform_open(rng);
                self.quantile(u).expect("u is in (0,1)")
            }
        }
    }

    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut r = rng::stream(seed, 0);
        (0..n).map(|_| self.sample(&mut r)).collect()
    }
}

impl Law1D for ContinuousDistribution1D {
    fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => norm_cdf((x - mean) / sd),
            Self::Laplace { mean, scale } => {
                let t = (x - mean) / scale;
                if t < 0.0 {
                    0.5 * libm::exp(t)
                } else {
                    1.0 - 0.5 * libm::exp(-t)
                }
            }
            Self::LogitNormal => crate::activation::activation_cdf(ActivationKind::Sigmoid, x),
            Self::RectifiedGaussian => crate::activation::activation_cdf(ActivationKind::Relu, x),
            Self::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Self::Gumbel { loc, scale } => libm::exp(-libm::exp(-(x - loc) / scale)),
            Self::Affine { base, scale, shift } => {
                let y = (x - shift) / scale;
                if *scale > 0.0 {
                    base.cdf(y)
                } else {
                    base.sf(y)
                }
            }
            Self::Empirical(s) => s.partition_point(|&v| v <= x) as f64 / s.len() as f64,
        }
    }

    fn sf(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { mean, sd } => norm_sf((x - mean) / sd),
            Self::Laplace { mean, scale } => {
                let t = (x - mean) / scale;
                if t > 0.0 {
                    0.5 * libm::exp(-t)
                } else {
                    1.0 - 0.5 * libm::exp(t)
                }
            }
            Self::LogitNormal => {
                if x <= 0.0 {
                    1.0
                } else if x >= 1.0 {
                    0.0
                } else {
                    let v = x.clamp(1e-15, 1.0 - 1e-15);
                    norm_sf(libm::log(v / (1.0 - v)))
                }
            }
            Self::RectifiedGaussian => {
                if x < 0.0 {
                    1.0
                } else {
                    norm_sf(x)
                }
            }
            Self::Gumbel { loc, scale } => -libm::expm1(-libm::exp(-(x - loc) / scale)),
            Self::Affine { base, scale, shift } => {
                let y = (x - shift) / scale;
                if *scale > 0.0 {
                    base.sf(y)
                } else {
                    base.cdf(y)
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain("quantile needs p in (0,1)"));
        }
        Ok(match self {
            Self::Gaussian { mean, sd } => mean + sd * ppnd(p),
            Self::Laplace { mean, scale } => {
                if p < 0.5 {
                    mean + scale * libm::log(2.0 * p)
                } else {
                    mean - scale * libm::log(2.0 * (1.0 - p))
                }
            }
            Self::LogitNormal => sigmoid(ppnd(p)),
            Self::RectifiedGaussian => ppnd(p).max(0.0),
            Self::Uniform { lo, hi } => lo + (hi - lo) * p,
            Self::Gumbel { loc, scale } => loc - scale * libm::log(-libm::log(p)),
            Self::Affine { base, scale, shift } => {
                if *scale > 0.0 {
                    shift + scale * base.quantile(p)?
                } else {
                    shift + scale * base.quantile_upper(p)?
                }
            }
            Self::Empirical(s) => empirical_quantile(s, p),
        })
    }

    fn quantile_upper(&self, v: f64) -> Result<f64> {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain("quantile needs p in (0,1)"));
        }
        Ok(match self {
            Self::Gaussian { mean, sd } => mean + sd * ppnd_upper(v),
            Self::Laplace { mean, scale } => {
                if v <= 0.5 {
                    mean - scale * libm::log(2.0 * v)
                } else {
                    mean + scale * libm::log(2.0 * (1.0 - v))
                }
            }
            Self::LogitNormal => sigmoid(ppnd_upper(v)),
            Self::RectifiedGaussian => ppnd_upper(v).max(0.0),
            Self::Uniform { lo, hi } => hi - (hi - lo) * v,
            Self::Gumbel { loc, scale } => loc - scale * libm::log(-libm::log1p(-v)),
            Self::Affine { base, scale, shift } => {
                if *scale > 0.0 {
                    shift + scale * base.quantile_upper(v)?
                } else {
                    shift + scale * base.quantile(v)?
                }
            }
            Self::Empirical(s) => empirical_quantile(s, 1.0 - v),
        })
    }

    fn has_atoms(&self) -> bool {
        match self {
            Self::RectifiedGaussian | Self::Empirical(_) => true,
            Self::Affine { base, .. } => base.has_atoms(),
            _ => false,
        }
    }

    fn rank_quadrature(&self) -> Result<RankQuadrature> {
        match self {
            Self::Empirical(s) => Ok(RankQuadrature::exact(midpoint_nodes(s))),
            _ => RankQuadrature::continuous(self),
        }
    }
}

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let k = libm::ceil(p * n as f64) as usize;
    sorted[k.clamp(1, n) - 1]
}

/// Noise law of the AR(1) generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArNoise {
    /// Student-t with the given degrees of freedom (> 2), rescaled to unit variance.
    StudentT { dof: f64 },
    /// Standard normal.
    Gaussian,
}

/// X_j = a·X_{j−1} + η_j across the coordinates of each row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Spec {
    pub coefficient: f64,
    pub noise: ArNoise,
}

impl Default for Ar1Spec {
    fn default() -> Self {
        Self {
            coefficient: 0.5,
            noise: ArNoise::StudentT { dof: 5.0 },
        }
    }
}

impl Ar1Spec {
    pub fn validate(&self) -> Result<()> {
        if !(self.coefficient.abs() < 1.0) {
            return Err(Error::Precondition("AR coefficient must satisfy |a| < 1"));
        }
        if let ArNoise::StudentT { dof } = self.noise {
            if !(dof > 2.0) {
                return Err(Error::Precondition(
                    "unit-variance Student-t noise needs dof > 2",
                ));
            }
        }
        Ok(())
    }

    /// Stationary per-coordinate variance 1/(1 − a²).
    pub fn stationary_variance(&self) -> f64 {
        1.0 / (1.0 - self.coefficient * self.coefficient)
    }
}

const AR_BURN_IN: usize = 64;

/// Law of the rows of a synthetic data matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Iid(ContinuousDistribution1D),
    Ar1(Ar1Spec),
}

/// Where a sample matrix came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Synthetic(String),
    File(String),
    InMemory,
}

/// Row-major M×d data.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    pub provenance: Provenance,
}

impl SampleMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Precondition(
                "sample matrix needs at least one row and column",
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("sample matrix entries must be finite"));
        }
        Ok(Self {
            rows,
            cols,
            data,
            provenance,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols + j])
            .collect()
    }

    /// Projections ⟨ω, xᵢ⟩ for every row.
    pub fn project(&self, omega: &[f64]) -> Vec<f64> {
        assert_eq!(omega.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|r| r.iter().zip(omega).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Draws an M×d matrix. Row i uses stream i under `seed`.
pub fn sample_matrix(spec: &DataSpec, d: usize, m: usize, seed: u64) -> Result<SampleMatrix> {
    if d == 0 || m == 0 {
        return Err(Error::Precondition("need d >= 1 and M >= 1"));
    }
    let mut data = Vec::with_capacity(d * m);
    match spec {
        DataSpec::Iid(law) => {
            for i in 0..m {
                let mut r = rng::stream(seed, i as u64);
                for _ in 0..d {
                    data.push(law.sample(&mut r));
                }
            }
        }
        DataSpec::Ar1(ar) => {
            ar.validate()?;
            let student = match ar.noise {
                ArNoise::StudentT { dof } => Some((
                    StudentT::new(dof).map_err(|_| Error::Domain("bad dof"))?,
                    libm::sqrt((dof - 2.0) / dof),
                )),
                ArNoise::Gaussian => None,
            };
            let noise = |r: &mut Stream| match &student {
                Some((t, s)) => s * t.sample(r),
                None => rng::normal(r),
            };
            let a = ar.coefficient;
            for i in 0..m {
                let mut r = rng::stream(seed, i as u64);
                let mut x = libm::sqrt(ar.stationary_variance()) * rng::normal(&mut r);
                for _ in 0..AR_BURN_IN {
                    x = a * x + noise(&mut r);
                }
                for _ in 0..d {
                    x = a * x + noise(&mut r);
                    data.push(x);
                }
            }
        }
    }
    SampleMatrix::new(
        m,
        d,
        data,
        Provenance::Synthetic(format!("{spec:?} d={d} M={m} seed={seed}")),
    )
}

/// Uniform direction on the unit sphere in ℝ^d (normalized Gaussian).
pub fn sample_sphere_direction(d: usize, rng: &mut impl RngCore) -> Vec<f64> {
    assert!(d >= 1);
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng::normal(rng)).collect();
        let n = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn laws() -> Vec<ContinuousDistribution1D> {
        vec![
            ContinuousDistribution1D::gaussian(0.3, 2.0).unwrap(),
            ContinuousDistribution1D::laplace(-1.0, 0.7).unwrap(),
            ContinuousDistribution1D::LogitNormal,
            ContinuousDistribution1D::uniform(-1.0, 3.0).unwrap(),
            ContinuousDistribution1D::gumbel(0.5, 1.5).unwrap(),
            ContinuousDistribution1D::affine(
                ContinuousDistribution1D::gumbel(0.0, 1.0).unwrap(),
                -2.0,
                1.0,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn quantile_cdf_round_trip() {
        for law in laws() {
            for i in 1..1000 {
                let p = i as f64 / 1000.0;
                let x = law.quantile(p).unwrap();
                let x2 = law.quantile(law.cdf(x)).unwrap();
                assert!((x - x2).abs() < 1e-9 * (1.0 + x.abs()), "{law:?} p={p}");
                let xu = law.quantile_upper(1.0 - p).unwrap();
                assert!(
                    (x - xu).abs() < 1e-9 * (1.0 + x.abs()),
                    "{law:?} upper p={p}"
                );
                assert!((law.cdf(x) + law.sf(x) - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cdf_monotone_in_unit_interval() {
        for law in laws() {
            let mut prev = 0.0;
            for i in 0..2001 {
                let x = -10.0 + 0.01 * i as f64;
                let c = law.cdf(x);
                assert!((0.0..=1.0).contains(&c) && c >= prev);
                prev = c;
            }
        }
    }

    #[test]
    fn quadrature_moments_match_closed_forms() {
        for law in laws() {
            let q = law.rank_quadrature().unwrap();
            let m = q.integrate(|n| n.x).unwrap();
            let v = q.integrate(|n| (n.x - m) * (n.x - m)).unwrap();
            assert!((m - law.mean()).abs() < 1e-9 * (1.0 + m.abs()), "{law:?}");
            assert!((v / law.variance() - 1.0).abs() < 1e-8, "{law:?}");
            let z2 = q.integrate(|n| n.z * n.z).unwrap();
            assert!((z2 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn empirical_law_behaves() {
        let e = ContinuousDistribution1D::empirical(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(e.cdf(2.0), 2.0 / 3.0);
        assert_eq!(e.quantile(0.5).unwrap(), 2.0);
        assert_eq!(e.mean(), 2.0);
        assert!(e.has_atoms());
        let q = e.rank_quadrature().unwrap();
        assert_eq!(q.nodes().len(), 3);
        assert!((q.integrate(|n| n.x).unwrap() - 2.0).abs() < 1e-15);
        assert!((q.nodes()[1].z).abs() < 1e-15);
    }

    #[test]
    fn sample_matrix_examples() {
        let lap = ContinuousDistribution1D::laplace(0.0, core::f64::consts::FRAC_1_SQRT_2).unwrap();
        let x = sample_matrix(&DataSpec::Iid(lap.clone()), 5, 100_000, 11).unwrap();
        for j in 0..5 {
            let c = x.column(j);
            let m = c.iter().sum::<f64>() / c.len() as f64;
            let v = c.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (c.len() - 1) as f64;
            assert!((v - 1.0).abs() < 0.03);
        }
        let again = sample_matrix(&DataSpec::Iid(lap), 5, 100_000, 11).unwrap();
        assert_eq!(x.data(), again.data());

        let ar = Ar1Spec {
            coefficient: 0.5,
            noise: ArNoise::Gaussian,
        };
        let y = sample_matrix(&DataSpec::Ar1(ar), 1000, 10_000, 5).unwrap();
        let var: f64 = y.data().iter().map(|a| a * a).sum::<f64>() / y.data().len() as f64;
        assert!((var / (4.0 / 3.0) - 1.0).abs() < 0.05);
        assert!(sample_matrix(
            &DataSpec::Ar1(Ar1Spec {
                coefficient: 1.0,
                ..ar
            }),
            2,
            2,
            0
        )
        .is_err());
    }

    #[test]
    fn sphere_directions() {
        let mut r = rng::stream(3, 0);
        let w = sample_sphere_direction(1, &mut r);
        assert!(w[0] == 1.0 || w[0] == -1.0);
        let mut mean = [0.0; 3];
        for _ in 0..100_000 {
            let w = sample_sphere_direction(3, &mut r);
            let n: f64 = w.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
            for k in 0..3 {
                mean[k] += w[k] / 100_000.0;
            }
        }
        assert!(mean.iter().all(|m| m.abs() < 0.02));
    }
}
