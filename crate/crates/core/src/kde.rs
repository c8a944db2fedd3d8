//! Epanechnikov kernel density estimates with closed-form CDF and inverse CDF.

use crate::distributions::{Law1D, RankNode, RankQuadrature};
use crate::error::{Error, Result};
use crate::special::{ppnd, ppnd_upper};
use alloc::vec::Vec;

const SILVERMAN_FACTOR: f64 = 2.345;
/// (4√π·ψ(K)/μ₂(K)²)^{1/3} for the Epanechnikov kernel, ψ = 9/35, μ₂ = 1/5.
const CDF_FACTOR: f64 = 3.572_041_263_645_186;
const DIRECT_SUM_LIMIT: usize = 64;

/// Bandwidth selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// 2.345·σ̂·M^{−1/5}, the density-optimal normal-reference rule.
    Silverman,
    /// 3.572·σ̂·M^{−1/3}, the normal-reference rule for the integrated CDF error.
    CdfPlugIn,
    Fixed(f64),
}

/// Epanechnikov CDF on [−1, 1].
fn kernel_cdf(u: f64) -> f64 {
    if u <= -1.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        0.25 * (2.0 + 3.0 * u - u * u * u)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// A fitted kernel density estimate.
#[derive(Debug, Clone)]
pub struct KdeModel {
    samples: Vec<f64>,
    h: f64,
    center: f64,
    // prefix[k][i] = Σ_{j<i} y_j^k with y = (x − center)/h.
    prefix: [Vec<f64>; 4],
    disjoint: bool,
}

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    libm::sqrt(x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0))
}

impl KdeModel {
    /// Fits with the default Silverman-type bandwidth when `bandwidth` is None.
    pub fn fit(samples: &[f64], bandwidth: Option<f64>) -> Result<Self> {
        match bandwidth {
            Some(h) => Self::fit_with(samples, Bandwidth::Fixed(h)),
            None => Self::fit_with(samples, Bandwidth::Silverman),
        }
    }

    pub fn fit_with(samples: &[f64], rule: Bandwidth) -> Result<Self> {
        let fixed = matches!(rule, Bandwidth::Fixed(_));
        if samples.is_empty() || (samples.len() < 2 && !fixed) {
            return Err(Error::Precondition("kde needs at least 2 samples"));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("kde samples must be finite"));
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let sd = if s.len() > 1 { sample_sd(&s) } else { 0.0 };
        let m = s.len() as f64;
        let h = match rule {
            Bandwidth::Fixed(h) => {
                if !(h.is_finite() && h > 0.0) {
                    return Err(Error::Domain("bandwidth must be positive"));
                }
                h
            }
            _ if !(sd > 0.0) => {
                return Err(Error::Precondition("kde needs nonzero sample variance"))
            }
            Bandwidth::Silverman => SILVERMAN_FACTOR * sd * libm::pow(m, -0.2),
            Bandwidth::CdfPlugIn => CDF_FACTOR * sd * libm::cbrt(1.0 / m),
        };
        let center = 0.5 * (s[0] + s[s.len() - 1]);
        let mut prefix: [Vec<f64>; 4] = core::array::from_fn(|_| Vec::with_capacity(s.len() + 1));
        let mut acc = [Compensated::default(); 4];
        for p in prefix.iter_mut() {
            p.push(0.0);
        }
        for &x in &s {
            let y = (x - center) / h;
            let mut yk = 1.0;
            for k in 0..4 {
                acc[k].add(yk);
                prefix[k].push(acc[k].value());
                yk *= y;
            }
        }
        let disjoint = s.windows(2).all(|w| w[1] - w[0] >= 2.0 * h);
        Ok(Self {
            samples: s,
            h,
            center,
            prefix,
            disjoint,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Whether every pair of kernel windows is disjoint.
    pub fn windows_disjoint(&self) -> bool {
        self.disjoint
    }

    /// Indices [lo, hi) of the samples whose window contains x in its interior.
    fn active(&self, x: f64) -> (usize, usize) {
        let lo = self.samples.partition_point(|&s| s <= x - self.h);
        let hi = self.samples.partition_point(|&s| s < x + self.h);
        (lo, hi.max(lo))
    }

    /// F̂(x) = (1/M) Σ C((x − xᵢ)/h).
    pub fn cdf_hat(&self, x: f64) -> f64 {
        let m = self.samples.len();
        if x <= self.samples[0] - self.h {
            return 0.0;
        }
        if x >= self.samples[m - 1] + self.h {
            return 1.0;
        }
        let (lo, hi) = self.active(x);
        let n = hi - lo;
        let partial = if n <= DIRECT_SUM_LIMIT {
            self.samples[lo..hi]
                .iter()
                .map(|&s| kernel_cdf((x - s) / self.h))
                .sum::<f64>()
        } else {
            let t = (x - self.center) / self.h;
            let s = |k: usize| self.prefix[k][hi] - self.prefix[k][lo];
            let nf = n as f64;
            let (s1, s2, s3) = (s(1), s(2), s(3));
            let sum_u = nf * t - s1;
            let sum_u3 = nf * t * t * t - 3.0 * t * t * s1 + 3.0 * t * s2 - s3;
            0.25 * (2.0 * nf + 3.0 * sum_u - sum_u3)
        };
        ((lo as f64 + partial) / m as f64).clamp(0.0, 1.0)
    }

    /// f̂(x) = (1/(Mh)) Σ ¾(1 − u²).
    pub fn pdf_hat(&self, x: f64) -> f64 {
        let (lo, hi) = self.active(x);
        let sum: f64 = self.samples[lo..hi]
            .iter()
            .map(|&s| {
                let u = (x - s) / self.h;
                0.75 * (1.0 - u * u)
            })
            .sum();
        sum / (self.samples.len() as f64 * self.h)
    }

    /// F̂⁻¹(p). Closed form when windows are disjoint, bisection otherwise.
    pub fn quantile_hat(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain("kde quantile needs p in (0,1)"));
        }
        let m = self.samples.len();
        if self.disjoint {
            let mp = m as f64 * p;
            let l = (libm::floor(mp) as usize).min(m - 1);
            let q = (mp - l as f64).clamp(0.0, 1.0);
            let u = 2.0 * libm::sin(libm::asin(2.0 * q - 1.0) / 3.0);
            return Ok(u * self.h + self.samples[l]);
        }
        let mut lo = self.samples[0] - self.h;
        let mut hi = self.samples[m - 1] + self.h;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if self.cdf_hat(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * (1.0 + mid.abs()) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// F̂ clamped to [1/(M+1), M/(M+1)], safe to feed into Φ⁻¹.
    pub fn clamped_cdf(&self, x: f64) -> f64 {
        let m = self.samples.len() as f64;
        self.cdf_hat(x).clamp(1.0 / (m + 1.0), m / (m + 1.0))
    }

    /// Φ⁻¹ of the clamped F̂(x), evaluated in the smaller tail.
    pub fn normal_score(&self, x: f64) -> f64 {
        let u = self.clamped_cdf(x);
        if u <= 0.5 {
            ppnd(u)
        } else {
            ppnd_upper(1.0 - u)
        }
    }
}

impl Law1D for KdeModel {
    fn cdf(&self, x: f64) -> f64 {
        self.cdf_hat(x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        self.quantile_hat(p)
    }
}

/// Plug-in law of a sample: expectations are sample means with the rank of
/// each point taken from a KDE, as in the empirical closed-form estimators.
#[derive(Debug, Clone)]
pub struct PlugIn<'a> {
    samples: &'a [f64],
    kde: &'a KdeModel,
}

impl<'a> PlugIn<'a> {
    pub fn new(samples: &'a [f64], kde: &'a KdeModel) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Precondition(
                "plug-in estimates need at least 2 samples",
            ));
        }
        Ok(Self { samples, kde })
    }

    pub fn kde(&self) -> &KdeModel {
        self.kde
    }
}

impl Law1D for PlugIn<'_> {
    fn cdf(&self, x: f64) -> f64 {
        self.kde.cdf_hat(x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        self.kde.quantile_hat(p)
    }

    fn rank_quadrature(&self) -> Result<RankQuadrature> {
        let w = 1.0 / self.samples.len() as f64;
        let nodes = self
            .samples
            .iter()
            .map(|&x| {
                let u = self.kde.clamped_cdf(x);
                RankNode {
                    u,
                    v: 1.0 - u,
                    x,
                    z: self.kde.normal_score(x),
                    w,
                }
            })
            .collect();
        Ok(RankQuadrature::exact(nodes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ContinuousDistribution1D;
    use crate::quad::{integrate_adaptive, Tolerance};
    use crate::special::norm_cdf;

    #[test]
    fn single_kernel_values() {
        let k = KdeModel::fit(&[0.0, 10.0], Some(1.0)).unwrap();
        assert_eq!(k.len(), 2);
        assert!(k.windows_disjoint());
        // Two disjoint windows: mass ½ each.
        assert_eq!(k.cdf_hat(0.0), 0.25);
        assert_eq!(k.cdf_hat(0.5), 0.5 * 0.84375);
        assert_eq!(k.pdf_hat(0.0), 0.375);
        assert_eq!(k.cdf_hat(-1.0), 0.0);
        assert_eq!(k.cdf_hat(11.0), 1.0);
        assert!((k.quantile_hat(0.5 * 0.84375).unwrap() - 0.5).abs() < 1e-12);
        assert!((k.quantile_hat(0.75).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn one_kernel_with_explicit_bandwidth() {
        let k = KdeModel::fit(&[0.0], Some(1.0)).unwrap();
        assert_eq!(k.cdf_hat(0.0), 0.5);
        assert_eq!(k.cdf_hat(0.5), 0.84375);
        assert_eq!(k.pdf_hat(0.0), 0.75);
        assert_eq!(k.pdf_hat(1.5), 0.0);
        assert_eq!(k.quantile_hat(0.5).unwrap(), 0.0);
        assert!((k.quantile_hat(0.84375).unwrap() - 0.5).abs() < 1e-9);
        assert!(KdeModel::fit(&[0.0], None).is_err());
    }

    #[test]
    fn default_bandwidth_rule() {
        let x = ContinuousDistribution1D::gaussian(0.0, 1.0)
            .unwrap()
            .sample_n(100_000, 1);
        let k = KdeModel::fit(&x, None).unwrap();
        assert!((k.bandwidth() / 0.2345 - 1.0).abs() < 0.03);
        let c = KdeModel::fit_with(&x, Bandwidth::CdfPlugIn).unwrap();
        assert!((c.bandwidth() / (CDF_FACTOR * 0.021_544_346_900_318_84) - 1.0).abs() < 0.03);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(KdeModel::fit(&[1.0], None).is_err());
        assert!(KdeModel::fit(&[2.0, 2.0, 2.0], None).is_err());
        assert!(KdeModel::fit(&[0.0, 1.0], Some(0.0)).is_err());
    }

    #[test]
    fn prefix_path_matches_direct_sums() {
        let x = ContinuousDistribution1D::laplace(3.0, 2.0)
            .unwrap()
            .sample_n(5_000, 4);
        let k = KdeModel::fit(&x, Some(1.5)).unwrap();
        for i in 0..400 {
            let t = -15.0 + 0.0875 * i as f64;
            let direct: f64 = k
                .samples()
                .iter()
                .map(|&s| kernel_cdf((t - s) / 1.5))
                .sum::<f64>()
                / 5_000.0;
            assert!((k.cdf_hat(t) - direct).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn cdf_is_antiderivative_and_round_trips() {
        let x = ContinuousDistribution1D::gaussian(0.0, 1.0)
            .unwrap()
            .sample_n(300, 9);
        let k = KdeModel::fit(&x, None).unwrap();
        let lo = k.samples()[0] - k.bandwidth();
        let hi = k.samples()[299] + k.bandwidth();
        let tol = Tolerance {
            rel: 1e-12,
            abs: 1e-14,
            max_panels: 20_000,
        };
        let mass = integrate_adaptive(|t| k.pdf_hat(t), lo, hi, tol).unwrap();
        assert!((mass - 1.0).abs() < 1e-9);
        for (a, b) in [(-1.0, 0.5), (-0.2, 0.1), (0.3, 2.5)] {
            let q = integrate_adaptive(|t| k.pdf_hat(t), a, b, tol).unwrap();
            assert!((k.cdf_hat(b) - k.cdf_hat(a) - q).abs() < 1e-8);
        }
        for i in 1..100 {
            let p = i as f64 / 100.0;
            let q = k.quantile_hat(p).unwrap();
            assert!((k.cdf_hat(q) - p).abs() < 1e-9);
        }
    }

    #[test]
    fn converges_to_normal_cdf() {
        let x = ContinuousDistribution1D::gaussian(0.0, 1.0)
            .unwrap()
            .sample_n(50_000, 2);
        let k = KdeModel::fit(&x, None).unwrap();
        let sup = (0..=800)
            .map(|i| -4.0 + 0.01 * i as f64)
            .map(|t| (k.cdf_hat(t) - norm_cdf(t)).abs())
            .fold(0.0, f64::max);
        assert!(sup < 0.01, "sup={sup}");
    }

    #[test]
    fn clamping_keeps_scores_finite() {
        let k = KdeModel::fit(&[0.0, 1.0, 2.0], Some(0.1)).unwrap();
        assert_eq!(k.clamped_cdf(-5.0), 0.25);
        assert_eq!(k.clamped_cdf(5.0), 0.75);
        assert!(k.normal_score(-5.0).is_finite() && k.normal_score(5.0).is_finite());
    }
}
