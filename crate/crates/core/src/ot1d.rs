//! One-dimensional optimal transport: quantile maps and W_q distances.

use crate::distributions::Law1D;
use crate::error::{Error, Result};
use crate::sliced::LinearGenerator;
use crate::special::{ppnd, ppnd_upper};
use crate::wgan1d::Generator1D;
use alloc::vec::Vec;

/// Order of the Wasserstein distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    One,
    Two,
}

impl Order {
    pub fn from_int(q: u32) -> Result<Self> {
        match q {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::Domain("q must be 1 or 2")),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Two => 2.0,
        }
    }

    /// |d|^q.
    pub fn power(self, d: f64) -> f64 {
        match self {
            Self::One => d.abs(),
            Self::Two => d * d,
        }
    }

    /// m^{1/q}.
    pub fn root(self, m: f64) -> f64 {
        match self {
            Self::One => m,
            Self::Two => libm::sqrt(m),
        }
    }
}

/// Monotone map x ↦ F_ν⁻¹(F_μ(x)) pushing μ onto the generator law.
#[derive(Debug, Clone, Copy)]
pub struct TransportMap1D<'a, L: ?Sized> {
    source: &'a L,
    params: Generator1D,
}

pub fn transport_map<L: Law1D + ?Sized>(mu: &L, params: Generator1D) -> TransportMap1D<'_, L> {
    TransportMap1D { source: mu, params }
}

impl<L: Law1D + ?Sized> TransportMap1D<'_, L> {
    pub fn params(&self) -> &Generator1D {
        &self.params
    }

    /// t(x) = θ₁ + θ₂·Ψ⁻¹(F(x)) for θ₂ ≥ 0, with 1 − F for θ₂ < 0.
    pub fn eval(&self, x: f64) -> f64 {
        let u = self.source.cdf(x);
        let z = if u <= 0.5 {
            ppnd(u.max(f64::MIN_POSITIVE))
        } else {
            ppnd_upper(self.source.sf(x).max(f64::MIN_POSITIVE))
        };
        let z = if self.params.theta2 >= 0.0 { z } else { -z };
        self.params.theta1 + self.params.theta2 * self.params.activation.apply(z)
    }
}

/// Error-free a + b = s + e.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Error-free a·b = p + e.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

/// Correctly rounded running sum (Shewchuk's partials).
#[derive(Debug, Default, Clone)]
struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                core::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    fn value(&self) -> f64 {
        let p = &self.partials;
        let Some(mut n) = p.len().checked_sub(1) else {
            return 0.0;
        };
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            n -= 1;
            let x = hi;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Round-half-even correction, as in CPython's fsum.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }

    /// Adds |a − b|^q exactly.
    fn add_cost(&mut self, a: f64, b: f64, q: Order) {
        let (d, e) = two_sum(a, -b);
        let (d, e) = if d < 0.0 || (d == 0.0 && e < 0.0) {
            (-d, -e)
        } else {
            (d, e)
        };
        match q {
            Order::One => {
                self.add(d);
                self.add(e);
            }
            Order::Two => {
                let (p1, e1) = two_prod(d, d);
                let (p2, e2) = two_prod(2.0 * d, e);
                let (p3, e3) = two_prod(e, e);
                for t in [p1, e1, p2, e2, p3, e3] {
                    self.add(t);
                }
            }
        }
    }
}

/// W_q between two equal-size empirical laws given as sorted arrays.
pub fn wq_empirical(x: &[f64], y: &[f64], q: Order) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Precondition("empty sample"));
    }
    debug_assert!(x.windows(2).all(|w| w[0] <= w[1]) && y.windows(2).all(|w| w[0] <= w[1]));
    let mut s = ExactSum::default();
    for (&a, &b) in x.iter().zip(y) {
        s.add_cost(a, b, q);
    }
    Ok(q.root(s.value() / x.len() as f64))
}

/// W_q between a sorted sample and N(0, σ²), pairing x₍ᵢ₎ with σΦ⁻¹((i − ½)/M).
pub fn wq_to_gaussian(x: &[f64], sigma: f64, q: Order) -> Result<f64> {
    Ok(q.root(wq_to_gaussian_power(x, sigma, q)?))
}

/// (1/M) Σ |x₍ᵢ₎ − σΦ⁻¹((i − ½)/M)|^q, before the root.
pub fn wq_to_gaussian_power(x: &[f64], sigma: f64, q: Order) -> Result<f64> {
    wq_to_gaussian_power_scored(x, sigma, q, &midpoint_scores(x.len()))
}

/// [`wq_to_gaussian_power`] with the table from [`midpoint_scores`] precomputed.
pub fn wq_to_gaussian_power_scored(x: &[f64], sigma: f64, q: Order, scores: &[f64]) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::Domain("sigma must be nonnegative"));
    }
    if x.is_empty() {
        return Err(Error::Precondition("empty sample"));
    }
    if scores.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: x.len(),
        });
    }
    let s: f64 = x
        .iter()
        .zip(scores)
        .map(|(&xi, &zi)| q.power(xi - sigma * zi))
        .sum();
    Ok(s / x.len() as f64)
}

/// Φ⁻¹((i + ½)/M) for i = 0..M.
pub fn midpoint_scores(m: usize) -> Vec<f64> {
    (0..m).map(|i| midpoint_score(i, m as f64)).collect()
}

/// Φ⁻¹((i + ½)/M) for zero-based i, evaluated in the smaller tail.
pub fn midpoint_score(i: usize, m: f64) -> f64 {
    let u = (i as f64 + 0.5) / m;
    if u <= 0.5 {
        ppnd(u)
    } else {
        ppnd_upper((m - i as f64 - 0.5) / m)
    }
}

pub const BRUTE_FORCE_MAX: usize = 8;

/// Exact W_q by enumerating all n! pairings (n ≤ 8).
pub fn wq_brute(x: &[f64], y: &[f64], q: Order) -> Result<f64> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len(),
        });
    }
    if n == 0 {
        return Err(Error::Precondition("empty sample"));
    }
    if n > BRUTE_FORCE_MAX {
        return Err(Error::Precondition(
            "brute-force assignment limited to n <= 8",
        ));
    }
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut perm: Vec<f64> = y.to_vec();
    let cost = |p: &[f64]| {
        let mut s = ExactSum::default();
        for (&a, &b) in xs.iter().zip(p) {
            s.add_cost(a, b, q);
        }
        s.value()
    };
    let mut best = cost(&perm);
    // Heap's algorithm.
    let mut c = [0usize; BRUTE_FORCE_MAX];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(cost(&perm));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(q.root(best / n as f64))
}

/// (1/M) Σ |ωᵀxᵢ − t(xᵢ)|² with the multi-to-one map t(x) = σ_ω·Φ⁻¹(F_{μ_ω}(ωᵀx))
/// evaluated at midpoint ranks, summed in the original row order.
pub fn unprojected_inner_value(
    samples: &crate::distributions::SampleMatrix,
    omega: &[f64],
    theta: &LinearGenerator,
) -> Result<f64> {
    if omega.len() != samples.cols() {
        return Err(Error::LengthMismatch {
            left: omega.len(),
            right: samples.cols(),
        });
    }
    let proj = samples.project(omega);
    let sigma = theta.projected_sd(omega)?;
    let m = proj.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| proj[a].total_cmp(&proj[b]));
    let mut rank = alloc::vec![0usize; m];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mf = m as f64;
    let s: f64 = (0..m)
        .map(|i| {
            let d = proj[i] - sigma * midpoint_score(rank[i], mf);
            d * d
        })
        .sum();
    Ok(s / mf)
}
