//! Linear generators ΘZ for the sliced W_q problem in ℝ^d: the asymptotically
//! optimal isotropic solution, Gaussian-projection objectives, and Monte Carlo
//! evaluation of sliced distances against data.

use crate::distributions::{sample_sphere_direction, SampleMatrix};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::ot1d::{midpoint_scores, wq_to_gaussian_power_scored, Order};
use crate::quad::{integrate_half_line, Tolerance};
use crate::rng;
use crate::special::{beta, elliptic_e, gamma_ratio_sq, gamma_ratio_sq_complement};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

const QUAD_TOL: Tolerance = Tolerance {
    rel: 1e-12,
    abs: 1e-16,
    max_panels: 4000,
};

/// Θ ∈ ℝ^{d×r} (row-major) with the eigenvalues S of ΘΘᵀ, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGenerator {
    theta: Vec<f64>,
    d: usize,
    r: usize,
    s: Vec<f64>,
}

impl LinearGenerator {
    /// Wraps Θ and computes the spectrum of ΘΘᵀ.
    pub fn new(theta: Vec<f64>, d: usize, r: usize) -> Result<Self> {
        if d == 0 || r == 0 {
            return Err(Error::Precondition("generator needs d, r >= 1"));
        }
        if theta.len() != d * r {
            return Err(Error::LengthMismatch {
                left: theta.len(),
                right: d * r,
            });
        }
        let mut gram = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let v: f64 = (0..r).map(|k| theta[i * r + k] * theta[j * r + k]).sum();
                gram[i * d + j] = v;
                gram[j * d + i] = v;
            }
        }
        let s = symmetric_eigen(&gram, d)?
            .values
            .into_iter()
            .map(|x| x.max(0.0))
            .collect();
        Ok(Self { theta, d, r, s })
    }

    fn with_spectrum(theta: Vec<f64>, d: usize, r: usize, s: Vec<f64>) -> Self {
        Self { theta, d, r, s }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Eigenvalues of ΘΘᵀ, descending.
    pub fn spectrum(&self) -> &[f64] {
        &self.s
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.theta.iter().map(|x| x * x).sum()
    }

    /// ωᵀΘΘᵀω = ‖Θᵀω‖².
    pub fn quadratic_form(&self, omega: &[f64]) -> Result<f64> {
        if omega.len() != self.d {
            return Err(Error::LengthMismatch {
                left: omega.len(),
                right: self.d,
            });
        }
        let mut total = 0.0;
        for k in 0..self.r {
            let c: f64 = (0..self.d)
                .map(|i| omega[i] * self.theta[i * self.r + k])
                .sum();
            total += c * c;
        }
        Ok(total)
    }

    /// Standard deviation of ωᵀΘZ.
    pub fn projected_sd(&self, omega: &[f64]) -> Result<f64> {
        Ok(libm::sqrt(self.quadratic_form(omega)?))
    }

    /// QΘ for an orthogonal d×d matrix Q (row-major).
    pub fn rotated(&self, q: &[f64]) -> Result<Self> {
        check_orthogonal(q, self.d)?;
        let (d, r) = (self.d, self.r);
        let mut t = vec![0.0; d * r];
        for i in 0..d {
            for k in 0..r {
                t[i * r + k] = (0..d).map(|j| q[i * d + j] * self.theta[j * r + k]).sum();
            }
        }
        Ok(Self::with_spectrum(t, d, r, self.s.clone()))
    }
}

fn check_orthogonal(q: &[f64], d: usize) -> Result<()> {
    if q.len() != d * d {
        return Err(Error::LengthMismatch {
            left: q.len(),
            right: d * d,
        });
    }
    for i in 0..d {
        for j in 0..d {
            let v: f64 = (0..d).map(|k| q[k * d + i] * q[k * d + j]).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            if (v - e).abs() > 1e-9 {
                return Err(Error::Precondition("matrix is not orthogonal"));
            }
        }
    }
    Ok(())
}

/// σ̃ = √(E‖X‖²/d), the per-coordinate RMS scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaTilde(pub f64);

pub fn sigma_tilde(samples: &SampleMatrix) -> SigmaTilde {
    let sq: f64 = samples.data().iter().map(|x| x * x).sum();
    SigmaTilde(libm::sqrt(sq / (samples.rows() * samples.cols()) as f64))
}

/// √s·[I_d | 0] with ΘΘᵀ = s·I.
fn isotropic(d: usize, r: usize, s: f64) -> Result<LinearGenerator> {
    if r < d {
        return Err(Error::Precondition("an isotropic generator needs r >= d"));
    }
    let mut t = vec![0.0; d * r];
    let a = libm::sqrt(s);
    for i in 0..d {
        t[i * r + i] = a;
    }
    Ok(LinearGenerator::with_spectrum(t, d, r, vec![s; d]))
}

/// The asymptotically optimal W2 generator: ΘΘᵀ = g(d)·σ̃²·I.
pub fn optimal_theta_w2(d: usize, r: usize, st: SigmaTilde) -> Result<LinearGenerator> {
    isotropic(d, r, optimal_scale(d, st)?)
}

/// [`optimal_theta_w2`] with an orthogonal left factor U: Θ = √s·U[I | 0].
pub fn optimal_theta_w2_with_basis(
    d: usize,
    r: usize,
    st: SigmaTilde,
    u: &[f64],
) -> Result<LinearGenerator> {
    optimal_theta_w2(d, r, st)?.rotated(u)
}

/// s* = g(d)·σ̃².
pub fn optimal_scale(d: usize, st: SigmaTilde) -> Result<f64> {
    Ok(gamma_ratio_sq(d as u64)? * st.0 * st.0)
}

/// The q = 1 solution ΘΘᵀ = σ̃²·I.
pub fn optimal_theta_w1(d: usize, r: usize, st: SigmaTilde) -> Result<LinearGenerator> {
    isotropic(d, r, st.0 * st.0)
}

/// Upper bound σ̃·√(1 − g(d)) on the optimal sliced W2 value.
pub fn ub_value(d: usize, st: SigmaTilde) -> Result<f64> {
    Ok(st.0 * libm::sqrt(gamma_ratio_sq_complement(d as u64)?))
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// E_ω|σ̃ − √(ωᵀΘΘᵀω)|^q for ω ∼ N(0, I/d), by Monte Carlo.
pub fn objective_mc(
    theta: &LinearGenerator,
    st: SigmaTilde,
    q: Order,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::Precondition("need at least one Monte Carlo draw"));
    }
    let d = theta.d();
    let sd = 1.0 / libm::sqrt(d as f64);
    let mut r = rng::stream(seed, 0);
    let mut omega = vec![0.0; d];
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..n {
        for w in omega.iter_mut() {
            *w = sd * rng::normal(&mut r);
        }
        let v = q.power(st.0 - theta.projected_sd(&omega)?);
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let stderr = if n > 1 {
        libm::sqrt(m2 / (n - 1) as f64 / n as f64)
    } else {
        f64::NAN
    };
    Ok(McEstimate {
        value: mean,
        stderr,
    })
}

fn check_spectrum(s: &[f64]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Precondition("spectrum must be nonempty"));
    }
    if s.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::Domain(
            "spectrum entries must be finite and nonnegative",
        ));
    }
    Ok(())
}

fn half_line_scale(a: &[f64]) -> f64 {
    let pos: Vec<f64> = a.iter().copied().filter(|&x| x > 0.0).collect();
    let mean = pos.iter().sum::<f64>() / pos.len() as f64;
    1.0 / libm::sqrt(mean)
}

/// ΣS/d − 2σ̃·E√(ωᵀSω), ω ∼ N(0, I/d), via the determinant-derivative integral
/// in x = √z.
pub fn objective_quadrature(s: &[f64], st: SigmaTilde) -> Result<f64> {
    check_spectrum(s)?;
    let d = s.len() as f64;
    let trace = s.iter().sum::<f64>() / d;
    if s.iter().all(|&x| x == 0.0) || st.0 == 0.0 {
        return Ok(trace);
    }
    let a: Vec<f64> = s.iter().map(|&x| 2.0 * x / d).collect();
    let integral = integrate_half_line(
        |x| {
            let x2 = x * x;
            let mut log_det = 0.0;
            let mut sum = 0.0;
            for &ai in &a {
                let t = ai * x2;
                log_det += libm::log1p(t);
                sum += ai / (1.0 + t);
            }
            libm::exp(-0.5 * log_det) * sum
        },
        half_line_scale(&a),
        QUAD_TOL,
    )?;
    Ok(trace - 2.0 * st.0 / libm::sqrt(PI) * integral)
}

/// Carlson's R_{1/2}(b; z), the Dirichlet average of √(Σ wᵢzᵢ).
pub fn carlson_r_half(b: &[f64], z: &[f64]) -> Result<f64> {
    if b.len() != z.len() {
        return Err(Error::LengthMismatch {
            left: b.len(),
            right: z.len(),
        });
    }
    if b.is_empty() || b.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Domain("Carlson weights must be positive"));
    }
    check_spectrum(z)?;
    if z.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let c: f64 = b.iter().sum();
    let integral = integrate_half_line(
        |x| {
            let x2 = x * x;
            let mut log_p = 0.0;
            let mut sum = 0.0;
            for (&bi, &zi) in b.iter().zip(z) {
                let t = zi * x2;
                log_p -= bi * libm::log1p(t);
                sum += bi / c * zi / (1.0 + t);
            }
            libm::exp(log_p) * sum
        },
        half_line_scale(z),
        QUAD_TOL,
    )?;
    Ok(2.0 * integral / beta(0.5, c + 0.5))
}

/// ΣS/d − σ̃√(2d)·(Γ((d+1)/2)/Γ(d/2+1))·R_{1/2}(½·1; S).
pub fn objective_carlson(s: &[f64], st: SigmaTilde) -> Result<f64> {
    check_spectrum(s)?;
    let d = s.len();
    let trace = s.iter().sum::<f64>() / d as f64;
    let half = vec![0.5; d];
    let coef = 2.0 * libm::sqrt(gamma_ratio_sq(d as u64)?);
    Ok(trace - st.0 * coef * carlson_r_half(&half, s)?)
}

/// Closed form of [`objective_quadrature`] for d = 2 through complete elliptic integrals.
pub fn closed_form_objective_d2(s11: f64, s22: f64, st: SigmaTilde) -> Result<f64> {
    if !(s11 >= 0.0 && s22 >= 0.0 && s11.is_finite() && s22.is_finite()) {
        return Err(Error::Domain(
            "spectrum entries must be finite and nonnegative",
        ));
    }
    let c = 2.0 * st.0 / libm::sqrt(PI);
    Ok(if s11 == 0.0 && s22 == 0.0 {
        0.0
    } else if s11 == 0.0 || s22 == 0.0 {
        let s = s11.max(s22);
        0.5 * s - c * libm::sqrt(s)
    } else if s11 == s22 {
        s11 - st.0 * libm::sqrt(PI) * libm::sqrt(s11)
    } else {
        // m < 0 when s22 > s11 goes through the imaginary-modulus transformation.
        0.5 * (s11 + s22) - c * libm::sqrt(s11) * elliptic_e(1.0 - s22 / s11)?
    })
}

/// Top-r principal components of the sample covariance: Θ = U_r·diag(√λ).
pub fn r_pca(samples: &SampleMatrix, r: usize) -> Result<LinearGenerator> {
    let (m, d) = (samples.rows(), samples.cols());
    if r == 0 || r > d {
        return Err(Error::Precondition("r-PCA needs 1 <= r <= d"));
    }
    if m < 2 {
        return Err(Error::Precondition("r-PCA needs at least 2 samples"));
    }
    let mut mean = vec![0.0; d];
    for i in 0..m {
        for (mu, x) in mean.iter_mut().zip(samples.row(i)) {
            *mu += x;
        }
    }
    for mu in mean.iter_mut() {
        *mu /= m as f64;
    }
    let mut cov = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for i in 0..m {
        for (c, (x, mu)) in centered.iter_mut().zip(samples.row(i).iter().zip(&mean)) {
            *c = x - mu;
        }
        for a in 0..d {
            let ca = centered[a];
            for b in 0..=a {
                cov[a * d + b] += ca * centered[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..=a {
            let v = cov[a * d + b] / (m - 1) as f64;
            cov[a * d + b] = v;
            cov[b * d + a] = v;
        }
    }
    let eig = symmetric_eigen(&cov, d)?;
    let mut t = vec![0.0; d * r];
    let mut s = vec![0.0; d];
    for k in 0..r {
        let lam = eig.values[k].max(0.0);
        s[k] = lam;
        let root = libm::sqrt(lam);
        for i in 0..d {
            t[i * r + k] = eig.vectors[i * d + k] * root;
        }
    }
    Ok(LinearGenerator::with_spectrum(t, d, r, s))
}

/// Settings of the sliced Monte Carlo evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicedEvalConfig {
    pub n_projections: usize,
    pub q: Order,
    pub seed: u64,
    /// Honoured by parallel drivers; the evaluation here is sequential.
    pub parallel: bool,
}

impl Default for SlicedEvalConfig {
    fn default() -> Self {
        Self {
            n_projections: 20_000,
            q: Order::Two,
            seed: 0,
            parallel: false,
        }
    }
}

/// The q-th powers of the 1-D distances along ω, one per generator.
pub fn direction_terms(
    samples: &SampleMatrix,
    thetas: &[&LinearGenerator],
    omega: &[f64],
    q: Order,
) -> Result<Vec<f64>> {
    terms_along(samples, thetas, omega, q, &midpoint_scores(samples.rows()))
}

fn terms_along(
    samples: &SampleMatrix,
    thetas: &[&LinearGenerator],
    omega: &[f64],
    q: Order,
    scores: &[f64],
) -> Result<Vec<f64>> {
    let mut proj = samples.project(omega);
    proj.sort_by(f64::total_cmp);
    thetas
        .iter()
        .map(|t| wq_to_gaussian_power_scored(&proj, t.projected_sd(omega)?, q, scores))
        .collect()
}

/// Direction `index` of the evaluation: sub-stream `index` under the seed.
pub fn projection_direction(d: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut r = rng::stream(seed, index as u64);
    sample_sphere_direction(d, &mut r)
}

/// Per-projection terms of several generators against one sample, with the
/// Gaussian quantile table shared across projections. Projection i depends
/// only on (seed, i), so indices can be evaluated in any order or in parallel.
pub struct ProjectionTerms<'a> {
    samples: &'a SampleMatrix,
    thetas: &'a [&'a LinearGenerator],
    cfg: SlicedEvalConfig,
    scores: Vec<f64>,
}

impl<'a> ProjectionTerms<'a> {
    pub fn new(
        samples: &'a SampleMatrix,
        thetas: &'a [&'a LinearGenerator],
        cfg: &SlicedEvalConfig,
    ) -> Result<Self> {
        if cfg.n_projections == 0 {
            return Err(Error::Precondition("need at least one projection"));
        }
        for t in thetas {
            if t.d() != samples.cols() {
                return Err(Error::LengthMismatch {
                    left: t.d(),
                    right: samples.cols(),
                });
            }
        }
        Ok(Self {
            samples,
            thetas,
            cfg: *cfg,
            scores: midpoint_scores(samples.rows()),
        })
    }

    pub fn n_projections(&self) -> usize {
        self.cfg.n_projections
    }

    /// Terms along projection `index`, one per generator.
    pub fn terms(&self, index: usize) -> Result<Vec<f64>> {
        let omega = projection_direction(self.samples.cols(), self.cfg.seed, index);
        terms_along(self.samples, self.thetas, &omega, self.cfg.q, &self.scores)
    }
}

/// Per-projection terms for several generators sharing the same directions;
/// `terms[i][k]` belongs to projection i and generator k.
pub fn sliced_terms(
    samples: &SampleMatrix,
    thetas: &[&LinearGenerator],
    cfg: &SlicedEvalConfig,
) -> Result<Vec<Vec<f64>>> {
    let eval = ProjectionTerms::new(samples, thetas, cfg)?;
    (0..cfg.n_projections).map(|i| eval.terms(i)).collect()
}

/// (mean of terms)^{1/q} with a jackknife standard error.
pub fn summarize(terms: &[f64], q: Order) -> McEstimate {
    let n = terms.len();
    let total: f64 = terms.iter().sum();
    let value = q.root(total / n as f64);
    if n < 2 {
        return McEstimate {
            value,
            stderr: f64::NAN,
        };
    }
    let loo: Vec<f64> = terms
        .iter()
        .map(|t| q.root(((total - t) / (n - 1) as f64).max(0.0)))
        .collect();
    McEstimate {
        value,
        stderr: jackknife_se(&loo),
    }
}

/// Jackknife standard error of value_a − value_b over shared projections.
pub fn paired_difference(a: &[f64], b: &[f64], q: Order) -> Result<McEstimate> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Err(Error::Precondition("no projections"));
    }
    let (ta, tb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    let value = q.root(ta / n as f64) - q.root(tb / n as f64);
    if n < 2 {
        return Ok(McEstimate {
            value,
            stderr: f64::NAN,
        });
    }
    let nm = (n - 1) as f64;
    let loo: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| q.root(((ta - x) / nm).max(0.0)) - q.root(((tb - y) / nm).max(0.0)))
        .collect();
    Ok(McEstimate {
        value,
        stderr: jackknife_se(&loo),
    })
}

fn jackknife_se(loo: &[f64]) -> f64 {
    let n = loo.len() as f64;
    let mean = loo.iter().sum::<f64>() / n;
    libm::sqrt((n - 1.0) / n * loo.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>())
}

/// Column k of a term table.
pub fn column(terms: &[Vec<f64>], k: usize) -> Vec<f64> {
    terms.iter().map(|row| row[k]).collect()
}

/// Monte Carlo sliced W_q between the data and ΘZ over uniform directions.
pub fn sliced_wq_empirical(
    samples: &SampleMatrix,
    theta: &LinearGenerator,
    cfg: &SlicedEvalConfig,
) -> Result<McEstimate> {
    let terms = sliced_terms(samples, &[theta], cfg)?;
    Ok(summarize(&column(&terms, 0), cfg.q))
}
