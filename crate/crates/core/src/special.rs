//! Standard normal distribution, log-gamma, the Gamma-ratio g(d) and complete
//! elliptic integrals.

use crate::error::{Error, Result};
use core::f64::consts::{FRAC_1_SQRT_2, PI};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / SQRT_2PI
}

/// Standard normal CDF Φ(x).
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function 1 − Φ(x), accurate in the upper tail.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

// Wichura, algorithm AS 241 (PPND16).
const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    1.331_416_678_917_843_774_5e2,
    1.971_590_950_306_551_442_7e3,
    1.373_169_376_550_946_112_5e4,
    4.592_195_393_154_987_145_7e4,
    6.726_577_092_700_870_085_3e4,
    3.343_057_558_358_812_810_5e4,
    2.509_080_928_730_122_672_7e3,
];
const B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091_125_2e1,
    6.871_870_074_920_579_083e2,
    5.394_196_021_424_751_107_7e3,
    2.121_379_430_158_659_586_7e4,
    3.930_789_580_009_271_061e4,
    2.872_908_573_572_194_267_4e4,
    5.226_495_278_852_854_561e3,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    2.417_807_251_774_506_117_7e-1,
    2.272_384_498_926_918_458_33e-2,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    6.897_673_349_851_000_045_5e-1,
    1.481_039_764_274_800_745_9e-1,
    1.519_866_656_361_645_719_66e-2,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    2.965_605_718_285_048_912_3e-1,
    2.653_218_952_657_612_309_3e-2,
    1.242_660_947_388_078_438_6e-3,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    5.998_322_065_558_879_376_9e-1,
    1.369_298_809_227_358_053_1e-1,
    1.487_536_129_085_061_485_25e-2,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

fn poly(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Inverse standard normal CDF Φ⁻¹(p) for p ∈ (0,1).
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain("normal quantile needs p in (0,1)"));
    }
    Ok(ppnd(p))
}

/// Φ⁻¹ without the domain check; callers guarantee p ∈ (0,1).
pub(crate) fn ppnd(p: f64) -> f64 {
    let q = p - 0.5;
    let mut x = if q.abs() <= 0.425 {
        let r = 0.180_625 - q * q;
        q * poly(&A, r) / poly(&B, r)
    } else {
        let tail = if q < 0.0 { p } else { 1.0 - p };
        let mut r = libm::sqrt(-libm::log(tail));
        let v = if r <= 5.0 {
            r -= 1.6;
            poly(&C, r) / poly(&D, r)
        } else {
            r -= 5.0;
            poly(&E, r) / poly(&F, r)
        };
        if q < 0.0 {
            -v
        } else {
            v
        }
    };
    // One Halley step against the erfc-based CDF, using the smaller tail.
    if x.abs() < 37.0 {
        let err = if x <= 0.0 {
            norm_cdf(x) - p
        } else {
            (1.0 - p) - norm_sf(x)
        };
        let u = err * SQRT_2PI * libm::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// −Φ⁻¹(v) = Φ⁻¹(1 − v), accurate for small v.
pub(crate) fn ppnd_upper(v: f64) -> f64 {
    -ppnd(v)
}

/// ln Γ(x) for x > 0 (Lanczos, g = 7, nine terms).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection.
        return libm::log(PI / libm::sin(PI * x).abs()) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut s = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * libm::log(2.0 * PI) + (x + 0.5) * libm::log(t) - t + libm::log(s)
}

/// Beta function B(a, b) for a, b > 0.
pub fn beta(a: f64, b: f64) -> f64 {
    libm::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// Asymptotic series of ln(√x·Γ(x+½)/Γ(x+1)) for large x.
fn half_ratio_log_series(x: f64) -> f64 {
    let y = 1.0 / x;
    let y2 = y * y;
    y * (-1.0 / 8.0
        + y2 * (1.0 / 192.0
            + y2 * (-1.0 / 640.0 + y2 * (17.0 / 14_336.0 + y2 * (-31.0 / 18_432.0)))))
}

/// Sets up (g(d), 1 − g(d)) with both components accurate.
fn gamma_ratio_parts(d: u64) -> (f64, f64) {
    let x = d as f64 / 2.0;
    if x >= 20.0 {
        let l2 = 2.0 * half_ratio_log_series(x);
        return (libm::exp(l2), -libm::expm1(l2));
    }
    // Two-step recurrence g(d+2) = g(d)·(d+1)²/(d(d+2)) from g(1), g(2).
    let (mut g, mut k) = if d % 2 == 1 {
        (2.0 / PI, 1u64)
    } else {
        (PI / 4.0, 2u64)
    };
    while k < d {
        let kf = k as f64;
        g *= (kf + 1.0) * (kf + 1.0) / (kf * (kf + 2.0));
        k += 2;
    }
    (g, 1.0 - g)
}

/// g(d) = (d/2)·(Γ((d+1)/2)/Γ(d/2+1))², which increases to 1.
pub fn gamma_ratio_sq(d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1"));
    }
    Ok(gamma_ratio_parts(d).0)
}

/// 1 − g(d), free of cancellation for large d.
pub fn gamma_ratio_sq_complement(d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1"));
    }
    Ok(gamma_ratio_parts(d).1)
}

fn agm_parts(m: f64) -> (f64, f64) {
    // Returns (AGM(1, √(1−m)), Σ 2^{n−1} c_n²) for 0 ≤ m < 1.
    let mut a = 1.0;
    let mut b = libm::sqrt(1.0 - m);
    let mut c2 = m;
    let mut weight = 0.5;
    let mut sum = weight * c2;
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let cn = 0.5 * (a - b);
        b = libm::sqrt(a * b);
        a = an;
        weight *= 2.0;
        c2 = cn * cn;
        sum += weight * c2;
        if cn.abs() <= 1e-17 * a {
            break;
        }
    }
    (a, sum)
}

/// Complete elliptic integral of the first kind K(m), parameter m < 1.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::Domain("elliptic K needs m < 1"));
    }
    if m < 0.0 {
        let mp = -m / (1.0 - m);
        return Ok(elliptic_k(mp)? / libm::sqrt(1.0 - m));
    }
    let (a, _) = agm_parts(m);
    Ok(PI / (2.0 * a))
}

/// Complete elliptic integral of the second kind E(m), parameter m ≤ 1.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(m <= 1.0) {
        return Err(Error::Domain("elliptic E needs m <= 1"));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    if m < 0.0 {
        let mp = -m / (1.0 - m);
        return Ok(libm::sqrt(1.0 - m) * elliptic_e(mp)?);
    }
    let (a, sum) = agm_parts(m);
    Ok(PI / (2.0 * a) * (1.0 - sum))
}
