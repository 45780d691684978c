//! Log-gamma, gamma ratios and the κ function.
//!
//! Everything here works on the log scale so that ratios of gammas with
//! arguments in the thousands never overflow.

use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ζ(k) for k = 2..=30, coefficients of the Taylor series of ln Γ(1 + x).
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_370_0,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926_0,
    1.000_000_059_608_189_1,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334_0,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

/// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this argument the Stirling series is reached by upward recurrence.
const STIRLING_MIN: f64 = 10.0;

/// A ratio Γ(a)/Γ(b) kept on the log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    pub log_value: f64,
    pub sign: f64,
}

impl GammaRatio {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            log_value: log_gamma_ratio(a, b)?,
            sign: 1.0,
        })
    }

    pub fn value(&self) -> f64 {
        self.sign * self.log_value.exp()
    }
}

fn check_positive(z: f64, what: &str) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{what} must be positive and finite, got {z}")))
    }
}

/// ln Γ(z) for z > 0.
pub fn log_gamma(z: f64) -> Result<f64> {
    check_positive(z, "log_gamma argument")?;
    Ok(ln_gamma(z))
}

/// ln Γ(a) - ln Γ(b) for a, b > 0.
pub fn log_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    check_positive(a, "log_gamma_ratio numerator")?;
    check_positive(b, "log_gamma_ratio denominator")?;
    Ok(ln_gamma_ratio(a, b))
}

/// κ(z) = Γ(z)² / (Γ(z + ½) Γ(z − ½)), defined for z > ½.
pub fn kappa(z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.5) {
        return Err(domain(format!("kappa requires z > 0.5, got {z}")));
    }
    let log_k = ln_gamma_ratio(z, z + 0.5) + ln_gamma_ratio(z, z - 0.5);
    Ok(log_k.exp())
}

/// Stirling-type closed form approximating [`kappa`]:
/// {1 − (z + ½)⁻¹}^½ · [{1 − (4z²)⁻¹}⁻¹]^(z − ½).
pub fn kappa_stirling(z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.5) {
        return Err(domain(format!("kappa_stirling requires z > 0.5, got {z}")));
    }
    let first = (1.0 - 1.0 / (z + 0.5)).sqrt();
    let log_second = -(z - 0.5) * (-1.0 / (4.0 * z * z)).ln_1p();
    Ok(first * log_second.exp())
}

// Unchecked kernels; callers guarantee positive finite arguments.

pub(crate) fn ln_gamma(z: f64) -> f64 {
    if z >= STIRLING_MIN {
        return stirling(z);
    }
    // Near the zeros of ln Γ at 1 and 2 use the Taylor series so the
    // result keeps full relative precision.
    let x1 = z - 1.0;
    if x1.abs() <= 0.25 {
        return ln_gamma_1p(x1);
    }
    let x2 = z - 2.0;
    if x2.abs() <= 0.25 {
        return x2.ln_1p() + ln_gamma_1p(x2);
    }
    let mut shifted = z;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

pub(crate) fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a.min(b) >= STIRLING_MIN {
        // Difference of Stirling series, rearranged so the leading terms
        // never cancel: (a-½)ln(a/b) + (a-b)(ln b - 1) + ΔS.
        let d = a - b;
        let lead = (a - 0.5) * (d / b).ln_1p() + d * (b.ln() - 1.0);
        return lead + stirling_tail(a) - stirling_tail(b);
    }
    ln_gamma(a) - ln_gamma(b)
}

/// ln Γ(1 + x) for |x| ≤ 0.25.
fn ln_gamma_1p(x: f64) -> f64 {
    let mut sum = 0.0;
    // Horner over k = 30..=2 of (-1)^k ζ(k) x^k / k.
    for (i, zeta) in ZETA.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        sum = sum * x + sign * zeta / k;
    }
    x * (x * sum - EULER_GAMMA)
}

fn stirling(z: f64) -> f64 {
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z)
}

fn stirling_tail(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}
