//! Exact density and moments of the sample correlation coefficient.
//!
//! Under a bivariate Gaussian model with correlation ρ and sample size n,
//!
//! ```text
//! f(r)   = C (1 − r²)^((n−4)/2) Σ_k Γ((n−1+k)/2)² (2rρ)^k / k!
//! E(R^m) = C Σ_k Γ((n−1+k)/2)² (2ρ)^k / k! · g_m(k)
//! C      = 2^(n−3) (1 − ρ²)^((n−1)/2) / (π Γ(n−2))
//! ```
//!
//! where g_m(k) = ∫ r^(m+k) (1 − r²)^((n−4)/2) dr over [−1, 1]. Consecutive
//! non-vanishing terms differ by a rational factor, so each series is summed
//! by a multiplicative recurrence from a single log-scale starting term.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use crate::error::{domain, Error, Result};
use crate::gammakit::ln_gamma;
use crate::params::ModelParams;
use crate::quadrature::{integrate, QuadConfig};

/// Truncation control for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Stop once the estimated tail falls below `rel_tol` times the partial sum.
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 100_000,
        }
    }
}

impl SeriesConfig {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(domain("max_terms must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// A series moment together with its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub value: f64,
    pub terms_used: usize,
    /// Geometric bound on the discarded tail, in the units of `value`.
    pub truncation_estimate: f64,
}

/// Sum of a positive series held as `sum · exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
struct ScaledSum {
    log_scale: f64,
    sum: f64,
    tail: f64,
    terms: usize,
}

impl ScaledSum {
    fn ln(&self) -> f64 {
        self.log_scale + self.sum.ln()
    }
}

const RESCALE_AT: f64 = 1e250;

/// Sums `Σ_i t_i` where `t_0 = exp(log_first)` and `t_{i+1} = t_i · ratio(i)`.
/// Terminates once the ratio is below one and the geometric tail bound
/// `t_{i+1} / (1 − ratio)` is at most `rel_tol` of the partial sum.
fn sum_positive_series<F: FnMut(usize) -> f64>(
    log_first: f64,
    mut ratio: F,
    cfg: &SeriesConfig,
) -> std::result::Result<ScaledSum, ScaledSum> {
    let mut acc = ScaledSum {
        log_scale: log_first,
        sum: 0.0,
        tail: f64::INFINITY,
        terms: 0,
    };
    let mut term = 1.0;
    for i in 0..cfg.max_terms {
        acc.sum += term;
        acc.terms = i + 1;
        let r = ratio(i);
        let next = term * r;
        if next == 0.0 {
            acc.tail = 0.0;
            return Ok(acc);
        }
        if r < 1.0 {
            let tail = next / (1.0 - r);
            if tail <= cfg.rel_tol * acc.sum {
                acc.tail = tail;
                return Ok(acc);
            }
            acc.tail = tail;
        }
        term = next;
        if term > RESCALE_AT {
            acc.log_scale += term.ln();
            acc.sum /= term;
            acc.tail /= term;
            term = 1.0;
        }
    }
    Err(acc)
}

/// ln C = (n−3) ln 2 + ((n−1)/2) ln(1 − ρ²) − ln π − ln Γ(n − 2).
fn ln_prefactor(params: &ModelParams) -> f64 {
    let n = params.nf();
    (n - 3.0) * LN_2 + 0.5 * (n - 1.0) * params.one_minus_rho_sq().ln() - PI.ln() - ln_gamma(n - 2.0)
}

/// g_m(k) = ∫_{−1}^{1} r^(m+k) (1 − r²)^((n−4)/2) dr.
///
/// Zero when m + k is odd, otherwise Γ((m+k+1)/2) Γ((n−2)/2) / Γ((n+m+k−1)/2).
pub fn g_m(m: u32, k: u32, n: u32) -> Result<f64> {
    if n < 3 {
        return Err(domain(format!("sample size must be at least 3, got {n}")));
    }
    if (m + k) % 2 == 1 {
        return Ok(0.0);
    }
    Ok(ln_g_m(m, k, n as f64).exp())
}

fn ln_g_m(m: u32, k: u32, n: f64) -> f64 {
    let mk = (m + k) as f64;
    ln_gamma(0.5 * (mk + 1.0)) + ln_gamma(0.5 * (n - 2.0)) - ln_gamma(0.5 * (n + mk - 1.0))
}

fn truncation_error(partial: ScaledSum) -> Error {
    let scale = partial.log_scale.exp();
    Error::Truncation {
        partial: partial.sum * scale,
        terms_used: partial.terms,
        tail: partial.tail * scale,
    }
}

/// E(R^m) from the moment series.
pub fn moment(m: u32, params: &ModelParams, cfg: &SeriesConfig) -> Result<MomentResult> {
    let rho = params.rho();
    if params.is_degenerate() {
        return Ok(MomentResult {
            value: rho.powi(m as i32),
            terms_used: 0,
            truncation_estimate: 0.0,
        });
    }
    // E(R^m; −ρ) = (−1)^m E(R^m; ρ)
    let odd = m % 2 == 1;
    let sign = if rho < 0.0 && odd { -1.0 } else { 1.0 };
    let rho = rho.abs();
    if rho == 0.0 && odd {
        return Ok(MomentResult {
            value: 0.0,
            terms_used: 1,
            truncation_estimate: 0.0,
        });
    }

    let n = params.nf();
    let mf = m as f64;
    // Only k ≡ m (mod 2) contributes; start at k = parity and step by 2.
    let parity = m % 2;
    let p = parity as f64;
    let mut log_first = ln_prefactor(params) + 2.0 * ln_gamma(0.5 * (n - 1.0 + p)) + ln_g_m(m, parity, n);
    if parity == 1 {
        log_first += (2.0 * rho).ln();
    }
    let rho_sq = rho * rho;
    let ratio = |q: usize| {
        let k = 2.0 * q as f64 + p;
        let a = n - 1.0 + k;
        rho_sq * a * a * (mf + k + 1.0) / ((k + 1.0) * (k + 2.0) * (n + mf + k - 1.0))
    };

    match sum_positive_series(log_first, ratio, cfg) {
        Ok(s) => {
            let scale = s.log_scale.exp();
            Ok(MomentResult {
                value: sign * s.sum * scale,
                terms_used: s.terms,
                truncation_estimate: s.tail * scale,
            })
        }
        Err(partial) => Err(truncation_error(partial)),
    }
}

/// ln of the even-k and odd-k parts of Σ_k Γ((n−1+k)/2)² (2x)^k / k! with x = rρ,
/// each summed as a positive series in |x|. The odd part is `None` when x = 0.
fn ln_density_series(n: f64, x: f64, cfg: &SeriesConfig) -> Result<(f64, Option<f64>)> {
    let x_sq = x * x;
    let ratio = |k0: f64| {
        move |q: usize| {
            let k = 2.0 * q as f64 + k0;
            let a = n - 1.0 + k;
            x_sq * a * a / ((k + 1.0) * (k + 2.0))
        }
    };
    let even = sum_positive_series(2.0 * ln_gamma(0.5 * (n - 1.0)), ratio(0.0), cfg).map_err(truncation_error)?;
    if x == 0.0 {
        return Ok((even.ln(), None));
    }
    let log_first_odd = 2.0 * ln_gamma(0.5 * n) + (2.0 * x.abs()).ln();
    let odd = sum_positive_series(log_first_odd, ratio(1.0), cfg).map_err(truncation_error)?;
    Ok((even.ln(), Some(odd.ln())))
}

/// C · Σ_k Γ((n−1+k)/2)² (2rρ)^k / k! · exp(log_weight), assembled on the log
/// scale so huge kernels and tiny weights never overflow separately.
fn weighted_kernel(params: &ModelParams, r: f64, log_weight: f64, cfg: &SeriesConfig) -> Result<f64> {
    let x = r * params.rho();
    let (ln_even, ln_odd) = ln_density_series(params.nf(), x, cfg)?;
    let base = ln_prefactor(params) + log_weight;
    let even = (base + ln_even).exp();
    let value = match ln_odd {
        None => even,
        Some(ln_odd) => even + x.signum() * (base + ln_odd).exp(),
    };
    // Alternating partial sums can dip a few ulps below zero far in the tail.
    Ok(value.max(0.0))
}

/// The density f_R(r) for |ρ| < 1.
pub fn density_at(params: &ModelParams, r: f64, cfg: &SeriesConfig) -> Result<f64> {
    if params.is_degenerate() {
        return Err(Error::Degenerate { rho: params.rho() });
    }
    if !(r.is_finite() && (-1.0..=1.0).contains(&r)) {
        return Err(domain(format!("r must lie in [-1, 1], got {r}")));
    }
    let n = params.n();
    let one_minus_r_sq = (1.0 - r) * (1.0 + r);
    let log_weight = match n {
        4 => 0.0,
        3 if one_minus_r_sq == 0.0 => return Ok(f64::INFINITY),
        _ => 0.5 * (n as f64 - 4.0) * one_minus_r_sq.ln(),
    };
    weighted_kernel(params, r, log_weight, cfg)
}

/// E(R^m) by adaptive quadrature of r^m f_R(r), independent of the moment series.
///
/// Integrates in θ with r = sin θ: the weight (1 − r²)^((n−4)/2) dr becomes
/// cos^(n−3) θ dθ, which is smooth for every n (including the n = 3
/// endpoint singularity).
pub fn moment_quadrature(m: u32, params: &ModelParams, cfg: &SeriesConfig) -> Result<f64> {
    if params.is_degenerate() {
        return Err(Error::Degenerate { rho: params.rho() });
    }
    moment_quadrature_with(m, params, cfg, &QuadConfig::default())
}

pub fn moment_quadrature_with(m: u32, params: &ModelParams, cfg: &SeriesConfig, quad: &QuadConfig) -> Result<f64> {
    if params.is_degenerate() {
        return Err(Error::Degenerate { rho: params.rho() });
    }
    let exponent = params.nf() - 3.0;
    let mut failure = None;
    let integrand = |theta: f64| {
        let (r, c) = theta.sin_cos();
        let log_weight = if exponent == 0.0 { 0.0 } else { exponent * c.ln() };
        match weighted_kernel(params, r, log_weight, cfg) {
            Ok(v) => r.powi(m as i32) * v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let result = integrate(integrand, -FRAC_PI_2, FRAC_PI_2, quad);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result?.value)
}

/// var(R) = E(R²) − E(R)².
pub fn exact_variance(params: &ModelParams, cfg: &SeriesConfig) -> Result<f64> {
    if params.is_degenerate() {
        return Ok(0.0);
    }
    let m1 = moment(1, params, cfg)?.value;
    let m2 = moment(2, params, cfg)?.value;
    Ok((m2 - m1 * m1).max(0.0))
}

/// E{(R − ρ)^j} by binomial expansion over series moments.
pub fn central_moment(j: u32, params: &ModelParams, cfg: &SeriesConfig) -> Result<f64> {
    let rho = params.rho();
    let mut total = 0.0;
    let mut binom = 1.0;
    for i in 0..=j {
        let raw = moment(i, params, cfg)?.value;
        total += binom * raw * (-rho).powi((j - i) as i32);
        binom = binom * (j - i) as f64 / (i + 1) as f64;
    }
    Ok(total)
}
