use crate::error::{domain, Result};

/// Population correlation `rho` and sample size `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    rho: f64,
    n: u32,
}

impl ModelParams {
    /// Requires -1 ≤ rho ≤ 1 and n ≥ 3.
    pub fn new(rho: f64, n: u32) -> Result<Self> {
        if !(rho.is_finite() && (-1.0..=1.0).contains(&rho)) {
            return Err(domain(format!("rho must lie in [-1, 1], got {rho}")));
        }
        if n < 3 {
            return Err(domain(format!("sample size must be at least 3, got {n}")));
        }
        Ok(Self { rho, n })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub(crate) fn nf(&self) -> f64 {
        self.n as f64
    }

    /// |rho| = 1: R = rho almost surely.
    pub fn is_degenerate(&self) -> bool {
        self.rho.abs() == 1.0
    }

    /// 1 − ρ², computed without cancellation near |ρ| = 1.
    pub fn one_minus_rho_sq(&self) -> f64 {
        (1.0 - self.rho) * (1.0 + self.rho)
    }
}
