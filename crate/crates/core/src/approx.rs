//! Closed-form approximations of the mean, variance and second moment of R,
//! and the sub-Gaussian moment envelope.

use crate::params::ModelParams;

/// Variance approximation and its two upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBounds {
    /// (1 − ρ²)² / (n − 1)
    pub approx: f64,
    /// [(1 − ρ²)² + (1 − ρ²)] / (n − 1)
    pub upper_conservative: f64,
    /// 2 (1 − ρ²)² / (n − 1)
    pub upper_aggressive: f64,
}

/// √(1 − 1/n) · ρ
pub fn mean_approx(params: &ModelParams) -> f64 {
    (1.0 - 1.0 / params.nf()).sqrt() * params.rho()
}

/// (1 − ρ²)² / (n − 1)
pub fn var_approx(params: &ModelParams) -> f64 {
    let s = params.one_minus_rho_sq();
    s * s / (params.nf() - 1.0)
}

/// ρ² + (1 − ρ²)² / (n − 1)
pub fn second_moment_approx(params: &ModelParams) -> f64 {
    params.rho() * params.rho() + var_approx(params)
}

/// Lower end of the bracket ρ²(1 − 1/n) + (1 − ρ²)²/(n − 1) < E(R²).
pub fn second_moment_lower(params: &ModelParams) -> f64 {
    params.rho() * params.rho() * (1.0 - 1.0 / params.nf()) + var_approx(params)
}

pub fn variance_bounds(params: &ModelParams) -> VarianceBounds {
    let s = params.one_minus_rho_sq();
    let d = params.nf() - 1.0;
    VarianceBounds {
        approx: s * s / d,
        upper_conservative: (s * s + s) / d,
        upper_aggressive: 2.0 * s * s / d,
    }
}

/// (2m)! / (2^m m!) · (√2 ν)^(2m) with ν² = (1 − ρ²)²/(n − 1).
///
/// The Gaussian moment sequence for variance 2ν², used as an envelope for
/// E{(R − ρ)^(2m)}.
pub fn central_even_moment_bound(m: u32, params: &ModelParams) -> f64 {
    // (2m)!/(2^m m!) = (2m − 1)!!
    let double_factorial: f64 = (1..=m).map(|i| (2 * i - 1) as f64).product();
    double_factorial * (2.0 * var_approx(params)).powi(m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(rho: f64, n: u32) -> ModelParams {
        ModelParams::new(rho, n).unwrap()
    }

    fn round3(x: f64) -> f64 {
        (x * 1000.0).round() / 1000.0
    }

    #[test]
    fn mean_examples() {
        assert_eq!(round3(mean_approx(&p(0.95, 10))), 0.901);
        assert_eq!(round3(mean_approx(&p(-0.25, 10))), -0.237);
        assert_eq!(round3(mean_approx(&p(0.95, 3))), 0.776);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(round3(var_approx(&p(0.0, 10)).sqrt()), 0.333);
        assert_eq!(round3(var_approx(&p(0.56, 10)).sqrt()), 0.229);
        assert_eq!(var_approx(&p(1.0, 10)), 0.0);
        assert_eq!(var_approx(&p(-1.0, 4)), 0.0);
    }

    #[test]
    fn second_moment_examples() {
        assert_relative_eq!(second_moment_approx(&p(0.0, 10)), 1.0 / 9.0, max_relative = 1e-15);
        assert_eq!(second_moment_approx(&p(1.0, 10)), 1.0);
        let v = second_moment_approx(&p(0.56, 10));
        assert!((v - (0.3136 + 0.6864f64.powi(2) / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn variance_bound_examples() {
        assert_eq!(round3(variance_bounds(&p(0.0, 10)).upper_conservative.sqrt()), 0.471);
        assert_eq!(round3(variance_bounds(&p(0.56, 10)).upper_conservative.sqrt()), 0.359);
        let b = variance_bounds(&p(1.0, 10));
        assert_eq!((b.approx, b.upper_conservative, b.upper_aggressive), (0.0, 0.0, 0.0));
    }

    #[test]
    fn variance_bound_ordering() {
        for rho in [-0.99, -0.5, 0.0, 0.3, 0.9, 1.0] {
            for n in [3, 10, 100] {
                let b = variance_bounds(&p(rho, n));
                assert!(b.approx <= b.upper_aggressive);
                assert!(b.upper_aggressive <= b.upper_conservative + 1e-15);
                assert!(b.approx >= 0.0);
            }
        }
    }

    #[test]
    fn envelope_examples() {
        assert_relative_eq!(
            central_even_moment_bound(1, &p(0.0, 10)),
            2.0 / 9.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            central_even_moment_bound(2, &p(0.0, 10)),
            4.0 / 27.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            central_even_moment_bound(3, &p(0.0, 10)),
            15.0 * 8.0 / 729.0,
            max_relative = 1e-15
        );
    }
}
