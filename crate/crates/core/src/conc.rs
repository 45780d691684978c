//! Tail bounds for |R − ρ| and the symmetric coverage intervals they induce.
//!
//! All four bounds have the form `2 exp(−e(t))`:
//!
//! | kind            | e(t)                         |
//! |-----------------|------------------------------|
//! | Bernstein       | n t² / (2 (1 + 2 n t))       |
//! | Conservative    | n t² / (8 (1 − ρ²)²)         |
//! | Aggressive      | n t² / (4 (1 − ρ²)²)         |
//! | MegaAggressive  | n t² / (2 (1 − ρ²)²)         |
//!
//! Only the Bernstein bound is a proven inequality; the other three are
//! large-sample approximations.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::exactdist::{moment, SeriesConfig};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TailBoundKind {
    Bernstein,
    /// C₀, divisor 8.
    Conservative,
    /// C₁, divisor 4.
    Aggressive,
    /// C₂, divisor 2.
    MegaAggressive,
}

impl TailBoundKind {
    pub const ALL: [TailBoundKind; 4] = [
        TailBoundKind::Bernstein,
        TailBoundKind::Conservative,
        TailBoundKind::Aggressive,
        TailBoundKind::MegaAggressive,
    ];

    pub const SUB_GAUSSIAN: [TailBoundKind; 3] = [
        TailBoundKind::Conservative,
        TailBoundKind::Aggressive,
        TailBoundKind::MegaAggressive,
    ];

    /// The constant c in n t² / (c (1 − ρ²)²); `None` for Bernstein.
    pub fn divisor(self) -> Option<f64> {
        match self {
            TailBoundKind::Bernstein => None,
            TailBoundKind::Conservative => Some(8.0),
            TailBoundKind::Aggressive => Some(4.0),
            TailBoundKind::MegaAggressive => Some(2.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TailBoundKind::Bernstein => "bernstein",
            TailBoundKind::Conservative => "c0",
            TailBoundKind::Aggressive => "c1",
            TailBoundKind::MegaAggressive => "c2",
        }
    }
}

impl fmt::Display for TailBoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TailBoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bernstein" => Ok(TailBoundKind::Bernstein),
            "c0" | "conservative" => Ok(TailBoundKind::Conservative),
            "c1" | "aggressive" => Ok(TailBoundKind::Aggressive),
            "c2" | "mega-aggressive" | "megaaggressive" => Ok(TailBoundKind::MegaAggressive),
            other => Err(domain(format!("unknown bound kind '{other}'"))),
        }
    }
}

/// Which Bernstein exponent to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BernsteinForm {
    /// n t² / (2 (1 + 2 n t)), centred at ρ.
    #[default]
    Statement,
    /// t² / (2 (ν² + 2 t)) with ν² = 1/(n − 1), centred at E(R).
    Proof,
}

/// A tail bound value. `raw` may exceed one; `clamped = min(1, raw)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub raw: f64,
    pub clamped: f64,
    /// |ρ| = 1 with a sub-Gaussian kind: R = ρ surely and the bound is 0.
    pub degenerate: bool,
}

impl TailBound {
    fn from_exponent(e: f64, degenerate: bool) -> Self {
        let raw = 2.0 * (-e).exp();
        Self {
            raw,
            clamped: raw.min(1.0),
            degenerate,
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("t must be positive and finite, got {t}")))
    }
}

/// e(t) such that the bound equals 2 exp(−e(t)).
fn exponent(kind: TailBoundKind, params: &ModelParams, t: f64) -> f64 {
    let n = params.nf();
    match kind.divisor() {
        None => n * t * t / (2.0 * (1.0 + 2.0 * n * t)),
        Some(c) => {
            let s = params.one_minus_rho_sq();
            n * t * t / (c * s * s)
        }
    }
}

/// Bound on Pr(|R − ρ| > t).
pub fn tail_bound(kind: TailBoundKind, params: &ModelParams, t: f64) -> Result<TailBound> {
    check_t(t)?;
    let degenerate = kind != TailBoundKind::Bernstein && params.is_degenerate();
    Ok(TailBound::from_exponent(exponent(kind, params, t), degenerate))
}

/// The Bernstein bound in either of its two forms.
pub fn bernstein_bound(form: BernsteinForm, params: &ModelParams, t: f64) -> Result<TailBound> {
    check_t(t)?;
    let e = match form {
        BernsteinForm::Statement => exponent(TailBoundKind::Bernstein, params, t),
        BernsteinForm::Proof => {
            let nu_sq = 1.0 / (params.nf() - 1.0);
            t * t / (2.0 * (nu_sq + 2.0 * t))
        }
    };
    Ok(TailBound::from_exponent(e, false))
}

/// Symmetric interval (ρ − t, ρ + t) where the chosen bound equals α.
///
/// `lower`/`upper` are the raw endpoints and may leave [−1, 1]; see
/// [`Interval::clipped_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub half_width: f64,
    /// Nominal coverage 1 − α.
    pub level: f64,
    pub kind: TailBoundKind,
    pub clipped: bool,
}

impl Interval {
    fn around(rho: f64, t: f64, alpha: f64, kind: TailBoundKind) -> Self {
        let lower = rho - t;
        let upper = rho + t;
        Self {
            lower,
            upper,
            half_width: t,
            level: 1.0 - alpha,
            kind,
            clipped: lower < -1.0 || upper > 1.0,
        }
    }

    /// Closed-interval membership against the raw endpoints.
    pub fn contains(&self, r: f64) -> bool {
        self.lower <= r && r <= self.upper
    }

    pub fn clipped_bounds(&self) -> (f64, f64) {
        (self.lower.max(-1.0), self.upper.min(1.0))
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// ln(2/α), the exponent value the bound must reach.
fn target_exponent(alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    if alpha >= 2.0 {
        return Err(Error::Infeasible { alpha });
    }
    Ok((2.0 / alpha).ln())
}

/// t = (1 − ρ²) √(c ln(2/α) / n) for the sub-Gaussian kinds.
pub fn closed_form_half_width(kind: TailBoundKind, params: &ModelParams, alpha: f64) -> Result<Option<f64>> {
    let target = target_exponent(alpha)?;
    Ok(kind
        .divisor()
        .map(|c| params.one_minus_rho_sq() * (c * target / params.nf()).sqrt()))
}

/// Solves bound(t) = α by bracketing and bisection, for any kind.
pub fn invert_tail_numeric(kind: TailBoundKind, params: &ModelParams, alpha: f64) -> Result<f64> {
    let target = target_exponent(alpha)?;
    if kind != TailBoundKind::Bernstein && params.is_degenerate() {
        return Ok(0.0);
    }
    // e(t) is strictly increasing from e(0) = 0.
    let e = |t: f64| exponent(kind, params, t);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while e(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Infeasible { alpha });
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if e(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever endpoint lands closer to α.
    let gap = |t: f64| (2.0 * (-e(t)).exp() - alpha).abs();
    Ok(if gap(lo) <= gap(hi) { lo } else { hi })
}

/// Coverage interval at level 1 − α. Closed form for the sub-Gaussian kinds,
/// root finding for Bernstein.
pub fn coverage_interval(kind: TailBoundKind, params: &ModelParams, alpha: f64) -> Result<Interval> {
    target_exponent(alpha)?;
    if alpha >= 1.0 {
        return Err(domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let t = match closed_form_half_width(kind, params, alpha)? {
        Some(t) => t,
        None => invert_tail_numeric(kind, params, alpha)?,
    };
    Ok(Interval::around(params.rho(), t, alpha, kind))
}

/// Σ_{j=m+1}^{2m} C(2m, j) (−1)^j {E(R²)}^j (ρ²)^(m−j), the sum the tightest
/// bound treats as negligible. Reported only; it has no error bound.
pub fn semi_telescopic_residual(m: u32, params: &ModelParams, cfg: &SeriesConfig) -> Result<f64> {
    let rho_sq = params.rho() * params.rho();
    if rho_sq == 0.0 {
        return Err(domain("residual involves negative powers of rho; undefined at rho = 0"));
    }
    let second = moment(2, params, cfg)?.value;
    let two_m = 2 * m;
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=two_m {
        if j > m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += binom * sign * second.powi(j as i32) * rho_sq.powi(m as i32 - j as i32);
        }
        binom = binom * (two_m - j) as f64 / (j + 1) as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(rho: f64, n: u32) -> ModelParams {
        ModelParams::new(rho, n).unwrap()
    }

    const LN40: f64 = 3.688_879_454_113_936;

    #[test]
    fn bernstein_near_zero() {
        let b = tail_bound(TailBoundKind::Bernstein, &p(0.3, 10), 1e-12).unwrap();
        assert!((b.raw - 2.0).abs() < 1e-9);
        assert_eq!(b.clamped, 1.0);
    }

    #[test]
    fn mega_aggressive_at_known_t() {
        let t = (2.0 * LN40 / 10.0).sqrt();
        assert!((t - 0.8595).abs() < 1e-3);
        let b = tail_bound(TailBoundKind::MegaAggressive, &p(0.0, 10), t).unwrap();
        assert_relative_eq!(b.raw, 0.05, max_relative = 1e-13);
    }

    #[test]
    fn tighter_when_rho_near_one() {
        let k = TailBoundKind::Conservative;
        let hi = tail_bound(k, &p(0.95, 10), 0.1).unwrap().raw;
        let mid = tail_bound(k, &p(0.56, 10), 0.1).unwrap().raw;
        assert!(hi < mid);
    }

    #[test]
    fn degenerate_sub_gaussian_is_zero() {
        let b = tail_bound(TailBoundKind::Aggressive, &p(1.0, 10), 0.1).unwrap();
        assert_eq!(b.raw, 0.0);
        assert!(b.degenerate);
        let b = tail_bound(TailBoundKind::Bernstein, &p(1.0, 10), 0.1).unwrap();
        assert!(!b.degenerate && b.raw > 0.0);
        let iv = coverage_interval(TailBoundKind::MegaAggressive, &p(-1.0, 10), 0.05).unwrap();
        assert_eq!((iv.lower, iv.upper), (-1.0, -1.0));
    }

    #[test]
    fn rejects_bad_t() {
        for t in [0.0, -1.0, f64::NAN] {
            assert!(tail_bound(TailBoundKind::Bernstein, &p(0.0, 10), t).is_err());
        }
    }

    #[test]
    fn interval_examples() {
        let iv = coverage_interval(TailBoundKind::Conservative, &p(0.0, 10), 0.05).unwrap();
        assert!((iv.half_width - (8.0 * LN40 / 10.0).sqrt()).abs() < 1e-14);
        assert!((iv.half_width - 1.7179).abs() < 1e-4);
        assert!(iv.clipped);
        assert_eq!(iv.clipped_bounds(), (-1.0, 1.0));

        let iv = coverage_interval(TailBoundKind::MegaAggressive, &p(0.95, 10), 0.05).unwrap();
        assert!((iv.half_width - 0.0838).abs() < 1e-4);
        let back = tail_bound(TailBoundKind::MegaAggressive, &p(0.95, 10), iv.half_width).unwrap();
        assert!((back.raw - 0.05).abs() < 1e-12);
        // 0.95 + 0.0838 pokes past 1.
        assert!(iv.clipped);
        assert_eq!(iv.clipped_bounds().1, 1.0);

        for kind in TailBoundKind::ALL {
            let iv = coverage_interval(kind, &p(0.0, 10), 0.05).unwrap();
            assert_eq!(iv.lower, -iv.upper);
            assert_relative_eq!(iv.level, 0.95);
        }
    }

    #[test]
    fn alpha_validation() {
        let params = p(0.3, 10);
        assert!(matches!(
            coverage_interval(TailBoundKind::Aggressive, &params, 2.0),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            invert_tail_numeric(TailBoundKind::Bernstein, &params, 3.0),
            Err(Error::Infeasible { .. })
        ));
        assert!(coverage_interval(TailBoundKind::Aggressive, &params, 0.0).is_err());
        assert!(coverage_interval(TailBoundKind::Aggressive, &params, 1.5).is_err());
        // Inversion alone accepts any α < 2.
        assert!(invert_tail_numeric(TailBoundKind::Aggressive, &params, 1.5).is_ok());
    }

    #[test]
    fn numeric_inversion_matches_closed_form() {
        let params = p(0.56, 10);
        let closed = closed_form_half_width(TailBoundKind::Aggressive, &params, 0.05)
            .unwrap()
            .unwrap();
        let numeric = invert_tail_numeric(TailBoundKind::Aggressive, &params, 0.05).unwrap();
        assert!((closed - numeric).abs() < 1e-10);

        let t = invert_tail_numeric(TailBoundKind::MegaAggressive, &p(0.0, 100), 0.05).unwrap();
        assert!((t - (2.0 * LN40 / 100.0).sqrt()).abs() < 1e-10);
        assert!((t - 0.2717).abs() < 1e-4);
    }

    #[test]
    fn bernstein_root_is_unique_and_round_trips() {
        let params = p(0.4, 10);
        let t = invert_tail_numeric(TailBoundKind::Bernstein, &params, 0.05).unwrap();
        let b = tail_bound(TailBoundKind::Bernstein, &params, t).unwrap();
        assert!((b.raw - 0.05).abs() < 1e-12);
        assert!(tail_bound(TailBoundKind::Bernstein, &params, 0.99 * t).unwrap().raw > 0.05);
        assert!(tail_bound(TailBoundKind::Bernstein, &params, 1.01 * t).unwrap().raw < 0.05);
        // Independent of rho.
        let other = invert_tail_numeric(TailBoundKind::Bernstein, &p(-0.9, 10), 0.05).unwrap();
        assert_eq!(t, other);
    }

    #[test]
    fn bernstein_forms_differ() {
        let params = p(0.0, 10);
        let stmt = bernstein_bound(BernsteinForm::Statement, &params, 0.5).unwrap();
        let proof = bernstein_bound(BernsteinForm::Proof, &params, 0.5).unwrap();
        assert_eq!(stmt, tail_bound(TailBoundKind::Bernstein, &params, 0.5).unwrap());
        assert!(stmt.raw != proof.raw);
        assert!(stmt.raw > 0.0 && proof.raw > 0.0);
    }

    #[test]
    fn kind_round_trips_through_labels() {
        for kind in TailBoundKind::ALL {
            assert_eq!(kind.label().parse::<TailBoundKind>().unwrap(), kind);
        }
        assert!("c3".parse::<TailBoundKind>().is_err());
    }

    #[test]
    fn residual_needs_nonzero_rho() {
        let cfg = SeriesConfig::default();
        assert!(semi_telescopic_residual(2, &p(0.0, 30), &cfg).is_err());
        let r = semi_telescopic_residual(2, &p(0.56, 30), &cfg).unwrap();
        assert!(r.is_finite());
    }
}
