mod common;

use common::p;
use corrconc::conc::{coverage_interval, tail_bound, TailBoundKind};
use proptest::prelude::*;

use TailBoundKind::{Aggressive, Bernstein, Conservative, MegaAggressive};

fn raw(kind: TailBoundKind, rho: f64, n: u32, t: f64) -> f64 {
    tail_bound(kind, &p(rho, n), t).unwrap().raw
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sub_gaussian_ordering(rho in -0.999f64..0.999, n in 3u32..500, t in 1e-4f64..2.0) {
        let c0 = raw(Conservative, rho, n, t);
        let c1 = raw(Aggressive, rho, n, t);
        let c2 = raw(MegaAggressive, rho, n, t);
        prop_assert!(c0 >= c1 && c1 >= c2);
        prop_assert!(c2 <= 2.0 * (-(n as f64) * t * t / 2.0).exp() * (1.0 + 1e-12));
    }

    #[test]
    fn monotone_in_t_and_n(rho in -0.99f64..0.99, n in 3u32..500, t in 1e-3f64..1.0) {
        for kind in TailBoundKind::ALL {
            prop_assert!(raw(kind, rho, n, 1.5 * t) <= raw(kind, rho, n, t));
            prop_assert!(raw(kind, rho, n + 1, t) <= raw(kind, rho, n, t));
        }
    }

    #[test]
    fn interval_round_trip(rho in -0.99f64..0.99, n in 3u32..500, alpha in 1e-6f64..0.99) {
        for kind in TailBoundKind::ALL {
            let iv = coverage_interval(kind, &p(rho, n), alpha).unwrap();
            let back = tail_bound(kind, &p(rho, n), iv.half_width).unwrap().raw;
            prop_assert!((back - alpha).abs() <= 1e-10 * alpha.max(1e-2), "{kind} {back} {alpha}");
        }
    }

    #[test]
    fn width_scales_with_one_minus_rho_sq(rho in -0.99f64..0.99, n in 3u32..500) {
        for kind in TailBoundKind::SUB_GAUSSIAN {
            let w = coverage_interval(kind, &p(rho, n), 0.05).unwrap().width();
            let w0 = coverage_interval(kind, &p(0.0, n), 0.05).unwrap().width();
            prop_assert!((w / w0 - (1.0 - rho * rho)).abs() < 1e-12);
        }
    }
}

#[test]
fn bernstein_is_vacuous_at_desk_scale() {
    // 2 exp(−n t² / (2(1 + 2nt))) > 2 exp(−t/4) ≥ 1.21 for t ≤ 2, whatever n.
    for n in [3, 10, 100, 10_000] {
        for t in [0.01, 0.1, 0.5, 1.0, 2.0] {
            assert!(raw(Bernstein, 0.5, n, t) > 1.2);
            assert_eq!(tail_bound(Bernstein, &p(0.5, n), t).unwrap().clamped, 1.0);
        }
    }
}

#[test]
fn nested_intervals() {
    for rho in [0.0, 0.56, -0.75, 0.95] {
        let params = p(rho, 10);
        let c0 = coverage_interval(Conservative, &params, 0.05).unwrap();
        let c1 = coverage_interval(Aggressive, &params, 0.05).unwrap();
        let c2 = coverage_interval(MegaAggressive, &params, 0.05).unwrap();
        assert!(c0.lower <= c1.lower && c1.lower <= c2.lower);
        assert!(c2.upper <= c1.upper && c1.upper <= c0.upper);
    }
}
