//! The closed-form scalar KL divergences checked against independent
//! numeric oracles (series summation and adaptive quadrature) on a dense
//! grid, plus the sandwich-constant scan.

mod support;

use nmf_rlct_core::divergence::{
    kl_exponential_scalar, kl_poisson_scalar, sandwich_constants, Family,
};
use support::{exponential_kl_quadrature, poisson_kl_series};

fn grid_50() -> Vec<f64> {
    (0..50).map(|i| 0.1 + i as f64 * (9.9 / 49.0)).collect()
}

#[test]
fn poisson_matches_series_oracle_on_grid() {
    let grid = grid_50();
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &a in &grid {
        for &b in &grid {
            let closed = kl_poisson_scalar(a, b).unwrap();
            let oracle = poisson_kl_series(a, b);
            let err = (closed - oracle).abs();
            if err > worst.2 {
                worst = (a, b, err);
            }
        }
    }
    assert!(
        worst.2 <= 1e-8,
        "worst Poisson oracle disagreement {:.3e} at (a, b) = ({}, {})",
        worst.2,
        worst.0,
        worst.1
    );
}

#[test]
fn exponential_matches_quadrature_oracle_on_grid() {
    let grid = grid_50();
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &a in &grid {
        for &b in &grid {
            let closed = kl_exponential_scalar(a, b).unwrap();
            let oracle = exponential_kl_quadrature(a, b);
            let err = (closed - oracle).abs();
            if err > worst.2 {
                worst = (a, b, err);
            }
        }
    }
    assert!(
        worst.2 <= 1e-8,
        "worst exponential oracle disagreement {:.3e} at (a, b) = ({}, {})",
        worst.2,
        worst.0,
        worst.1
    );
}

#[test]
fn oracle_values_at_frozen_examples() {
    // The same example points the closed forms pin in unit tests, evaluated
    // through the oracles: KL(Poi(1)‖Poi(2)) = 1 − log 2,
    // KL(Poi(3)‖Poi(1)) = −2 + 3·log 3, KL(Exp(1)‖Exp(2)) = log 2 − 1/2.
    assert!((poisson_kl_series(1.0, 2.0) - (1.0 - 2.0f64.ln())).abs() < 1e-12);
    assert!((poisson_kl_series(3.0, 1.0) - (-2.0 + 3.0 * 3.0f64.ln())).abs() < 1e-12);
    assert!((exponential_kl_quadrature(1.0, 2.0) - (2.0f64.ln() - 0.5)).abs() < 1e-9);
}

#[test]
fn sandwich_ratios_bounded_on_half_two_box() {
    // On [0.5, 2]² the ratio K/(b−a)² must stay inside a bounded positive
    // interval for every family (the testable form of the RLCT-equivalence
    // sandwich). Gaussian is exactly 1/2; the positive families bracket it.
    for family in [Family::Gaussian, Family::Poisson, Family::Exponential] {
        let (lo, hi) = sandwich_constants(family, 0.5, 2.0).unwrap();
        assert!(lo > 0.0, "{family}: lower constant {lo}");
        assert!(hi.is_finite() && hi >= lo, "{family}: constants ({lo}, {hi})");
    }
    let (g_lo, g_hi) = sandwich_constants(Family::Gaussian, 0.5, 2.0).unwrap();
    assert_eq!((g_lo, g_hi), (0.5, 0.5));
    // Frozen brackets for the positive families on this box. The extremes
    // sit near the diagonal: the Poisson ratio tends to 1/(2a) there
    // (range [1/4, 1] on this box) and the exponential ratio to 1/(2b²)
    // (range [1/8, 2]).
    let (p_lo, p_hi) = sandwich_constants(Family::Poisson, 0.5, 2.0).unwrap();
    assert!(p_lo > 0.20 && p_lo < 0.30, "Poisson lower {p_lo}");
    assert!(p_hi > 0.90 && p_hi < 1.01, "Poisson upper {p_hi}");
    let (e_lo, e_hi) = sandwich_constants(Family::Exponential, 0.5, 2.0).unwrap();
    assert!(e_lo > 0.11 && e_lo < 0.15, "exponential lower {e_lo}");
    assert!(e_hi > 1.50 && e_hi < 2.05, "exponential upper {e_hi}");
}
