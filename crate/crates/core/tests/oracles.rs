//! Monte Carlo estimators against the independent oracles.

use levy_greeks::estimator::{estimate_greek, run, Quantity, RunConfig};
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::oracles::{bs_price_and_greeks, fd_greek, merton_price, FdSpec};
use levy_greeks::payoffs::{PayoffKind, PayoffSpec, Style};
use levy_greeks::weights::{Formulas, GreekKind};

fn bs() -> ModelParams {
    ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
}

#[test]
fn fd_delta_matches_black_scholes() {
    let g = fd_greek(
        &bs(),
        &PayoffSpec::european_call(100.0),
        GreekKind::Delta,
        &FdSpec::for_greek(GreekKind::Delta),
        &RunConfig::new(1_000_000, 1, 101),
    )
    .unwrap();
    assert!((g.value - 0.63683).abs() < 3.0 * g.std_error, "{} ± {}", g.value, g.std_error);
}

#[test]
fn fd_delta_of_linear_payoff_is_one() {
    let p = bs()
        .with_jumps(0.4, 1.0, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
        .risk_neutral();
    let linear = PayoffSpec::new(PayoffKind::Linear, 0.0, Style::European);
    let g = fd_greek(&p, &linear, GreekKind::Delta, &FdSpec::for_greek(GreekKind::Delta), &RunConfig::new(200_000, 1, 5))
        .unwrap();
    assert!((g.value - 1.0).abs() < 3.0 * g.std_error);
}

#[test]
fn fd_gamma_agrees_with_bumped_malliavin_delta() {
    let payoff = PayoffSpec::european_call(100.0);
    let cfg = RunConfig::new(400_000, 1, 17);
    let h = 1.0;
    let at = |x: f64| estimate_greek(&ModelParams { x, ..bs() }, &payoff, GreekKind::Delta, &cfg).unwrap();
    let (up, down) = (at(100.0 + h), at(100.0 - h));
    // both sides reuse the same draws, so their errors are strongly correlated;
    // the bound below ignores that and is conservative
    let via_delta = (up.value - down.value) / (2.0 * h);
    let se_delta = (up.std_error.powi(2) + down.std_error.powi(2)).sqrt() / (2.0 * h);
    let fd = fd_greek(&bs(), &payoff, GreekKind::Gamma, &FdSpec::for_greek(GreekKind::Gamma).with_relative_bump(0.01), &cfg)
        .unwrap();
    let z = (via_delta - fd.value) / (se_delta.powi(2) + fd.std_error.powi(2)).sqrt();
    assert!(z.abs() < 3.0, "via Δ {via_delta}, second difference {}, z {z}", fd.value);
}

#[test]
fn european_price_matches_merton_series() {
    let p = bs()
        .with_jumps(0.3, 1.0, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
        .risk_neutral();
    for kind in [PayoffKind::Call, PayoffKind::Put] {
        let payoff = PayoffSpec::new(kind, 100.0, Style::European);
        let s = run(&p, &[Quantity::Price(payoff)], &RunConfig::new(300_000, 4, 8)).unwrap();
        let exact = merton_price(&p, 100.0, kind).unwrap();
        assert!((s[0].value - exact).abs() < 3.0 * s[0].std_error, "{kind:?}: {} vs {exact}", s[0].value);
    }
}

#[test]
fn black_scholes_put_greeks() {
    let exact = bs_price_and_greeks(100.0, 110.0, 0.05, 0.2, 1.0, PayoffKind::Put);
    let payoff = PayoffSpec::european_put(110.0);
    let qs: Vec<Quantity> = [GreekKind::Delta, GreekKind::Vega, GreekKind::Rho, GreekKind::Theta, GreekKind::Gamma]
        .into_iter()
        .map(|greek| Quantity::Malliavin { payoff, greek, formulas: Formulas::default() })
        .collect();
    let s = run(&bs(), &qs, &RunConfig::new(400_000, 1, 23)).unwrap();
    let targets = [exact.delta, exact.vega, exact.rho, exact.theta, exact.gamma];
    for (est, target) in s.iter().zip(targets) {
        assert!((est.value - target).abs() < 3.0 * est.std_error, "{} vs {target}", est.value);
    }
}

#[test]
fn theta_with_jumps_and_drift_correction_matches_finite_difference() {
    // γ̃ ≠ 0 and λ > 0: the regime where only the full maturity score is unbiased
    let p = bs()
        .with_jumps(1.0, 1.0, JumpMarkSpec::PointMass { value: -0.1 })
        .with_gamma_tilde(0.03);
    let payoff = PayoffSpec::european_call(100.0);
    let qs = [
        Quantity::Malliavin { payoff, greek: GreekKind::Theta, formulas: Formulas::default() },
        Quantity::FiniteDifference { payoff, greek: GreekKind::Theta, fd: FdSpec::for_greek(GreekKind::Theta) },
    ];
    let s = run(&p, &qs, &RunConfig::new(400_000, 1, 29)).unwrap();
    let z = (s[0].value - s[1].value) / (s[0].std_error.powi(2) + s[1].std_error.powi(2)).sqrt();
    assert!(z.abs() < 3.0, "malliavin {} fd {} z {z}", s[0].value, s[1].value);
}
