//! Statistical and structural properties of the simulator and estimator.

use levy_greeks::estimator::{estimate_greeks, estimate_price, run, Quantity, RunConfig};
use levy_greeks::functionals::compute_functionals;
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::payoffs::{PayoffKind, PayoffSpec, Style};
use levy_greeks::simulate::{simulate_path, GridSpec};
use levy_greeks::stream::derive_stream;
use levy_greeks::weights::{Formulas, GreekKind};
use proptest::prelude::*;

fn marks() -> impl Strategy<Value = JumpMarkSpec> {
    prop_oneof![
        (-0.3f64..0.3, 0.01f64..0.4).prop_map(|(mean, std_dev)| JumpMarkSpec::Normal { mean, std_dev }),
        (-0.4f64..0.4).prop_map(|value| JumpMarkSpec::PointMass { value }),
        (-0.4f64..0.0, 0.0f64..0.4).prop_map(|(low, high)| JumpMarkSpec::Uniform { low, high }),
    ]
}

fn model() -> impl Strategy<Value = ModelParams> {
    (10.0f64..300.0, -0.05f64..0.15, 0.05f64..1.0, 0.05f64..4.0, 0.0f64..3.0, 0.0f64..2.0, marks())
        .prop_map(|(x, r, sigma, t, lambda, alpha, m)| {
            ModelParams::black_scholes(x, r, sigma, t)
                .with_jumps(lambda, alpha, m)
                .risk_neutral()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functional_ordering(p in model(), steps in 1usize..40, seed in any::<u64>()) {
        let t = p.maturity;
        for i in 0..20 {
            let path = simulate_path(&p, GridSpec::new(steps).unwrap(), &derive_stream(seed, i));
            let f = compute_functionals(&path);
            let slack = 1.0 + 1e-12;
            prop_assert!(f.i0 > 0.0);
            prop_assert!(f.i1 <= t * f.i0 * slack);
            prop_assert!(f.i2 <= t * f.i1 * slack);
            prop_assert!(f.i3 <= t * f.i2 * slack);
            prop_assert!(f.i1 * f.i1 <= f.i0 * f.i2 * slack);
        }
    }

    #[test]
    fn nodes_are_ordered_and_consistent(p in model(), steps in 1usize..20, seed in any::<u64>()) {
        let path = simulate_path(&p, GridSpec::new(steps).unwrap(), &derive_stream(seed, 0));
        prop_assert_eq!(path.nodes[0].t, 0.0);
        prop_assert!((path.terminal().t - p.maturity).abs() <= 1e-12 * p.maturity);
        prop_assert!(path.nodes.windows(2).all(|w| w[0].t < w[1].t));
        prop_assert!(path.nodes.iter().all(|n| n.x_left > 0.0 && n.x_right > 0.0));
        prop_assert_eq!(path.terminal().w, path.w_terminal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn worker_count_never_changes_results(seed in any::<u64>(), n in 1u64..6000) {
        let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
            .with_jumps(0.5, 1.0, JumpMarkSpec::Uniform { low: -0.2, high: 0.1 })
            .risk_neutral();
        let payoff = PayoffSpec::asian_put(100.0);
        let base = RunConfig::new(n, 4, seed);
        let results: Vec<_> = [1, 2, 8]
            .iter()
            .map(|&w| estimate_greeks(&p, &payoff, &GreekKind::ALL, &Formulas::default(), &base.with_workers(w)).unwrap())
            .collect();
        for r in &results[1..] {
            for (a, b) in r.iter().zip(&results[0]) {
                prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
                prop_assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
            }
        }
    }
}

#[test]
fn discounted_price_is_a_martingale() {
    let linear = PayoffSpec::new(PayoffKind::Linear, 0.0, Style::European);
    for (k, marks) in [
        JumpMarkSpec::Normal { mean: -0.1, std_dev: 0.2 },
        JumpMarkSpec::PointMass { value: 0.15 },
        JumpMarkSpec::Uniform { low: -0.3, high: 0.1 },
    ]
    .into_iter()
    .enumerate()
    {
        let p = ModelParams::black_scholes(100.0, 0.04, 0.3, 2.0)
            .with_jumps(1.5, 0.8, marks)
            .risk_neutral();
        let e = estimate_price(&p, &linear, &RunConfig::new(200_000, 1, k as u64)).unwrap();
        assert!((e.value - 100.0).abs() < 4.0 * e.std_error, "{marks:?}: {} ± {}", e.value, e.std_error);
    }
}

#[test]
fn jump_counts_have_poisson_moments() {
    let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.5)
        .with_jumps(2.0, 1.0, JumpMarkSpec::Normal { mean: 0.0, std_dev: 0.1 });
    let n = 100_000u64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for i in 0..n {
        let c = simulate_path(&p, GridSpec::new(2).unwrap(), &derive_stream(11, i)).jump_count() as f64;
        s1 += c;
        s2 += c * c;
    }
    let mean = s1 / n as f64;
    let var = s2 / n as f64 - mean * mean;
    // λT = 3
    assert!((mean - 3.0).abs() < 4.0 * (3.0 / n as f64).sqrt(), "mean {mean}");
    assert!((var - 3.0).abs() < 0.1, "variance {var}");
}

#[test]
fn bridge_values_at_jump_times_have_brownian_moments() {
    // W at an inserted jump node is a bridge draw; W_τ / √τ must be standard normal.
    let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
        .with_jumps(3.0, 1.0, JumpMarkSpec::PointMass { value: 0.0 });
    let grid = GridSpec::new(4).unwrap();
    let (mut n, mut s1, mut s2, mut s4) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..50_000u64 {
        let path = simulate_path(&p, grid, &derive_stream(12, i));
        for node in &path.nodes {
            let on_grid = (node.t * 4.0 - (node.t * 4.0).round()).abs() < 1e-12;
            if node.t > 0.0 && !on_grid {
                let z = node.w / node.t.sqrt();
                n += 1.0;
                s1 += z;
                s2 += z * z;
                s4 += z.powi(4);
            }
        }
    }
    assert!(n > 100_000.0);
    let (m1, m2, m4) = (s1 / n, s2 / n, s4 / n);
    assert!(m1.abs() < 4.0 / n.sqrt(), "mean {m1}");
    assert!((m2 - 1.0).abs() < 4.0 * (2.0 / n).sqrt(), "variance {m2}");
    assert!((m4 - 3.0).abs() < 0.1, "fourth moment {m4}");
}

#[test]
fn standard_error_halves_when_paths_quadruple() {
    let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0);
    let q = [Quantity::Price(PayoffSpec::asian_call(100.0))];
    for seed in 0..5 {
        let a = run(&p, &q, &RunConfig::new(20_000, 8, seed)).unwrap()[0].std_error;
        let b = run(&p, &q, &RunConfig::new(80_000, 8, seed)).unwrap()[0].std_error;
        assert!((b / a - 0.5).abs() < 0.1, "ratio {}", b / a);
    }
}

#[test]
fn antithetic_pairs_reduce_variance_of_monotone_payoffs() {
    let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0);
    let payoff = PayoffSpec::european_call(100.0);
    let plain = estimate_price(&p, &payoff, &RunConfig::new(100_000, 1, 1)).unwrap();
    let anti = estimate_price(&p, &payoff, &RunConfig::new(100_000, 1, 1).with_antithetic(true)).unwrap();
    assert!(anti.std_error < plain.std_error);
    assert!((anti.value - 10.4506).abs() < 4.0 * anti.std_error);
}
