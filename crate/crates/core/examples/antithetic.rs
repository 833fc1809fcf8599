//! Variance reduction from antithetic Brownian increments. Jump draws are
//! shared within a pair; only the Gaussian parts are negated.

use levy_greeks::estimator::{estimate_greek, estimate_price, RunConfig};
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::payoffs::PayoffSpec;
use levy_greeks::weights::GreekKind;

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
        .with_jumps(0.3, 1.0, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
        .risk_neutral();
    let payoff = PayoffSpec::european_call(100.0);
    for antithetic in [false, true] {
        let cfg = RunConfig::new(200_000, 1, 1).with_antithetic(antithetic);
        let price = estimate_price(&model, &payoff, &cfg)?;
        let delta = estimate_greek(&model, &payoff, GreekKind::Delta, &cfg)?;
        println!(
            "antithetic={antithetic:5}  price {:.4} (se {:.4})  delta {:.4} (se {:.4})",
            price.value, price.std_error, delta.value, delta.std_error
        );
    }
    Ok(())
}
