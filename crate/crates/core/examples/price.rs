//! European and Asian prices under a Merton-type jump-diffusion, with the
//! European call checked against the Poisson-mixture series.

use levy_greeks::estimator::{estimate_price, RunConfig};
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::oracles::merton_price;
use levy_greeks::payoffs::{PayoffKind, PayoffSpec};

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
        .with_jumps(0.3, 1.0, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
        .risk_neutral();
    let cfg = RunConfig::new(200_000, 64, 2024);

    for payoff in [
        PayoffSpec::european_call(100.0),
        PayoffSpec::european_put(100.0),
        PayoffSpec::asian_call(100.0),
        PayoffSpec::asian_put(100.0),
    ] {
        let est = estimate_price(&model, &payoff, &cfg)?;
        println!(
            "{:9} {:?}: {:.4} ± {:.4}",
            payoff.style.as_str(),
            payoff.kind,
            est.value,
            est.ci_half_width
        );
    }
    println!("series call: {:.4}", merton_price(&model, 100.0, PayoffKind::Call)?);
    Ok(())
}
