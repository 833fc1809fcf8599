//! All six Greeks of an arithmetic-average Asian call with jumps, from one
//! set of simulated paths.

use levy_greeks::estimator::{estimate_greeks, RunConfig};
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::payoffs::PayoffSpec;
use levy_greeks::weights::{Formulas, GreekKind};

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.25, 1.0)
        .with_jumps(0.5, 1.0, JumpMarkSpec::Uniform { low: -0.15, high: 0.05 })
        .risk_neutral();
    let cfg = RunConfig::new(200_000, 50, 11).with_antithetic(true);
    let greeks = estimate_greeks(&model, &PayoffSpec::asian_call(100.0), &GreekKind::ALL, &Formulas::default(), &cfg)?;
    for g in greeks {
        println!("{:6} {:>10.5}  (99% CI ± {:.5})", g.greek.as_str(), g.value, g.ci_half_width);
    }
    Ok(())
}
