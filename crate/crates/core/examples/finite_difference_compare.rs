//! Malliavin estimates beside bump-and-revalue differences computed on the
//! same paths (common random numbers).

use levy_greeks::estimator::{combined_z, run, Quantity, RunConfig};
use levy_greeks::model::{JumpMarkSpec, ModelParams};
use levy_greeks::oracles::FdSpec;
use levy_greeks::payoffs::PayoffSpec;
use levy_greeks::weights::{Formulas, GreekKind};

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
        .with_jumps(0.3, 1.0, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
        .risk_neutral();

    for payoff in [PayoffSpec::european_put(95.0), PayoffSpec::asian_put(95.0)] {
        let mut quantities = Vec::new();
        for greek in GreekKind::ALL {
            quantities.push(Quantity::Malliavin { payoff, greek, formulas: Formulas::default() });
            quantities.push(Quantity::FiniteDifference { payoff, greek, fd: FdSpec::for_greek(greek) });
        }
        let stats = run(&model, &quantities, &RunConfig::new(100_000, 32, 3))?;
        println!("{} put", payoff.style.as_str());
        for (greek, pair) in GreekKind::ALL.iter().zip(stats.chunks(2)) {
            let (m, f) = (&pair[0], &pair[1]);
            let z = combined_z(m.value, m.std_error, f.value, f.std_error);
            println!(
                "  {:6} malliavin {:>9.5} ± {:.5}   fd {:>9.5} ± {:.5}   z {:+.2}",
                greek.as_str(), m.value, m.std_error, f.value, f.std_error, z
            );
        }
    }
    Ok(())
}
