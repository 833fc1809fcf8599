//! Every selectable Asian Γ weight against the second-difference oracle.

use levy_greeks::estimator::{combined_z, run, Quantity, RunConfig};
use levy_greeks::model::ModelParams;
use levy_greeks::oracles::FdSpec;
use levy_greeks::payoffs::PayoffSpec;
use levy_greeks::weights::{Formulas, GammaVariant, GreekKind};

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0);
    let payoff = PayoffSpec::asian_call(100.0);

    let mut quantities: Vec<Quantity> = GammaVariant::ALL
        .iter()
        .map(|&gamma| Quantity::Malliavin {
            payoff,
            greek: GreekKind::Gamma,
            formulas: Formulas { gamma, ..Formulas::default() },
        })
        .collect();
    quantities.push(Quantity::FiniteDifference {
        payoff,
        greek: GreekKind::Gamma,
        fd: FdSpec::for_greek(GreekKind::Gamma),
    });
    let stats = run(&model, &quantities, &RunConfig::new(200_000, 32, 5))?;
    let fd = stats.last().unwrap();
    println!("second difference: {:.5} ± {:.5}", fd.value, fd.std_error);
    for (variant, s) in GammaVariant::ALL.iter().zip(&stats) {
        let z = combined_z(s.value, s.std_error, fd.value, fd.std_error);
        let verdict = if z.abs() <= 3.0 { "agrees" } else { "rejected" };
        println!("{:10} {:.5} ± {:.5}  z {:+6.1}  {verdict}", variant.as_str(), s.value, s.std_error, z);
    }
    Ok(())
}
