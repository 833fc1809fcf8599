//! Malliavin-weight Greeks of a European call in the jump-free limit,
//! next to the closed forms.

use levy_greeks::estimator::{estimate_greeks, RunConfig};
use levy_greeks::model::ModelParams;
use levy_greeks::oracles::bs_price_and_greeks;
use levy_greeks::payoffs::{PayoffKind, PayoffSpec};
use levy_greeks::weights::{Formulas, GreekKind};

fn main() -> levy_greeks::error::Result<()> {
    let model = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0);
    let payoff = PayoffSpec::european_call(100.0);
    let exact = bs_price_and_greeks(100.0, 100.0, 0.05, 0.2, 1.0, PayoffKind::Call);

    let greeks = [GreekKind::Delta, GreekKind::Vega, GreekKind::Rho, GreekKind::Theta, GreekKind::Gamma];
    let est = estimate_greeks(&model, &payoff, &greeks, &Formulas::default(), &RunConfig::new(500_000, 1, 7))?;
    let closed = [exact.delta, exact.vega, exact.rho, exact.theta, exact.gamma];

    println!("{:6} {:>10} {:>10} {:>9}", "greek", "estimate", "exact", "z");
    for (e, c) in est.iter().zip(closed) {
        println!("{:6} {:>10.5} {:>10.5} {:>+9.2}", e.greek.as_str(), e.value, c, (e.value - c) / e.std_error);
    }
    Ok(())
}
