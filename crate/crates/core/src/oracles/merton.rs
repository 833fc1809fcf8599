//! Merton jump-diffusion price as a Poisson mixture of Black–Scholes prices.

use crate::error::{Error, Result};
use crate::model::{JumpMarkSpec, ModelParams};
use crate::oracles::black_scholes::bs_price;
use crate::payoffs::PayoffKind;

const TAIL_TOLERANCE: f64 = 1e-12;
const MAX_TERMS: usize = 10_000;

/// European price under risk-neutral compensation with Normal marks.
///
/// Conditional on `n` jumps, `ln X_T` is Gaussian with variance
/// `σ²T + n α²s²`; each term is a Black–Scholes price with shifted spot and
/// widened volatility. Summation stops once the remaining Poisson mass,
/// bounded geometrically, times the largest possible term is below 1e−12.
pub fn merton_price(p: &ModelParams, strike: f64, kind: PayoffKind) -> Result<f64> {
    let p = p.validate()?;
    let (m, s) = match p.jump_marks {
        JumpMarkSpec::Normal { mean, std_dev } => (mean, std_dev),
        other => {
            return Err(Error::UnsupportedOracle(format!(
                "Merton series needs normal jump marks, got {other:?}"
            )))
        }
    };
    if !p.risk_neutral {
        return Err(Error::UnsupportedOracle(
            "Merton series needs risk-neutral compensation".into(),
        ));
    }
    if strike.is_nan() || strike <= 0.0 {
        return Err(Error::invalid("strike", "strike must be > 0 for the Merton oracle"));
    }
    let t = p.maturity;
    if kind == PayoffKind::Linear {
        return Ok(p.x);
    }
    if p.lambda == 0.0 || p.alpha == 0.0 {
        return Ok(bs_price(p.x, strike, p.r, p.sigma, t, kind));
    }

    let jump_mean = p.alpha * m;
    let jump_var = p.alpha * p.alpha * s * s;
    // 1 + k = E[e^{αY}]
    let growth = (jump_mean + 0.5 * jump_var).exp();
    let k = growth - 1.0;
    let lt = p.lambda * t;
    // Terms are bounded by x·(1+k)ⁿ (call) or K e^{−rT} (put); the call bound
    // folds into a Poisson law with mean λ(1+k)T.
    let (tail_mean, tail_scale) = match kind {
        PayoffKind::Call => (lt * growth, p.x * (-lt * k).exp()),
        _ => (lt, strike * (-p.r * t).exp()),
    };

    let mut weight = (-lt).exp();
    let mut tail_weight = (-tail_mean).exp();
    let mut total = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let spot = p.x * (-lt * k + nf * (jump_mean + 0.5 * jump_var)).exp();
        let vol = (p.sigma * p.sigma + nf * jump_var / t).sqrt();
        total += weight * bs_price(spot, strike, p.r, vol, t, kind);

        weight *= lt / (nf + 1.0);
        tail_weight *= tail_mean / (nf + 1.0);
        let ratio = tail_mean / (nf + 2.0);
        if ratio < 1.0 {
            let remaining = tail_weight / (1.0 - ratio);
            let scale = if kind == PayoffKind::Call { p.x } else { tail_scale };
            if remaining * scale < TAIL_TOLERANCE {
                return Ok(total);
            }
        }
    }
    Err(Error::UnsupportedOracle("Merton series did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn merton(lambda: f64, alpha: f64, sigma: f64) -> ModelParams {
        ModelParams::black_scholes(100.0, 0.05, sigma, 1.0)
            .with_jumps(lambda, alpha, JumpMarkSpec::Normal { mean: -0.05, std_dev: 0.1 })
            .risk_neutral()
    }

    #[test]
    fn degenerate_cases_are_black_scholes() {
        let bs = bs_price(100.0, 100.0, 0.05, 0.2, 1.0, PayoffKind::Call);
        assert_eq!(merton_price(&merton(0.0, 1.0, 0.2), 100.0, PayoffKind::Call).unwrap(), bs);
        assert_eq!(merton_price(&merton(0.7, 0.0, 0.2), 100.0, PayoffKind::Call).unwrap(), bs);
    }

    #[test]
    fn parity_and_jump_premium() {
        let p = merton(0.3, 1.0, 0.2);
        let c = merton_price(&p, 100.0, PayoffKind::Call).unwrap();
        let q = merton_price(&p, 100.0, PayoffKind::Put).unwrap();
        assert!((c - q - (100.0 - 100.0 * (-0.05f64).exp())).abs() < 1e-9);
        assert!(c > bs_price(100.0, 100.0, 0.05, 0.2, 1.0, PayoffKind::Call));
    }

    #[test]
    fn rejects_other_marks() {
        let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
            .with_jumps(0.3, 1.0, JumpMarkSpec::PointMass { value: 0.1 })
            .risk_neutral();
        assert!(matches!(merton_price(&p, 100.0, PayoffKind::Call), Err(Error::UnsupportedOracle(_))));
        let not_rn = merton(0.3, 1.0, 0.2);
        let not_rn = ModelParams { risk_neutral: false, ..not_rn };
        assert!(merton_price(&not_rn, 100.0, PayoffKind::Call).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_sigma_and_lambda(sigma in 0.05f64..0.6, lambda in 0.0f64..2.0, k in 60.0f64..140.0) {
            let mk = |sigma: f64, lambda: f64| {
                ModelParams::black_scholes(100.0, 0.05, sigma, 1.0)
                    .with_jumps(lambda, 1.0, JumpMarkSpec::Normal { mean: 0.0, std_dev: 0.15 })
                    .risk_neutral()
            };
            let base = merton_price(&mk(sigma, lambda), k, PayoffKind::Call).unwrap();
            let more_vol = merton_price(&mk(sigma + 0.05, lambda), k, PayoffKind::Call).unwrap();
            let more_jumps = merton_price(&mk(sigma, lambda + 0.25), k, PayoffKind::Call).unwrap();
            prop_assert!(more_vol > base);
            prop_assert!(more_jumps > base);
        }
    }
}
