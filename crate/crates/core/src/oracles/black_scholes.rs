//! Closed-form Black–Scholes price and sensitivities.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::payoffs::PayoffKind;

/// Price and Greeks of a European option. `theta` is `−∂V/∂T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsGreeks {
    pub price: f64,
    pub delta: f64,
    pub vega: f64,
    pub rho: f64,
    pub theta: f64,
    pub gamma: f64,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

/// Black–Scholes call/put on spot `x`, strike `k`. A `Linear` payoff is the
/// forward contract on `X_T` with value `x`.
pub fn bs_price_and_greeks(x: f64, k: f64, r: f64, sigma: f64, t: f64, kind: PayoffKind) -> BsGreeks {
    if kind == PayoffKind::Linear {
        return BsGreeks {
            price: x,
            delta: 1.0,
            vega: 0.0,
            rho: 0.0,
            theta: 0.0,
            gamma: 0.0,
        };
    }
    let n = std_normal();
    let sqrt_t = t.sqrt();
    let d1 = ((x / k).ln() + (r + 0.5 * sigma * sigma) * t) / (sigma * sqrt_t);
    let d2 = d1 - sigma * sqrt_t;
    let disc_k = k * (-r * t).exp();
    let pdf = n.pdf(d1);
    let gamma = pdf / (x * sigma * sqrt_t);
    let vega = x * pdf * sqrt_t;
    let decay = -x * pdf * sigma / (2.0 * sqrt_t);
    match kind {
        PayoffKind::Call => BsGreeks {
            price: x * n.cdf(d1) - disc_k * n.cdf(d2),
            delta: n.cdf(d1),
            vega,
            rho: t * disc_k * n.cdf(d2),
            theta: decay - r * disc_k * n.cdf(d2),
            gamma,
        },
        PayoffKind::Put => BsGreeks {
            price: disc_k * n.cdf(-d2) - x * n.cdf(-d1),
            delta: n.cdf(d1) - 1.0,
            vega,
            rho: -t * disc_k * n.cdf(-d2),
            theta: decay + r * disc_k * n.cdf(-d2),
            gamma,
        },
        PayoffKind::Linear => unreachable!(),
    }
}

/// Black–Scholes price only.
pub fn bs_price(x: f64, k: f64, r: f64, sigma: f64, t: f64, kind: PayoffKind) -> f64 {
    bs_price_and_greeks(x, k, r, sigma, t, kind).price
}
