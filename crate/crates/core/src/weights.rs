//! Malliavin stochastic weights.
//!
//! Every Greek `G` of an option with discounted payoff `e^{−rT} Φ` is
//! estimated as `e^{−rT} E[Φ · π_G]`. The functions here return `π_G` for a
//! single path. Discounting and payoff evaluation belong to the estimator.
//!
//! Θ is `−∂V/∂T` throughout the crate.
//!
//! Two Greeks come with selectable formulas:
//!
//! * Θ: [`ThetaVariant::Theorem`] is the textbook bracket as published.
//!   For European options it equals `+∂V/∂T` of the jump-free model with
//!   `γ̃ = 0` and ignores the dependence of the Poisson count on `T`; for
//!   Asian options it carries two sign slips. [`ThetaVariant::Derived`]
//!   (default) is the re-derived weight, exact for the jump model.
//! * Asian Γ: three published expressions plus [`GammaVariant::Derived`]
//!   (default), obtained by differentiating the Asian Δ weight once more.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::PathFunctionals;
use crate::model::ModelParams;
use crate::payoffs::Style;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreekKind {
    Delta,
    Vega,
    Rho,
    Theta,
    Gamma,
    /// Sensitivity to the jump scale `α`.
    #[serde(rename = "alpha")]
    AlphaGreek,
}

impl GreekKind {
    pub const ALL: [GreekKind; 6] = [
        GreekKind::Delta,
        GreekKind::Vega,
        GreekKind::Rho,
        GreekKind::Theta,
        GreekKind::Gamma,
        GreekKind::AlphaGreek,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GreekKind::Delta => "delta",
            GreekKind::Vega => "vega",
            GreekKind::Rho => "rho",
            GreekKind::Theta => "theta",
            GreekKind::Gamma => "gamma",
            GreekKind::AlphaGreek => "alpha",
        }
    }
}

/// Asian Γ expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaVariant {
    /// Published closed form.
    Theorem,
    /// Published intermediate simplification.
    AppendixA,
    /// Published fully simplified form.
    AppendixB,
    /// Second Malliavin integration by parts of the Asian Δ weight.
    #[default]
    Derived,
}

impl GammaVariant {
    pub const ALL: [GammaVariant; 4] = [
        GammaVariant::Theorem,
        GammaVariant::AppendixA,
        GammaVariant::AppendixB,
        GammaVariant::Derived,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GammaVariant::Theorem => "theorem",
            GammaVariant::AppendixA => "appendix_a",
            GammaVariant::AppendixB => "appendix_b",
            GammaVariant::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    Theorem,
    #[default]
    Derived,
}

impl ThetaVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThetaVariant::Theorem => "theorem",
            ThetaVariant::Derived => "derived",
        }
    }
}

/// Formula selection for the Greeks that have more than one candidate weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Formulas {
    pub gamma: GammaVariant,
    pub theta: ThetaVariant,
}

pub fn european_weight(greek: GreekKind, f: &PathFunctionals, p: &ModelParams) -> f64 {
    european_weight_with(greek, f, p, &Formulas::default())
}

pub fn european_weight_with(
    greek: GreekKind,
    f: &PathFunctionals,
    p: &ModelParams,
    formulas: &Formulas,
) -> f64 {
    let w = f.w_terminal;
    let (x, sigma, t, r) = (p.x, p.sigma, p.maturity, p.r);
    let vega_bracket = w * w / (sigma * t) - w - 1.0 / sigma;
    match greek {
        GreekKind::Delta => w / (x * sigma * t),
        GreekKind::Vega => vega_bracket,
        GreekKind::Rho => t * (w / (sigma * t) - 1.0),
        GreekKind::Theta => match formulas.theta {
            ThetaVariant::Theorem => {
                w * w / (2.0 * t * t) + p.mu() * w / (sigma * t) - (1.0 / (2.0 * t) + r)
            }
            ThetaVariant::Derived => {
                // diffusion part under Brownian scaling, plus the score of
                // the Poisson count N_T ~ Poisson(λT) in T
                r + 1.0 / (2.0 * t)
                    - w * w / (2.0 * t * t)
                    - p.effective_drift() * w / (sigma * t)
                    - (f.jump_count as f64 / t - p.lambda)
            }
        },
        GreekKind::Gamma => vega_bracket / (x * x * sigma * t),
        GreekKind::AlphaGreek => w * f.sum_y / (sigma * t),
    }
}

pub fn asian_weight(greek: GreekKind, f: &PathFunctionals, p: &ModelParams) -> Result<f64> {
    asian_weight_with(greek, f, p, &Formulas::default())
}

pub fn asian_weight_with(
    greek: GreekKind,
    f: &PathFunctionals,
    p: &ModelParams,
    formulas: &Formulas,
) -> Result<f64> {
    if f.i1.is_nan() || f.i1 <= 0.0 {
        return Err(Error::Domain(format!("I1 = {} must be > 0", f.i1)));
    }
    let w = f.w_terminal;
    let (x, s, t, r) = (p.x, p.sigma, p.maturity, p.r);
    let (i0, i1, i2, i3) = (f.i0, f.i1, f.i2, f.i3);
    let i1_2 = i1 * i1;
    let i1_3 = i1_2 * i1;
    let i1_4 = i1_2 * i1_2;
    let a = i0 / i1;

    let weight = match greek {
        GreekKind::Delta => (-s + a * w + s * i0 * i2 / i1_2) / (s * x),
        GreekKind::Vega => {
            (-(1.0 + s * w) + (w * f.int_xw - s * f.int_txw) / i1 + s * f.int_xw * i2 / i1_2) / s
        }
        GreekKind::Rho => w / s - t,
        GreekKind::Theta => {
            let xt = f.x_terminal;
            match formulas.theta {
                ThetaVariant::Theorem => {
                    r - 1.0 / t
                        + (i0 * w / (s * t) - xt * w / s - t * xt) / i1
                        + (i0 * i2 / t + i2 * w) / i1_2
                }
                ThetaVariant::Derived => {
                    r - 1.0 / t
                        + (i0 * w / (s * t) - xt * w / s + t * xt) / i1
                        + (i0 * i2 / t - xt * i2) / i1_2
                }
            }
        }
        GreekKind::Gamma => {
            let i0_2 = i0 * i0;
            let s2 = s * s;
            match formulas.gamma {
                GammaVariant::Theorem => {
                    ((s + s2) - (s - s * w - w) * a
                        + (-s * i0 * i2 + w * w * i0_2 - 3.0 * s2 * i0 * i2) / i1_2
                        + (s * w * i0_2 * i2 - s2 * i0_2 * i3 + 2.0 * s * i0_2 * i2) / i1_3
                        + 3.0 * s2 * i0_2 * i2 * i2 / i1_4)
                        / (s * x * x)
                }
                GammaVariant::AppendixA => {
                    ((s + s2) - (2.0 * s - s * w - w) * a
                        + (-s * i0 * i2 + w * w * i0_2 - 3.0 * s2 * i0 * i2) / i1_2
                        + (s * w * i0_2 * i2 - s2 * i0_2 * i3 + 2.0 * s * i0_2 * i2) / i1_3
                        + 3.0 * s2 * i0_2 * i2 * i2 / i1_4)
                        / (s * x * x)
                }
                GammaVariant::AppendixB => {
                    (-3.0 * s * w * a
                        + (3.0 * s * i0 * i2 + w * w * i0_2 - i0_2) / i1_2
                        + ((2.0 * s + 1.0) * w * i0_2 * i2 - s * i0_2 * i3) / i1_3
                        + 3.0 * s * i0_2 * i2 * i2 / i1_4)
                        / (x * x * s)
                }
                GammaVariant::Derived => {
                    (2.0 * s - 4.0 * w * a + (w * w - t) / s * a * a - 4.0 * s * i0 * i2 / i1_2
                        + (3.0 * w * i0_2 * i2 - s * i0_2 * i3) / i1_3
                        + 3.0 * s * i0_2 * i2 * i2 / i1_4)
                        / (s * x * x)
                }
            }
        }
        // 1/α cancelled against X⁽²⁾ = α Σ Y
        GreekKind::AlphaGreek => {
            (w * f.int_sy_x / s - f.int_tsy_x) / i1 + f.int_sy_x * i2 / i1_2
        }
    };
    Ok(weight)
}

/// Weight for either style.
pub fn weight(
    style: Style,
    greek: GreekKind,
    f: &PathFunctionals,
    p: &ModelParams,
    formulas: &Formulas,
) -> Result<f64> {
    match style {
        Style::European => Ok(european_weight_with(greek, f, p, formulas)),
        Style::Asian => asian_weight_with(greek, f, p, formulas),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::JumpMarkSpec;

    fn params() -> ModelParams {
        ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0)
    }

    fn with_w(w: f64) -> PathFunctionals {
        PathFunctionals {
            w_terminal: w,
            ..PathFunctionals::default()
        }
    }

    #[test]
    fn european_examples() {
        let p = params();
        let d = european_weight(GreekKind::Delta, &with_w(0.5), &p);
        assert!((d - 0.025).abs() < 1e-15);
        let rho = european_weight(GreekKind::Rho, &with_w(0.2), &p);
        assert!(rho.abs() < 1e-15);
        let a = european_weight(GreekKind::AlphaGreek, &with_w(0.7), &p);
        assert_eq!(a, 0.0);
    }

    #[test]
    fn european_theta_variants_agree_up_to_sign_without_jumps() {
        let p = params();
        for w in [-1.3, 0.0, 0.4, 2.2] {
            let f = with_w(w);
            let th = european_weight_with(
                GreekKind::Theta,
                &f,
                &p,
                &Formulas {
                    theta: ThetaVariant::Theorem,
                    ..Formulas::default()
                },
            );
            let de = european_weight(GreekKind::Theta, &f, &p);
            assert!((th + de).abs() < 1e-12);
        }
    }

    #[test]
    fn asian_examples() {
        let p = params();
        let f = PathFunctionals {
            i0: 100.0,
            i1: 50.0,
            i2: 100.0 / 3.0,
            w_terminal: 0.5,
            ..PathFunctionals::default()
        };
        let d = asian_weight(GreekKind::Delta, &f, &p).unwrap();
        assert!((d - 0.053_333_333_333_333_33).abs() < 1e-12);
        let f0 = PathFunctionals {
            i1: 1.0,
            ..PathFunctionals::default()
        };
        assert_eq!(asian_weight(GreekKind::Rho, &f0, &p).unwrap(), -1.0);
        let jump_free = PathFunctionals {
            i0: 100.0,
            i1: 50.0,
            i2: 30.0,
            w_terminal: 0.3,
            ..PathFunctionals::default()
        };
        assert_eq!(asian_weight(GreekKind::AlphaGreek, &jump_free, &p).unwrap(), 0.0);
    }

    #[test]
    fn asian_rejects_degenerate_functionals() {
        let p = params();
        let f = PathFunctionals::default();
        assert!(matches!(
            asian_weight(GreekKind::Delta, &f, &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn alpha_weight_is_finite_at_zero_alpha() {
        let p = params().with_jumps(1.0, 0.0, JumpMarkSpec::PointMass { value: 1.0 });
        let f = PathFunctionals {
            i0: 100.0,
            i1: 50.0,
            i2: 30.0,
            int_sy_x: 20.0,
            int_tsy_x: 15.0,
            w_terminal: 0.3,
            ..PathFunctionals::default()
        };
        let a = asian_weight(GreekKind::AlphaGreek, &f, &p).unwrap();
        let expected = (0.3 * 20.0 / 0.2 - 15.0) / 50.0 + 20.0 * 30.0 / 2500.0;
        assert!((a - expected).abs() < 1e-12);
    }
}
