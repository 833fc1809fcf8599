//! Bump-and-revalue Greeks with common random numbers.
//!
//! Both sides of a central difference are valued on the same [`PathDraws`]
//! (see [`crate::simulate`]), so the per-path difference is a continuous
//! function of the bump size. The drift correction `γ̃` is frozen at its
//! base value before bumping, which makes the α-difference hold the drift
//! fixed exactly as the Malliavin weight does.
//!
//! [`PathDraws`]: crate::simulate::PathDraws

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{run, GreekEstimate, Quantity, RunConfig};
use crate::model::ModelParams;
use crate::payoffs::PayoffSpec;
use crate::weights::GreekKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BumpParameter {
    X,
    Sigma,
    R,
    T,
    Alpha,
}

impl BumpParameter {
    pub fn for_greek(greek: GreekKind) -> Self {
        match greek {
            GreekKind::Delta | GreekKind::Gamma => BumpParameter::X,
            GreekKind::Vega => BumpParameter::Sigma,
            GreekKind::Rho => BumpParameter::R,
            GreekKind::Theta => BumpParameter::T,
            GreekKind::AlphaGreek => BumpParameter::Alpha,
        }
    }

    pub fn value(&self, p: &ModelParams) -> f64 {
        match self {
            BumpParameter::X => p.x,
            BumpParameter::Sigma => p.sigma,
            BumpParameter::R => p.r,
            BumpParameter::T => p.maturity,
            BumpParameter::Alpha => p.alpha,
        }
    }

    fn set(&self, p: &mut ModelParams, v: f64) {
        match self {
            BumpParameter::X => p.x = v,
            BumpParameter::Sigma => p.sigma = v,
            BumpParameter::R => p.r = v,
            BumpParameter::T => p.maturity = v,
            BumpParameter::Alpha => p.alpha = v,
        }
    }
}

/// Central-difference settings. The step is `max(relative · |θ|, absolute)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSpec {
    pub parameter: BumpParameter,
    pub relative_bump: f64,
    pub absolute_bump: f64,
}

impl FdSpec {
    pub fn for_greek(greek: GreekKind) -> Self {
        Self {
            parameter: BumpParameter::for_greek(greek),
            relative_bump: 1e-3,
            absolute_bump: 1e-4,
        }
    }

    pub fn with_relative_bump(mut self, h: f64) -> Self {
        self.relative_bump = h;
        self
    }

    pub fn step(&self, base: &ModelParams) -> f64 {
        (self.relative_bump * self.parameter.value(base).abs()).max(self.absolute_bump)
    }

    pub(crate) fn validate(&self, greek: GreekKind) -> Result<()> {
        if self.parameter != BumpParameter::for_greek(greek) {
            return Err(Error::invalid(
                "parameter",
                format!("{} needs a bump in {:?}", greek.as_str(), BumpParameter::for_greek(greek)),
            ));
        }
        if !(self.relative_bump > 0.0 && self.absolute_bump > 0.0) {
            return Err(Error::invalid("relative_bump", "bump sizes must be > 0"));
        }
        Ok(())
    }

    /// Base parameters with drift pinned and `parameter` shifted by `delta`.
    pub fn bumped(&self, base: &ModelParams, delta: f64) -> Result<ModelParams> {
        let mut p = base.pinned_drift();
        let v = self.parameter.value(&p) + delta;
        self.parameter.set(&mut p, v);
        p.validate()
    }
}

/// Finite-difference Greek with common random numbers. Θ is returned as
/// `−∂V/∂T`, Γ by second difference in `x`.
pub fn fd_greek(
    p: &ModelParams,
    payoff: &PayoffSpec,
    greek: GreekKind,
    fd: &FdSpec,
    cfg: &RunConfig,
) -> Result<GreekEstimate> {
    let q = Quantity::FiniteDifference {
        payoff: *payoff,
        greek,
        fd: *fd,
    };
    let est = run(p, &[q], cfg)?;
    Ok(GreekEstimate::from_stats(greek, payoff.style, &est[0]))
}
