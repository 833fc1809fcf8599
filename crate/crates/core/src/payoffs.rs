use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffKind {
    Call,
    Put,
    /// `Φ(s) = s`; a test instrument with analytic Greeks.
    Linear,
}

/// European options pay on `X_T`, Asian options on the time average `I₍₀₎/T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    European,
    Asian,
}

impl Style {
    pub fn as_str(&self) -> &'static str {
        match self {
            Style::European => "european",
            Style::Asian => "asian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffSpec {
    pub kind: PayoffKind,
    #[serde(default)]
    pub strike: f64,
    pub style: Style,
}

impl PayoffSpec {
    pub fn new(kind: PayoffKind, strike: f64, style: Style) -> Self {
        Self {
            kind,
            strike,
            style,
        }
    }

    pub fn european_call(strike: f64) -> Self {
        Self::new(PayoffKind::Call, strike, Style::European)
    }

    pub fn european_put(strike: f64) -> Self {
        Self::new(PayoffKind::Put, strike, Style::European)
    }

    pub fn asian_call(strike: f64) -> Self {
        Self::new(PayoffKind::Call, strike, Style::Asian)
    }

    pub fn asian_put(strike: f64) -> Self {
        Self::new(PayoffKind::Put, strike, Style::Asian)
    }

    pub fn validate(self) -> Result<Self> {
        if !(self.strike.is_finite() && self.strike >= 0.0) {
            return Err(Error::invalid("strike", "strike must be >= 0"));
        }
        Ok(self)
    }

    #[inline]
    pub fn evaluate(&self, s: f64) -> f64 {
        evaluate(self, s)
    }
}

/// Payoff on the underlying value `s` (`X_T` or `I₍₀₎/T`).
#[inline]
pub fn evaluate(spec: &PayoffSpec, s: f64) -> f64 {
    match spec.kind {
        PayoffKind::Call => (s - spec.strike).max(0.0),
        PayoffKind::Put => (spec.strike - s).max(0.0),
        PayoffKind::Linear => s,
    }
}
