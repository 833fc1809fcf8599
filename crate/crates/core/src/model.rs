//! Model parameters for the exponential Lévy jump-diffusion
//!
//! ```text
//! X_t = x · exp(γ t + σ W_t + α Σ_{i ≤ N_t} Y_i),    γ = r − σ²/2 + γ̃
//! ```
//!
//! where `N` is a Poisson process with intensity `λ` and the marks `Y_i` are
//! i.i.d. with law [`JumpMarkSpec`]. The pure-jump martingale component of a
//! general Lévy process is fixed to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported expected jump count `λT`. The Poisson count is drawn by
/// inverse-CDF search starting from `e^{−λT}`, which underflows beyond this.
pub const MAX_EXPECTED_JUMPS: f64 = 700.0;

/// Law of the jump marks `Y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpMarkSpec {
    Normal { mean: f64, std_dev: f64 },
    PointMass { value: f64 },
    Uniform { low: f64, high: f64 },
}

impl JumpMarkSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            JumpMarkSpec::Normal { mean, std_dev } => {
                if !mean.is_finite() {
                    return Err(Error::invalid("jump_marks", "normal mean must be finite"));
                }
                if !(std_dev.is_finite() && std_dev > 0.0) {
                    return Err(Error::invalid("jump_marks", "normal std_dev must be > 0"));
                }
            }
            JumpMarkSpec::PointMass { value } => {
                if !value.is_finite() {
                    return Err(Error::invalid("jump_marks", "point mass value must be finite"));
                }
            }
            JumpMarkSpec::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return Err(Error::invalid("jump_marks", "uniform bounds need low < high"));
                }
            }
        }
        Ok(())
    }

    /// `E[e^{αY}]`.
    pub fn mgf(&self, alpha: f64) -> f64 {
        match *self {
            JumpMarkSpec::Normal { mean, std_dev } => {
                (alpha * mean + 0.5 * alpha * alpha * std_dev * std_dev).exp()
            }
            JumpMarkSpec::PointMass { value } => (alpha * value).exp(),
            JumpMarkSpec::Uniform { low, high } => {
                let z = alpha * (high - low);
                if z == 0.0 {
                    (alpha * low).exp()
                } else {
                    (alpha * low).exp() * z.exp_m1() / z
                }
            }
        }
    }

    /// Maps a uniform variate in (0,1) (and its Gaussian image, for the
    /// normal law) to a mark.
    pub(crate) fn sample(&self, uniform: f64, gaussian: f64) -> f64 {
        match *self {
            JumpMarkSpec::Normal { mean, std_dev } => mean + std_dev * gaussian,
            JumpMarkSpec::PointMass { value } => value,
            JumpMarkSpec::Uniform { low, high } => low + (high - low) * uniform,
        }
    }
}

/// Market and model scalars.
///
/// `mu` and the effective drift are derived on demand; only `gamma_tilde`
/// is stored. With `risk_neutral` set, `gamma_tilde` is ignored and replaced
/// by [`risk_neutral_compensator`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub x: f64,
    pub r: f64,
    pub sigma: f64,
    #[serde(default)]
    pub gamma_tilde: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(rename = "T")]
    pub maturity: f64,
    #[serde(default = "no_jumps")]
    pub jump_marks: JumpMarkSpec,
    #[serde(default)]
    pub risk_neutral: bool,
}

fn no_jumps() -> JumpMarkSpec {
    JumpMarkSpec::PointMass { value: 0.0 }
}

impl ModelParams {
    /// Jump-free model with `γ̃ = 0`.
    pub fn black_scholes(x: f64, r: f64, sigma: f64, maturity: f64) -> Self {
        Self {
            x,
            r,
            sigma,
            gamma_tilde: 0.0,
            lambda: 0.0,
            alpha: 0.0,
            maturity,
            jump_marks: no_jumps(),
            risk_neutral: false,
        }
    }

    pub fn with_jumps(mut self, lambda: f64, alpha: f64, marks: JumpMarkSpec) -> Self {
        self.lambda = lambda;
        self.alpha = alpha;
        self.jump_marks = marks;
        self
    }

    pub fn with_gamma_tilde(mut self, gamma_tilde: f64) -> Self {
        self.gamma_tilde = gamma_tilde;
        self.risk_neutral = false;
        self
    }

    pub fn risk_neutral(mut self) -> Self {
        self.risk_neutral = true;
        self
    }

    /// Checks every constraint, reporting the first violation by field name.
    pub fn validate(self) -> Result<Self> {
        if !(self.x.is_finite() && self.x > 0.0) {
            return Err(Error::invalid("x", "x must be > 0"));
        }
        if !self.r.is_finite() {
            return Err(Error::invalid("r", "r must be finite"));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid(
                "sigma",
                "sigma must be > 0 (nonvanishing Brownian motion part required)",
            ));
        }
        if !self.gamma_tilde.is_finite() {
            return Err(Error::invalid("gamma_tilde", "gamma_tilde must be finite"));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::invalid("lambda", "lambda must be >= 0"));
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", "alpha must be finite"));
        }
        if !(self.maturity.is_finite() && self.maturity > 0.0) {
            return Err(Error::invalid("T", "T must be > 0"));
        }
        if self.lambda * self.maturity > MAX_EXPECTED_JUMPS {
            return Err(Error::invalid(
                "lambda",
                format!("lambda * T must not exceed {MAX_EXPECTED_JUMPS}"),
            ));
        }
        self.jump_marks.validate()?;
        if !self.jump_marks.mgf(self.alpha).is_finite() {
            return Err(Error::invalid("alpha", "E[exp(alpha Y)] is not finite"));
        }
        Ok(self)
    }

    /// Black–Scholes drift `μ = r − σ²/2`.
    pub fn mu(&self) -> f64 {
        self.r - 0.5 * self.sigma * self.sigma
    }

    /// The drift correction actually in force: `gamma_tilde`, or the
    /// compensator when `risk_neutral` is set.
    pub fn resolved_gamma_tilde(&self) -> f64 {
        if self.risk_neutral {
            risk_neutral_compensator(&self.jump_marks, self.lambda, self.alpha)
        } else {
            self.gamma_tilde
        }
    }

    /// `γ = r − σ²/2 + γ̃`.
    pub fn effective_drift(&self) -> f64 {
        self.mu() + self.resolved_gamma_tilde()
    }

    /// Same model with the drift correction frozen at its current value, so
    /// later changes to `lambda`, `alpha` or the marks leave `γ̃` untouched.
    pub fn pinned_drift(&self) -> Self {
        let mut p = *self;
        p.gamma_tilde = self.resolved_gamma_tilde();
        p.risk_neutral = false;
        p
    }

    pub fn expected_jumps(&self) -> f64 {
        self.lambda * self.maturity
    }
}

/// Free function form of [`ModelParams::validate`].
pub fn validate(raw: ModelParams) -> Result<ModelParams> {
    raw.validate()
}

/// Free function form of [`ModelParams::effective_drift`].
pub fn effective_drift(p: &ModelParams) -> f64 {
    p.effective_drift()
}

/// The `γ̃` making `e^{−rt} X_t` a martingale: `−λ (E[e^{αY}] − 1)`.
pub fn risk_neutral_compensator(marks: &JumpMarkSpec, lambda: f64, alpha: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    -lambda * (marks.mgf(alpha) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0).with_jumps(
            0.3,
            0.1,
            JumpMarkSpec::Normal {
                mean: 0.0,
                std_dev: 1.0,
            },
        )
    }

    #[test]
    fn accepts_reference_parameters() {
        let p = base();
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn rejects_zero_sigma_by_name() {
        let mut p = base();
        p.sigma = 0.0;
        let err = p.validate().unwrap_err();
        match err {
            Error::InvalidParameter { field, reason } => {
                assert_eq!(field, "sigma");
                assert!(reason.contains("sigma must be > 0"));
                assert!(reason.contains("nonvanishing Brownian motion part required"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_fields() {
        let mut p = base();
        p.maturity = 0.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "T", .. })
        ));
        let mut p = base();
        p.x = -1.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "x", .. })
        ));
        let mut p = base();
        p.lambda = -0.1;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "lambda", .. })
        ));
        let p = base().with_jumps(1.0, 1.0, JumpMarkSpec::Uniform { low: 1.0, high: 1.0 });
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { field: "jump_marks", .. })
        ));
    }

    #[test]
    fn drift_examples() {
        let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0);
        assert!((p.effective_drift() - 0.03).abs() < 1e-15);
        let p = ModelParams::black_scholes(100.0, 0.0, 0.37, 1.0).with_gamma_tilde(0.37 * 0.37 / 2.0);
        assert!(p.effective_drift().abs() < 1e-15);
        let p = ModelParams::black_scholes(100.0, 0.05, 0.2, 1.0).with_gamma_tilde(-0.01);
        assert!((p.effective_drift() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn compensator_examples() {
        let normal = JumpMarkSpec::Normal {
            mean: 0.0,
            std_dev: 1.0,
        };
        assert_eq!(risk_neutral_compensator(&normal, 0.0, 0.1), 0.0);
        let point = JumpMarkSpec::PointMass { value: 0.0 };
        assert_eq!(risk_neutral_compensator(&point, 0.7, 2.0), 0.0);
        let expected = -0.3 * (0.005f64.exp() - 1.0);
        assert!((risk_neutral_compensator(&normal, 0.3, 0.1) - expected).abs() < 1e-15);
        assert!((expected + 0.0015038).abs() < 1e-7);
    }

    #[test]
    fn uniform_mgf_limits() {
        let u = JumpMarkSpec::Uniform { low: -1.0, high: 2.0 };
        assert_eq!(u.mgf(0.0), 1.0);
        let a = 0.3;
        let direct = ((a * 2.0f64).exp() - (-a).exp()) / (a * 3.0);
        assert!((u.mgf(a) - direct).abs() < 1e-14);
        assert!((u.mgf(1e-12) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn validate_is_idempotent_and_pinning_keeps_drift() {
        let p = base().risk_neutral().validate().unwrap();
        assert_eq!(p.validate().unwrap(), p);
        let pinned = p.pinned_drift();
        assert_eq!(pinned.effective_drift(), p.effective_drift());
        assert!(!pinned.risk_neutral);
    }

    #[test]
    fn serde_uses_spec_names() {
        let json = r#"{"x":100,"r":0.05,"sigma":0.2,"lambda":0.3,"alpha":0.1,"T":1,
            "jump_marks":{"normal":{"mean":0,"std_dev":1}},"risk_neutral":true}"#;
        let p: ModelParams = serde_json::from_str(json).unwrap();
        assert_eq!(p.maturity, 1.0);
        assert!(p.risk_neutral);
        let bad = r#"{"x":100,"r":0.05,"sigma":0.2,"T":1,"bogus":1}"#;
        assert!(serde_json::from_str::<ModelParams>(bad).is_err());
    }
}
