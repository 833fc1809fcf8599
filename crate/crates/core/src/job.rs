//! Batch jobs behind the `levy-greeks` binary.
//!
//! A job is one JSON document ([`JobSpec`]); command-line flags may override
//! its scalar fields ([`Overrides`]). Output is a CSV table or a JSON array
//! of the same rows. Unless `record_timing` is set, `wall_time_ms` is
//! written as 0 so that repeated runs are byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{combined_z, estimate_greeks, estimate_price, run, Quantity, RunConfig, Stats};
use crate::model::{JumpMarkSpec, ModelParams};
use crate::oracles::{bs_price_and_greeks, merton_price, FdSpec};
use crate::payoffs::{PayoffSpec, Style};
use crate::weights::{Formulas, GammaVariant, GreekKind, ThetaVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Price,
    Greeks,
    Compare,
    Convergence,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Price => "price",
            Command::Greeks => "greeks",
            Command::Compare => "compare",
            Command::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Reporting convention for Θ. `Negative` reports `−∂V/∂T` (calendar
/// decay, the usual desk sign); `Positive` reports `∂V/∂T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaSign {
    #[default]
    Negative,
    Positive,
}

impl ThetaSign {
    fn factor(self) -> f64 {
        match self {
            ThetaSign::Negative => 1.0,
            ThetaSign::Positive => -1.0,
        }
    }
}

/// `(n_paths, grid_steps)` lattice for the `convergence` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub n_paths: Vec<u64>,
    pub grid_steps: Vec<usize>,
    /// Greek to track; the price when absent.
    #[serde(default)]
    pub greek: Option<GreekKind>,
}

fn all_greeks() -> Vec<GreekKind> {
    GreekKind::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default)]
    pub command: Option<Command>,
    pub model: ModelParams,
    pub payoff: PayoffSpec,
    pub run: RunConfig,
    #[serde(default = "all_greeks")]
    pub greeks: Vec<GreekKind>,
    /// Asian Γ weight; rejected for European payoffs.
    #[serde(default)]
    pub gamma_variant: Option<GammaVariant>,
    #[serde(default)]
    pub theta_variant: ThetaVariant,
    #[serde(default)]
    pub theta_sign: ThetaSign,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub convergence: Option<ConvergenceSpec>,
    #[serde(default)]
    pub record_timing: bool,
}

impl JobSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Job(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn formulas(&self) -> Formulas {
        Formulas {
            gamma: self.gamma_variant.unwrap_or_default(),
            theta: self.theta_variant,
        }
    }

    /// Checks every section with its owning module's rules.
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.payoff.validate()?;
        self.run.validate()?;
        if self.payoff.style == Style::European && self.gamma_variant.is_some() {
            return Err(Error::invalid(
                "gamma_variant",
                "gamma_variant selects an Asian Γ weight and needs payoff.style = \"asian\"",
            ));
        }
        if let Some(conv) = &self.convergence {
            if conv.n_paths.is_empty() || conv.grid_steps.is_empty() {
                return Err(Error::invalid("convergence", "lattice needs at least one n_paths and one grid_steps"));
            }
            for &n in &conv.n_paths {
                RunConfig { n_paths: n, ..self.run }.validate()?;
            }
            for &m in &conv.grid_steps {
                RunConfig { grid_steps: m, ..self.run }.validate()?;
            }
        }
        Ok(())
    }
}

/// Command-line values that replace fields of the loaded [`JobSpec`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n_paths: Option<u64>,
    pub grid_steps: Option<usize>,
    pub workers: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub output: Option<OutputFormat>,
    pub gamma_variant: Option<GammaVariant>,
    pub theta_sign: Option<ThetaSign>,
    pub record_timing: bool,
}

impl Overrides {
    pub fn apply(&self, spec: &mut JobSpec) {
        if let Some(v) = self.seed {
            spec.run.master_seed = v;
        }
        if let Some(v) = self.n_paths {
            spec.run.n_paths = v;
        }
        if let Some(v) = self.grid_steps {
            spec.run.grid_steps = v;
        }
        if let Some(v) = self.workers {
            spec.run.workers = Some(v);
        }
        if let Some(v) = &self.output_path {
            spec.output_path = Some(v.clone());
        }
        if let Some(v) = self.output {
            spec.output = v;
        }
        if let Some(v) = self.gamma_variant {
            spec.gamma_variant = Some(v);
        }
        if let Some(v) = self.theta_sign {
            spec.theta_sign = v;
        }
        spec.record_timing |= self.record_timing;
    }
}

/// One output row of `price` and `greeks`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub style: String,
    pub greek: String,
    pub value: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_paths: u64,
    pub grid_steps: usize,
    pub seed: u64,
    pub variant: String,
    pub wall_time_ms: u64,
}

/// One output row of `compare`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub style: String,
    pub greek: String,
    pub malliavin: f64,
    pub malliavin_se: f64,
    pub finite_difference: f64,
    pub finite_difference_se: f64,
    pub z: f64,
    pub n_paths: u64,
    pub grid_steps: usize,
    pub seed: u64,
    pub variant: String,
    pub wall_time_ms: u64,
}

/// One output row of `convergence`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub style: String,
    pub greek: String,
    pub n_paths: u64,
    pub grid_steps: usize,
    pub cost: u64,
    pub value: f64,
    pub std_error: f64,
    pub reference: f64,
    pub reference_source: String,
    pub abs_error: f64,
    pub seed: u64,
    pub variant: String,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum JobOutput {
    Estimates(Vec<EstimateRow>),
    Compare(Vec<CompareRow>),
    Convergence(Vec<ConvergenceRow>),
}

pub const ESTIMATE_COLUMNS: &str =
    "style,greek,value,std_error,ci_low,ci_high,n_paths,grid_steps,seed,variant,wall_time_ms";
pub const COMPARE_COLUMNS: &str = "style,greek,malliavin,malliavin_se,finite_difference,finite_difference_se,z,n_paths,grid_steps,seed,variant,wall_time_ms";
pub const CONVERGENCE_COLUMNS: &str = "style,greek,n_paths,grid_steps,cost,value,std_error,reference,reference_source,abs_error,seed,variant,wall_time_ms";

fn num(out: &mut String, v: f64) {
    let _ = write!(out, ",{v:.16e}");
}

impl JobOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            JobOutput::Estimates(rows) => {
                out.push_str(ESTIMATE_COLUMNS);
                out.push('\n');
                for r in rows {
                    out.push_str(&r.style);
                    out.push(',');
                    out.push_str(&r.greek);
                    for v in [r.value, r.std_error, r.ci_low, r.ci_high] {
                        num(&mut out, v);
                    }
                    let _ = writeln!(out, ",{},{},{},{},{}", r.n_paths, r.grid_steps, r.seed, r.variant, r.wall_time_ms);
                }
            }
            JobOutput::Compare(rows) => {
                out.push_str(COMPARE_COLUMNS);
                out.push('\n');
                for r in rows {
                    out.push_str(&r.style);
                    out.push(',');
                    out.push_str(&r.greek);
                    for v in [r.malliavin, r.malliavin_se, r.finite_difference, r.finite_difference_se, r.z] {
                        num(&mut out, v);
                    }
                    let _ = writeln!(out, ",{},{},{},{},{}", r.n_paths, r.grid_steps, r.seed, r.variant, r.wall_time_ms);
                }
            }
            JobOutput::Convergence(rows) => {
                out.push_str(CONVERGENCE_COLUMNS);
                out.push('\n');
                for r in rows {
                    let _ = write!(out, "{},{},{},{},{}", r.style, r.greek, r.n_paths, r.grid_steps, r.cost);
                    for v in [r.value, r.std_error, r.reference] {
                        num(&mut out, v);
                    }
                    let _ = write!(out, ",{}", r.reference_source);
                    num(&mut out, r.abs_error);
                    let _ = writeln!(out, ",{},{},{}", r.seed, r.variant, r.wall_time_ms);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let text = match self {
            JobOutput::Estimates(rows) => serde_json::to_string_pretty(rows),
            JobOutput::Compare(rows) => serde_json::to_string_pretty(rows),
            JobOutput::Convergence(rows) => serde_json::to_string_pretty(rows),
        };
        let mut text = text.expect("rows serialize");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

struct Timer {
    start: Instant,
    enabled: bool,
}

impl Timer {
    fn start(enabled: bool) -> Self {
        Self {
            start: Instant::now(),
            enabled,
        }
    }

    fn elapsed_ms(&self) -> u64 {
        if self.enabled {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

/// The `variant` column: the formula behind the row's number.
fn variant_label(spec: &JobSpec, greek: Option<GreekKind>) -> String {
    let f = spec.formulas();
    match (spec.payoff.style, greek) {
        (Style::Asian, Some(GreekKind::Gamma)) => f.gamma.as_str().to_string(),
        (_, Some(GreekKind::Theta)) => f.theta.as_str().to_string(),
        (Style::Asian, _) => f.gamma.as_str().to_string(),
        _ => "-".to_string(),
    }
}

fn signed(spec: &JobSpec, greek: GreekKind, v: f64) -> f64 {
    if greek == GreekKind::Theta {
        v * spec.theta_sign.factor()
    } else {
        v
    }
}

fn estimate_row(spec: &JobSpec, greek: Option<GreekKind>, s: &Stats, wall_time_ms: u64) -> EstimateRow {
    let value = greek.map_or(s.value, |g| signed(spec, g, s.value));
    EstimateRow {
        style: spec.payoff.style.as_str().to_string(),
        greek: greek.map_or("price", |g| g.as_str()).to_string(),
        value,
        std_error: s.std_error,
        ci_low: value - s.ci_half_width,
        ci_high: value + s.ci_half_width,
        n_paths: s.n_paths,
        grid_steps: spec.run.grid_steps,
        seed: s.seed,
        variant: variant_label(spec, greek),
        wall_time_ms,
    }
}

fn run_price(spec: &JobSpec) -> Result<JobOutput> {
    let timer = Timer::start(spec.record_timing);
    let s = run(&spec.model, &[Quantity::Price(spec.payoff)], &spec.run)?;
    Ok(JobOutput::Estimates(vec![estimate_row(spec, None, &s[0], timer.elapsed_ms())]))
}

fn run_greeks(spec: &JobSpec) -> Result<JobOutput> {
    let timer = Timer::start(spec.record_timing);
    let quantities: Vec<Quantity> = spec
        .greeks
        .iter()
        .map(|&greek| Quantity::Malliavin {
            payoff: spec.payoff,
            greek,
            formulas: spec.formulas(),
        })
        .collect();
    let stats = run(&spec.model, &quantities, &spec.run)?;
    let ms = timer.elapsed_ms();
    Ok(JobOutput::Estimates(
        spec.greeks
            .iter()
            .zip(&stats)
            .map(|(&g, s)| estimate_row(spec, Some(g), s, ms))
            .collect(),
    ))
}

fn run_compare(spec: &JobSpec) -> Result<JobOutput> {
    let timer = Timer::start(spec.record_timing);
    let mut quantities = Vec::with_capacity(2 * spec.greeks.len());
    for &greek in &spec.greeks {
        quantities.push(Quantity::Malliavin {
            payoff: spec.payoff,
            greek,
            formulas: spec.formulas(),
        });
        quantities.push(Quantity::FiniteDifference {
            payoff: spec.payoff,
            greek,
            fd: FdSpec::for_greek(greek),
        });
    }
    let stats = run(&spec.model, &quantities, &spec.run)?;
    let ms = timer.elapsed_ms();
    let rows = spec
        .greeks
        .iter()
        .zip(stats.chunks(2))
        .map(|(&greek, pair)| {
            let (m, f) = (&pair[0], &pair[1]);
            let mv = signed(spec, greek, m.value);
            let fv = signed(spec, greek, f.value);
            CompareRow {
                style: spec.payoff.style.as_str().to_string(),
                greek: greek.as_str().to_string(),
                malliavin: mv,
                malliavin_se: m.std_error,
                finite_difference: fv,
                finite_difference_se: f.std_error,
                z: combined_z(mv, m.std_error, fv, f.std_error),
                n_paths: m.n_paths,
                grid_steps: spec.run.grid_steps,
                seed: m.seed,
                variant: variant_label(spec, Some(greek)),
                wall_time_ms: ms,
            }
        })
        .collect();
    Ok(JobOutput::Compare(rows))
}

/// Closed-form value when one applies: Black–Scholes for jump-free
/// European options, the Merton series for risk-neutral Normal-mark prices.
fn closed_form(p: &ModelParams, payoff: &PayoffSpec, greek: Option<GreekKind>) -> Option<(f64, &'static str)> {
    if payoff.style != Style::European {
        return None;
    }
    let jump_free = p.lambda == 0.0 || p.alpha == 0.0;
    if jump_free && p.resolved_gamma_tilde() == 0.0 && payoff.strike > 0.0 {
        let g = bs_price_and_greeks(p.x, payoff.strike, p.r, p.sigma, p.maturity, payoff.kind);
        let v = match greek {
            None => g.price,
            Some(GreekKind::Delta) => g.delta,
            Some(GreekKind::Vega) => g.vega,
            Some(GreekKind::Rho) => g.rho,
            Some(GreekKind::Theta) => g.theta,
            Some(GreekKind::Gamma) => g.gamma,
            Some(GreekKind::AlphaGreek) => 0.0,
        };
        return Some((v, "black_scholes"));
    }
    let normal = matches!(p.jump_marks, JumpMarkSpec::Normal { .. });
    if greek.is_none() && normal && p.risk_neutral && payoff.strike > 0.0 {
        return merton_price(p, payoff.strike, payoff.kind).ok().map(|v| (v, "merton"));
    }
    None
}

fn run_convergence(spec: &JobSpec) -> Result<JobOutput> {
    let conv = spec.convergence.as_ref().ok_or_else(|| {
        Error::invalid("convergence", "the convergence command needs a `convergence` lattice")
    })?;
    let greek = conv.greek;
    let mut estimates = Vec::new();
    for &m in &conv.grid_steps {
        for &n in &conv.n_paths {
            let cfg = RunConfig {
                n_paths: n,
                grid_steps: m,
                ..spec.run
            };
            let timer = Timer::start(spec.record_timing);
            let (value, se) = match greek {
                None => {
                    let e = estimate_price(&spec.model, &spec.payoff, &cfg)?;
                    (e.value, e.std_error)
                }
                Some(g) => {
                    let e = estimate_greeks(&spec.model, &spec.payoff, &[g], &spec.formulas(), &cfg)?;
                    (signed(spec, g, e[0].value), e[0].std_error)
                }
            };
            estimates.push((n, m, value, se, timer.elapsed_ms()));
        }
    }
    let (reference, source) = match closed_form(&spec.model, &spec.payoff, greek) {
        Some((v, src)) => (greek.map_or(v, |g| signed(spec, g, v)), src),
        None => {
            // costliest lattice point stands in for the truth
            let best = estimates
                .iter()
                .max_by_key(|e| (e.0 * e.1 as u64, e.0))
                .expect("non-empty lattice");
            (best.2, "finest_lattice")
        }
    };
    let rows = estimates
        .into_iter()
        .map(|(n, m, value, se, ms)| ConvergenceRow {
            style: spec.payoff.style.as_str().to_string(),
            greek: greek.map_or("price", |g| g.as_str()).to_string(),
            n_paths: n,
            grid_steps: m,
            cost: n * m as u64,
            value,
            std_error: se,
            reference,
            reference_source: source.to_string(),
            abs_error: (value - reference).abs(),
            seed: spec.run.master_seed,
            variant: variant_label(spec, greek),
            wall_time_ms: ms,
        })
        .collect();
    Ok(JobOutput::Convergence(rows))
}

/// Validates `spec` and runs `command`.
pub fn run_job(command: Command, spec: &JobSpec) -> Result<JobOutput> {
    if let Some(c) = spec.command {
        if c != command {
            return Err(Error::invalid(
                "command",
                format!("config is for `{}` but `{}` was requested", c.as_str(), command.as_str()),
            ));
        }
    }
    spec.validate()?;
    match command {
        Command::Price => run_price(spec),
        Command::Greeks => run_greeks(spec),
        Command::Compare => run_compare(spec),
        Command::Convergence => run_convergence(spec),
    }
}

/// Runs the job and writes the rendered output to `output_path`, or
/// returns it for printing when no path is set.
pub fn run_and_emit(command: Command, spec: &JobSpec) -> Result<Option<String>> {
    let text = run_job(command, spec)?.render(spec.output);
    match &spec.output_path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
