//! Monte Carlo driver.
//!
//! Paths are processed in fixed-size chunks of consecutive indices. Each
//! chunk owns its accumulators; chunk results are merged with
//! [`tree_merge`], whose shape depends only on the chunk count. Results are
//! therefore bit-identical for any number of workers.
//!
//! All requested quantities are estimated from the same paths in one pass:
//! a path's draws are realized once per distinct parameter set (the base
//! model plus every finite-difference bump), and each quantity reads the
//! discounted payoffs and weights it needs from those realizations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::accumulator::{tree_merge, Accumulator};
use crate::error::{Error, Result};
use crate::functionals::{compute_functionals, PathFunctionals};
use crate::model::ModelParams;
use crate::oracles::finite_difference::{BumpParameter, FdSpec};
use crate::payoffs::{PayoffSpec, Style};
use crate::simulate::{GridSpec, PathDraws, PathSample};
use crate::stream::derive_stream;
use crate::weights::{weight, Formulas, GreekKind};

/// Paths (or antithetic pairs) per work unit.
const CHUNK: u64 = 2048;

fn default_confidence() -> f64 {
    0.99
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_paths: u64,
    pub grid_steps: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default = "default_confidence")]
    pub confidence_level: f64,
    /// Worker threads; `None` uses the global pool. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(n_paths: u64, grid_steps: usize, master_seed: u64) -> Self {
        Self {
            n_paths,
            grid_steps,
            master_seed,
            antithetic: false,
            confidence_level: default_confidence(),
            workers: None,
        }
    }

    pub fn with_antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::invalid("n_paths", "n_paths must be >= 1"));
        }
        if self.antithetic && !self.n_paths.is_multiple_of(2) {
            return Err(Error::invalid("n_paths", "antithetic runs need an even n_paths"));
        }
        GridSpec::new(self.grid_steps)?;
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(Error::invalid("confidence_level", "confidence_level must be in (0, 1)"));
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers", "workers must be >= 1"));
        }
        Ok(())
    }

    /// Independent samples entering the standard error.
    pub fn n_effective(&self) -> u64 {
        if self.antithetic {
            self.n_paths / 2
        } else {
            self.n_paths
        }
    }

    /// Two-sided normal quantile for `confidence_level`.
    pub fn z_score(&self) -> f64 {
        Normal::new(0.0, 1.0)
            .expect("standard normal")
            .inverse_cdf(0.5 + 0.5 * self.confidence_level)
    }
}

/// Something to estimate on the simulated paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `E[e^{−rT} Φ]`.
    Price(PayoffSpec),
    /// `E[e^{−rT} Φ π_G]`.
    Malliavin {
        payoff: PayoffSpec,
        greek: GreekKind,
        formulas: Formulas,
    },
    /// Central difference of prices under bumped parameters.
    FiniteDifference {
        payoff: PayoffSpec,
        greek: GreekKind,
        fd: FdSpec,
    },
}

impl Quantity {
    fn payoff(&self) -> &PayoffSpec {
        match self {
            Quantity::Price(p) => p,
            Quantity::Malliavin { payoff, .. } | Quantity::FiniteDifference { payoff, .. } => {
                payoff
            }
        }
    }
}

/// Sample statistics of one quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub value: f64,
    pub std_error: f64,
    pub ci_half_width: f64,
    pub n_paths: u64,
    pub n_effective: u64,
    pub seed: u64,
}

impl Stats {
    fn from_accumulator(acc: &Accumulator, cfg: &RunConfig) -> Self {
        let std_error = acc.std_error();
        Self {
            value: acc.mean(),
            std_error,
            ci_half_width: cfg.z_score() * std_error,
            n_paths: cfg.n_paths,
            n_effective: acc.count(),
            seed: cfg.master_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceEstimate {
    pub style: Style,
    pub value: f64,
    pub std_error: f64,
    pub ci_half_width: f64,
    pub n_paths: u64,
    pub seed: u64,
}

impl PriceEstimate {
    pub fn from_stats(style: Style, s: &Stats) -> Self {
        Self {
            style,
            value: s.value,
            std_error: s.std_error,
            ci_half_width: s.ci_half_width,
            n_paths: s.n_paths,
            seed: s.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreekEstimate {
    pub greek: GreekKind,
    pub style: Style,
    pub value: f64,
    pub std_error: f64,
    pub ci_half_width: f64,
    pub n_paths: u64,
    pub seed: u64,
}

impl GreekEstimate {
    pub fn from_stats(greek: GreekKind, style: Style, s: &Stats) -> Self {
        Self {
            greek,
            style,
            value: s.value,
            std_error: s.std_error,
            ci_half_width: s.ci_half_width,
            n_paths: s.n_paths,
            seed: s.seed,
        }
    }

    /// `(self − other) / √(se₁² + se₂²)`.
    pub fn z_against(&self, other: &GreekEstimate) -> f64 {
        combined_z(self.value, self.std_error, other.value, other.std_error)
    }
}

/// Difference of two estimates in units of their combined standard error.
/// Two exactly equal values give 0 even when both errors vanish.
pub fn combined_z(a: f64, se_a: f64, b: f64, se_b: f64) -> f64 {
    let diff = a - b;
    if diff == 0.0 {
        return 0.0;
    }
    diff / (se_a * se_a + se_b * se_b).sqrt()
}

pub fn estimate_price(p: &ModelParams, payoff: &PayoffSpec, cfg: &RunConfig) -> Result<PriceEstimate> {
    let s = run(p, &[Quantity::Price(*payoff)], cfg)?;
    Ok(PriceEstimate::from_stats(payoff.style, &s[0]))
}

pub fn estimate_greek(
    p: &ModelParams,
    payoff: &PayoffSpec,
    greek: GreekKind,
    cfg: &RunConfig,
) -> Result<GreekEstimate> {
    estimate_greek_with(p, payoff, greek, &Formulas::default(), cfg)
}

pub fn estimate_greek_with(
    p: &ModelParams,
    payoff: &PayoffSpec,
    greek: GreekKind,
    formulas: &Formulas,
    cfg: &RunConfig,
) -> Result<GreekEstimate> {
    let q = Quantity::Malliavin {
        payoff: *payoff,
        greek,
        formulas: *formulas,
    };
    let s = run(p, &[q], cfg)?;
    Ok(GreekEstimate::from_stats(greek, payoff.style, &s[0]))
}

/// Malliavin estimates of several Greeks from one set of paths.
pub fn estimate_greeks(
    p: &ModelParams,
    payoff: &PayoffSpec,
    greeks: &[GreekKind],
    formulas: &Formulas,
    cfg: &RunConfig,
) -> Result<Vec<GreekEstimate>> {
    let qs: Vec<Quantity> = greeks
        .iter()
        .map(|&greek| Quantity::Malliavin {
            payoff: *payoff,
            greek,
            formulas: *formulas,
        })
        .collect();
    let stats = run(p, &qs, cfg)?;
    Ok(greeks
        .iter()
        .zip(&stats)
        .map(|(&g, s)| GreekEstimate::from_stats(g, payoff.style, s))
        .collect())
}

/// How a quantity turns scenario outcomes into one sample.
#[derive(Debug, Clone, Copy)]
enum Plan {
    Price { payoff: usize },
    Weighted { payoff: usize, greek: GreekKind, formulas: Formulas },
    Central { payoff: usize, up: usize, down: usize, scale: f64 },
    Second { payoff: usize, up: usize, down: usize, h: f64 },
}

/// Scenario 0 is the base model; the rest are finite-difference bumps.
struct Layout {
    scenarios: Vec<ModelParams>,
    payoffs: Vec<PayoffSpec>,
    /// per scenario: whether any Asian payoff is evaluated on it
    needs_average: Vec<bool>,
    plans: Vec<Plan>,
    needs_functionals: bool,
    expected_jumps: Vec<f64>,
}

impl Layout {
    fn build(base: &ModelParams, quantities: &[Quantity]) -> Result<Self> {
        let mut scenarios = vec![*base];
        let mut payoffs: Vec<PayoffSpec> = Vec::new();
        let mut plans = Vec::with_capacity(quantities.len());

        fn index_of<T: PartialEq + Copy>(v: &mut Vec<T>, item: T) -> usize {
            match v.iter().position(|x| *x == item) {
                Some(i) => i,
                None => {
                    v.push(item);
                    v.len() - 1
                }
            }
        }

        let mut uses: Vec<(usize, usize)> = Vec::new();
        for q in quantities {
            let payoff = q.payoff().validate()?;
            let pi = index_of(&mut payoffs, payoff);
            let plan = match *q {
                Quantity::Price(_) => {
                    uses.push((0, pi));
                    Plan::Price { payoff: pi }
                }
                Quantity::Malliavin { greek, formulas, .. } => {
                    uses.push((0, pi));
                    Plan::Weighted {
                        payoff: pi,
                        greek,
                        formulas,
                    }
                }
                Quantity::FiniteDifference { greek, fd, .. } => {
                    fd.validate(greek)?;
                    let h = fd.step(base);
                    let up = index_of(&mut scenarios, fd.bumped(base, h)?);
                    let down = index_of(&mut scenarios, fd.bumped(base, -h)?);
                    uses.push((up, pi));
                    uses.push((down, pi));
                    if greek == GreekKind::Gamma {
                        uses.push((0, pi));
                        Plan::Second {
                            payoff: pi,
                            up,
                            down,
                            h,
                        }
                    } else {
                        let sign = if fd.parameter == BumpParameter::T { -1.0 } else { 1.0 };
                        Plan::Central {
                            payoff: pi,
                            up,
                            down,
                            scale: sign / (2.0 * h),
                        }
                    }
                }
            };
            plans.push(plan);
        }

        let mut needs_average = vec![false; scenarios.len()];
        for &(s, pi) in &uses {
            if payoffs[pi].style == Style::Asian {
                needs_average[s] = true;
            }
        }
        let needs_functionals = plans.iter().any(|p| {
            matches!(p, Plan::Weighted { payoff, .. } if payoffs[*payoff].style == Style::Asian)
        });
        let expected_jumps = scenarios.iter().map(|s| s.expected_jumps()).collect();
        Ok(Self {
            scenarios,
            payoffs,
            needs_average,
            plans,
            needs_functionals,
            expected_jumps,
        })
    }
}

/// `∫₀ᵀ X_t dt` only, same rule as [`compute_functionals`].
fn time_integral(path: &PathSample) -> f64 {
    path.nodes
        .windows(2)
        .map(|s| 0.5 * (s[1].t - s[0].t) * (s[0].x_right + s[1].x_left))
        .sum()
}

/// Per-worker buffers.
struct Scratch {
    path: PathSample,
    /// discounted payoff per (scenario, payoff)
    discounted: Vec<f64>,
    samples: Vec<f64>,
    paired: Vec<f64>,
}

fn evaluate_draws(
    layout: &Layout,
    draws: &PathDraws,
    scratch: &mut Scratch,
    out: &mut [f64],
) -> Result<()> {
    let np = layout.payoffs.len();
    let mut base_f = PathFunctionals::default();
    for (si, sc) in layout.scenarios.iter().enumerate() {
        draws.realize_into(sc, &mut scratch.path);
        let x_t = scratch.path.terminal().x_right;
        let average = if si == 0 && layout.needs_functionals {
            base_f = compute_functionals(&scratch.path);
            base_f.i0 / sc.maturity
        } else {
            if si == 0 {
                base_f = PathFunctionals::terminal_only(&scratch.path);
            }
            if layout.needs_average[si] {
                time_integral(&scratch.path) / sc.maturity
            } else {
                f64::NAN
            }
        };
        let discount = (-sc.r * sc.maturity).exp();
        for (pi, payoff) in layout.payoffs.iter().enumerate() {
            let s = match payoff.style {
                Style::European => x_t,
                Style::Asian => average,
            };
            scratch.discounted[si * np + pi] = discount * payoff.evaluate(s);
        }
    }

    let base = &layout.scenarios[0];
    let d = &scratch.discounted;
    for (slot, plan) in out.iter_mut().zip(&layout.plans) {
        *slot = match *plan {
            Plan::Price { payoff } => d[payoff],
            Plan::Weighted {
                payoff,
                greek,
                formulas,
            } => {
                let v = d[payoff];
                if v == 0.0 {
                    0.0
                } else {
                    v * weight(layout.payoffs[payoff].style, greek, &base_f, base, &formulas)?
                }
            }
            Plan::Central {
                payoff,
                up,
                down,
                scale,
            } => (d[up * np + payoff] - d[down * np + payoff]) * scale,
            Plan::Second { payoff, up, down, h } => {
                (d[up * np + payoff] - 2.0 * d[payoff] + d[down * np + payoff]) / (h * h)
            }
        };
    }
    Ok(())
}

fn run_chunk(
    layout: &Layout,
    cfg: &RunConfig,
    grid: GridSpec,
    start: u64,
    end: u64,
) -> Result<Vec<Accumulator>> {
    let nq = layout.plans.len();
    let mut accs = vec![Accumulator::empty(); nq];
    let mut scratch = Scratch {
        path: PathSample::default(),
        discounted: vec![0.0; layout.scenarios.len() * layout.payoffs.len()],
        samples: vec![0.0; nq],
        paired: vec![0.0; nq],
    };
    let marks = layout.scenarios[0].jump_marks;
    for index in start..end {
        let stream = derive_stream(cfg.master_seed, index);
        let draws = PathDraws::sample(&stream, &marks, grid, &layout.expected_jumps);
        let mut samples = std::mem::take(&mut scratch.samples);
        evaluate_draws(layout, &draws, &mut scratch, &mut samples)?;
        if cfg.antithetic {
            let mut paired = std::mem::take(&mut scratch.paired);
            evaluate_draws(layout, &draws.antithetic(), &mut scratch, &mut paired)?;
            for (a, b) in samples.iter_mut().zip(&paired) {
                *a = 0.5 * (*a + b);
            }
            scratch.paired = paired;
        }
        for (acc, v) in accs.iter_mut().zip(&samples) {
            acc.push(index, *v);
        }
        scratch.samples = samples;
    }
    Ok(accs)
}

/// Estimates every quantity on the same paths. The result is independent
/// of `cfg.workers`.
pub fn run(p: &ModelParams, quantities: &[Quantity], cfg: &RunConfig) -> Result<Vec<Stats>> {
    let base = p.validate()?;
    cfg.validate()?;
    let grid = GridSpec::new(cfg.grid_steps)?;
    let layout = Layout::build(&base, quantities)?;

    let units = cfg.n_effective();
    let bounds: Vec<(u64, u64)> = (0..units.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(units)))
        .collect();
    let work = || -> Result<Vec<Vec<Accumulator>>> {
        bounds
            .par_iter()
            .map(|&(s, e)| run_chunk(&layout, cfg, grid, s, e))
            .collect()
    };
    let chunks = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Job(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let merged = tree_merge(&chunks)?;
    Ok(merged
        .iter()
        .map(|acc| Stats::from_accumulator(acc, cfg))
        .collect())
}
