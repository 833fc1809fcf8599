//! Exact path sampling on a uniform grid augmented with the jump times.
//!
//! Sampling is split in two stages. [`PathDraws`] holds the raw random
//! numbers of one path, read from a [`RandomStream`] in a fixed order
//! (jump count, jump times, marks, grid increments, bridge residuals).
//! [`PathDraws::realize`] then turns them into a [`PathSample`] for a given
//! parameter set. Realizing the same draws under bumped parameters is what
//! gives the finite-difference oracle its common random numbers:
//!
//! * jump times are stored as fractions of the horizon, so a maturity bump
//!   rescales every node time while keeping each jump inside the same grid cell;
//! * grid increments are standard normals scaled by `√Δt`, so the Brownian
//!   path follows Brownian scaling `W_t(T) = √T · B(t/T)`;
//! * the jump count is the Poisson quantile of a single uniform, so it only
//!   changes when `λT` crosses a quantile boundary.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{JumpMarkSpec, ModelParams};
use crate::stream::{Lane, LaneRng, RandomStream};

/// Uniform base grid `0 = t_0 < … < t_M = T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub steps: usize,
}

impl GridSpec {
    pub fn new(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("grid_steps", "grid_steps must be >= 1"));
        }
        Ok(Self { steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathNode {
    pub t: f64,
    pub w: f64,
    /// `Σ_{τ_i ≤ t} Y_i`, right-continuous.
    pub jump_sum: f64,
    /// Compound Poisson level `α · jump_sum`.
    pub x2: f64,
    pub x_left: f64,
    pub x_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub mark: f64,
}

/// One simulated trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathSample {
    pub nodes: Vec<PathNode>,
    /// Jumps sorted by time.
    pub jumps: Vec<JumpEvent>,
    pub w_terminal: f64,
    pub sum_y: f64,
}

impl PathSample {
    pub fn terminal(&self) -> &PathNode {
        self.nodes.last().expect("a path has at least two nodes")
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }
}

/// Raw random numbers of one path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathDraws {
    count_uniform: f64,
    jump_fractions: Vec<f64>,
    marks: Vec<f64>,
    grid: Vec<f64>,
    bridge: Vec<f64>,
}

/// Smallest `k` with `P(N ≤ k) ≥ u` for `N ~ Poisson(mean)`.
pub fn poisson_quantile(u: f64, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let mut p = (-mean).exp();
    let mut cdf = p;
    let mut k = 0usize;
    let cap = (mean + 40.0 * mean.sqrt() + 40.0) as usize;
    while u > cdf && k < cap {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
    }
    k
}

fn draw_mark(marks: &JumpMarkSpec, rng: &mut LaneRng) -> f64 {
    let u = rng.uniform();
    let z = match marks {
        JumpMarkSpec::Normal { .. } => crate::stream::inverse_normal_cdf(u),
        _ => 0.0,
    };
    marks.sample(u, z)
}

impl PathDraws {
    /// Reads enough draws to realize the path at every expected jump count
    /// in `expected_jumps` (one entry per maturity/intensity the caller
    /// intends to realize).
    pub fn sample(
        stream: &RandomStream,
        marks: &JumpMarkSpec,
        grid: GridSpec,
        expected_jumps: &[f64],
    ) -> Self {
        let count_uniform = stream.lane(Lane::JumpCount).uniform();
        let capacity = expected_jumps
            .iter()
            .map(|&m| poisson_quantile(count_uniform, m))
            .max()
            .unwrap_or(0);

        let mut times = stream.lane(Lane::JumpTimes);
        let jump_fractions = (0..capacity).map(|_| times.uniform()).collect();
        let mut mark_rng = stream.lane(Lane::JumpMarks);
        let marks = (0..capacity).map(|_| draw_mark(marks, &mut mark_rng)).collect();
        let mut inc = stream.lane(Lane::GridIncrements);
        let grid = (0..grid.steps).map(|_| inc.gaussian()).collect();
        let mut res = stream.lane(Lane::BridgeResiduals);
        let bridge = (0..capacity).map(|_| res.gaussian()).collect();

        Self {
            count_uniform,
            jump_fractions,
            marks,
            grid,
            bridge,
        }
    }

    /// Same jumps, every Gaussian draw negated.
    pub fn antithetic(&self) -> Self {
        Self {
            count_uniform: self.count_uniform,
            jump_fractions: self.jump_fractions.clone(),
            marks: self.marks.clone(),
            grid: self.grid.iter().map(|z| -z).collect(),
            bridge: self.bridge.iter().map(|z| -z).collect(),
        }
    }

    pub fn jump_count(&self, expected_jumps: f64) -> usize {
        poisson_quantile(self.count_uniform, expected_jumps).min(self.jump_fractions.len())
    }

    pub fn realize(&self, p: &ModelParams) -> PathSample {
        let mut out = PathSample::default();
        self.realize_into(p, &mut out);
        out
    }

    /// Builds the path under `p` into `out`, reusing its buffers. The grid
    /// resolution is the one the draws were sampled with.
    pub fn realize_into(&self, p: &ModelParams, out: &mut PathSample) {
        let steps = self.grid.len();
        let horizon = p.maturity;
        let n_jumps = self.jump_count(p.expected_jumps());
        let gamma = p.effective_drift();
        let log_x = p.x.ln();
        let level = |t: f64, w: f64, s: f64| (log_x + gamma * t + p.sigma * w + p.alpha * s).exp();

        // (fraction, draw index), ordered by time
        let mut order: Vec<(f64, usize)> = (0..n_jumps)
            .map(|j| (self.jump_fractions[j], j))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        out.nodes.clear();
        out.jumps.clear();
        out.nodes.reserve(steps + n_jumps + 1);
        out.nodes.push(PathNode {
            t: 0.0,
            w: 0.0,
            jump_sum: 0.0,
            x2: 0.0,
            x_left: p.x,
            x_right: p.x,
        });

        let m = steps as f64;
        let dt_sqrt = (horizon / m).sqrt();
        let cell_of = |frac: f64| ((frac * m).ceil() as usize).clamp(1, steps);
        let mut next = 0usize;
        let mut s = 0.0;
        let mut w_prev = 0.0;
        for k in 1..=steps {
            let t_left = horizon * ((k - 1) as f64 / m);
            let t_right = horizon * (k as f64 / m);
            let w_right = w_prev + dt_sqrt * self.grid[k - 1];

            let first = next;
            while next < order.len() && cell_of(order[next].0) == k {
                next += 1;
            }
            let mut a_t = t_left;
            let mut a_w = w_prev;
            let mut on_node = 0.0;
            for &(frac, j) in &order[first..next] {
                let tau = horizon * frac;
                let mark = self.marks[j];
                if tau >= t_right {
                    on_node += mark;
                    out.jumps.push(JumpEvent { time: t_right, mark });
                    continue;
                }
                let s_before = s;
                s += mark;
                if tau <= a_t {
                    // same instant as the previous node
                    let last = out.nodes.last_mut().expect("non-empty");
                    last.jump_sum = s;
                    last.x2 = p.alpha * s;
                    last.x_right = level(last.t, last.w, s);
                    out.jumps.push(JumpEvent { time: last.t, mark });
                    continue;
                }
                let span = t_right - a_t;
                let mean = a_w + (tau - a_t) / span * (w_right - a_w);
                let var = (tau - a_t) * (t_right - tau) / span;
                let w_tau = mean + var.max(0.0).sqrt() * self.bridge[j];
                out.jumps.push(JumpEvent { time: tau, mark });
                out.nodes.push(PathNode {
                    t: tau,
                    w: w_tau,
                    jump_sum: s,
                    x2: p.alpha * s,
                    x_left: level(tau, w_tau, s_before),
                    x_right: level(tau, w_tau, s),
                });
                a_t = tau;
                a_w = w_tau;
            }

            let s_before = s;
            s += on_node;
            out.nodes.push(PathNode {
                t: t_right,
                w: w_right,
                jump_sum: s,
                x2: p.alpha * s,
                x_left: level(t_right, w_right, s_before),
                x_right: level(t_right, w_right, s),
            });
            w_prev = w_right;
        }
        out.w_terminal = w_prev;
        out.sum_y = s;
    }
}

/// Samples one path from `stream`.
pub fn simulate_path(p: &ModelParams, grid: GridSpec, stream: &RandomStream) -> PathSample {
    PathDraws::sample(stream, &p.jump_marks, grid, &[p.expected_jumps()]).realize(p)
}

/// A path and its antithetic partner: same jumps, negated Gaussian draws.
pub fn antithetic_pair(
    p: &ModelParams,
    grid: GridSpec,
    stream: &RandomStream,
) -> (PathSample, PathSample) {
    let draws = PathDraws::sample(stream, &p.jump_marks, grid, &[p.expected_jumps()]);
    (draws.realize(p), draws.antithetic().realize(p))
}

/// Writes `path_id,t,W,X_left,X_right,X2` rows with a header.
pub fn write_paths_csv<W: Write>(mut out: W, paths: &[(u64, PathSample)]) -> Result<()> {
    writeln!(out, "path_id,t,W,X_left,X_right,X2")?;
    for (id, path) in paths {
        for n in &path.nodes {
            writeln!(
                out,
                "{id},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                n.t, n.w, n.x_left, n.x_right, n.x2
            )?;
        }
    }
    Ok(())
}
