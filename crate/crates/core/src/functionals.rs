//! Time integrals of a path, by trapezoid over consecutive nodes.
//!
//! A segment `[a, b]` uses the right limit of `X` at `a` and the left limit
//! at `b`, so a jump sitting on a node never leaks into the neighbouring
//! segment. The compound Poisson level is constant on `[a, b)` and `W` is
//! linear between nodes.

use crate::simulate::PathSample;

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Scalar reductions of one path used by the stochastic weights.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PathFunctionals {
    /// `∫ X_t dt`
    pub i0: f64,
    /// `∫ t X_t dt`
    pub i1: f64,
    /// `∫ t² X_t dt`
    pub i2: f64,
    /// `∫ t³ X_t dt`
    pub i3: f64,
    /// `∫ X_t W_t dt`
    pub int_xw: f64,
    /// `∫ t X_t W_t dt`
    pub int_txw: f64,
    /// `∫ X⁽²⁾_t X_t dt`
    pub int_x2x: f64,
    /// `∫ t X⁽²⁾_t X_t dt`
    pub int_tx2x: f64,
    /// `∫ (Σ_{τ_i ≤ t} Y_i) X_t dt`, the jump integral without the `α` factor.
    pub int_sy_x: f64,
    /// `∫ t (Σ_{τ_i ≤ t} Y_i) X_t dt`
    pub int_tsy_x: f64,
    pub w_terminal: f64,
    pub x_terminal: f64,
    pub sum_y: f64,
    pub jump_count: usize,
}

impl PathFunctionals {
    /// Only the terminal quantities; the integrals are left at zero.
    pub fn terminal_only(path: &PathSample) -> Self {
        Self {
            w_terminal: path.w_terminal,
            x_terminal: path.terminal().x_right,
            sum_y: path.sum_y,
            jump_count: path.jump_count(),
            ..Self::default()
        }
    }
}

pub fn compute_functionals(path: &PathSample) -> PathFunctionals {
    let mut i = [CompensatedSum::default(); 4];
    let mut xw = CompensatedSum::default();
    let mut txw = CompensatedSum::default();
    let mut x2x = CompensatedSum::default();
    let mut tx2x = CompensatedSum::default();
    let mut syx = CompensatedSum::default();
    let mut tsyx = CompensatedSum::default();

    for seg in path.nodes.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        let h = 0.5 * (b.t - a.t);
        let (xa, xb) = (a.x_right, b.x_left);

        let mut ta = 1.0;
        let mut tb = 1.0;
        for acc in i.iter_mut() {
            acc.add(h * (ta * xa + tb * xb));
            ta *= a.t;
            tb *= b.t;
        }
        xw.add(h * (xa * a.w + xb * b.w));
        txw.add(h * (a.t * xa * a.w + b.t * xb * b.w));
        let plain = h * (xa + xb);
        let timed = h * (a.t * xa + b.t * xb);
        x2x.add(a.x2 * plain);
        tx2x.add(a.x2 * timed);
        syx.add(a.jump_sum * plain);
        tsyx.add(a.jump_sum * timed);
    }

    PathFunctionals {
        i0: i[0].value(),
        i1: i[1].value(),
        i2: i[2].value(),
        i3: i[3].value(),
        int_xw: xw.value(),
        int_txw: txw.value(),
        int_x2x: x2x.value(),
        int_tx2x: tx2x.value(),
        int_sy_x: syx.value(),
        int_tsy_x: tsyx.value(),
        w_terminal: path.w_terminal,
        x_terminal: path.terminal().x_right,
        sum_y: path.sum_y,
        jump_count: path.jump_count(),
    }
}
