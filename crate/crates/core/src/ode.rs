//! Limit ODE of the even-degree recurrence.
//!
//! `F' = -F^(d-3) / (F^(d-2) + 2)` with `F(0) = 1`, where `F = 1 - Q~` and
//! `Q' = -F F'` so that `Q = (1 - F^2) / 2`. Both components are integrated
//! together, which makes the closed form for `Q` a real check.

use serde::Serialize;

use crate::error::{precondition, Result};

#[derive(Debug, Clone, Serialize)]
pub struct OdeSolution {
    pub delta: usize,
    pub step: f64,
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub q_tilde: Vec<f64>,
    pub q: Vec<f64>,
    pub f_end: f64,
    pub q_end: f64,
}

impl OdeSolution {
    /// Largest `|Q(x) - (1 - F(x)^2)/2|` over the grid.
    pub fn closed_form_residual(&self) -> f64 {
        self.f
            .iter()
            .zip(&self.q)
            .map(|(f, q)| (q - (1.0 - f * f) / 2.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.f.windows(2).all(|w| w[1] < w[0])
    }

    /// Second differences of `F` on the grid are all positive.
    pub fn convex(&self) -> bool {
        self.f.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] > 0.0)
    }

    /// `1 / (delta + 1)`, the level `Q(1)` has to beat.
    pub fn q_target(&self) -> f64 {
        1.0 / (self.delta as f64 + 1.0)
    }
}

fn rhs(delta: usize, y: [f64; 2]) -> [f64; 2] {
    let f = y[0];
    let df = -f.powi(delta as i32 - 3) / (f.powi(delta as i32 - 2) + 2.0);
    [df, -f * df]
}

/// Classical fourth-order Runge-Kutta on `[0,1]` with fixed step `h`.
pub fn integrate_even_ode(delta: usize, h: f64) -> Result<OdeSolution> {
    if delta < 4 || delta % 2 == 1 {
        return precondition(format!("delta = {delta} must be even and at least 4"));
    }
    if !(h > 0.0 && h <= 1e-3) {
        return precondition(format!("step {h} outside (0, 1e-3]"));
    }
    let steps = (1.0 / h).round() as usize;
    if ((steps as f64) * h - 1.0).abs() > 1e-9 {
        return precondition(format!("step {h} does not divide [0,1]"));
    }
    let mut y = [1.0, 0.0];
    let mut x = Vec::with_capacity(steps + 1);
    let mut f = Vec::with_capacity(steps + 1);
    let mut q = Vec::with_capacity(steps + 1);
    x.push(0.0);
    f.push(y[0]);
    q.push(y[1]);
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
    for i in 1..=steps {
        let k1 = rhs(delta, y);
        let k2 = rhs(delta, add(y, k1, h / 2.0));
        let k3 = rhs(delta, add(y, k2, h / 2.0));
        let k4 = rhs(delta, add(y, k3, h));
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        x.push(i as f64 * h);
        f.push(y[0]);
        q.push(y[1]);
    }
    let q_tilde = f.iter().map(|v| 1.0 - v).collect();
    Ok(OdeSolution {
        delta,
        step: h,
        f_end: y[0],
        q_end: y[1],
        x,
        f,
        q_tilde,
        q,
    })
}

/// `1 + 3/(d-2) * ln(((2/3)^(d-2) + 2) / 3)`, an upper bound on `F(1)`.
pub fn f_end_bound(delta: usize) -> f64 {
    let d = delta as f64;
    1.0 + 3.0 / (d - 2.0) * (((2.0f64 / 3.0).powf(d - 2.0) + 2.0) / 3.0).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct OdeVerdict {
    pub delta: usize,
    pub step: f64,
    pub f_end: f64,
    pub f_end_bound: f64,
    pub q_end: f64,
    pub q_target: f64,
    pub margin: f64,
    /// `|Q(1)` at `h` minus `Q(1)` at `h/2|`.
    pub step_halving_gap: f64,
    pub closed_form_residual: f64,
    pub passed: bool,
}

/// Integrate at `h` and `h/2` and check every property of the solution.
pub fn verify_even_bound(delta: usize, h: f64) -> Result<OdeVerdict> {
    let coarse = integrate_even_ode(delta, h)?;
    let fine = integrate_even_ode(delta, h / 2.0)?;
    let gap = (coarse.q_end - fine.q_end)
        .abs()
        .max((coarse.f_end - fine.f_end).abs());
    let bound = f_end_bound(delta);
    let residual = coarse.closed_form_residual();
    let passed = coarse.q_end > coarse.q_target()
        && coarse.f_end <= bound
        && gap < 1e-8
        && residual <= 10.0 * h.powi(4)
        && coarse.strictly_decreasing()
        && coarse.convex();
    Ok(OdeVerdict {
        delta,
        step: h,
        f_end: coarse.f_end,
        f_end_bound: bound,
        q_end: coarse.q_end,
        q_target: coarse.q_target(),
        margin: coarse.q_end - coarse.q_target(),
        step_halving_gap: gap,
        closed_form_residual: residual,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_slope() {
        for d in [4, 6, 10] {
            let [df, _] = rhs(d, [1.0, 0.0]);
            assert!((df + 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degree_four_bound() {
        let v = verify_even_bound(4, 1e-3).unwrap();
        assert!(v.passed, "{v:?}");
        assert!(v.q_end > 0.2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate_even_ode(5, 1e-3).is_err());
        assert!(integrate_even_ode(4, 0.01).is_err());
        assert!(integrate_even_ode(4, 0.0).is_err());
    }
}
