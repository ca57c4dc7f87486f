//! Derivative-free minimizers for noisy objectives.
//!
//! Both minimizers call the objective with the point and a running
//! evaluation index, so sampled objectives can derive per-call seeds that do
//! not depend on scheduling. Points are clamped to `bounds` before every
//! call.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Energy and cost of one objective call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub shots: u64,
}

impl From<f64> for Evaluation {
    fn from(value: f64) -> Self {
        Self { value, shots: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    BudgetExhausted,
    StencilCollapsed,
    SimplexCollapsed,
}

impl StopReason {
    pub fn converged(&self) -> bool {
        !matches!(self, StopReason::BudgetExhausted)
    }
}

/// Every objective call, in evaluation-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub history: Vec<Evaluation>,
    pub stop: StopReason,
}

impl OptimizerOutcome {
    pub fn evaluations(&self) -> usize {
        self.history.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub const UNBOUNDED: Bounds = Bounds { lower: f64::NEG_INFINITY, upper: f64::INFINITY };

    fn clamp(&self, x: &mut [f64]) {
        for v in x {
            *v = v.clamp(self.lower, self.upper);
        }
    }
}

struct Counter<'a, F> {
    f: &'a F,
    bounds: Bounds,
    history: Vec<Evaluation>,
    budget: usize,
}

impl<'a, F> Counter<'a, F>
where
    F: Fn(&[f64], u64) -> Result<Evaluation> + Sync,
{
    fn remaining(&self) -> usize {
        self.budget - self.history.len()
    }

    /// Evaluates up to `remaining()` points concurrently; returns values for
    /// the prefix that fit in the budget.
    fn batch(&mut self, mut points: Vec<Vec<f64>>) -> Result<Vec<(Vec<f64>, f64)>> {
        points.truncate(self.remaining());
        for p in &mut points {
            self.bounds.clamp(p);
        }
        let start = self.history.len() as u64;
        let evals = points.par_iter().enumerate().map(|(k, p)| (self.f)(p, start + k as u64)).collect::<Result<Vec<_>>>()?;
        self.history.extend(&evals);
        Ok(points.into_iter().zip(evals.into_iter().map(|e| e.value)).collect())
    }

    fn one(&mut self, mut x: Vec<f64>) -> Result<f64> {
        self.bounds.clamp(&mut x);
        let e = (self.f)(&x, self.history.len() as u64)?;
        self.history.push(e);
        Ok(e.value)
    }
}

/// Coordinate-stencil implicit filtering.
///
/// At step size `h` the objective is evaluated at `x ± h·e_k` for every
/// coordinate. The iterate moves to the lowest stencil point if it is
/// strictly below the current value (ties go to the lowest coordinate
/// index, `+` before `−`); otherwise `h` is halved. Stops when `h` drops
/// below `min_step` or `budget` calls have been made.
pub fn implicit_filtering<F>(f: &F, x0: &[f64], initial_step: f64, min_step: f64, budget: usize, bounds: Bounds) -> Result<OptimizerOutcome>
where
    F: Fn(&[f64], u64) -> Result<Evaluation> + Sync,
{
    if !(min_step > 0.0 && initial_step > min_step) {
        return Err(Error::InvalidInput(format!("need initial_step > min_step > 0, got {initial_step} and {min_step}")));
    }
    if budget < 1 {
        return Err(Error::InvalidInput("budget must allow at least one evaluation".into()));
    }
    let mut c = Counter { f, bounds, history: Vec::new(), budget };
    let mut x = x0.to_vec();
    bounds.clamp(&mut x);
    let mut fx = c.one(x.clone())?;
    let mut h = initial_step;
    loop {
        if h < min_step {
            return Ok(OptimizerOutcome { x, value: fx, history: c.history, stop: StopReason::StencilCollapsed });
        }
        if c.remaining() == 0 {
            return Ok(OptimizerOutcome { x, value: fx, history: c.history, stop: StopReason::BudgetExhausted });
        }
        let stencil: Vec<Vec<f64>> = (0..x.len())
            .flat_map(|k| [1.0, -1.0].map(|s| (k, s)))
            .map(|(k, s)| {
                let mut p = x.clone();
                p[k] += s * h;
                p
            })
            .collect();
        let full = stencil.len();
        let results = c.batch(stencil)?;
        let best = results.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0)));
        match best {
            Some((_, (p, v))) if *v < fx => {
                x = p.clone();
                fx = *v;
            }
            _ if results.len() == full => h *= 0.5,
            _ => {}
        }
    }
}

/// Nelder-Mead with the standard coefficients (1, 2, ½, ½) and an axis
/// simplex of edge `initial_step`. Stops when the largest vertex distance
/// from the best vertex is below `tolerance` or after `budget` calls.
pub fn nelder_mead<F>(f: &F, x0: &[f64], initial_step: f64, tolerance: f64, budget: usize, bounds: Bounds) -> Result<OptimizerOutcome>
where
    F: Fn(&[f64], u64) -> Result<Evaluation> + Sync,
{
    if !(initial_step > 0.0 && tolerance > 0.0) {
        return Err(Error::InvalidInput("initial_step and tolerance must be positive".into()));
    }
    if budget < 1 {
        return Err(Error::InvalidInput("budget must allow at least one evaluation".into()));
    }
    let n = x0.len();
    let mut c = Counter { f, bounds, history: Vec::new(), budget };
    let mut start = x0.to_vec();
    bounds.clamp(&mut start);
    let mut vertices = vec![start.clone()];
    for k in 0..n {
        let mut v = start.clone();
        v[k] += initial_step;
        vertices.push(v);
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = c.batch(vertices)?;
    let finish = |mut simplex: Vec<(Vec<f64>, f64)>, history, stop| {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Ok(OptimizerOutcome { x, value, history, stop })
    };
    if simplex.len() < n + 1 {
        return finish(simplex, c.history, StopReason::BudgetExhausted);
    }
    let point = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(u, v)| u + t * (v - u)).collect() };
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter =
            simplex[1..].iter().map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()).fold(0.0, f64::max);
        if diameter < tolerance {
            return finish(simplex, c.history, StopReason::SimplexCollapsed);
        }
        if c.remaining() == 0 {
            return finish(simplex, c.history, StopReason::BudgetExhausted);
        }
        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|(v, _)| v[k]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let mut reflected = point(&centroid, &worst.0, -1.0);
        bounds.clamp(&mut reflected);
        let fr = c.one(reflected.clone())?;
        if fr < simplex[0].1 {
            if c.remaining() == 0 {
                simplex[n] = (reflected, fr);
                continue;
            }
            let mut expanded = point(&centroid, &worst.0, -2.0);
            bounds.clamp(&mut expanded);
            let fe = c.one(expanded.clone())?;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            if c.remaining() == 0 {
                continue;
            }
            let (target, ft) = if fr < worst.1 { (reflected.clone(), fr) } else { (worst.0.clone(), worst.1) };
            let contracted = point(&centroid, &target, 0.5);
            let fc = c.one(contracted.clone())?;
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                let shrunk: Vec<Vec<f64>> = simplex[1..].iter().map(|(v, _)| point(&best, v, 0.5)).collect();
                let evaluated = c.batch(shrunk)?;
                for (k, pv) in evaluated.into_iter().enumerate() {
                    simplex[k + 1] = pv;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: &[f64], _: u64) -> Result<Evaluation> {
        Ok(x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>().into())
    }

    #[test]
    fn implicit_filtering_finds_separable_minimum() {
        let out = implicit_filtering(&quadratic, &[0.0; 3], 1.0, 1e-6, 10_000, Bounds::UNBOUNDED).unwrap();
        assert_eq!(out.stop, StopReason::StencilCollapsed);
        assert!(out.x.iter().all(|v| (v - 1.0).abs() < 1e-6));
    }

    #[test]
    fn budget_of_one_returns_start() {
        let out = implicit_filtering(&quadratic, &[0.5, 0.5], 1.0, 1e-3, 1, Bounds::UNBOUNDED).unwrap();
        assert_eq!(out.evaluations(), 1);
        assert_eq!(out.x, vec![0.5, 0.5]);
        assert_eq!(out.value, 0.5);
        assert_eq!(out.stop, StopReason::BudgetExhausted);
        let nm = nelder_mead(&quadratic, &[0.5, 0.5], 0.1, 1e-6, 1, Bounds::UNBOUNDED).unwrap();
        assert_eq!(nm.x, vec![0.5, 0.5]);
    }

    #[test]
    fn stencil_ties_prefer_lowest_coordinate() {
        let f = |x: &[f64], _: u64| -> Result<Evaluation> { Ok((-(x[0].abs() + x[1].abs())).max(-1.0).into()) };
        let out = implicit_filtering(&f, &[0.0, 0.0], 1.0, 0.4, 1 + 4, Bounds::UNBOUNDED).unwrap();
        assert_eq!(out.x, vec![1.0, 0.0]);
    }

    #[test]
    fn nelder_mead_collapses_on_rosenbrock() {
        let rosen = |x: &[f64], _: u64| -> Result<Evaluation> { Ok(((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)).into()) };
        let out = nelder_mead(&rosen, &[-1.2, 1.0], 0.5, 1e-8, 20_000, Bounds::UNBOUNDED).unwrap();
        assert_eq!(out.stop, StopReason::SimplexCollapsed);
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
    }

    #[test]
    fn bounds_are_respected() {
        let f = |x: &[f64], _: u64| -> Result<Evaluation> { Ok((-x[0]).into()) };
        let b = Bounds { lower: -1.0, upper: 1.0 };
        let out = implicit_filtering(&f, &[0.0], 0.7, 1e-3, 1000, b).unwrap();
        assert_eq!(out.x, vec![1.0]);
        let nm = nelder_mead(&f, &[0.0], 0.3, 1e-8, 1000, b).unwrap();
        assert!(nm.x[0] <= 1.0 && (nm.x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn noisy_runs_land_in_the_noiseless_basin() {
        use rand::{Rng, SeedableRng};
        // two wells at ±1, start biased towards +1
        let base = |x: f64| (x * x - 1.0).powi(2) - 0.1 * x;
        let clean = implicit_filtering(&|x: &[f64], _: u64| Ok(base(x[0]).into()), &[0.3], 0.25, 1e-3, 500, Bounds::UNBOUNDED).unwrap();
        let mut agree = 0;
        for seed in 0..20u64 {
            let noisy = |x: &[f64], k: u64| -> Result<Evaluation> {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed * 1_000_003 + k);
                let noise: f64 = rng.random_range(-1.0..1.0) * 1e-3;
                Ok((base(x[0]) + noise).into())
            };
            let out = implicit_filtering(&noisy, &[0.3], 0.25, 1e-3, 500, Bounds::UNBOUNDED).unwrap();
            if (out.x[0] - clean.x[0]).abs() < 0.2 {
                agree += 1;
            }
        }
        assert!(agree >= 18, "{agree}/20");
    }
}
