//! Branch tracing on the augmentation curve and the disk potential.
//!
//! For fixed `Q`, `Aug(e^x, μ, Q) = 0` defines `μ(x)` locally on a branch.
//! [`trace_branch`] follows one branch on a uniform grid in `x` by
//! predictor-corrector continuation, [`disk_potential`] integrates
//! `p = log μ` to `W(x) = ∫ p dx`, and [`check_gradient`] verifies
//! `dW/dx = p` by finite differences.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::ring::{LaurentPoly, RingError, VarSet, LAMBDA, MU, Q};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error("seed residual {residual:e} exceeds tolerance {tolerance:e}")]
    SeedResidual { residual: f64, tolerance: f64 },
    #[error("∂Aug/∂ep vanishes at the seed (|∂Aug/∂ep| = {0:e})")]
    SingularSeed(f64),
    #[error("branch point or divergence near x = {x}: step fell below {min_step:e}; last good sample at x = {}", last.x)]
    BranchPoint { x: f64, min_step: f64, last: Sample },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample grid is not uniform at index {0}")]
    NonUniform(usize),
    #[error("path and table grids differ at index {0}")]
    GridMismatch(usize),
    #[error("step count must be positive")]
    NoSteps,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Tolerances of the continuation. The defaults are the documented ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    /// Largest accepted `|Aug|` at the user seed.
    pub seed_tolerance: f64,
    /// Newton stops when the update is below this (relative to `max(1, |μ|)`).
    pub newton_tolerance: f64,
    pub max_newton_iterations: usize,
    /// Largest accepted `|Aug|` at a sample.
    pub residual_tolerance: f64,
    /// Smallest substep before giving up.
    pub min_step: f64,
    /// `|∂Aug/∂μ|` below this triggers step halving.
    pub derivative_tolerance: f64,
    /// Largest accepted `|Δp|` between consecutive substeps.
    pub branch_jump: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            seed_tolerance: 1e-8,
            newton_tolerance: 1e-12,
            max_newton_iterations: 50,
            residual_tolerance: 1e-10,
            min_step: 1e-10,
            derivative_tolerance: 1e-8,
            branch_jump: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub lambda: f64,
    pub mu: Complex64,
    /// `log μ`, continued along the path.
    pub p: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchPath {
    pub q_value: Complex64,
    pub samples: Vec<Sample>,
}

/// `Aug(λ, μ, Q)` with its partial derivatives, evaluated numerically.
struct Curve {
    f: LaurentPoly,
    f_l: LaurentPoly,
    f_m: LaurentPoly,
    q: Complex64,
}

impl Curve {
    fn new(aug: &LaurentPoly, q: Complex64) -> Result<Self, DiskError> {
        let f = aug.embed(&VarSet::augmentation())?;
        Ok(Curve {
            f_l: f.derivative(LAMBDA)?,
            f_m: f.derivative(MU)?,
            f,
            q,
        })
    }

    fn point(&self, lambda: f64, mu: Complex64) -> [Complex64; 3] {
        // VarSet::augmentation() order
        debug_assert_eq!(VarSet::augmentation().names(), [LAMBDA, MU, Q]);
        [Complex64::new(lambda, 0.0), mu, self.q]
    }

    fn eval(&self, p: &LaurentPoly, lambda: f64, mu: Complex64) -> Result<Complex64, DiskError> {
        Ok(p.eval_values(&self.point(lambda, mu))?)
    }

    fn value(&self, lambda: f64, mu: Complex64) -> Result<Complex64, DiskError> {
        self.eval(&self.f, lambda, mu)
    }

    /// Newton in `μ` at fixed `λ`; `None` on divergence or a flat derivative.
    fn correct(&self, lambda: f64, mut mu: Complex64, cfg: &TraceConfig) -> Result<Option<(Complex64, f64)>, DiskError> {
        for _ in 0..cfg.max_newton_iterations {
            let fv = self.value(lambda, mu)?;
            let d = self.eval(&self.f_m, lambda, mu)?;
            if d.norm() < cfg.derivative_tolerance || !d.is_finite() {
                return Ok(None);
            }
            let step = fv / d;
            mu -= step;
            if !mu.is_finite() {
                return Ok(None);
            }
            if step.norm() <= cfg.newton_tolerance * mu.norm().max(1.0) {
                let r = self.value(lambda, mu)?.norm();
                return Ok((r < cfg.residual_tolerance).then_some((mu, r)));
            }
        }
        Ok(None)
    }

    /// `dμ/dx = -λ ∂_λAug / ∂_μAug`.
    fn tangent(&self, lambda: f64, mu: Complex64) -> Result<Complex64, DiskError> {
        let fl = self.eval(&self.f_l, lambda, mu)?;
        let fm = self.eval(&self.f_m, lambda, mu)?;
        Ok(-(fl * lambda) / fm)
    }
}

/// The branch of `log` closest to `prev`.
fn continue_log(mu: Complex64, prev: Complex64) -> Complex64 {
    let base = mu.ln();
    let k = ((prev.im - base.im) / (2.0 * PI)).round();
    Complex64::new(base.re, base.im + 2.0 * PI * k)
}

/// Follows the branch through `μ_seed` at `x_start` to `x_end`, returning
/// `steps + 1` samples on the uniform grid.
///
/// Each grid interval is crossed by substeps: a tangent predictor, then
/// Newton in `μ`. A substep is halved when Newton fails, the derivative in
/// `μ` is too small, the residual is too large or `p` jumps; below
/// `min_step` the trace stops with [`DiskError::BranchPoint`].
pub fn trace_branch(
    aug: &LaurentPoly,
    q_value: Complex64,
    x_start: f64,
    mu_seed: Complex64,
    x_end: f64,
    steps: usize,
    cfg: &TraceConfig,
) -> Result<BranchPath, DiskError> {
    if steps == 0 {
        return Err(DiskError::NoSteps);
    }
    let curve = Curve::new(aug, q_value)?;
    let lambda0 = x_start.exp();
    let r0 = curve.value(lambda0, mu_seed)?.norm();
    if r0.is_nan() || r0 >= cfg.seed_tolerance {
        return Err(DiskError::SeedResidual {
            residual: r0,
            tolerance: cfg.seed_tolerance,
        });
    }
    let d0 = curve.eval(&curve.f_m, lambda0, mu_seed)?.norm();
    if d0 < cfg.derivative_tolerance {
        return Err(DiskError::SingularSeed(d0));
    }
    let (mu0, res0) = curve
        .correct(lambda0, mu_seed, cfg)?
        .ok_or(DiskError::SingularSeed(d0))?;
    let first = Sample {
        x: x_start,
        lambda: lambda0,
        mu: mu0,
        p: mu0.ln(),
        residual: res0,
    };
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(first);

    let h = (x_end - x_start) / steps as f64;
    let mut cur = first;
    for i in 1..=steps {
        let target = x_start + h * i as f64;
        let mut dx = target - cur.x;
        while cur.x != target {
            let remaining = target - cur.x;
            if dx.abs() > remaining.abs() {
                dx = remaining;
            }
            let x = if dx == remaining { target } else { cur.x + dx };
            let lambda = x.exp();
            let predicted = cur.mu + curve.tangent(cur.lambda, cur.mu)? * (x - cur.x);
            let accepted = match curve.correct(lambda, predicted, cfg)? {
                Some((mu, residual)) => {
                    let p = continue_log(mu, cur.p);
                    ((p - cur.p).norm() < cfg.branch_jump).then_some(Sample {
                        x,
                        lambda,
                        mu,
                        p,
                        residual,
                    })
                }
                None => None,
            };
            match accepted {
                Some(s) => {
                    cur = s;
                    dx = target - cur.x;
                }
                None => {
                    dx /= 2.0;
                    if dx.abs() < cfg.min_step {
                        return Err(DiskError::BranchPoint {
                            x: cur.x,
                            min_step: cfg.min_step,
                            last: cur,
                        });
                    }
                }
            }
        }
        samples.push(cur);
    }
    Ok(BranchPath { q_value, samples })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    pub x: Vec<f64>,
    pub w: Vec<Complex64>,
    pub rule: &'static str,
    /// `max |W_simpson - W_trapezoid|`, a conservative bound for the
    /// Simpson error on smooth data.
    pub error_estimate: f64,
}

fn uniform_step(x: &[f64]) -> Result<f64, DiskError> {
    let h = x[1] - x[0];
    let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    for i in 1..x.len() {
        if ((x[i] - x[i - 1]) - h).abs() > 1e-9 * scale {
            return Err(DiskError::NonUniform(i));
        }
    }
    Ok(h)
}

/// `W(x_i) = ∫_{x_0}^{x_i} p dx` by cumulative composite Simpson.
///
/// Even nodes use Simpson panels from the basepoint; odd nodes add the
/// three-point partial panel `h(5p₀ + 8p₁ - p₂)/12` (mirrored at the end of
/// the grid), which keeps the third-order local accuracy.
pub fn disk_potential(path: &BranchPath) -> Result<PotentialTable, DiskError> {
    let n = path.samples.len();
    if n < 3 {
        return Err(DiskError::TooFewSamples { needed: 3, got: n });
    }
    let x: Vec<f64> = path.samples.iter().map(|s| s.x).collect();
    let p: Vec<Complex64> = path.samples.iter().map(|s| s.p).collect();
    let h = uniform_step(&x)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut w = vec![zero; n];
    for i in 1..n {
        w[i] = if i % 2 == 0 {
            w[i - 2] + (p[i - 2] + p[i - 1] * 4.0 + p[i]) * (h / 3.0)
        } else if i + 1 < n {
            w[i - 1] + (p[i - 1] * 5.0 + p[i] * 8.0 - p[i + 1]) * (h / 12.0)
        } else {
            w[i - 1] + (-p[i - 2] + p[i - 1] * 8.0 + p[i] * 5.0) * (h / 12.0)
        };
    }
    let mut trap = zero;
    let mut err = 0.0f64;
    for i in 1..n {
        trap += (p[i - 1] + p[i]) * (h / 2.0);
        err = err.max((trap - w[i]).norm());
    }
    Ok(PotentialTable {
        x,
        w,
        rule: "composite-simpson",
        error_estimate: err,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientReport {
    pub max_deviation: f64,
    pub index: usize,
    pub x: f64,
}

/// Compares `dW/dx` (fourth-order central differences on interior nodes
/// `2..n-2`) with the sampled `p`.
pub fn check_gradient(path: &BranchPath, table: &PotentialTable) -> Result<GradientReport, DiskError> {
    let n = path.samples.len();
    if n < 5 {
        return Err(DiskError::TooFewSamples { needed: 5, got: n });
    }
    if table.x.len() != n {
        return Err(DiskError::GridMismatch(n.min(table.x.len())));
    }
    for (i, (s, x)) in path.samples.iter().zip(&table.x).enumerate() {
        if s.x != *x {
            return Err(DiskError::GridMismatch(i));
        }
    }
    let h = uniform_step(&table.x)?;
    let w = &table.w;
    let mut best = GradientReport {
        max_deviation: 0.0,
        index: 2,
        x: table.x[2],
    };
    for i in 2..n - 2 {
        let d = (w[i - 2] - w[i - 1] * 8.0 + w[i + 1] * 8.0 - w[i + 2]) / (12.0 * h);
        let dev = (d - path.samples[i].p).norm();
        if dev > best.max_deviation {
            best = GradientReport {
                max_deviation: dev,
                index: i,
                x: table.x[i],
            };
        }
    }
    Ok(best)
}

/// CSV with header `x,re_mu,im_mu,re_p,im_p,residual,W`, floats with 17
/// significant digits; the `W` column is `Re W`.
pub fn to_csv(path: &BranchPath, table: &PotentialTable) -> String {
    let mut out = String::from("x,re_mu,im_mu,re_p,im_p,residual,W\n");
    for (s, w) in path.samples.iter().zip(&table.w) {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.x, s.mu.re, s.mu.im, s.p.re, s.p.im, s.residual, w.re
        );
    }
    out
}
