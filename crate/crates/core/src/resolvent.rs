//! Hautus-type resolvent estimates `∥u∥² <= M∥(Δ-λ)u∥² + m∥χu∥²`: best
//! constants, λ-sweeps, and the conversions between resolvent and
//! observability constants (Miller time and cost).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hum::{difference_index, multiplier_coeffs};
use crate::linalg::{self, CMatrix};
use crate::spectral::{multiply_samples, CutoffWindow, FourierState, GridSpec};

/// Relative tolerance for treating `λ` as an eigenvalue of `Δ`.
const KERNEL_TOL: f64 = 1e-10;
/// Tolerance on kernel-block eigenvalues of `I - mW`.
const FEASIBILITY_TOL: f64 = 1e-12;

/// Matrix of the quadratic form `u ↦ ∥χu∥²` in the mode basis.
pub fn observation_form(window: &CutoffWindow) -> CMatrix {
    let grid = window.grid();
    let c = multiplier_coeffs(&grid, &window.squared());
    let len = grid.len();
    CMatrix::from_fn(len, len, |n, k| c[difference_index(&grid, n, k)])
}

/// Symbol of `Δ - λ` on the mode at `idx`.
fn shifted_symbol(grid: &GridSpec, idx: usize, lambda: f64) -> f64 {
    -grid.laplacian_symbol(idx) - lambda
}

fn on_spectrum(grid: &GridSpec, idx: usize, lambda: f64) -> bool {
    let scale = 1f64.max(grid.laplacian_symbol(idx)).max(lambda.abs());
    shifted_symbol(grid, idx, lambda).abs() <= KERNEL_TOL * scale
}

/// Smallest `M >= 0` with `∥u∥² <= M∥(Δ-λ)u∥² + m∥χu∥²` for every
/// resolved `u`.
///
/// Off the spectrum this is the top generalized eigenvalue of
/// `(I - mW) u = μ (Δ-λ)² u`. When `λ` is an eigenvalue the kernel of
/// `Δ - λ` must satisfy `m⟨Wφ,φ⟩ >= ∥φ∥²`; the kernel block is then
/// eliminated through its Schur complement.
pub fn best_resolvent_constant(lambda: f64, m: f64, window: &CutoffWindow) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    let grid = window.grid();
    let len = grid.len();
    let w = observation_form(window);
    let a = CMatrix::identity(len, len) - w * Complex64::new(m, 0.0);

    let (kernel, complement): (Vec<usize>, Vec<usize>) = (0..len).partition(|&i| on_spectrum(&grid, i, lambda));
    if complement.is_empty() {
        let ev = linalg::hermitian_eigenvalues(&a);
        if ev[len - 1] > FEASIBILITY_TOL {
            return Err(Error::Infeasible { lambda, m });
        }
        return Ok(0.0);
    }
    let sub = |rows: &[usize], cols: &[usize]| CMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]);
    let mut reduced = sub(&complement, &complement);
    if !kernel.is_empty() {
        let akk = sub(&kernel, &kernel);
        let akc = sub(&kernel, &complement);
        let (vals, vecs) = linalg::hermitian_eigen(&akk);
        for (j, &mu) in vals.iter().enumerate() {
            let v = vecs.column(j);
            // coupling of this kernel direction to the complement
            let coupling = v.adjoint() * &akc;
            if mu > FEASIBILITY_TOL {
                return Err(Error::Infeasible { lambda, m });
            }
            if mu >= -FEASIBILITY_TOL {
                if coupling.norm() > 1e-10 {
                    return Err(Error::Infeasible { lambda, m });
                }
                continue;
            }
            // A_cc - A_ck v (1/mu) v* A_kc
            let outer = coupling.adjoint() * &coupling;
            reduced -= outer * Complex64::new(1.0 / mu, 0.0);
        }
    }
    let scale: Vec<f64> = complement.iter().map(|&i| 1.0 / shifted_symbol(&grid, i, lambda).abs()).collect();
    let b = CMatrix::from_fn(complement.len(), complement.len(), |i, j| reduced[(i, j)] * (scale[i] * scale[j]));
    let ev = linalg::hermitian_eigenvalues(&b);
    Ok(ev[ev.len() - 1].max(0.0))
}

/// Smallest `m` for which every eigenvalue `λ` of `Δ` is feasible, i.e.
/// `max` over eigenspaces `E` of `1 / λ_min(W|_E)`.
pub fn minimal_feasible_m(window: &CutoffWindow) -> Result<f64> {
    let grid = window.grid();
    let w = observation_form(window);
    let mut by_level: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
    for i in 0..grid.len() {
        by_level.entry(grid.laplacian_symbol(i).to_bits()).or_default().push(i);
    }
    let mut worst: f64 = 0.0;
    for (level, idx) in by_level {
        let block = CMatrix::from_fn(idx.len(), idx.len(), |i, j| w[(idx[i], idx[j])]);
        let lo = linalg::hermitian_eigenvalues(&block)[0];
        if lo <= FEASIBILITY_TOL {
            return Err(Error::Infeasible {
                lambda: -f64::from_bits(level),
                m: f64::INFINITY,
            });
        }
        worst = worst.max(1.0 / lo);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventSweepResult {
    pub lambda_grid: Vec<f64>,
    pub m_fixed: f64,
    #[serde(rename = "M_of_lambda")]
    pub m_of_lambda: Vec<f64>,
    #[serde(rename = "M_sup")]
    pub m_sup: f64,
    pub miller_time: f64,
}

impl ResolventSweepResult {
    /// Miller cost bound at horizon `t` from the recorded constants.
    pub fn miller_cost(&self, t: f64) -> Result<f64> {
        miller_cost_bound(self.m_sup, self.m_fixed, t)
    }

    /// Largest `M(λ)` over `|λ| >= r0` (high-frequency regime).
    pub fn sup_beyond(&self, r0: f64) -> Option<f64> {
        self.lambda_grid
            .iter()
            .zip(&self.m_of_lambda)
            .filter(|(l, _)| l.abs() >= r0)
            .map(|(_, &v)| v)
            .reduce(f64::max)
    }
}

/// One λ evaluation; `None` marks an infeasible point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lambda: f64,
    #[serde(rename = "M_best")]
    pub m_best: Option<f64>,
}

/// Evaluates every λ, recording infeasible points instead of failing.
pub fn scan(lambda_grid: &[f64], m: f64, window: &CutoffWindow) -> Result<Vec<SweepPoint>> {
    lambda_grid
        .iter()
        .map(|&lambda| match best_resolvent_constant(lambda, m, window) {
            Ok(v) => Ok(SweepPoint { lambda, m_best: Some(v) }),
            Err(Error::Infeasible { .. }) => Ok(SweepPoint { lambda, m_best: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Best constants over a λ grid, with `M_sup` and the Miller time
/// `π√M_sup`. Fails on the first infeasible λ.
pub fn sweep(lambda_grid: &[f64], m: f64, window: &CutoffWindow) -> Result<ResolventSweepResult> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("empty lambda grid".into()));
    }
    let mut sorted = lambda_grid.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let values = sorted
        .iter()
        .map(|&l| best_resolvent_constant(l, m, window))
        .collect::<Result<Vec<f64>>>()?;
    let m_sup = values.iter().cloned().fold(0.0, f64::max);
    Ok(ResolventSweepResult {
        lambda_grid: sorted,
        m_fixed: m,
        m_of_lambda: values,
        m_sup,
        miller_time: PI * m_sup.sqrt(),
    })
}

/// λ grid on `[lo, hi]` concentrated near the eigenvalues `-(2πk)^2` of
/// `Δ`: each gap between consecutive eigenvalues (and the two outer
/// stretches) receives Chebyshev-clustered points, and the eigenvalues
/// themselves are included.
pub fn default_lambda_grid(grid: &GridSpec, lo: f64, hi: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(hi > lo) || n_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need lambda_min < lambda_max and at least 2 points, got [{lo}, {hi}] with {n_points}"
        )));
    }
    let mut levels: Vec<f64> = (0..=(grid.n() as i64 / 2))
        .map(|k| -4.0 * PI * PI * (k * k) as f64)
        .filter(|&l| l > lo && l < hi)
        .collect();
    levels.sort_by(|a, b| a.total_cmp(b));
    let mut breaks = vec![lo];
    breaks.extend(levels.iter().copied());
    breaks.push(hi);
    let gaps = breaks.len() - 1;
    let per_gap = (n_points.saturating_sub(breaks.len()) / gaps).max(1);
    let mut out = breaks.clone();
    for g in 0..gaps {
        let (a, b) = (breaks[g], breaks[g + 1]);
        for j in 1..=per_gap {
            let theta = PI * j as f64 / (per_gap + 1) as f64;
            out.push(a + 0.5 * (b - a) * (1.0 - theta.cos()));
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup();
    Ok(out)
}

/// Sweeps with the default grid, doubling its density until `M_sup`
/// changes by less than `rel_tol` (or `max_doublings` is reached).
pub fn refined_sweep(
    window: &CutoffWindow,
    m: f64,
    lo: f64,
    hi: f64,
    n_points: usize,
    rel_tol: f64,
    max_doublings: usize,
) -> Result<ResolventSweepResult> {
    let grid = window.grid();
    let mut n = n_points;
    let mut current = sweep(&default_lambda_grid(&grid, lo, hi, n)?, m, window)?;
    for _ in 0..max_doublings {
        n *= 2;
        let next = sweep(&default_lambda_grid(&grid, lo, hi, n)?, m, window)?;
        let change = (next.m_sup - current.m_sup).abs() / next.m_sup.max(f64::MIN_POSITIVE);
        current = next;
        if change < rel_tol {
            break;
        }
    }
    Ok(current)
}

/// `C_T = 2mT/(T² - Mπ²)`, valid for `T > π√M`.
pub fn miller_cost_bound(m_res: f64, m_obs: f64, t: f64) -> Result<f64> {
    let miller_time = PI * m_res.max(0.0).sqrt();
    if !(t > miller_time) {
        return Err(Error::BelowMillerTime { t, miller_time });
    }
    Ok(2.0 * m_obs * t / (t * t - m_res * PI * PI))
}

/// Resolvent constants implied by an observability constant:
/// `M = 2C_T T³/3`, `m = 2C_T T`.
pub fn constants_from_observability(c_t: f64, t: f64) -> (f64, f64) {
    (2.0 * c_t * t.powi(3) / 3.0, 2.0 * c_t * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl EstimateCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + 1e-10),
        }
    }
}

fn shifted_norm_sqr(u: &FourierState, shift: f64) -> f64 {
    let grid = u.grid();
    u.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (shifted_symbol(grid, i, shift)).powi(2) * c.norm_sqr())
        .sum()
}

/// Evaluates both sides of `∥u∥² <= M∥(Δ-λ)u∥² + m∥χu∥²`.
pub fn verify_resolvent(u: &FourierState, lambda: f64, m_res: f64, m_obs: f64, window: &CutoffWindow) -> Result<EstimateCheck> {
    u.check_grid(&window.grid())?;
    let lhs = u.norm_sqr();
    let rhs = m_res * shifted_norm_sqr(u, lambda) + m_obs * multiply_samples(u, &window.samples).norm_sqr();
    Ok(EstimateCheck::new(lhs, rhs))
}

/// Evaluates both sides of `∥λu∥² <= M₂∥(Δ-λ²)u∥² + m₂∥λχu∥²`.
pub fn wave_resolvent_check(u: &FourierState, lambda: f64, m2_res: f64, m2_obs: f64, window: &CutoffWindow) -> Result<EstimateCheck> {
    u.check_grid(&window.grid())?;
    let l2 = lambda * lambda;
    let lhs = l2 * u.norm_sqr();
    let rhs = m2_res * shifted_norm_sqr(u, l2) + m2_obs * l2 * multiply_samples(u, &window.samples).norm_sqr();
    Ok(EstimateCheck::new(lhs, rhs))
}
