use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// Indicator `1_ω` of the open set.
    Sharp,
    /// Smooth cutoff `χ_ω` supported in `ω`, equal to 1 on the eroded core.
    #[default]
    Smooth,
}

/// Transition profile used by smooth windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `e^{-1/s}`-based step, C^∞.
    #[default]
    Exp,
    /// Quintic smoothstep `6s^5 - 15s^4 + 10s^3`, C².
    Smoothstep,
}

impl Profile {
    /// Monotone step from 0 at `s <= 0` to 1 at `s >= 1`.
    pub fn step(self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        match self {
            Profile::Exp => {
                let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
                let a = f(s);
                a / (a + f(1.0 - s))
            }
            Profile::Smoothstep => s * s * s * (s * (6.0 * s - 15.0) + 10.0),
        }
    }
}

/// Open interval `(a, b)` of the circle, `b > a`, `b - a <= 1`. Endpoints may
/// lie outside `[0,1)`; membership is taken modulo 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval(pub f64, pub f64);

impl Interval {
    pub fn len(&self) -> f64 {
        self.1 - self.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 0.0
    }

    fn covers_circle(&self) -> bool {
        self.len() >= 1.0
    }
}

/// Sampled spatial cutoff on the grid. In 2D the window is a strip
/// `ω × T`: it depends on the first coordinate only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffWindow {
    pub kind: WindowKind,
    pub omega: Vec<Interval>,
    pub transition_width: f64,
    #[serde(default)]
    pub profile: Profile,
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub samples: Vec<f64>,
}

impl CutoffWindow {
    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.dim, self.n).expect("window grid was validated at construction")
    }

    /// Window value at a first-axis coordinate `x`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.omega
            .iter()
            .map(|iv| interval_value(*iv, x, self.kind, self.transition_width, self.profile))
            .fold(0.0, f64::max)
    }

    /// Samples of `χ²` (equal to the samples themselves for sharp windows).
    pub fn squared(&self) -> Vec<f64> {
        self.samples.iter().map(|w| w * w).collect()
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().cloned().fold(0.0, f64::max)
    }

    /// Window identically equal to one.
    pub fn full(grid: GridSpec) -> Self {
        make_window(grid, &[Interval(0.0, 1.0)], 0.0, WindowKind::Sharp).expect("full window is valid")
    }

    /// Window identically zero (no observation region).
    pub fn empty(grid: GridSpec) -> Self {
        CutoffWindow {
            kind: WindowKind::Sharp,
            omega: Vec::new(),
            transition_width: 0.0,
            profile: Profile::Exp,
            dim: grid.dim(),
            n: grid.n(),
            samples: vec![0.0; grid.len()],
        }
    }

    /// Same window resampled on another grid (same dimension).
    pub fn resample(&self, grid: GridSpec) -> Self {
        let mut w = self.clone();
        w.dim = grid.dim();
        w.n = grid.n();
        w.samples = sample(grid, |x| self.value_at(x));
        w
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        let grid = self.grid();
        self.samples = sample(grid, |x| self.value_at(x));
        self
    }
}

fn interval_value(iv: Interval, x: f64, kind: WindowKind, width: f64, profile: Profile) -> f64 {
    if iv.covers_circle() {
        return 1.0;
    }
    let len = iv.len();
    let s = (x - iv.0).rem_euclid(1.0);
    match kind {
        WindowKind::Sharp => {
            if s > 0.0 && s < len {
                1.0
            } else {
                0.0
            }
        }
        WindowKind::Smooth => {
            if s >= len {
                0.0
            } else {
                profile.step(s / width).min(profile.step((len - s) / width))
            }
        }
    }
}

fn sample(grid: GridSpec, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = grid.n();
    let line: Vec<f64> = (0..n).map(|j| f(grid.point(j))).collect();
    match grid.dim() {
        1 => line,
        _ => line.iter().flat_map(|&v| std::iter::repeat_n(v, n)).collect(),
    }
}

/// Builds `1_ω` (sharp) or a smooth `χ_ω` supported in `ω` that equals 1 at
/// distance `>= transition_width` from the boundary of `ω`. On a 2D grid the
/// result is the strip `ω × T`.
pub fn make_window(
    grid: GridSpec,
    omega: &[Interval],
    transition_width: f64,
    kind: WindowKind,
) -> Result<CutoffWindow> {
    if omega.is_empty() {
        return Err(Error::InvalidWindow("omega must be nonempty".into()));
    }
    let mut total = 0.0;
    let mut shortest = f64::INFINITY;
    for iv in omega {
        if !(iv.0.is_finite() && iv.1.is_finite()) || iv.is_empty() {
            return Err(Error::InvalidWindow(format!("degenerate interval ({}, {})", iv.0, iv.1)));
        }
        if iv.len() > 1.0 {
            return Err(Error::InvalidWindow(format!(
                "interval ({}, {}) longer than the torus",
                iv.0, iv.1
            )));
        }
        total += iv.len();
        shortest = shortest.min(iv.len());
    }
    if total > 1.0 + 1e-12 {
        return Err(Error::InvalidWindow(format!("total length {total} exceeds 1")));
    }
    if kind == WindowKind::Smooth && !omega.iter().all(Interval::covers_circle) {
        if !(transition_width > 0.0) {
            return Err(Error::InvalidWindow("transition_width must be positive".into()));
        }
        if transition_width >= 0.5 * shortest {
            return Err(Error::InvalidWindow(format!(
                "transition_width {transition_width} must be below half the shortest interval ({shortest})"
            )));
        }
    }
    let mut w = CutoffWindow {
        kind,
        omega: omega.to_vec(),
        transition_width: if kind == WindowKind::Sharp { 0.0 } else { transition_width },
        profile: Profile::Exp,
        dim: grid.dim(),
        n: grid.n(),
        samples: Vec::new(),
    };
    w.samples = sample(grid, |x| w.value_at(x));
    Ok(w)
}
