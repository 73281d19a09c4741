use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{fft, CutoffWindow, FourierState, GridSpec};

/// Parameters of `i∂_t u + Δu + i·gain·χ²u = σ|u|²u`.
///
/// `sigma = +1` is the focusing-free sign convention of the plane-wave
/// dispersion relation `ω = (2πk)² + σA²`; `sigma = -1` is used for the
/// stabilization demos. Any finite `sigma` is accepted (`0` gives the linear
/// equation). `gain = +1` damps; `gain = -1` is the time-reversed
/// (anti-damped) equation obtained from `v(t) = conj(u(T - t))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsParams {
    pub sigma: f64,
    pub damping: Option<CutoffWindow>,
    pub gain: f64,
    pub dt: f64,
    pub dealias: bool,
}

impl NlsParams {
    /// Undamped, dealiased scheme.
    pub fn new(sigma: f64, dt: f64) -> Self {
        Self {
            sigma,
            damping: None,
            gain: 1.0,
            dt,
            dealias: true,
        }
    }

    pub fn with_damping(mut self, window: CutoffWindow) -> Self {
        self.damping = Some(window);
        self
    }

    pub fn without_damping(mut self) -> Self {
        self.damping = None;
        self
    }

    pub fn with_gain(mut self, gain: f64) -> Self {
        self.gain = gain;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.sigma.is_finite() || !self.gain.is_finite() {
            return Err(Error::InvalidParameter("sigma and gain must be finite".into()));
        }
        if let Some(w) = &self.damping {
            w.grid().check_same(grid)?;
        }
        Ok(())
    }

    /// Number of equal steps covering `[0, horizon]` with step at most `dt`.
    pub fn steps_for(&self, horizon: f64) -> usize {
        ((horizon / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Strang splitting `D(h/2) L(h/2) N(h) L(h/2) D(h/2)` with
/// `L = e^{ihΔ}` (exact, diagonal in Fourier), `D = e^{-gain·χ²h}` and
/// `N: u ↦ u e^{-iσV h}`, `V = |u|²` (both exact and pointwise in physical
/// space). With dealiasing the potential `V` is 2/3-rule projected before the
/// rotation, so `N` stays an isometry.
///
/// Keeping the damping outermost makes the per-step mass loss equal to the
/// trapezoid rule of `2∥χu∥²` up to a telescoping `O(h²)` term, uniformly in
/// the frequency content of `u`.
pub(crate) struct SplitStepper {
    grid: GridSpec,
    h: f64,
    sigma: f64,
    lin_half: Vec<Complex64>,
    damp_half: Option<Vec<f64>>,
    keep: Option<Vec<bool>>,
    phys: Vec<Complex64>,
    potential: Vec<Complex64>,
}

pub(crate) fn dealias_mask(grid: &GridSpec) -> Vec<bool> {
    let cut = (grid.n() / 3) as i64;
    (0..grid.len())
        .map(|i| {
            let (k1, k2) = grid.mode(i);
            k1.abs() <= cut && k2.abs() <= cut
        })
        .collect()
}

impl SplitStepper {
    pub(crate) fn new(grid: GridSpec, params: &NlsParams, h: f64) -> Self {
        let lin_half = (0..grid.len())
            .map(|i| Complex64::from_polar(1.0, -grid.laplacian_symbol(i) * 0.5 * h))
            .collect();
        let damp_half = params
            .damping
            .as_ref()
            .map(|w| w.samples.iter().map(|c| (-params.gain * c * c * 0.5 * h).exp()).collect());
        let keep = (params.dealias && params.sigma != 0.0).then(|| dealias_mask(&grid));
        Self {
            grid,
            h,
            sigma: params.sigma,
            lin_half,
            damp_half,
            keep,
            phys: vec![Complex64::default(); grid.len()],
            potential: vec![Complex64::default(); grid.len()],
        }
    }

    pub(crate) fn apply_linear_half(&self, coeffs: &mut [Complex64]) {
        coeffs.iter_mut().zip(&self.lin_half).for_each(|(c, p)| *c *= p);
    }

    /// `D(h/2)` on Fourier coefficients.
    pub(crate) fn apply_damping_half(&mut self, coeffs: &mut [Complex64]) {
        let Some(d) = &self.damp_half else { return };
        self.phys.copy_from_slice(coeffs);
        fft::inverse(&self.grid, &mut self.phys);
        self.phys.iter_mut().zip(d).for_each(|(u, f)| *u *= f);
        coeffs.copy_from_slice(&self.phys);
        fft::forward(&self.grid, coeffs);
    }

    /// `N(h)` on Fourier coefficients.
    pub(crate) fn apply_nonlinear(&mut self, coeffs: &mut [Complex64]) {
        if self.sigma == 0.0 {
            return;
        }
        self.phys.copy_from_slice(coeffs);
        fft::inverse(&self.grid, &mut self.phys);
        for (v, u) in self.potential.iter_mut().zip(&self.phys) {
            *v = Complex64::new(u.norm_sqr(), 0.0);
        }
        if let Some(keep) = &self.keep {
            fft::forward(&self.grid, &mut self.potential);
            self.potential
                .iter_mut()
                .zip(keep)
                .filter(|(_, k)| !**k)
                .for_each(|(v, _)| *v = Complex64::default());
            fft::inverse(&self.grid, &mut self.potential);
        }
        let sh = self.sigma * self.h;
        self.phys
            .iter_mut()
            .zip(&self.potential)
            .for_each(|(u, v)| *u *= Complex64::from_polar(1.0, -sh * v.re));
        coeffs.copy_from_slice(&self.phys);
        fft::forward(&self.grid, coeffs);
    }

    pub(crate) fn step(&mut self, coeffs: &mut [Complex64]) {
        self.apply_damping_half(coeffs);
        self.apply_linear_half(coeffs);
        self.apply_nonlinear(coeffs);
        self.apply_linear_half(coeffs);
        self.apply_damping_half(coeffs);
    }
}

/// One Strang step of size `params.dt`.
pub fn nls_step(u: &FourierState, params: &NlsParams) -> Result<FourierState> {
    params.validate(u.grid())?;
    let mut stepper = SplitStepper::new(*u.grid(), params, params.dt);
    let mut out = u.clone();
    stepper.step(out.coeffs_mut());
    Ok(out)
}

/// `E(u) = Σ_k (2πk)²|û(k)|² + (σ/2)∫|u|⁴`, the quartic term by grid
/// quadrature.
pub fn energy(u: &FourierState, sigma: f64) -> f64 {
    let grid = u.grid();
    let kinetic: f64 = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| grid.laplacian_symbol(i) * c.norm_sqr())
        .sum();
    if sigma == 0.0 {
        return kinetic;
    }
    let phys = u.to_physical();
    let quartic = phys.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() / phys.len() as f64;
    kinetic + 0.5 * sigma * quartic
}

/// `∥χu∥²` by grid quadrature (equal to Plancherel of the sampled product).
fn observed_from_physical(phys: &[Complex64], chi: &[f64]) -> f64 {
    phys.iter().zip(chi).map(|(u, c)| c * c * u.norm_sqr()).sum::<f64>() / phys.len() as f64
}

/// Time series recorded by [`evolve`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DecayRecord {
    pub times: Vec<f64>,
    /// `∥u(t)∥²`.
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// `∥χu(t)∥²` for the damping window (zero without damping).
    pub observed: Vec<f64>,
    pub gamma_fit: Option<f64>,
}

impl DecayRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub(crate) fn push(&mut self, t: f64, u: &FourierState, sigma: f64, chi: Option<&[f64]>) {
        let phys = u.to_physical();
        self.times.push(t);
        self.mass.push(u.norm_sqr());
        self.energy.push(energy(u, sigma));
        self.observed.push(chi.map_or(0.0, |c| observed_from_physical(&phys, c)));
    }

    /// `[mass(T) - mass(0)] + 2∫₀ᵀ∥χu∥² dt`, the integral by the trapezoid
    /// rule; zero for the exact damped flow.
    pub fn mass_balance(&self) -> f64 {
        match (self.mass.first(), self.mass.last()) {
            (Some(a), Some(b)) => (b - a) + 2.0 * trapezoid(&self.times, &self.observed),
            _ => 0.0,
        }
    }

    /// `max_t |E(u(t)) - E(u₀)|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }

    /// `max_t |mass(t) - mass(0)| / mass(0)`.
    pub fn relative_mass_drift(&self) -> f64 {
        let m0 = self.mass.first().copied().unwrap_or(0.0);
        if m0 == 0.0 {
            return 0.0;
        }
        self.mass.iter().map(|m| (m - m0).abs()).fold(0.0, f64::max) / m0
    }

    pub fn max_observed(&self) -> f64 {
        self.observed.iter().copied().fold(0.0, f64::max)
    }
}

pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1]))
        .sum()
}

/// Evolves `u0` over `[0, horizon]` in equal steps of at most `params.dt`,
/// recording every step. With damping the decay rate of the second half of
/// the record is fitted when possible.
pub fn evolve(u0: &FourierState, horizon: f64, params: &NlsParams) -> Result<(FourierState, DecayRecord)> {
    params.validate(u0.grid())?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    let steps = params.steps_for(horizon);
    let h = horizon / steps as f64;
    let mut stepper = SplitStepper::new(*u0.grid(), params, h);
    let chi = params.damping.as_ref().map(|w| w.samples.as_slice());
    let mut u = u0.clone();
    let mut record = DecayRecord::default();
    record.push(0.0, &u, params.sigma, chi);
    for j in 1..=steps {
        stepper.step(u.coeffs_mut());
        record.push(j as f64 * h, &u, params.sigma, chi);
    }
    if params.damping.is_some() {
        record.gamma_fit = fit_decay_rate(&record, 0.5).ok().map(|f| f.gamma);
    }
    Ok((u, record))
}

/// Fitted rate in `∥u(t)∥ ≈ C e^{-γt}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub gamma: f64,
    /// Set when a slightly negative fitted rate (noise) was clamped to zero.
    pub clamped: bool,
}

/// Minimum number of tail samples for a rate fit.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Least-squares slope of `log(mass)/2` over the final `tail_fraction` of
/// the record.
pub fn fit_decay_rate(record: &DecayRecord, tail_fraction: f64) -> Result<DecayFit> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("tail_fraction must lie in (0, 1], got {tail_fraction}")));
    }
    let n = record.len();
    let take = ((n as f64) * tail_fraction).ceil() as usize;
    if take < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_FIT_SAMPLES, have: take });
    }
    let t = &record.times[n - take..];
    let m = &record.mass[n - take..];
    if m.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveMass);
    }
    let y: Vec<f64> = m.iter().map(|v| 0.5 * v.ln()).collect();
    let tm = t.iter().sum::<f64>() / take as f64;
    let ym = y.iter().sum::<f64>() / take as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (ti, yi) in t.iter().zip(&y) {
        sxy += (ti - tm) * (yi - ym);
        sxx += (ti - tm) * (ti - tm);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("tail spans zero time".into()));
    }
    let gamma = -sxy / sxx;
    Ok(if gamma < 0.0 {
        DecayFit { gamma: 0.0, clamped: true }
    } else {
        DecayFit { gamma, clamped: false }
    })
}
