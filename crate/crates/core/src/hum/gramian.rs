use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quadrature::{resolved_node_count, QuadRule, TimeQuadrature};
use crate::spectral::{fft, CutoffWindow, FourierState, GridSpec};

/// Largest coefficient count for which the Gramian is assembled densely.
pub const DENSE_LIMIT: usize = 1024;

/// Time horizon, control window and time quadrature defining
/// `S = ∫_0^T e^{-itΔ} χ² e^{itΔ} dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramianSpec {
    pub horizon: f64,
    pub window: CutoffWindow,
    pub n_quad: usize,
    pub quad_rule: QuadRule,
}

impl GramianSpec {
    /// Gauss–Legendre rule with enough nodes to resolve the fastest phase
    /// `(2π)^2 d (N/2)^2` of the integrand, and at least `max(32, 4N)`.
    pub fn new(horizon: f64, window: CutoffWindow) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        let grid = window.grid();
        let n_quad = default_node_count(&grid, horizon);
        Ok(Self {
            horizon,
            window,
            n_quad,
            quad_rule: QuadRule::GaussLegendre,
        })
    }

    pub fn with_n_quad(mut self, n_quad: usize) -> Self {
        self.n_quad = n_quad;
        self
    }

    pub fn with_rule(mut self, rule: QuadRule) -> Self {
        self.quad_rule = rule;
        self
    }

    pub fn grid(&self) -> GridSpec {
        self.window.grid()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if self.n_quad < 2 {
            return Err(Error::InvalidParameter(format!("n_quad must be at least 2, got {}", self.n_quad)));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> Result<TimeQuadrature> {
        self.validate()?;
        TimeQuadrature::new(self.quad_rule, self.horizon, self.n_quad)
    }

    /// Samples of the control multiplier `χ²`.
    pub fn control_multiplier(&self) -> Vec<f64> {
        self.window.squared()
    }
}

pub fn default_node_count(grid: &GridSpec, horizon: f64) -> usize {
    resolved_node_count(grid.max_laplacian_symbol(), horizon, (4 * grid.n()).max(32))
}

/// `∫_a^b e^{iωt} dt`, stable for small `ω`.
pub fn phase_integral(omega: f64, a: f64, b: f64) -> Complex64 {
    let h = b - a;
    let half = 0.5 * omega * h;
    let sinc = if half.abs() < 1e-8 { 1.0 - half * half / 6.0 } else { half.sin() / half };
    Complex64::from_polar(h * sinc, omega * (a + 0.5 * h))
}

/// Fourier coefficients of the real multiplier, indexed like a state.
pub(crate) fn multiplier_coeffs(grid: &GridSpec, samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(grid, &mut buf);
    buf
}

/// Flat index of the circular mode difference `n - k`.
pub(crate) fn difference_index(grid: &GridSpec, n: usize, k: usize) -> usize {
    let (n1, n2) = grid.mode(n);
    let (k1, k2) = grid.mode(k);
    let m = grid.n() as i64;
    let wrap = |d: i64| -> i64 {
        let r = d.rem_euclid(m);
        if r >= m / 2 {
            r - m
        } else {
            r
        }
    };
    grid.index(wrap(n1 - k1), wrap(n2 - k2)).expect("wrapped difference resolved")
}

/// Dense Gramian on `[a, b]` from exact time integrals:
/// `S_{nk} = (χ²)^(n-k) ∫_a^b e^{i(ω_n - ω_k)t} dt` with `ω_k = (2πk)^2`.
/// Independent of any quadrature rule.
pub fn assemble_gramian_on(window: &CutoffWindow, a: f64, b: f64) -> CMatrix {
    let grid = window.grid();
    let c = multiplier_coeffs(&grid, &window.squared());
    let len = grid.len();
    CMatrix::from_fn(len, len, |n, k| {
        let coef = c[difference_index(&grid, n, k)];
        if coef == Complex64::new(0.0, 0.0) {
            return coef;
        }
        coef * phase_integral(grid.laplacian_symbol(n) - grid.laplacian_symbol(k), a, b)
    })
}

/// Dense Gramian on `[0, T]` (exact time integration).
pub fn assemble_gramian(spec: &GramianSpec) -> CMatrix {
    assemble_gramian_on(&spec.window, 0.0, spec.horizon)
}

/// Matrix-free quadrature application
/// `SΦ₀ ≈ Σ_i w_i e^{-it_iΔ} χ² e^{it_iΔ} Φ₀`.
pub fn apply_gramian(spec: &GramianSpec, phi0: &FourierState) -> Result<FourierState> {
    phi0.check_grid(&spec.grid())?;
    let rule = spec.quadrature()?;
    let out = apply_with_rule(&spec.grid(), &spec.control_multiplier(), &rule, phi0.coeffs());
    FourierState::from_coeffs(spec.grid(), out)
}

pub(crate) fn apply_with_rule(
    grid: &GridSpec,
    multiplier: &[f64],
    rule: &TimeQuadrature,
    phi0: &[Complex64],
) -> Vec<Complex64> {
    let len = grid.len();
    let symbols: Vec<f64> = (0..len).map(|i| grid.laplacian_symbol(i)).collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        for i in 0..len {
            buf[i] = phi0[i] * Complex64::from_polar(1.0, -symbols[i] * t);
        }
        fft::inverse(grid, &mut buf);
        for (v, &m) in buf.iter_mut().zip(multiplier) {
            *v *= m;
        }
        fft::forward(grid, &mut buf);
        for i in 0..len {
            acc[i] += buf[i] * Complex64::from_polar(w, symbols[i] * t);
        }
    }
    acc
}

/// Which representation [`Gramian`] uses for its products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramianMethod {
    Dense,
    MatrixFree,
}

/// The Gramian as a reusable linear operator on coefficient vectors.
#[derive(Debug, Clone)]
pub struct Gramian {
    spec: GramianSpec,
    repr: Repr,
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(CMatrix),
    MatrixFree { multiplier: Vec<f64>, rule: TimeQuadrature },
}

impl Gramian {
    /// Dense exact assembly up to [`DENSE_LIMIT`] coefficients, matrix-free
    /// quadrature above.
    pub fn new(spec: &GramianSpec) -> Result<Self> {
        let method = if spec.grid().len() <= DENSE_LIMIT {
            GramianMethod::Dense
        } else {
            GramianMethod::MatrixFree
        };
        Self::with_method(spec, method)
    }

    pub fn with_method(spec: &GramianSpec, method: GramianMethod) -> Result<Self> {
        spec.validate()?;
        let repr = match method {
            GramianMethod::Dense => Repr::Dense(assemble_gramian(spec)),
            GramianMethod::MatrixFree => Repr::MatrixFree {
                multiplier: spec.control_multiplier(),
                rule: spec.quadrature()?,
            },
        };
        Ok(Self { spec: spec.clone(), repr })
    }

    pub fn spec(&self) -> &GramianSpec {
        &self.spec
    }

    pub fn method(&self) -> GramianMethod {
        match self.repr {
            Repr::Dense(_) => GramianMethod::Dense,
            Repr::MatrixFree { .. } => GramianMethod::MatrixFree,
        }
    }

    pub fn dense(&self) -> Option<&CMatrix> {
        match &self.repr {
            Repr::Dense(m) => Some(m),
            Repr::MatrixFree { .. } => None,
        }
    }

    pub fn apply_coeffs(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.repr {
            Repr::Dense(m) => linalg::matvec(m, x),
            Repr::MatrixFree { multiplier, rule } => apply_with_rule(&self.spec.grid(), multiplier, rule, x),
        }
    }

    pub fn apply(&self, x: &FourierState) -> Result<FourierState> {
        x.check_grid(&self.spec.grid())?;
        FourierState::from_coeffs(*x.grid(), self.apply_coeffs(x.coeffs()))
    }

    /// Solves `SΦ = rhs` by conjugate gradients.
    pub fn solve(&self, rhs: &FourierState, tol: f64, max_iter: usize) -> Result<(FourierState, usize)> {
        rhs.check_grid(&self.spec.grid())?;
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
        }
        let out = linalg::conjugate_gradient(|x| self.apply_coeffs(x), rhs.coeffs(), tol, max_iter)?;
        Ok((FourierState::from_coeffs(*rhs.grid(), out.x)?, out.iterations))
    }
}
