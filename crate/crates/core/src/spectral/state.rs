use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fft;
use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Fourier coefficients of a function on the torus, with
/// `u(x) = Σ_k û(k) e^{2πik·x}` on the unit-measure torus.
///
/// Coefficients are kept in FFT order (see [`GridSpec`]). The JSON form
/// lists them in ascending mode order instead.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl FourierState {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a grid of {}",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    /// Builds a state from a function of the signed mode tuple.
    pub fn from_modes(grid: GridSpec, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let coeffs = (0..grid.len())
            .map(|i| {
                let (k1, k2) = grid.mode(i);
                f(k1, k2)
            })
            .collect();
        Self { grid, coeffs }
    }

    /// Single Fourier mode `amplitude · e^{2πi(k1 x1 + k2 x2)}`.
    pub fn plane_wave(grid: GridSpec, k1: i64, k2: i64, amplitude: Complex64) -> Result<Self> {
        let idx = grid
            .index(k1, k2)
            .ok_or_else(|| Error::InvalidParameter(format!("mode ({k1},{k2}) not resolved")))?;
        let mut s = Self::zeros(grid);
        s.coeffs[idx] = amplitude;
        Ok(s)
    }

    pub fn from_physical(grid: GridSpec, mut samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {}",
                samples.len(),
                grid.len()
            )));
        }
        fft::forward(&grid, &mut samples);
        Ok(Self {
            grid,
            coeffs: samples,
        })
    }

    /// Samples a function of the physical coordinates `(x1, x2)`.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let samples: Vec<Complex64> = (0..grid.len())
            .map(|i| match grid.dim() {
                1 => f(grid.point(i), 0.0),
                _ => f(grid.point(i / n), grid.point(i % n)),
            })
            .collect();
        Self::from_physical(grid, samples).expect("sample count matches grid")
    }

    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        fft::inverse(&self.grid, &mut buf);
        buf
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of signed mode `(k1, k2)`; zero if unresolved.
    pub fn mode(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid
            .index(k1, k2)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    /// `∥u∥²_{L²}` by Plancherel.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩ = ∫ self · conj(other)`.
    pub fn inner(&self, other: &FourierState) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, a: Complex64) -> FourierState {
        self.map(|_, c| c * a)
    }

    pub fn add(&self, other: &FourierState) -> FourierState {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FourierState) -> FourierState {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn conj(&self) -> FourierState {
        // conj(u)^(k) = conj(û(-k)); the unpaired mode -N/2 maps to itself.
        Self::from_modes(self.grid, |k1, k2| {
            let n2 = (self.grid.n() / 2) as i64;
            let r1 = if k1 == -n2 { k1 } else { -k1 };
            let r2 = if k2 == -n2 { k2 } else { -k2 };
            self.mode(r1, r2).conj()
        })
    }

    /// Applies a per-coefficient map receiving the flat index.
    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> FourierState {
        FourierState {
            grid: self.grid,
            coeffs: self.coeffs.iter().enumerate().map(|(i, &c)| f(i, c)).collect(),
        }
    }

    fn zip_with(&self, other: &FourierState, f: impl Fn(Complex64, Complex64) -> Complex64) -> FourierState {
        debug_assert_eq!(self.grid, other.grid);
        FourierState {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn check_grid(&self, other: &GridSpec) -> Result<()> {
        self.grid.check_same(other)
    }

    /// Coefficients reordered by ascending signed mode (row-major in 2D).
    pub fn ascending_coeffs(&self) -> Vec<Complex64> {
        let n = self.grid.n() as i64;
        let half = n / 2;
        let mut out = Vec::with_capacity(self.grid.len());
        match self.grid.dim() {
            1 => (-half..half).for_each(|k| out.push(self.mode(k, 0))),
            _ => {
                for k1 in -half..half {
                    for k2 in -half..half {
                        out.push(self.mode(k1, k2));
                    }
                }
            }
        }
        out
    }

    pub fn from_ascending(grid: GridSpec, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a grid of {}",
                coeffs.len(),
                grid.len()
            )));
        }
        let n = grid.n();
        let half = (n / 2) as i64;
        let mut s = Self::zeros(grid);
        for (pos, &c) in coeffs.iter().enumerate() {
            let (k1, k2) = match grid.dim() {
                1 => (pos as i64 - half, 0),
                _ => ((pos / n) as i64 - half, (pos % n) as i64 - half),
            };
            let idx = grid.index(k1, k2).expect("ascending index in range");
            s.coeffs[idx] = c;
        }
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
struct StateRepr {
    dim: usize,
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for FourierState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            dim: self.grid.dim(),
            n: self.grid.n(),
            coeffs: self.ascending_coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = StateRepr::deserialize(d)?;
        let grid = GridSpec::new(r.dim, r.n).map_err(D::Error::custom)?;
        let coeffs: Vec<Complex64> = r.coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        FourierState::from_ascending(grid, &coeffs).map_err(D::Error::custom)
    }
}
