use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equispaced discretization of the unit torus `T^d = [0,1)^d`, `d ∈ {1,2}`.
///
/// Each axis carries `n` Fourier modes `k ∈ {-n/2, …, n/2-1}` and `n`
/// physical points `x_j = j/n`. Coefficient arrays are stored in FFT order
/// (`0, 1, …, n/2-1, -n/2, …, -1`), row-major in 2D with the first axis
/// slowest.
///
/// Two frequency scalings coexist: the Laplacian acts on mode `k` as
/// `-(2πk)^2`, while the fractional operator `D^r` uses the bare integer
/// `|k|^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    n: usize,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "modes per axis must be even and at least 4, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of modes (and physical points) per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of coefficients.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed mode index of position `i` along one axis.
    pub fn axis_mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Position along one axis of signed mode `k`, if it is resolved.
    pub fn axis_index(&self, k: i64) -> Option<usize> {
        let n = self.n as i64;
        if k < -n / 2 || k >= n / 2 {
            None
        } else {
            Some(k.rem_euclid(n) as usize)
        }
    }

    /// Signed mode tuple of flat index `idx`; the second entry is 0 in 1D.
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        match self.dim {
            1 => (self.axis_mode(idx), 0),
            _ => (self.axis_mode(idx / self.n), self.axis_mode(idx % self.n)),
        }
    }

    /// Flat index of a mode tuple (second entry ignored in 1D).
    pub fn index(&self, k1: i64, k2: i64) -> Option<usize> {
        let i1 = self.axis_index(k1)?;
        match self.dim {
            1 => Some(i1),
            _ => Some(i1 * self.n + self.axis_index(k2)?),
        }
    }

    /// `(2π)^2 |k|^2`, the eigenvalue of `-Δ` on the mode at `idx`.
    pub fn laplacian_symbol(&self, idx: usize) -> f64 {
        let (k1, k2) = self.mode(idx);
        4.0 * PI * PI * ((k1 * k1 + k2 * k2) as f64)
    }

    /// Largest `-Δ` eigenvalue resolved on this grid.
    pub fn max_laplacian_symbol(&self) -> f64 {
        let h = (self.n / 2) as f64;
        4.0 * PI * PI * h * h * self.dim as f64
    }

    /// Physical coordinate of point `j` along an axis.
    pub fn point(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "{}D/N={} vs {}D/N={}",
                self.dim, self.n, other.dim, other.n
            )));
        }
        Ok(())
    }
}

/// Convenience constructor mirroring [`GridSpec::new`].
pub fn make_grid(dim: usize, n: usize) -> Result<GridSpec> {
    GridSpec::new(dim, n)
}
