//! Normalized discrete Fourier transforms between grid samples and mode
//! coefficients. Plans are cached per thread.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_axis(buf: &mut [Complex64], n: usize, inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let plan = if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        };
        plan.process(buf);
    });
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

fn transform(grid: &GridSpec, buf: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    fft_axis(buf, n, inverse);
    if grid.dim() == 2 {
        transpose(buf, n);
        fft_axis(buf, n, inverse);
        transpose(buf, n);
    }
}

/// Samples to coefficients: `û(k) = N^{-d} Σ_x u(x) e^{-2πik·x}`.
pub fn forward(grid: &GridSpec, buf: &mut [Complex64]) {
    transform(grid, buf, false);
    let scale = 1.0 / grid.len() as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
}

/// Coefficients to samples: `u(x) = Σ_k û(k) e^{2πik·x}`.
pub fn inverse(grid: &GridSpec, buf: &mut [Complex64]) {
    transform(grid, buf, true);
}
