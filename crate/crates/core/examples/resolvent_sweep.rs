//! Best resolvent constants `M(λ)` across the spectrum, the resulting
//! Miller time, and the implied cost bound compared to the true `C_T`.

use torus_control::hum::{observability_constant, GramianSpec};
use torus_control::resolvent::{miller_cost_bound, minimal_feasible_m, refined_sweep};
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 32)?;
    let window = make_window(grid, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth)?;
    let m = 1.5 * minimal_feasible_m(&window)?;
    let top = grid.max_laplacian_symbol();
    let sweep = refined_sweep(&window, m, -top, top, 512, 0.05, 3)?;
    println!("m = {m:.4}, M_sup = {:.4e}, Miller time = {:.4}", sweep.m_sup, sweep.miller_time);
    for (lambda, mb) in sweep.lambda_grid.iter().zip(&sweep.m_of_lambda).step_by(sweep.lambda_grid.len() / 10) {
        println!("lambda = {lambda:12.2}  M = {mb:.4e}");
    }

    let t = 2.0 * sweep.miller_time;
    let c_t = observability_constant(&GramianSpec::new(t, window)?)?.c_t;
    let bound = miller_cost_bound(sweep.m_sup, m, t)?;
    println!("T = {t:.4}: C_T = {c_t:.4}  bound = {bound:.4}  ratio = {:.4}", c_t / bound);
    Ok(())
}
