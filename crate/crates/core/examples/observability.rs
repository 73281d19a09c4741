//! Observability constants for several windows and horizons, and the
//! regularity of the control for smooth data.

use torus_control::hum::{hum_regularity_ratio, observability_constant, GramianSpec};
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 32)?;
    for (label, kind, width) in [("sharp", WindowKind::Sharp, 0.0), ("smooth", WindowKind::Smooth, 0.05)] {
        let window = make_window(grid, &[Interval(0.0, 0.3)], width, kind)?;
        for t in [0.25, 0.5, 1.0, 2.0] {
            let rep = observability_constant(&GramianSpec::new(t, window.clone())?)?;
            println!("{label:6} T = {t:4}: C_T = {:10.4}  lambda_min = {:.4e}", rep.c_t, rep.lambda_min);
        }
    }

    let window = make_window(grid, &[Interval(0.0, 0.3)], 0.1, WindowKind::Smooth)?;
    let stats = hum_regularity_ratio(&GramianSpec::new(1.0, window)?, 1.0, 10, 8, 7)?;
    println!("|Phi_0|_H1 / |u0|_H1: max {:.4}, mean {:.4}", stats.max, stats.mean);
    Ok(())
}
