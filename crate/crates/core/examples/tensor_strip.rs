//! Observability of a strip `ω × T` in two dimensions from the 1D window
//! `ω`: the Gramian splits into blocks per second-axis mode.

use torus_control::hum::GramianSpec;
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};
use torus_control::tensor::{strip_observability_constant, StripWindow};

fn main() -> torus_control::Result<()> {
    for n in [8, 16] {
        let base = make_window(GridSpec::new(1, n)?, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth)?;
        let strip = StripWindow::new(base)?;
        let rep = strip_observability_constant(&GramianSpec::new(1.0, strip.to_window())?)?;
        println!(
            "N = {n:3}: C_1d = {:.8}  C_2d = {:.8}  gap = {:.2e}  off-block = {:.1e}",
            rep.c_1d, rep.c_2d, rep.relative_gap, rep.off_block
        );
    }
    Ok(())
}
