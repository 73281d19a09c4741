//! Exact control of the linear equation from a window `ω = (0, 0.3)`:
//! solve the Gramian system, then verify by integrating forward.

use torus_control::hum::{drive_linear, solve_hum, GramianSpec};
use torus_control::sampling::{random_smooth_state, rng};
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 64)?;
    let window = make_window(grid, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth)?;
    let spec = GramianSpec::new(1.0, window)?;
    let u0 = random_smooth_state(grid, 8, 1.0, &mut rng(7));

    let sol = solve_hum(&spec, &u0, 1e-10, 2000)?;
    println!("CG iterations         {}", sol.iterations);
    println!("|Phi_0|               {:.6}", sol.phi0.l2_norm());

    let drive = drive_linear(&u0, &spec, &sol.phi0)?;
    println!("|u(T)| / |u0|         {:.3e}", drive.residual / u0.l2_norm());
    for s in drive.trajectory.iter().step_by(drive.trajectory.len() / 8) {
        println!("t = {:.3}  mass {:.6}  observed {:.6}", s.t, s.mass, s.observed_mass);
    }
    Ok(())
}
