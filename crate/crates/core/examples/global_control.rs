//! Large-data control: damp `u0` into the local ball and steer it to rest,
//! then reach `u1` by running the same construction on the reversed data.

use torus_control::hum::GramianSpec;
use torus_control::nls::{global_control, NlsParams, StabilizeOptions};
use torus_control::sampling::{random_smooth_state, rng};
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 64)?;
    let window = make_window(grid, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth)?;
    let spec = GramianSpec::new(1.0, window)?;
    let mut r = rng(11);
    let u0 = random_smooth_state(grid, 8, 0.5, &mut r);
    let u1 = random_smooth_state(grid, 8, 0.3, &mut r);
    let params = NlsParams::new(-1.0, 1e-3);
    let s = global_control(&u0, &u1, &spec, &params, 0.1, 1e-10, 50, &StabilizeOptions::default())?;
    for p in &s.phases {
        println!("{:?} {:?}: [{:.3}, {:.3}]", p.leg, p.kind, p.t_start, p.t_end);
    }
    println!("error to zero   {:.3e}", s.error_to_zero);
    println!("error from zero {:.3e}", s.error_from_zero);
    println!("total time      {:.3}", s.total_time());
    Ok(())
}
