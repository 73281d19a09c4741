//! Fixed-point control of the cubic equation for small data, and the
//! empirical radius of the admissible ball along one direction.

use torus_control::hum::GramianSpec;
use torus_control::nls::{admissible_amplitude, local_control_nls, NlsParams};
use torus_control::sampling::{random_smooth_state, rng};
use torus_control::spectral::{make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 64)?;
    let window = make_window(grid, &[Interval(0.0, 0.3)], 0.05, WindowKind::Smooth)?;
    let spec = GramianSpec::new(1.0, window)?;
    let params = NlsParams::new(-1.0, 1e-3);
    let direction = random_smooth_state(grid, 8, 1.0, &mut rng(8));

    let amp = admissible_amplitude(&direction, &spec, &params, 1e-10, 50, 0.05, 4)?;
    for p in &amp.probes {
        println!(
            "amplitude {:.4}: admissible {:5}  max ratio {:?}  {:?}",
            p.amplitude, p.admissible, p.max_ratio, p.failure
        );
    }
    println!("delta = {:.4}", amp.delta);

    let u0 = direction.scale((0.5 * amp.delta).into());
    let c = local_control_nls(&u0, &spec, &params, 1e-10, 50)?;
    println!("at delta/2: {} iterations, |u(T)| = {:.3e}, max ratio {:?}", c.iterations, c.residual, c.max_ratio);
    Ok(())
}
