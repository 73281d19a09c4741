//! Free Schrödinger evolution: the group law, unitarity and the cubic
//! split-step integrator on a random state.

use torus_control::nls::{evolve, NlsParams};
use torus_control::sampling::{random_smooth_state, rng};
use torus_control::spectral::{free_propagate, sobolev_norm, GridSpec};

fn main() -> torus_control::Result<()> {
    let grid = GridSpec::new(1, 64)?;
    let u0 = random_smooth_state(grid, 6, 1.0, &mut rng(1));

    let split = free_propagate(&free_propagate(&u0, 0.3), 0.4);
    let direct = free_propagate(&u0, 0.7);
    println!("group law defect      {:.3e}", split.sub(&direct).l2_norm());
    println!("norm after t = 0.7    {:.15}", direct.l2_norm());
    println!("H^1 norm preserved    {:.3e}", (sobolev_norm(&direct, 1.0) - sobolev_norm(&u0, 1.0)).abs());

    for sigma in [1.0, -1.0] {
        let (u, record) = evolve(&u0, 1.0, &NlsParams::new(sigma, 1e-3))?;
        println!(
            "cubic sigma = {sigma:+}: |u(1)| = {:.12}, mass drift {:.2e}, energy drift {:.2e}",
            u.l2_norm(),
            record.relative_mass_drift(),
            record.energy_drift()
        );
    }
    Ok(())
}
