//! Operator norms of `[D^r, f]` from `H^s` to `H^{s-r+1}` under grid
//! refinement: bounded for smooth multipliers.

use torus_control::spectral::{commutator_operator_norm, make_window, GridSpec, Interval, WindowKind};

fn main() -> torus_control::Result<()> {
    for (r, s) in [(1.0, 0.0), (2.0, 1.0), (-1.0, 0.0)] {
        let norms = [32, 64, 128]
            .into_iter()
            .map(|n| {
                let grid = GridSpec::new(1, n)?;
                let f = make_window(grid, &[Interval(0.2, 0.6)], 0.1, WindowKind::Smooth)?;
                commutator_operator_norm(&grid, r, s, &f)
            })
            .collect::<torus_control::Result<Vec<_>>>()?;
        println!("r = {r:+}, s = {s}: N = 32/64/128 -> {norms:.4?}");
    }
    Ok(())
}
