// Unwrapping a dense image and checking the sufficient conditions for
// convergence to a global minimiser.

use std::error::Error;

use cyclic_tv::{
    check_convergence_conditions, cppa_denoise_2d, d_inf_between, d_inf_neighbors, energy_2d, lift, lift_near, lifted_energy,
    PhaseImage, Params2D,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // A gentle ramp that crosses the seam several times.
    let f = PhaseImage::from_fn(16, 16, |i, j| 0.05 * i as f64 + 0.08 * j as f64 + 2.5)?;
    println!("d_inf of neighbours: {:.3}", d_inf_neighbors(&f));

    let lifted = lift(&f, 0.0)?;
    println!(
        "lifted corner values: {:.3} .. {:.3}, projection error {:.1e}",
        lifted.get(0, 0),
        lifted.get(15, 15),
        d_inf_between(&lifted.project(), &f)?
    );

    let params = Params2D::new([1e-4, 1e-4], [1e-4, 1e-4], 1e-4).with_lambda0(1e-4).with_cycles(200);
    let check = check_convergence_conditions(&f, &params, params.lambda0, params.max_cycles, 0.1)?;
    println!(
        "conditions: dense {}, weights small {}, schedule small {} (radius {:.4})",
        check.dense(),
        check.weights_small(),
        check.schedule_small(),
        check.iterate_radius()
    );

    // The cyclic energy equals the real energy of the lifted pair.
    let report = cppa_denoise_2d(&f, &params)?;
    let x = lift_near(&report.result, &lifted)?;
    println!(
        "J = {:.9}, lifted J = {:.9}",
        energy_2d(&report.result, &f, &params)?,
        lifted_energy(&x, &lifted, &params)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
