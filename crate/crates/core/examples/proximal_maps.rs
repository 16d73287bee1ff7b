// Closed-form proximal maps checked against a grid search.

use std::error::Error;
use std::f64::consts::PI;

use cyclic_tv::{
    brute_force_prox, prox_cyclic_diff, prox_data_sq, prox_linear_abs_real, prox_objective, DifferenceWeight,
    ProxConfig,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let b1 = DifferenceWeight::first();

    // Real-valued shrinkage towards <x, w> = a.
    let real = prox_linear_abs_real(&[0.0, 2.0], &b1, 0.0, 0.5)?;
    println!("real prox: {:?}, minimum {:.4}", real.minimizer, real.minimum);

    // Two samples on either side of the seam are pulled together across it.
    let f = [PI - 0.1, -PI + 0.1];
    let cfg = ProxConfig::new(1.0, 1)?;
    let res = prox_cyclic_diff(&f, &b1, &cfg)?;
    println!("cyclic prox across the seam: {:?}", res.primary_minimizer);

    let grid = brute_force_prox(&f, |x| prox_objective(&f, x, &b1, &cfg), 2.0 * PI / 2000.0)?;
    println!(
        "objective: closed form {:.6}, grid {:.6}",
        res.minimum_value, grid.value
    );

    // Antipodal pair: two minimisers.
    let anti = prox_cyclic_diff(&[0.0, -PI], &b1, &cfg)?;
    println!(
        "antipodal: {:?} and {:?}",
        anti.primary_minimizer,
        anti.secondary_minimizer.unwrap_or_default()
    );

    // Squared exponent and the data term.
    let sq = prox_cyclic_diff(&[0.3, -0.2, 0.4], &DifferenceWeight::second(), &ProxConfig::new(0.5, 2)?)?;
    println!("p = 2, b2: {:?}", sq.primary_minimizer);
    println!("data prox: {:?}", prox_data_sq(&[3.0, 0.0], &[-3.0, 1.0], 1.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
