// Wrapping, geodesic distances and absolute cyclic differences.

use std::error::Error;
use std::f64::consts::PI;

use cyclic_tv::{
    abs_cyclic_diff_closed, abs_cyclic_diff_general, delta, geodesic_distance_value, wrap_value, DifferenceWeight,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("wrap(3π) = {:.6}", wrap_value(3.0 * PI));
    println!("d(3π/4, -3π/4) = {:.6}", geodesic_distance_value(0.75 * PI, -0.75 * PI));

    // A second difference that looks large in coordinates but is zero on the circle.
    let x = [-PI, 0.0, -PI];
    let b2 = DifferenceWeight::second();
    println!(
        "<x, b2> = {:.6}, d(x; b2) = {:.6}",
        delta(&x, &b2)?,
        abs_cyclic_diff_closed(&x, &b2)?
    );

    // Third order: the closed fold rule no longer applies, the sorted-shift
    // minimum is needed.
    let b3 = DifferenceWeight::binomial(3)?;
    let y: Vec<f64> = [-15.0, -13.0, 12.0, 14.0].iter().map(|k| k * PI / 16.0).collect();
    let d3 = abs_cyclic_diff_general(&y, &b3)?;
    let naive = wrap_value(delta(&y, &b3)?).abs();
    println!("d3(y) = {:.6} (= 18π/16), |wrap(<y, b3>)| = {:.6}", d3, naive);

    let mixed = DifferenceWeight::mixed();
    let z = [3.0, -3.0, -2.9, 2.8];
    println!(
        "mixed difference: closed {:.12}, general {:.12}",
        abs_cyclic_diff_closed(&z, &mixed)?,
        abs_cyclic_diff_general(&z, &mixed)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
