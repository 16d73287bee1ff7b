// The synthetic signal and surface, wrapped Gaussian noise and the cMSE.

use std::error::Error;

use cyclic_tv::synth::standard_normals;
use cyclic_tv::{cmse, d_inf_neighbors, synth_signal_1d, synth_surface_2d, NoiseSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let signal = synth_signal_1d(500)?;
    println!(
        "signal: {} samples, first {:.4}, last {:.4}, largest step {:.4}",
        signal.len(),
        signal.as_slice()[0],
        signal.as_slice()[499],
        d_inf_neighbors(&signal)
    );

    let surface = synth_surface_2d(128, 128)?;
    let (lo, hi) = surface
        .unwrapped
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    println!("surface: unwrapped range [{lo:.3}, {hi:.3}]");

    println!("first normals for seed 42: {:?}", &standard_normals(42, 4));
    for sigma in [0.1, 0.2, 0.3] {
        let noisy = NoiseSpec::new(sigma, 42).apply_signal(&signal)?;
        println!("sigma {sigma}: cMSE {:.4e}", cmse(&noisy, &signal)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
