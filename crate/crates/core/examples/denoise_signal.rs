// Denoises the benchmark signal with TV1, TV2 and both, and prints the
// cyclic mean squared error of each result.
//
// `cargo run --release --example denoise_signal -- [seed] [cycles]`

use std::error::Error;

use cyclic_tv::{cmse, cppa_denoise_1d, synth_signal_1d, NoiseSpec, Params1D};

pub fn denoise_benchmark(seed: u64, cycles: usize) -> Result<Vec<(&'static str, f64)>, Box<dyn Error>> {
    let truth = synth_signal_1d(500)?;
    let noisy = NoiseSpec::new(0.2, seed).apply_signal(&truth)?;

    let configs = [
        ("noisy", None),
        ("tv1 (alpha 0.75)", Some(Params1D::new(0.75, 0.0))),
        ("tv2 (beta 1.5)", Some(Params1D::new(0.0, 1.5))),
        ("tv1+tv2 (alpha 0.5, beta 1)", Some(Params1D::new(0.5, 1.0))),
    ];
    let mut out = Vec::new();
    for (name, params) in configs {
        let e = match params {
            None => cmse(&noisy, &truth)?,
            Some(mut p) => {
                p.max_cycles = cycles;
                p.record_energy = false;
                cmse(&cppa_denoise_1d(&noisy, &p)?.result, &truth)?
            }
        };
        out.push((name, e));
    }
    Ok(out)
}

pub fn run(seed: u64, cycles: usize) -> Result<(), Box<dyn Error>> {
    for (name, e) in denoise_benchmark(seed, cycles)? {
        println!("{name:<30} cMSE = {e:.3e}");
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    run(1, 4000)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let cycles = args.next().and_then(|s| s.parse().ok()).unwrap_or(4000);
    run(seed, cycles)
}
