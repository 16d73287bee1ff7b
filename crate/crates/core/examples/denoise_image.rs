// Denoises the synthetic surface with the three parameter sets of the
// image benchmark and writes the results as hue images.
//
// `cargo run --release --example denoise_image -- [size] [cycles] [outdir]`

use std::error::Error;
use std::path::PathBuf;

use cyclic_tv::{cmse, cppa_denoise_2d, synth_surface_2d, write_phase_data, Format, NoiseSpec, Params2D};

pub fn image_configs() -> [(&'static str, Params2D); 3] {
    [
        ("tv1", Params2D::new([0.375, 0.25], [0.0, 0.0], 0.0)),
        ("tv2", Params2D::new([0.0, 0.0], [0.125, 0.125], 0.125)),
        ("tv1+tv2", Params2D::new([0.25, 0.125], [0.125, 0.125], 0.0)),
    ]
}

pub fn run(size: usize, cycles: usize, outdir: Option<PathBuf>) -> Result<(), Box<dyn Error>> {
    let surface = synth_surface_2d(size, size)?;
    let noisy = NoiseSpec::new(0.3, 1).apply_image(&surface.wrapped)?;
    println!("{size}x{size}, noisy cMSE = {:.3e}", cmse(&noisy, &surface.wrapped)?);
    if let Some(dir) = &outdir {
        write_phase_data(&dir.join("noisy.png"), &noisy, Some(Format::PngHue))?;
    }

    for (name, mut params) in image_configs() {
        params.max_cycles = cycles;
        params.record_energy = false;
        let report = cppa_denoise_2d(&noisy, &params)?;
        println!("{name:<8} cMSE = {:.3e}", cmse(&report.result, &surface.wrapped)?);
        if let Some(dir) = &outdir {
            write_phase_data(&dir.join(format!("{name}.png")), &report.result, Some(Format::PngHue))?;
        }
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    run(64, 300, None)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let size = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let cycles = args.next().and_then(|s| s.parse().ok()).unwrap_or(300);
    run(size, cycles, args.next().map(PathBuf::from))
}
