// Round trips through the file formats understood by `s1tv`.

use std::error::Error;

use cyclic_tv::{read_phase_data, synth_surface_2d, write_phase_data, Format};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let img = synth_surface_2d(24, 32)?.wrapped;

    for (file, format) in [("surface.txt", Format::MatText), ("surface.bin", Format::F64Binary)] {
        let path = dir.path().join(file);
        write_phase_data(&path, &img, None)?;
        let back = read_phase_data(&path, None)?;
        let max_err = img
            .as_slice()
            .iter()
            .zip(back.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "{:<10} {} bytes, max error {max_err:e}",
            format.name(),
            std::fs::metadata(&path)?.len()
        );
    }

    let png = dir.path().join("surface.png");
    write_phase_data(&png, &img, None)?;
    println!("png-hue    {} bytes", std::fs::metadata(&png)?.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
