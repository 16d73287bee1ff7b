//! Every example under `examples/` runs to completion.

macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(cyclic_differences, "cyclic_differences.rs", cyclic_differences_runs);
example!(proximal_maps, "proximal_maps.rs", proximal_maps_runs);
example!(denoise_signal, "denoise_signal.rs", denoise_signal_runs);
example!(denoise_image, "denoise_image.rs", denoise_image_runs);
example!(lifting_and_convergence, "lifting_and_convergence.rs", lifting_and_convergence_runs);
example!(synthetic_data, "synthetic_data.rs", synthetic_data_runs);
example!(file_formats, "file_formats.rs", file_formats_runs);
