//! SINR coverage of the hexagonal codebook next to the DFT grid baseline.
//!
//! `cargo run --release --example coverage_map -- [out_dir]`
//! writes `hex.ppm` and `dft.ppm` when an output directory is given.

use std::path::PathBuf;

use leo_beams::config::SceneConfig;
use leo_beams::scene::Scene;
use leo_beams::simkit::{coverage_map, BeamSource, GridSpec, Metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let scene = Scene::new(SceneConfig::default())?;
    let grid = GridSpec::covering(&scene.roi, 4000.0)?;

    for (name, source) in [("hex", BeamSource::Hex { iteration: 0 }), ("dft", BeamSource::Dft)] {
        let map = coverage_map(&scene, Metric::Sinr, &grid, source)?;
        let vals: Vec<f64> = map.data().collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("{name}: {} points, SINR min {min:.2} / mean {mean:.2} / max {max:.2} dB", vals.len());
        if let Some(dir) = &out {
            let path = dir.join(format!("{name}.ppm"));
            std::fs::write(&path, map.to_ppm())?;
        }
    }
    Ok(())
}
