//! Complementary SINR CDFs for both beam layouts.
//!
//! `cargo run --release --example sinr_cdf`

use leo_beams::config::SceneConfig;
use leo_beams::scene::Scene;
use leo_beams::simkit::{coverage_map, sinr_cdf, thresholds, BeamSource, GridSpec, Metric};

fn main() -> leo_beams::Result<()> {
    let scene = Scene::new(SceneConfig::default())?;
    let grid = GridSpec::covering(&scene.roi, 2000.0)?;
    let ths = thresholds(-10.0, 20.0, 2.0);

    let hex = coverage_map(&scene, Metric::Sinr, &grid, BeamSource::Hex { iteration: 0 })?;
    let dft = coverage_map(&scene, Metric::Sinr, &grid, BeamSource::Dft)?;
    let (hex, dft) = (sinr_cdf(&hex, &ths)?, sinr_cdf(&dft, &ths)?);

    println!("{:>8} {:>8} {:>8}", "th_dB", "hex", "dft");
    for (i, th) in ths.iter().enumerate() {
        println!("{th:>8.1} {:>8.3} {:>8.3}", hex.prob[i], dft.prob[i]);
    }
    Ok(())
}
