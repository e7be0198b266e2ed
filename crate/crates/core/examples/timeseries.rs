//! SNR seen by one UT during a pass, static versus dynamic codebook.
//!
//! `cargo run --example timeseries -- [y_km]`

use leo_beams::config::SceneConfig;
use leo_beams::geom::GroundPoint;
use leo_beams::scene::Scene;
use leo_beams::simkit::{dwells, pass_timeseries, Mode};

fn main() -> leo_beams::Result<()> {
    let y = std::env::args().nth(1).and_then(|s| s.parse::<f64>().ok()).unwrap_or(0.0) * 1e3;
    let scene = Scene::new(SceneConfig::default())?;
    let exit = scene.roi.half_chord(y) / scene.lattice.v_ground;

    for mode in [Mode::StaticHex, Mode::DynamicHex] {
        let ts = pass_timeseries(&scene, GroundPoint::ground(0.0, y), mode, exit, scene.dt())?;
        println!("{} ({} samples, {} handovers)", mode.as_str(), ts.len(), ts.handovers());
        for d in dwells(&ts) {
            println!(
                "  beam {:>2}  {:6.1}..{:6.1} s  peak {:6.2} dB  ripple {:5.2} dB{}",
                d.id,
                ts.times[d.first],
                ts.times[d.last],
                d.peak_db,
                d.ripple_db(),
                if d.complete { "" } else { "  (partial)" }
            );
        }
    }
    Ok(())
}
