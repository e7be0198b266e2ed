//! Handover counts across the region for both codebook modes.
//!
//! `cargo run --release --example handover`

use leo_beams::config::SceneConfig;
use leo_beams::scene::Scene;
use leo_beams::simkit::{handover_map, GridSpec, Mode};

fn main() -> leo_beams::Result<()> {
    let scene = Scene::new(SceneConfig::default())?;
    let grid = GridSpec::covering(&scene.roi, 10_000.0)?;
    for mode in [Mode::StaticHex, Mode::DynamicHex] {
        let map = handover_map(&scene, mode, &grid)?;
        let mut hist = [0usize; 8];
        for c in map.data() {
            hist[(c as usize).min(7)] += 1;
        }
        println!("{:>8}: handovers 0..7+ -> {hist:?}", mode.as_str());
    }
    Ok(())
}
