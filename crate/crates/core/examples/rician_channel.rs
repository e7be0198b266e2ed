//! Seeded Rician draws for one UT: line-of-sight versus scattered energy.
//!
//! `cargo run --release --example rician_channel`

use leo_beams::config::SceneConfig;
use leo_beams::geom::GroundPoint;
use leo_beams::scene::Scene;
use leo_beams::link::rician_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> leo_beams::Result<()> {
    let scene = Scene::new(SceneConfig::default())?;
    let ut = scene.ut_geometry()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scene.config.seed);
    let p = GroundPoint::satellite(100e3, 40e3);

    let draws = 200;
    let mut scatter = 0.0;
    let mut gamma = 0.0;
    for _ in 0..draws {
        let h = rician_sample(&p, scene.h_sat(), &scene.geometry, &ut, &scene.link, &mut rng)?;
        scatter += h.scatter_energy();
        gamma = h.gamma;
    }
    let n = ut.len() as f64;
    println!("gamma = {gamma:.3e}, UT elements = {n}");
    println!("mean |a_R|^2 = {:.1} (expected {n})", scatter / draws as f64);
    println!("K-factor check: LoS / scatter power = {:.2}", n / (scatter / draws as f64 / scene.link.k_rician));
    Ok(())
}
