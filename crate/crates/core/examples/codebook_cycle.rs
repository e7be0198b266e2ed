//! Walk through one codebook cycle and show how beam IDs rotate.
//!
//! `cargo run --example codebook_cycle`

use leo_beams::config::SceneConfig;
use leo_beams::scene::Scene;

fn main() -> leo_beams::Result<()> {
    let scene = Scene::new(SceneConfig::default())?;
    let cycle = &scene.cycle;
    println!(
        "t_c = {:.3} s, {} iterations per cycle, {} beam IDs",
        scene.lattice.t_c,
        scene.lattice.cycle_len,
        cycle.n_ids()
    );

    // Two cycles: IDs shift by one label per cycle so a ground node keeps its ID.
    for n in 0..2 * scene.lattice.cycle_len as i64 {
        let (k, c) = cycle.split_iteration(n);
        let ids: Vec<String> = cycle
            .active(n)
            .map(|(id, b)| format!("{id}@({:.0},{:.0})", b.point.x / 1e3, b.point.y / 1e3))
            .collect();
        println!("n={n} k={k} cycle={c}: {}", ids.join(" "));
    }
    Ok(())
}
