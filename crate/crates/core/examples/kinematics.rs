//! Orbit speeds and lattice timing for a few orbit heights.
//!
//! `cargo run --example kinematics`

use leo_beams::codebook::{lattice_scaling, LatticeSpec};
use leo_beams::geom::{satellite_kinematics, PhysicalConstants};

fn main() -> leo_beams::Result<()> {
    let consts = PhysicalConstants::default();
    println!("{:>8} {:>9} {:>10} {:>9} {:>9} {:>7}", "h_km", "v_km_s", "vg_km_s", "c_x_km", "c_y_km", "t_c_s");
    for h in [550e3, 800e3, 1.3e6, 2.0e6] {
        let orbit = satellite_kinematics(h, &consts)?;
        let (c_x, c_y) = lattice_scaling(h, 1.4, (12, 24));
        let lattice = LatticeSpec::new(&orbit, consts.r_earth, 1.4, (12, 24), 4)?;
        println!(
            "{:>8.0} {:>9.3} {:>10.3} {:>9.1} {:>9.1} {:>7.2}",
            h / 1e3,
            orbit.v_sat / 1e3,
            orbit.v_ground / 1e3,
            c_x / 1e3,
            c_y / 1e3,
            lattice.t_c
        );
    }
    Ok(())
}
