//! A fully built scenario: orbit, arrays, codebooks and link parameters
//! derived from one [`SceneConfig`].

use crate::array::{satellite_array, upa_positions, ArrayGeometry, SubarrayPattern};
use crate::codebook::{build_cycle, dft_baseline, CodebookCycle, DftCodebook, LatticeSpec, Roi};
use crate::config::SceneConfig;
use crate::error::Result;
use crate::geom::{satellite_kinematics, OrbitState, PhysicalConstants};
use crate::link::LinkParams;

#[derive(Debug, Clone)]
pub struct Scene {
    pub config: SceneConfig,
    pub constants: PhysicalConstants,
    pub orbit: OrbitState,
    pub lattice: LatticeSpec,
    pub roi: Roi,
    /// Satellite array carrying the hexagonal codebook.
    pub geometry: ArrayGeometry,
    /// Satellite array carrying the baseline; one RF chain per baseline beam.
    pub dft_geometry: ArrayGeometry,
    pub pattern: SubarrayPattern,
    pub link: LinkParams,
    pub cycle: CodebookCycle,
    pub dft: DftCodebook,
}

impl Scene {
    pub fn new(config: SceneConfig) -> Result<Self> {
        config.validate()?;
        let constants = config.constants();
        let orbit = satellite_kinematics(config.h_sat, &constants)?;
        let dims = (config.n_sub_x, config.n_sub_y);
        let lattice = LatticeSpec::new(
            &orbit,
            constants.r_earth,
            config.oversampling,
            dims,
            config.cycle_len,
        )?;
        let roi = Roi::new(config.r_x, config.r_y)?;
        let geometry = satellite_array(config.n_rf, dims, config.element_spacing)?;
        let dft_geometry = satellite_array(config.n_dft_beams, dims, config.element_spacing)?;
        let link = LinkParams {
            f_carrier: config.f_dl,
            bandwidth: config.bandwidth,
            p_tx: config.p_tx,
            lp_cable: config.lp_cable,
            lp_at: config.lp_at,
            noise_temp: config.noise_temp,
            k_boltz: config.k_boltz,
            k_rician: config.k_rician,
            ut_dims: (config.n_ut_x, config.n_ut_y),
            c: constants.c,
        };
        link.validate()?;
        let cycle = build_cycle(&lattice, &roi, config.h_sat, &geometry)?;
        let dft = dft_baseline(&roi, config.h_sat, &dft_geometry, config.n_dft_beams)?;
        Ok(Self {
            pattern: SubarrayPattern::new(dims, config.element_spacing),
            config,
            constants,
            orbit,
            lattice,
            roi,
            geometry,
            dft_geometry,
            link,
            cycle,
            dft,
        })
    }

    pub fn h_sat(&self) -> f64 {
        self.config.h_sat
    }

    /// Time-series step (s).
    pub fn dt(&self) -> f64 {
        self.config.dt.unwrap_or(self.lattice.t_c / 20.0)
    }

    /// Beam association step used for handover counting (s).
    pub fn handover_dt(&self) -> f64 {
        self.config.handover_dt.unwrap_or(self.lattice.t_c)
    }

    /// The user terminal's planar array.
    pub fn ut_geometry(&self) -> Result<ArrayGeometry> {
        let dims = (self.config.n_ut_x, self.config.n_ut_y);
        let positions = upa_positions(dims.0, dims.1, self.config.element_spacing)?;
        let n = positions.len();
        ArrayGeometry::new(positions, vec![0; n], 1, dims)
    }
}
