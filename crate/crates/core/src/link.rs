//! Downlink budget and the Rician channel model.
//!
//! All budget quantities are in dB units. The deterministic map pipeline uses
//! the line-of-sight budget with the Rician receive gain folded into
//! [`g_rx`]; [`rician_sample`] is the only stochastic path.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::array::{steering_vector, ArrayGeometry};
use crate::error::{Error, Result};
use crate::geom::{direction_to_point, slant_range, GroundPoint};

/// Boltzmann constant in dBW/K/Hz.
pub const K_BOLTZMANN_DB: f64 = -228.6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Carrier frequency (Hz).
    pub f_carrier: f64,
    /// Bandwidth (Hz).
    pub bandwidth: f64,
    /// Transmit power (dBW).
    pub p_tx: f64,
    /// Cable loss (dB).
    pub lp_cable: f64,
    /// Atmospheric loss (dB).
    pub lp_at: f64,
    /// Receiver noise temperature (dBK).
    pub noise_temp: f64,
    /// Boltzmann constant (dBW/K/Hz).
    pub k_boltz: f64,
    /// Rician factor, linear; `f64::INFINITY` means pure line of sight.
    pub k_rician: f64,
    pub ut_dims: (usize, usize),
    /// Speed of light (m/s).
    pub c: f64,
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0) {
            return Err(Error::invalid("B", "must be > 0"));
        }
        if !(self.f_carrier > 0.0) {
            return Err(Error::invalid("f_DL", "must be > 0"));
        }
        if !(self.k_rician > 0.0) {
            return Err(Error::invalid("K_r", "must be > 0"));
        }
        if self.ut_dims.0 == 0 || self.ut_dims.1 == 0 {
            return Err(Error::invalid("N_UT_x/N_UT_y", "must be >= 1"));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        self.c / self.f_carrier
    }

    pub fn noise_db(&self) -> f64 {
        noise_power(self.noise_temp, self.bandwidth, self.k_boltz)
    }

    pub fn g_rx_db(&self) -> f64 {
        g_rx(self.ut_dims, self.k_rician)
    }

    /// Every budget term except the transmit beam gain, for a receiver at
    /// slant range `distance` (dB).
    pub fn budget_without_gtx(&self, distance: f64) -> f64 {
        self.p_tx - self.lp_cable - self.lp_at - fspl(distance, self.f_carrier, self.c)
            + self.g_rx_db()
    }
}

/// Receive array gain including the captured scattered component.
pub fn g_rx(ut_dims: (usize, usize), k_rician: f64) -> f64 {
    10.0 * ((ut_dims.0 * ut_dims.1) as f64 + 1.0 / k_rician).log10()
}

/// Friis free-space loss (dB).
pub fn fspl(distance: f64, f_carrier: f64, c: f64) -> f64 {
    20.0 * (4.0 * PI * distance * f_carrier / c).log10()
}

/// Thermal noise power (dBW) from temperature (dBK) and bandwidth (Hz).
pub fn noise_power(noise_temp_dbk: f64, bandwidth: f64, k_boltz_db: f64) -> f64 {
    noise_temp_dbk + k_boltz_db + 10.0 * bandwidth.log10()
}

/// SNR (dB) at satellite-frame point `p` for a beam with linear gain
/// `beam_gain` towards `p`.
pub fn snr(p: &GroundPoint, beam_gain: f64, h_sat: f64, link: &LinkParams) -> f64 {
    link.budget_without_gtx(slant_range(p, h_sat)) + 10.0 * beam_gain.log10() - link.noise_db()
}

/// Noise power relative to the shared budget at `p` (linear), i.e. the noise
/// expressed in beam-gain units.
pub fn relative_noise(p: &GroundPoint, h_sat: f64, link: &LinkParams) -> f64 {
    let db = link.noise_db() - link.budget_without_gtx(slant_range(p, h_sat));
    10f64.powf(db / 10.0)
}

/// SINR (dB) of `serving` against all other entries of `gains` under full
/// frequency reuse. Every beam leaves the same satellite, so path loss and
/// receive gain are common and cancel; only beam gains and the relative
/// noise remain.
pub fn sinr(gains: &[f64], serving: usize, relative_noise: f64) -> Result<f64> {
    let Some(&g_s) = gains.get(serving) else {
        return Err(Error::invalid(
            "serving",
            format!("beam {serving} is not among {} active beams", gains.len()),
        ));
    };
    let interference: f64 = gains.iter().sum::<f64>() - g_s;
    Ok(10.0 * (g_s / (interference.max(0.0) + relative_noise)).log10())
}

/// One channel realization, kept in factored form
/// `H = gamma (a_u + sqrt(1/K_r) a_R) a_sat^H`.
#[derive(Debug, Clone)]
pub struct ChannelSample {
    /// Line-of-sight amplitude gain (phase not modelled).
    pub gamma: f64,
    /// UT steering vector towards the satellite.
    pub a_u: Vec<Complex64>,
    /// Scattered component, `CN(0, I)`.
    pub a_r: Vec<Complex64>,
    /// `sqrt(1/K_r)`.
    pub scatter_scale: f64,
    /// Satellite steering vector towards the UT.
    pub a_sat: Vec<Complex64>,
}

impl ChannelSample {
    pub fn shape(&self) -> (usize, usize) {
        (self.a_u.len(), self.a_sat.len())
    }

    fn outer(&self, left: impl Fn(usize) -> Complex64) -> Array2<Complex64> {
        Array2::from_shape_fn(self.shape(), |(i, j)| left(i) * self.a_sat[j].conj())
    }

    pub fn los_part(&self) -> Array2<Complex64> {
        self.outer(|i| self.a_u[i] * self.gamma)
    }

    pub fn rician_part(&self) -> Array2<Complex64> {
        self.outer(|i| self.a_r[i] * (self.gamma * self.scatter_scale))
    }

    /// Dense `N_UT × N_sat` matrix.
    pub fn matrix(&self) -> Array2<Complex64> {
        self.outer(|i| (self.a_u[i] + self.a_r[i] * self.scatter_scale) * self.gamma)
    }

    pub fn scatter_energy(&self) -> f64 {
        self.a_r.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Draw one Rician channel for a UT at satellite-frame point `p`.
pub fn rician_sample<R: Rng + ?Sized>(
    p: &GroundPoint,
    h_sat: f64,
    sat: &ArrayGeometry,
    ut: &ArrayGeometry,
    link: &LinkParams,
    rng: &mut R,
) -> Result<ChannelSample> {
    link.validate()?;
    let down = direction_to_point(p, h_sat);
    let up = [-down[0], -down[1], -down[2]];
    let a_u = steering_vector(ut, &down)?;
    let a_sat = steering_vector(sat, &up)?;
    // Unit-variance circularly-symmetric entries: trace(Sigma) = N_UT = ||a_u||^2.
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let a_r = (0..a_u.len())
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * half, im * half)
        })
        .collect();
    let loss_db = fspl(slant_range(p, h_sat), link.f_carrier, link.c) + link.lp_at;
    Ok(ChannelSample {
        gamma: 10f64.powf(-loss_db / 20.0),
        a_u,
        a_r,
        scatter_scale: (1.0 / link.k_rician).sqrt(),
        a_sat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{satellite_array, upa_positions};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const C: f64 = 299_792_458.0;

    fn table1() -> LinkParams {
        LinkParams {
            f_carrier: 11.45e9,
            bandwidth: 250e6,
            p_tx: 15.0,
            lp_cable: 0.0,
            lp_at: 0.017,
            noise_temp: 24.1,
            k_boltz: K_BOLTZMANN_DB,
            k_rician: 10.0,
            ut_dims: (24, 24),
            c: C,
        }
    }

    fn ut_array(nx: usize, ny: usize) -> ArrayGeometry {
        ArrayGeometry::new(upa_positions(nx, ny, 0.5).unwrap(), vec![0; nx * ny], 1, (nx, ny))
            .unwrap()
    }

    #[test]
    fn receive_gain() {
        assert!((g_rx((24, 24), 10.0) - 27.6).abs() < 0.05);
        assert_eq!(g_rx((1, 1), f64::INFINITY), 0.0);
        assert!((g_rx((12, 24), 10.0) - 24.60).abs() < 0.005);
        let bonus = g_rx((24, 24), 10.0) - g_rx((24, 24), f64::INFINITY);
        assert!((bonus - 10.0 * (576.1f64 / 576.0).log10()).abs() < 1e-6);
    }

    #[test]
    fn free_space_loss() {
        assert!((fspl(1.3e6, 11.45e9, C) - 175.91).abs() < 0.01);
        assert!((fspl(2.6e6, 11.45e9, C) - fspl(1.3e6, 11.45e9, C) - 6.02).abs() < 0.005);
        assert!((fspl(1.4055e6, 11.45e9, C) - 176.59).abs() < 0.01);
    }

    #[test]
    fn thermal_noise() {
        assert!((noise_power(24.1, 250e6, K_BOLTZMANN_DB) + 120.52).abs() < 0.01);
        let d = noise_power(24.1, 2.5e9, K_BOLTZMANN_DB) - noise_power(24.1, 250e6, K_BOLTZMANN_DB);
        assert!((d - 10.0).abs() < 1e-9);
        assert_eq!(noise_power(0.0, 1.0, K_BOLTZMANN_DB), -228.6);
    }

    #[test]
    fn nadir_snr_budget() {
        // 15 + 24.59 - 0.017 - 175.91 + 27.6 + 120.52
        let link = table1();
        let nadir = GroundPoint::satellite(0.0, 0.0);
        let s = snr(&nadir, 288.0, 1.3e6, &link);
        assert!((s - 11.8).abs() < 0.05, "{s}");
        let half = snr(&nadir, 144.0, 1.3e6, &link);
        assert!((s - half - 3.0103).abs() < 1e-3);
        let edge = snr(&GroundPoint::satellite(534.1e3, 0.0), 288.0, 1.3e6, &link);
        assert!((s - edge - 0.68).abs() < 0.01, "{}", s - edge);
    }

    #[test]
    fn snr_falls_with_range() {
        let link = table1();
        let mut last = f64::INFINITY;
        for i in 0..100 {
            let s = snr(&GroundPoint::satellite(i as f64 * 10e3, 0.0), 100.0, 1.3e6, &link);
            assert!(s < last);
            last = s;
        }
    }

    #[test]
    fn sinr_cases() {
        let rn = 1e-3;
        let single = sinr(&[200.0], 0, rn).unwrap();
        assert!((single - 10.0 * (200.0f64 / rn).log10()).abs() < 1e-12);
        let triple = sinr(&[50.0, 50.0, 50.0], 1, 1e-9).unwrap();
        assert!(triple <= -3.01);
        assert!(sinr(&[1.0, 2.0], 2, rn).is_err());
    }

    #[test]
    fn channel_shapes_and_rank() {
        let sat = satellite_array(2, (3, 4), 0.5).unwrap();
        let ut = ut_array(4, 4);
        let mut link = table1();
        link.k_rician = f64::INFINITY;
        let p = GroundPoint::satellite(120e3, -40e3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ch = rician_sample(&p, 1.3e6, &sat, &ut, &link, &mut rng).unwrap();
        let h = ch.matrix();
        assert_eq!(h.dim(), (16, 24));
        // Rank one: every 2x2 minor vanishes.
        for (i, j) in [(0, 1), (3, 9), (15, 2)] {
            for (k, l) in [(0, 5), (7, 23)] {
                let minor = h[[i, k]] * h[[j, l]] - h[[i, l]] * h[[j, k]];
                assert!(minor.norm() < 1e-12 * h[[i, k]].norm() * h[[j, l]].norm());
            }
        }
        assert_eq!(ch.rician_part().iter().map(|c| c.norm()).sum::<f64>(), 0.0);
        let diff = &ch.los_part() - &h;
        assert!(diff.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn seeded_draws_reproduce() {
        let sat = satellite_array(1, (2, 2), 0.5).unwrap();
        let ut = ut_array(3, 3);
        let p = GroundPoint::satellite(0.0, 0.0);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rician_sample(&p, 1.3e6, &sat, &ut, &table1(), &mut rng).unwrap().a_r
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }
}
