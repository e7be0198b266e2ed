//! Scene configuration.
//!
//! The file format is flat `key = value` text. `#` starts a comment, blank
//! lines are ignored, and every key is optional. Keys follow the usual link
//! budget symbols; values are in SI units unless the key says otherwise
//! (`*_db`, dBW, dBK). `dt` and `handover_dt` accept `auto`.
//!
//! ```text
//! # Ku-band downlink, 1300 km orbit
//! h_sat = 1300000
//! R_x = 534100
//! K = 4
//! dt = auto
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::codebook::{max_active_count, LatticeSpec, Roi};
use crate::error::{Error, Result};
use crate::geom::{satellite_kinematics, PhysicalConstants};

trait ConfigValue: Sized {
    fn parse_value(raw: &str) -> std::result::Result<Self, String>;
    fn render(&self) -> String;
}

impl ConfigValue for f64 {
    fn parse_value(raw: &str) -> std::result::Result<Self, String> {
        raw.parse::<f64>()
            .map_err(|_| format!("`{raw}` is not a number"))
            .and_then(|v| {
                if v.is_nan() {
                    Err("NaN is not allowed".to_owned())
                } else {
                    Ok(v)
                }
            })
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

impl ConfigValue for usize {
    fn parse_value(raw: &str) -> std::result::Result<Self, String> {
        raw.parse::<usize>()
            .map_err(|_| format!("`{raw}` is not a non-negative integer"))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for u64 {
    fn parse_value(raw: &str) -> std::result::Result<Self, String> {
        raw.parse::<u64>()
            .map_err(|_| format!("`{raw}` is not a non-negative integer"))
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ConfigValue for Option<f64> {
    fn parse_value(raw: &str) -> std::result::Result<Self, String> {
        if raw == "auto" {
            Ok(None)
        } else {
            f64::parse_value(raw).map(Some)
        }
    }
    fn render(&self) -> String {
        match self {
            Some(v) => v.render(),
            None => "auto".to_owned(),
        }
    }
}

macro_rules! scene_config {
    ($( $(#[doc = $doc:literal])* $key:literal => $field:ident : $ty:ty = $default:expr; )*) => {
        /// Full system parameterization. Defaults reproduce the reference
        /// Ku-band scenario (1300 km orbit, 13 sub-arrays of 12×24, 24×24 UT).
        #[derive(Debug, Clone, PartialEq)]
        pub struct SceneConfig {
            $( $(#[doc = $doc])* pub $field: $ty, )*
        }

        impl Default for SceneConfig {
            fn default() -> Self {
                Self { $( $field: $default, )* }
            }
        }

        impl SceneConfig {
            /// Every recognised key, in file order.
            pub const KEYS: &'static [&'static str] = &[$( $key ),*];

            /// Set `key` from its textual value. `Ok(false)` for unknown keys.
            fn set_raw(&mut self, key: &str, raw: &str) -> std::result::Result<bool, String> {
                match key {
                    $( $key => { self.$field = <$ty as ConfigValue>::parse_value(raw)?; Ok(true) } )*
                    _ => Ok(false),
                }
            }

            /// `(key, rendered value)` for every field.
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                vec![$( ($key, ConfigValue::render(&self.$field)) ),*]
            }
        }
    };
}

scene_config! {
    /// Orbit height (m).
    "h_sat" => h_sat: f64 = 1.3e6;
    /// ROI semi-radius along track (m).
    "R_x" => r_x: f64 = 534.1e3;
    /// ROI semi-radius cross track (m).
    "R_y" => r_y: f64 = 170.5e3;
    /// Downlink carrier (Hz).
    "f_DL" => f_dl: f64 = 11.45e9;
    /// Bandwidth (Hz).
    "B" => bandwidth: f64 = 250e6;
    /// Atmospheric loss (dB).
    "LP_at" => lp_at: f64 = 0.017;
    /// Cable loss (dB).
    "LP_cable" => lp_cable: f64 = 0.0;
    /// Rician factor (linear).
    "K_r" => k_rician: f64 = 10.0;
    "N_sub_x" => n_sub_x: usize = 12;
    "N_sub_y" => n_sub_y: usize = 24;
    "N_RF" => n_rf: usize = 13;
    /// Transmit power (dBW).
    "P_TX" => p_tx: f64 = 15.0;
    /// Lattice oversampling factor.
    "o" => oversampling: f64 = 1.4;
    "N_UT_x" => n_ut_x: usize = 24;
    "N_UT_y" => n_ut_y: usize = 24;
    /// Receiver noise temperature (dBK).
    "T" => noise_temp: f64 = 24.1;
    /// Boltzmann constant (dBW/K/Hz).
    "k_boltz" => k_boltz: f64 = -228.6;
    /// Element spacing (wavelengths).
    "element_spacing" => element_spacing: f64 = 0.5;
    /// Orbital planes; accepted for completeness, a single pass is simulated.
    "N_p" => n_planes: usize = 83;
    /// Satellites per plane; accepted, unused.
    "N_s" => n_sats_per_plane: usize = 53;
    /// Orbital inclination (degrees); accepted, unused.
    "theta_op" => theta_op: f64 = 53.0;
    /// Codebook iterations per cycle.
    "K" => cycle_len: usize = 4;
    /// Beams in the rectangular baseline codebook.
    "n_dft_beams" => n_dft_beams: usize = 15;
    /// Map grid spacing (m).
    "grid_spacing" => grid_spacing: f64 = 2000.0;
    /// Time-series step (s); `auto` is `t_c / 20`.
    "dt" => dt: Option<f64> = None;
    /// Beam association step for handover counting (s); `auto` is `t_c`.
    "handover_dt" => handover_dt: Option<f64> = None;
    /// CDF threshold grid (dB).
    "cdf_min" => cdf_min: f64 = -10.0;
    "cdf_max" => cdf_max: f64 = 20.0;
    "cdf_step" => cdf_step: f64 = 0.5;
    /// Seed for the stochastic channel.
    "seed" => seed: u64 = 0;
    /// Gravitational constant.
    "G" => g: f64 = 6.674e-11;
    /// Earth mass (kg).
    "m_earth" => m_earth: f64 = 5.972e24;
    /// Earth radius (m).
    "R_earth" => r_earth: f64 = 6.371e6;
    /// Speed of light (m/s).
    "c" => c: f64 = 299_792_458.0;
}

impl SceneConfig {
    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants {
            g: self.g,
            m_earth: self.m_earth,
            r_earth: self.r_earth,
            c: self.c,
        }
    }

    /// Parse configuration text on top of the defaults, then validate.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_owned()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            cfg.set(key, value).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: line_no,
                    message,
                },
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Override one key from its textual value. Does not re-validate.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.set_raw(key, value) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Error::UnknownKey(key.to_owned())),
            Err(message) => Err(Error::Parse {
                line: 0,
                message: format!("{key}: {message}"),
            }),
        }
    }

    /// Render as configuration text that parses back to `self`.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("h_sat", self.h_sat),
            ("R_x", self.r_x),
            ("R_y", self.r_y),
            ("f_DL", self.f_dl),
            ("B", self.bandwidth),
            ("K_r", self.k_rician),
            ("o", self.oversampling),
            ("element_spacing", self.element_spacing),
            ("grid_spacing", self.grid_spacing),
            ("cdf_step", self.cdf_step),
            ("G", self.g),
            ("m_earth", self.m_earth),
            ("R_earth", self.r_earth),
            ("c", self.c),
        ];
        for (name, value) in positive {
            if !(value > 0.0) {
                return Err(Error::invalid(name, "must be > 0"));
            }
        }
        let finite = [
            ("h_sat", self.h_sat),
            ("R_x", self.r_x),
            ("R_y", self.r_y),
            ("f_DL", self.f_dl),
            ("B", self.bandwidth),
            ("LP_at", self.lp_at),
            ("LP_cable", self.lp_cable),
            ("P_TX", self.p_tx),
            ("T", self.noise_temp),
            ("k_boltz", self.k_boltz),
            ("grid_spacing", self.grid_spacing),
            ("cdf_min", self.cdf_min),
            ("cdf_max", self.cdf_max),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        let counts = [
            ("N_sub_x", self.n_sub_x),
            ("N_sub_y", self.n_sub_y),
            ("N_RF", self.n_rf),
            ("N_UT_x", self.n_ut_x),
            ("N_UT_y", self.n_ut_y),
            ("K", self.cycle_len),
            ("n_dft_beams", self.n_dft_beams),
        ];
        for (name, value) in counts {
            if value == 0 {
                return Err(Error::invalid(name, "must be >= 1"));
            }
        }
        for (name, value) in [("dt", self.dt), ("handover_dt", self.handover_dt)] {
            if let Some(v) = value {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::invalid(name, "must be > 0 or `auto`"));
                }
            }
        }
        if self.cdf_max < self.cdf_min {
            return Err(Error::invalid("cdf_max", "must be >= cdf_min"));
        }

        let consts = self.constants();
        let orbit = satellite_kinematics(self.h_sat, &consts)?;
        let lattice = LatticeSpec::new(
            &orbit,
            consts.r_earth,
            self.oversampling,
            (self.n_sub_x, self.n_sub_y),
            self.cycle_len,
        )?;
        let roi = Roi::new(self.r_x, self.r_y)?;
        let (iteration, count) = max_active_count(&lattice, &roi);
        if count > self.n_rf {
            return Err(Error::BeamOverflow {
                iteration,
                count,
                n_rf: self.n_rf,
            });
        }
        Ok(())
    }
}

/// Read and validate a configuration file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<SceneConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    SceneConfig::parse_str(&text)
}
