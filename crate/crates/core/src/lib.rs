//! Analog beam codebooks for a moving LEO satellite.
//!
//! The crate builds a hexagonal-lattice codebook whose beams are re-pointed
//! every `t_c` seconds so that their footprints stay frozen on the ground,
//! relabels beam IDs after each cycle so a ground cell keeps its ID for the
//! whole pass, and evaluates the resulting downlink (SNR, SINR, handovers)
//! against a static rectangular-grid (DFT-style) baseline.
//!
//! Module map:
//!
//! - [`geom`]: orbital kinematics and flat-ground satellite geometry
//! - [`array`]: sub-arrayed planar arrays, steering vectors, beam gain
//! - [`codebook`]: lattice construction, the dynamic cycle, the DFT baseline
//! - [`link`]: link budget and the Rician channel
//! - [`simkit`]: coverage maps, SINR CDF, pass time series, handover maps
//! - [`config`]: the `key = value` scene configuration
//! - [`experiment`]: file-emitting experiment runner used by the CLI
//!
//! ```
//! use leo_beams::{config::SceneConfig, scene::Scene};
//!
//! let scene = Scene::new(SceneConfig::default()).unwrap();
//! let counts: Vec<usize> = scene.cycle.iterations.iter().map(|it| it.len()).collect();
//! assert_eq!(counts, vec![13, 10, 10, 10]);
//! ```

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod codebook;
pub mod config;
pub mod error;
pub mod experiment;
pub mod geom;
pub mod link;
pub mod scene;
pub mod simkit;

pub use error::{Error, Result};
