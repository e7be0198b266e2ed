//! Experiment runner behind the `leo-beams` binary.
//!
//! Every run writes its outputs plus `manifest.txt`: the resolved
//! configuration in config-file syntax (so the manifest can be fed back as a
//! config), followed by comment lines carrying the command and the SHA-256
//! digest of each output file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::SceneConfig;
use crate::error::{Error, Result};
use crate::geom::GroundPoint;
use crate::link::rician_sample;
use crate::scene::Scene;
use crate::simkit::{
    coverage_map, handover_map, pass_timeseries, sinr_cdf, thresholds, BeamSource, GridSpec,
    Metric, Mode,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Cycle tables, optionally with per-element phases.
    Codebook { phases: bool },
    Map { metric: Metric, source: BeamSource },
    /// SINR CCDFs for the listed beam sets.
    Cdf { sources: Vec<BeamSource> },
    Timeseries {
        x: f64,
        y: f64,
        mode: Mode,
        /// Defaults to the time until the point leaves the ROI.
        duration: Option<f64>,
    },
    Handover { mode: Mode },
    /// Seeded Rician draws at a ground point, for statistical validation.
    Rician { x: f64, y: f64, draws: usize },
}

fn source_name(source: &BeamSource) -> String {
    match source {
        BeamSource::Hex { iteration } => format!("hex_k{iteration}"),
        BeamSource::Dft => "dft".to_owned(),
    }
}

impl Command {
    /// Command line equivalent, recorded in the manifest.
    pub fn describe(&self) -> String {
        match self {
            Command::Codebook { phases } => {
                format!("codebook{}", if *phases { " --phases" } else { "" })
            }
            Command::Map { metric, source } => match source {
                BeamSource::Hex { iteration } => {
                    format!("map --metric {} --mode hex --iter {iteration}", metric.as_str())
                }
                BeamSource::Dft => format!("map --metric {} --mode dft", metric.as_str()),
            },
            Command::Cdf { sources } => {
                let names: Vec<_> = sources
                    .iter()
                    .map(|s| match s {
                        BeamSource::Hex { .. } => "hex",
                        BeamSource::Dft => "dft",
                    })
                    .collect();
                format!("cdf --modes {}", names.join(","))
            }
            Command::Timeseries {
                x,
                y,
                mode,
                duration,
            } => {
                let mut s = format!("timeseries --x {x} --y {y} --mode {}", mode.as_str());
                if let Some(d) = duration {
                    let _ = write!(s, " --duration {d}");
                }
                s
            }
            Command::Handover { mode } => format!("handover --mode {}", mode.as_str()),
            Command::Rician { x, y, draws } => format!("rician --x {x} --y {y} --draws {draws}"),
        }
    }
}

/// Parse a comma-separated `hex,dft` list.
pub fn parse_sources(list: &str) -> Result<Vec<BeamSource>> {
    list.split(',')
        .map(|s| match s.trim() {
            "hex" => Ok(BeamSource::Hex { iteration: 0 }),
            "dft" => Ok(BeamSource::Dft),
            other => Err(Error::invalid(
                "modes",
                format!("`{other}` is not one of hex, dft"),
            )),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outputs {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

fn write(dir: &Path, name: &str, bytes: &[u8], files: &mut Vec<(String, PathBuf, String)>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    let digest = hex::encode(Sha256::digest(bytes));
    files.push((name.to_owned(), path, digest));
    Ok(())
}

fn cdf_table(names: &[String], tables: &[crate::simkit::Ccdf]) -> String {
    let mut out = String::from("threshold_db");
    for n in names {
        let _ = write!(out, ",prob_{n}");
    }
    out.push('\n');
    if let Some(first) = tables.first() {
        for (i, t) in first.thresholds.iter().enumerate() {
            let _ = write!(out, "{t}");
            for table in tables {
                let _ = write!(out, ",{}", table.prob[i]);
            }
            out.push('\n');
        }
    }
    out
}

/// Run `command` against `config`, writing every output under `out_dir`.
pub fn run_experiment(command: &Command, config: &SceneConfig, out_dir: &Path) -> Result<Outputs> {
    let scene = Scene::new(config.clone())?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::new();
    let cfg = &scene.config;

    match command {
        Command::Codebook { phases } => {
            write(out_dir, "codebook.csv", scene.cycle.to_csv().as_bytes(), &mut files)?;
            if *phases {
                write(out_dir, "phases.csv", scene.cycle.phases_csv().as_bytes(), &mut files)?;
            }
        }
        Command::Map { metric, source } => {
            let grid = GridSpec::covering(&scene.roi, cfg.grid_spacing)?;
            let map = coverage_map(&scene, *metric, &grid, *source)?;
            let stem = format!("map_{}_{}", metric.as_str(), source_name(source));
            write(out_dir, &format!("{stem}.csv"), map.to_csv().as_bytes(), &mut files)?;
            write(out_dir, &format!("{stem}.ppm"), &map.to_ppm(), &mut files)?;
        }
        Command::Cdf { sources } => {
            let grid = GridSpec::covering(&scene.roi, cfg.grid_spacing)?;
            let ths = thresholds(cfg.cdf_min, cfg.cdf_max, cfg.cdf_step);
            let mut names = Vec::new();
            let mut tables = Vec::new();
            for source in sources {
                let map = coverage_map(&scene, Metric::Sinr, &grid, *source)?;
                let ccdf = sinr_cdf(&map, &ths)?;
                let name = match source {
                    BeamSource::Hex { .. } => "hex",
                    BeamSource::Dft => "dft",
                };
                write(out_dir, &format!("cdf_{name}.csv"), ccdf.to_csv().as_bytes(), &mut files)?;
                names.push(name.to_owned());
                tables.push(ccdf);
            }
            write(out_dir, "cdf.csv", cdf_table(&names, &tables).as_bytes(), &mut files)?;
        }
        Command::Timeseries {
            x,
            y,
            mode,
            duration,
        } => {
            let ut = GroundPoint::ground(*x, *y);
            let duration = match duration {
                Some(d) => *d,
                None => (x + scene.roi.half_chord(*y)) / scene.lattice.v_ground,
            };
            if !(duration > 0.0) {
                return Err(Error::EmptySeries { x: *x, y: *y });
            }
            let series = pass_timeseries(&scene, ut, *mode, duration, scene.dt())?;
            write(
                out_dir,
                &format!("timeseries_{}.csv", mode.as_str()),
                series.to_csv().as_bytes(),
                &mut files,
            )?;
        }
        Command::Handover { mode } => {
            let grid = GridSpec::covering(&scene.roi, cfg.grid_spacing)?;
            let map = handover_map(&scene, *mode, &grid)?;
            let stem = format!("handover_{}", mode.as_str());
            write(out_dir, &format!("{stem}.csv"), map.to_csv().as_bytes(), &mut files)?;
            write(out_dir, &format!("{stem}.ppm"), &map.to_ppm(), &mut files)?;
        }
        Command::Rician { x, y, draws } => {
            if *draws == 0 {
                return Err(Error::invalid("draws", "must be >= 1"));
            }
            let ut = scene.ut_geometry()?;
            let p = GroundPoint::satellite(*x, *y);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut csv = String::from("draw,scatter_energy\n");
            for i in 0..*draws {
                let ch = rician_sample(&p, cfg.h_sat, &scene.geometry, &ut, &scene.link, &mut rng)?;
                let _ = writeln!(csv, "{i},{}", ch.scatter_energy());
            }
            write(out_dir, "rician.csv", csv.as_bytes(), &mut files)?;
        }
    }

    let mut manifest = String::from("# leo-beams run manifest\n");
    let _ = writeln!(manifest, "# command: {}", command.describe());
    manifest.push_str(&cfg.to_config_string());
    for (name, _, digest) in &files {
        let _ = writeln!(manifest, "# sha256 {name} {digest}");
    }
    let manifest_path = out_dir.join("manifest.txt");
    std::fs::write(&manifest_path, manifest).map_err(|e| Error::io(&manifest_path, e))?;

    Ok(Outputs {
        files: files.into_iter().map(|(_, p, _)| p).collect(),
        manifest: manifest_path,
    })
}
