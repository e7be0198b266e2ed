use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use leo_beams::config::{parse_config, SceneConfig};
use leo_beams::experiment::{parse_sources, run_experiment, Command};
use leo_beams::simkit::{BeamSource, Metric, Mode};
use leo_beams::Error;

#[derive(Parser)]
#[command(name = "leo-beams", about = "LEO dynamic-codebook experiments")]
struct Cli {
    /// Scene configuration (`key = value` lines); defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Map grid spacing in metres.
    #[arg(long, global = true)]
    grid_spacing: Option<f64>,
    /// Time-series step in seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Seed for the stochastic channel.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Codebook iterations per cycle (K).
    #[arg(long = "cycle-len", global = true)]
    cycle_len: Option<usize>,
    /// Override any configuration key, e.g. `--set N_RF=15`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Write the dynamic codebook tables.
    Codebook {
        #[arg(long)]
        phases: bool,
    },
    /// Coverage map of one beam set.
    Map {
        #[arg(long, default_value = "snr")]
        metric: String,
        #[arg(long, default_value = "hex")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        iter: usize,
    },
    /// SINR complementary CDFs.
    Cdf {
        #[arg(long, default_value = "hex,dft")]
        modes: String,
    },
    /// SNR and serving beam over a pass for one ground point.
    Timeseries {
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        #[arg(long, default_value = "dynamic")]
        mode: String,
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Handover counts over the ROI.
    Handover {
        #[arg(long, default_value = "dynamic")]
        mode: String,
    },
    /// Seeded Rician channel draws.
    Rician {
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
    },
}

fn resolve(cli: &Cli) -> Result<SceneConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(path)?,
        None => SceneConfig::default(),
    };
    let mut overrides: Vec<(String, String)> = Vec::new();
    if let Some(v) = cli.grid_spacing {
        overrides.push(("grid_spacing".into(), v.to_string()));
    }
    if let Some(v) = cli.dt {
        overrides.push(("dt".into(), v.to_string()));
    }
    if let Some(v) = cli.seed {
        overrides.push(("seed".into(), v.to_string()));
    }
    if let Some(v) = cli.cycle_len {
        overrides.push(("K".into(), v.to_string()));
    }
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter {
                name: "set".into(),
                reason: format!("`{kv}` is not KEY=VALUE"),
            })?;
        overrides.push((k.trim().into(), v.trim().into()));
    }
    for (k, v) in overrides {
        cfg.set(&k, &v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn command(sub: &Sub) -> Result<Command, Error> {
    Ok(match sub {
        Sub::Codebook { phases } => Command::Codebook { phases: *phases },
        Sub::Map { metric, mode, iter } => Command::Map {
            metric: metric.parse::<Metric>()?,
            source: match mode.as_str() {
                "hex" => BeamSource::Hex { iteration: *iter },
                "dft" => BeamSource::Dft,
                other => {
                    return Err(Error::InvalidParameter {
                        name: "mode".into(),
                        reason: format!("`{other}` is not one of hex, dft"),
                    })
                }
            },
        },
        Sub::Cdf { modes } => Command::Cdf {
            sources: parse_sources(modes)?,
        },
        Sub::Timeseries {
            x,
            y,
            mode,
            duration,
        } => Command::Timeseries {
            x: *x,
            y: *y,
            mode: mode.parse::<Mode>()?,
            duration: *duration,
        },
        Sub::Handover { mode } => Command::Handover {
            mode: mode.parse::<Mode>()?,
        },
        Sub::Rician { x, y, draws } => Command::Rician {
            x: *x,
            y: *y,
            draws: *draws,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(&cli)
        .and_then(|cfg| Ok((cfg, command(&cli.command)?)))
        .and_then(|(cfg, cmd)| run_experiment(&cmd, &cfg, &cli.out));
    match result {
        Ok(outputs) => {
            for f in &outputs.files {
                println!("{}", f.display());
            }
            println!("{}", outputs.manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
