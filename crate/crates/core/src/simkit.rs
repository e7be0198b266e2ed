//! Pass simulation and ground-field evaluation.
//!
//! Coverage maps are evaluated in the satellite frame at one codebook
//! iteration. Time series and handover maps follow a ground-frame point
//! while the satellite moves: at time `t` the point sits at
//! `x - v_ground t` in the satellite frame.
//!
//! Rasters are binary PPM (`P6`) images, one pixel per grid point, top row at
//! the largest `y`. Continuous metrics use a fixed five-stop ramp,
//! linearly interpolated between the map's minimum and maximum:
//! `(68,1,84) → (59,82,139) → (33,145,140) → (94,201,98) → (253,231,37)`.
//! Cell maps colour beam `id` with entry `id mod 10` of [`CELL_PALETTE`].
//! Grid points without data are black.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::array::SubarrayPattern;
use crate::error::{Error, Result};
use crate::geom::{direction_to_point, GroundPoint};
use crate::link::{relative_noise, snr};
use crate::scene::Scene;

/// How the satellite's beams evolve during a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Iteration 0 of the hexagonal codebook, frozen in the satellite frame.
    StaticHex,
    /// The full dynamic cycle with permuted beam IDs.
    DynamicHex,
    /// The static rectangular baseline.
    Dft,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::StaticHex => "static",
            Mode::DynamicHex => "dynamic",
            Mode::Dft => "dft",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" | "static-hex" => Ok(Mode::StaticHex),
            "dynamic" | "dynamic-hex" => Ok(Mode::DynamicHex),
            "dft" => Ok(Mode::Dft),
            other => Err(Error::invalid(
                "mode",
                format!("`{other}` is not one of static, dynamic, dft"),
            )),
        }
    }
}

/// The beam set a coverage map is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSource {
    Hex { iteration: usize },
    Dft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Snr,
    Sinr,
    Cell,
    Handovers,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Snr => "snr",
            Metric::Sinr => "sinr",
            Metric::Cell => "cell",
            Metric::Handovers => "handovers",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(Metric::Snr),
            "sinr" => Ok(Metric::Sinr),
            "cell" => Ok(Metric::Cell),
            other => Err(Error::invalid(
                "metric",
                format!("`{other}` is not one of snr, sinr, cell"),
            )),
        }
    }
}

/// An active beam reduced to what field evaluation needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveBeam {
    pub id: usize,
    pub direction: [f64; 3],
}

pub fn beams_for(scene: &Scene, source: BeamSource) -> Result<Vec<ActiveBeam>> {
    match source {
        BeamSource::Hex { iteration } => {
            let beams = scene.cycle.iterations.get(iteration).ok_or_else(|| {
                Error::invalid(
                    "iter",
                    format!("{iteration} >= cycle length {}", scene.cycle.iterations.len()),
                )
            })?;
            Ok(beams
                .iter()
                .map(|b| ActiveBeam {
                    id: b.label,
                    direction: b.direction,
                })
                .collect())
        }
        BeamSource::Dft => Ok(scene
            .dft
            .beams
            .iter()
            .map(|b| ActiveBeam {
                id: b.id,
                direction: b.direction,
            })
            .collect()),
    }
}

/// Beams radiated at time `t` (s) in `mode`.
pub fn beams_at(scene: &Scene, mode: Mode, t: f64) -> Vec<ActiveBeam> {
    match mode {
        Mode::StaticHex => beams_for(scene, BeamSource::Hex { iteration: 0 }).unwrap_or_default(),
        Mode::Dft => beams_for(scene, BeamSource::Dft).unwrap_or_default(),
        Mode::DynamicHex => scene
            .cycle
            .active(scene.cycle.iteration_at(t))
            .map(|(id, b)| ActiveBeam {
                id,
                direction: b.direction,
            })
            .collect(),
    }
}

/// Index into `gains` of the strongest beam; ties go to the lowest ID.
fn strongest(gains: &[f64], beams: &[ActiveBeam]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, (&g, b)) in gains.iter().zip(beams).enumerate() {
        best = match best {
            None => Some(i),
            Some(j) if g > gains[j] || (g == gains[j] && b.id < beams[j].id) => Some(i),
            keep => keep,
        };
    }
    best
}

fn fill_gains(pattern: &SubarrayPattern, v: &[f64; 3], beams: &[ActiveBeam], out: &mut Vec<f64>) {
    out.clear();
    out.extend(beams.iter().map(|b| pattern.gain(&b.direction, v)));
}

/// ID of the beam delivering the most power to satellite-frame point `p`.
pub fn serving_beam(scene: &Scene, p: &GroundPoint, beams: &[ActiveBeam]) -> Result<usize> {
    if beams.is_empty() {
        return Err(Error::invalid("beams", "no active beams"));
    }
    let v = direction_to_point(p, scene.h_sat());
    let mut gains = Vec::with_capacity(beams.len());
    fill_gains(&scene.pattern, &v, beams, &mut gains);
    Ok(beams[strongest(&gains, beams).expect("non-empty")].id)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetrics {
    pub serving_id: usize,
    /// Linear gain of the serving beam.
    pub gain: f64,
    pub snr_db: f64,
    pub sinr_db: f64,
}

fn evaluate_with(
    scene: &Scene,
    p: &GroundPoint,
    beams: &[ActiveBeam],
    gains: &mut Vec<f64>,
) -> Option<PointMetrics> {
    let v = direction_to_point(p, scene.h_sat());
    fill_gains(&scene.pattern, &v, beams, gains);
    let s = strongest(gains, beams)?;
    let g_s = gains[s];
    let interference = gains.iter().sum::<f64>() - g_s;
    let noise = relative_noise(p, scene.h_sat(), &scene.link);
    Some(PointMetrics {
        serving_id: beams[s].id,
        gain: g_s,
        snr_db: snr(p, g_s, scene.h_sat(), &scene.link),
        sinr_db: 10.0 * (g_s / (interference.max(0.0) + noise)).log10(),
    })
}

/// Serving beam, SNR and SINR at satellite-frame point `p`.
pub fn evaluate_point(scene: &Scene, p: &GroundPoint, beams: &[ActiveBeam]) -> Result<PointMetrics> {
    evaluate_with(scene, p, beams, &mut Vec::with_capacity(beams.len()))
        .ok_or_else(|| Error::invalid("beams", "no active beams"))
}

/// Rectangular sampling of the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Grid over the ROI's bounding box with a node at the origin.
    pub fn covering(roi: &crate::codebook::Roi, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::invalid("grid_spacing", "must be > 0"));
        }
        let hx = (roi.r_x / spacing).floor() as usize;
        let hy = (roi.r_y / spacing).floor() as usize;
        Ok(Self {
            x0: -(hx as f64) * spacing,
            y0: -(hy as f64) * spacing,
            spacing,
            nx: 2 * hx + 1,
            ny: 2 * hy + 1,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of flat index `idx = iy * nx + ix`.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let (ix, iy) = (idx % self.nx, idx / self.nx);
        (
            self.x0 + ix as f64 * self.spacing,
            self.y0 + iy as f64 * self.spacing,
        )
    }
}

/// A scalar field on a [`GridSpec`]; `NaN` marks points outside the ROI.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub metric: Metric,
}

/// Categorical colours for cell maps.
pub const CELL_PALETTE: [[u8; 3]; 10] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [127, 127, 127],
    [188, 189, 34],
    [23, 190, 207],
];

const RAMP: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

fn ramp(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0) * (RAMP.len() - 1) as f64;
    let i = (t.floor() as usize).min(RAMP.len() - 2);
    let f = t - i as f64;
    let mut out = [0u8; 3];
    for c in 0..3 {
        out[c] = (RAMP[i][c] + f * (RAMP[i + 1][c] - RAMP[i][c])).round() as u8;
    }
    out
}

impl FieldMap {
    /// Values of the points inside the ROI.
    pub fn data(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(|v| !v.is_nan())
    }

    /// `x_m,y_m,value` for every grid point, `nan` where there is no data.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_m,y_m,value\n");
        for (idx, v) in self.values.iter().enumerate() {
            let (x, y) = self.grid.coords(idx);
            let _ = writeln!(out, "{x},{y},{v}");
        }
        out
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
        let (lo, hi) = self
            .data()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        for iy in (0..ny).rev() {
            for ix in 0..nx {
                let v = self.values[iy * nx + ix];
                let rgb = if v.is_nan() {
                    [0, 0, 0]
                } else if self.metric == Metric::Cell {
                    CELL_PALETTE[(v as usize) % CELL_PALETTE.len()]
                } else if hi > lo {
                    ramp((v - lo) / (hi - lo))
                } else {
                    ramp(0.5)
                };
                out.extend_from_slice(&rgb);
            }
        }
        out
    }
}

/// Coverage map in the satellite frame for one beam set.
pub fn coverage_map(
    scene: &Scene,
    metric: Metric,
    grid: &GridSpec,
    source: BeamSource,
) -> Result<FieldMap> {
    if metric == Metric::Handovers {
        return Err(Error::invalid("metric", "use handover_map for handover counts"));
    }
    let beams = beams_for(scene, source)?;
    if beams.is_empty() {
        return Err(Error::invalid("beams", "no active beams"));
    }
    let values = (0..grid.len())
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(beams.len()),
            |gains, idx| {
                let (x, y) = grid.coords(idx);
                if !scene.roi.contains(x, y) {
                    return f64::NAN;
                }
                let p = GroundPoint::satellite(x, y);
                let m = evaluate_with(scene, &p, &beams, gains).expect("non-empty beam set");
                match metric {
                    Metric::Snr => m.snr_db,
                    Metric::Sinr => m.sinr_db,
                    _ => m.serving_id as f64,
                }
            },
        )
        .collect();
    Ok(FieldMap {
        grid: *grid,
        values,
        metric,
    })
}

/// Evenly spaced thresholds `min, min + step, ..., <= max`.
pub fn thresholds(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| min + i as f64 * step).collect()
}

/// Complementary CDF `P(SINR > threshold)` over the in-ROI points of a map.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdf {
    pub thresholds: Vec<f64>,
    pub prob: Vec<f64>,
}

impl Ccdf {
    /// Probability at an exact grid threshold.
    pub fn at(&self, threshold: f64) -> Option<f64> {
        self.thresholds
            .iter()
            .position(|&t| (t - threshold).abs() < 1e-9)
            .map(|i| self.prob[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold_db,prob\n");
        for (t, p) in self.thresholds.iter().zip(&self.prob) {
            let _ = writeln!(out, "{t},{p}");
        }
        out
    }
}

pub fn sinr_cdf(map: &FieldMap, thresholds: &[f64]) -> Result<Ccdf> {
    if map.metric != Metric::Sinr {
        return Err(Error::invalid("metric", "CDF needs a SINR map"));
    }
    let mut values: Vec<f64> = map.data().collect();
    if values.is_empty() {
        return Err(Error::invalid("map", "no in-ROI points"));
    }
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let prob = thresholds
        .iter()
        .map(|&t| {
            let at_or_below = values.partition_point(|&v| v <= t);
            (values.len() - at_or_below) as f64 / n
        })
        .collect();
    Ok(Ccdf {
        thresholds: thresholds.to_vec(),
        prob,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    /// Seconds since the frames coincided.
    pub times: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub serving_id: Vec<usize>,
    pub mode: Mode,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn handovers(&self) -> usize {
        self.serving_id.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,serving_id,snr_db\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "{},{},{}", self.times[i], self.serving_id[i], self.snr_db[i]);
        }
        out
    }
}

/// Follow ground-frame point `ut` over samples `t = n dt` in
/// `[t_start, t_end]`, keeping only instants where it lies inside the ROI.
pub fn pass_window(
    scene: &Scene,
    ut: GroundPoint,
    mode: Mode,
    t_start: f64,
    t_end: f64,
    dt: f64,
) -> Result<TimeSeries> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be > 0"));
    }
    if !(t_end >= t_start) {
        return Err(Error::invalid("duration", "must be > 0"));
    }
    let ut = match ut.frame {
        crate::geom::Frame::Ground => ut,
        crate::geom::Frame::Satellite => ut.to_ground_frame(0.0, scene.lattice.v_ground),
    };
    let n0 = (t_start / dt - 1e-9).ceil() as i64;
    let n1 = (t_end / dt + 1e-9).floor() as i64;
    let mut series = TimeSeries {
        times: Vec::new(),
        snr_db: Vec::new(),
        serving_id: Vec::new(),
        mode,
    };
    let fixed = match mode {
        Mode::DynamicHex => None,
        _ => Some(beams_at(scene, mode, 0.0)),
    };
    let mut gains = Vec::new();
    for n in n0..=n1 {
        let t = n as f64 * dt;
        let p = ut.to_satellite_frame(t, scene.lattice.v_ground);
        if !scene.roi.contains(p.x, p.y) {
            continue;
        }
        let dynamic;
        let beams = match &fixed {
            Some(b) => b,
            None => {
                dynamic = beams_at(scene, mode, t);
                &dynamic
            }
        };
        let Some(m) = evaluate_with(scene, &p, beams, &mut gains) else {
            continue;
        };
        series.times.push(t);
        series.snr_db.push(m.snr_db);
        series.serving_id.push(m.serving_id);
    }
    if series.is_empty() {
        return Err(Error::EmptySeries { x: ut.x, y: ut.y });
    }
    Ok(series)
}

/// Time series from `t = 0` to `duration`.
pub fn pass_timeseries(
    scene: &Scene,
    ut: GroundPoint,
    mode: Mode,
    duration: f64,
    dt: f64,
) -> Result<TimeSeries> {
    if !(duration > 0.0) {
        return Err(Error::invalid("duration", "must be > 0"));
    }
    pass_window(scene, ut, mode, 0.0, duration, dt)
}

/// A maximal run of samples served by one beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dwell {
    pub id: usize,
    /// First and last sample index (inclusive).
    pub first: usize,
    pub last: usize,
    pub peak_db: f64,
    pub trough_db: f64,
    /// Whether the dwell is bounded by handovers on both sides rather than
    /// by the ends of the series.
    pub complete: bool,
}

impl Dwell {
    pub fn ripple_db(&self) -> f64 {
        self.peak_db - self.trough_db
    }

    pub fn duration(&self, series: &TimeSeries) -> f64 {
        series.times[self.last] - series.times[self.first]
    }
}

pub fn dwells(series: &TimeSeries) -> Vec<Dwell> {
    let mut out: Vec<Dwell> = Vec::new();
    for (i, (&id, &s)) in series.serving_id.iter().zip(&series.snr_db).enumerate() {
        match out.last_mut() {
            Some(d) if d.id == id => {
                d.last = i;
                d.peak_db = d.peak_db.max(s);
                d.trough_db = d.trough_db.min(s);
            }
            _ => out.push(Dwell {
                id,
                first: i,
                last: i,
                peak_db: s,
                trough_db: s,
                complete: false,
            }),
        }
    }
    let n = series.len();
    for d in &mut out {
        d.complete = d.first > 0 && d.last + 1 < n;
    }
    out
}

/// Handover count for every in-ROI grid point over its whole pass.
///
/// Grid points are ground-frame positions at `t = 0`. Each point is followed
/// over the interval in which it lies inside the ROI, sampling the serving
/// beam every [`Scene::handover_dt`] seconds on the global time grid, and
/// every change of serving ID counts as one handover.
pub fn handover_map(scene: &Scene, mode: Mode, grid: &GridSpec) -> Result<FieldMap> {
    let dt = scene.handover_dt();
    let vg = scene.lattice.v_ground;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (x, y) = grid.coords(idx);
            if !scene.roi.contains(x, y) {
                return Ok(f64::NAN);
            }
            let half = scene.roi.half_chord(y);
            let ut = GroundPoint::ground(x, y);
            match pass_window(scene, ut, mode, (x - half) / vg, (x + half) / vg, dt) {
                Ok(series) => Ok(series.handovers() as f64),
                Err(Error::EmptySeries { .. }) => Ok(0.0),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FieldMap {
        grid: *grid,
        values,
        metric: Metric::Handovers,
    })
}
