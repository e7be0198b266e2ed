//! Hexagonal-lattice codebooks.
//!
//! Iteration `k` of a `K`-step cycle targets the lattice
//!
//! ```text
//! L_k = { (c_x (i - k/K),       sqrt(3) c_y j)         }
//!     ∪ { (c_x (i + 1/2 - k/K), sqrt(3) c_y (j + 1/2)) }     i, j ∈ Z
//! ```
//!
//! clipped to the elliptical ROI. Lattice nodes are kept as integer indices on
//! a `c_x / 2K` by `sqrt(3) c_y / 2` grid, so lattice identities such as
//! `L_{k+K} = L_k` hold exactly rather than up to rounding.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::array::{ArrayGeometry, Precoder};
use crate::error::{Error, Result};
use crate::geom::{direction_to_point, GroundPoint, OrbitState};

/// Lattice scalings `(c_x, c_y)` in metres: the beam-width footprint on the
/// ground divided by the oversampling factor.
pub fn lattice_scaling(h_sat: f64, oversampling: f64, subarray_dims: (usize, usize)) -> (f64, f64) {
    (
        PI * h_sat / (oversampling * subarray_dims.0 as f64),
        PI * h_sat / (oversampling * subarray_dims.1 as f64),
    )
}

/// Codebook update period: the time the ground track needs to move `c_x / K`.
pub fn cycle_period(
    h_sat: f64,
    cycle_len: usize,
    w_sat: f64,
    r_earth: f64,
    oversampling: f64,
    n_x_sub: usize,
) -> f64 {
    PI * h_sat / (cycle_len as f64 * w_sat * r_earth * oversampling * n_x_sub as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub c_x: f64,
    pub c_y: f64,
    pub oversampling: f64,
    /// Iterations per cycle (`K`).
    pub cycle_len: usize,
    /// Iteration period `t_c` (s).
    pub t_c: f64,
    pub v_ground: f64,
}

impl LatticeSpec {
    pub fn new(
        orbit: &OrbitState,
        r_earth: f64,
        oversampling: f64,
        subarray_dims: (usize, usize),
        cycle_len: usize,
    ) -> Result<Self> {
        if !(orbit.h_sat > 0.0) {
            return Err(Error::invalid("h_sat", "must be > 0 to build a lattice"));
        }
        if !(oversampling > 0.0) {
            return Err(Error::invalid("o", "must be > 0"));
        }
        if cycle_len == 0 {
            return Err(Error::invalid("K", "must be >= 1"));
        }
        if subarray_dims.0 == 0 || subarray_dims.1 == 0 {
            return Err(Error::invalid("N_sub_x/N_sub_y", "must be >= 1"));
        }
        let (c_x, c_y) = lattice_scaling(orbit.h_sat, oversampling, subarray_dims);
        let t_c = cycle_period(
            orbit.h_sat,
            cycle_len,
            orbit.w_sat,
            r_earth,
            oversampling,
            subarray_dims.0,
        );
        Ok(Self {
            c_x,
            c_y,
            oversampling,
            cycle_len,
            t_c,
            v_ground: orbit.w_sat * r_earth,
        })
    }

    /// Along-track shift of the ground over one full cycle; equals `c_x`.
    pub fn cycle_shift(&self) -> f64 {
        self.cycle_len as f64 * self.t_c * self.v_ground
    }

    fn col_unit(&self) -> f64 {
        self.c_x / (2 * self.cycle_len) as f64
    }

    fn row_unit(&self) -> f64 {
        3f64.sqrt() / 2.0 * self.c_y
    }

    pub fn node_point(&self, node: LatticeNode) -> GroundPoint {
        GroundPoint::satellite(
            node.col as f64 * self.col_unit(),
            node.row as f64 * self.row_unit(),
        )
    }

    /// Whether `node` belongs to the infinite lattice of iteration `k`.
    pub fn in_iteration(&self, node: LatticeNode, k: i64) -> bool {
        let period = 2 * self.cycle_len as i64;
        let offset = if node.row.rem_euclid(2) == 1 {
            self.cycle_len as i64
        } else {
            0
        };
        (node.col + 2 * k - offset).rem_euclid(period) == 0
    }
}

/// Elliptical region of interest centred under the satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roi {
    pub r_x: f64,
    pub r_y: f64,
}

impl Roi {
    pub fn new(r_x: f64, r_y: f64) -> Result<Self> {
        if !(r_x > 0.0) {
            return Err(Error::invalid("R_x", "must be > 0"));
        }
        if !(r_y > 0.0) {
            return Err(Error::invalid("R_y", "must be > 0"));
        }
        Ok(Self { r_x, r_y })
    }

    /// Boundary points count as inside.
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (u, v) = (x / self.r_x, y / self.r_y);
        u * u + v * v <= 1.0
    }

    /// Half-length of the chord at cross-track offset `y` (0 outside).
    pub fn half_chord(&self, y: f64) -> f64 {
        let v = y / self.r_y;
        self.r_x * (1.0 - v * v).max(0.0).sqrt()
    }
}

/// A lattice node: `x = col · c_x / 2K`, `y = row · sqrt(3) c_y / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeNode {
    pub col: i64,
    pub row: i64,
}

impl LatticeNode {
    /// Labeling order: `y` ascending, then `x` ascending.
    fn label_cmp(&self, other: &Self) -> Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

/// Sort points into beam-labeling order (`y`, then `x`, ascending).
pub fn sort_for_labeling(points: &mut [GroundPoint]) {
    points.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
}

/// Nodes of iteration `k` inside the ROI, in labeling order.
pub fn iteration_nodes(k: i64, spec: &LatticeSpec, roi: &Roi) -> Vec<LatticeNode> {
    // Bounding box of the ROI padded by one lattice period on each side.
    let period = 2 * spec.cycle_len as i64;
    let max_col = (roi.r_x / spec.col_unit()).ceil() as i64 + period;
    let max_row = (roi.r_y / spec.row_unit()).ceil() as i64 + 2;
    let mut out = Vec::new();
    for row in -max_row..=max_row {
        for col in -max_col..=max_col {
            let node = LatticeNode { col, row };
            if spec.in_iteration(node, k) {
                let p = spec.node_point(node);
                if roi.contains(p.x, p.y) {
                    out.push(node);
                }
            }
        }
    }
    out
}

/// Targets of iteration `k`: the lattice `L_k` clipped to the ROI.
pub fn iteration_lattice(k: i64, spec: &LatticeSpec, roi: &Roi) -> Vec<GroundPoint> {
    iteration_nodes(k, spec, roi)
        .into_iter()
        .map(|n| spec.node_point(n))
        .collect()
}

/// Nodes of `L_0` that fall inside the ROI after some shift `k c_x / K`,
/// `0 <= k < K`, in labeling order. Position in this list is the beam label.
pub fn eventually_active_nodes(spec: &LatticeSpec, roi: &Roi) -> Vec<LatticeNode> {
    let mut nodes: Vec<LatticeNode> = (0..spec.cycle_len as i64)
        .flat_map(|k| {
            iteration_nodes(k, spec, roi)
                .into_iter()
                .map(move |n| LatticeNode {
                    col: n.col + 2 * k,
                    row: n.row,
                })
        })
        .collect();
    nodes.sort_by(LatticeNode::label_cmp);
    nodes.dedup();
    nodes
}

pub fn eventually_active_points(spec: &LatticeSpec, roi: &Roi) -> Vec<GroundPoint> {
    eventually_active_nodes(spec, roi)
        .into_iter()
        .map(|n| spec.node_point(n))
        .collect()
}

/// Phase-only precoder on `rf_chain` with its maximum towards `point`.
pub fn beam_precoder(
    point: &GroundPoint,
    h_sat: f64,
    geometry: &ArrayGeometry,
    rf_chain: usize,
) -> Result<Precoder> {
    Precoder::pointing(geometry, &direction_to_point(point, h_sat), rf_chain)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBeam {
    /// Position of the beam's `L_0` node in the eventual-activity ordering;
    /// this is the beam ID during cycle 0.
    pub label: usize,
    pub node: LatticeNode,
    /// Target on the ground, satellite frame.
    pub point: GroundPoint,
    /// Unit direction from the satellite to `point`.
    pub direction: [f64; 3],
    pub precoder: Precoder,
}

/// The `K` iterations of the dynamic codebook with their beam labels.
#[derive(Debug, Clone)]
pub struct CodebookCycle {
    /// Beams of each iteration, ordered by label; beam `i` uses RF chain `i`.
    pub iterations: Vec<Vec<LabeledBeam>>,
    pub lattice: LatticeSpec,
    /// Eventually-active `L_0` nodes, indexed by label.
    pub labels: Vec<LatticeNode>,
}

impl CodebookCycle {
    /// Number of distinct beam IDs (`N_b`).
    pub fn n_ids(&self) -> usize {
        self.labels.len()
    }

    /// Split a global iteration counter into `(iteration within cycle, cycle)`.
    pub fn split_iteration(&self, n: i64) -> (usize, i64) {
        let k = self.lattice.cycle_len as i64;
        (n.rem_euclid(k) as usize, n.div_euclid(k))
    }

    /// Global iteration counter active at time `t` (s, may be negative).
    pub fn iteration_at(&self, t: f64) -> i64 {
        (t / self.lattice.t_c + 1e-9).floor() as i64
    }

    /// Beam ID of `label` during `cycle`: each completed cycle raises every
    /// label's ID by one, modulo `N_b`.
    pub fn beam_id(&self, label: usize, cycle: i64) -> usize {
        (label as i64 + cycle).rem_euclid(self.n_ids() as i64) as usize
    }

    /// `(beam ID, beam)` pairs active during global iteration `n`.
    pub fn active(&self, n: i64) -> impl Iterator<Item = (usize, &LabeledBeam)> {
        let (k, cycle) = self.split_iteration(n);
        self.iterations[k]
            .iter()
            .map(move |b| (self.beam_id(b.label, cycle), b))
    }

    /// CSV table `iteration,beam_id,rf_chain,target_x_m,target_y_m` for cycle 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,beam_id,rf_chain,target_x_m,target_y_m\n");
        for (k, beams) in self.iterations.iter().enumerate() {
            for b in beams {
                let _ = writeln!(
                    out,
                    "{k},{},{},{},{}",
                    b.label, b.precoder.beam_rf, b.point.x, b.point.y
                );
            }
        }
        out
    }

    /// Per-beam phase table `iteration,beam_id,element_index,phase_radians`.
    pub fn phases_csv(&self) -> String {
        let mut out = String::from("iteration,beam_id,element_index,phase_radians\n");
        for (k, beams) in self.iterations.iter().enumerate() {
            for b in beams {
                for (n, phase) in b.precoder.phases() {
                    let _ = writeln!(out, "{k},{},{n},{phase}", b.label);
                }
            }
        }
        out
    }
}

/// Build the `K`-iteration dynamic codebook. Fails if any iteration needs
/// more beams than there are RF chains.
pub fn build_cycle(
    spec: &LatticeSpec,
    roi: &Roi,
    h_sat: f64,
    geometry: &ArrayGeometry,
) -> Result<CodebookCycle> {
    let labels = eventually_active_nodes(spec, roi);
    let mut iterations = Vec::with_capacity(spec.cycle_len);
    for k in 0..spec.cycle_len {
        let nodes = iteration_nodes(k as i64, spec, roi);
        if nodes.len() > geometry.n_rf() {
            return Err(Error::BeamOverflow {
                iteration: k,
                count: nodes.len(),
                n_rf: geometry.n_rf(),
            });
        }
        let mut labeled: Vec<(usize, LatticeNode)> = nodes
            .into_iter()
            .map(|n| {
                let origin = LatticeNode {
                    col: n.col + 2 * k as i64,
                    row: n.row,
                };
                let label = labels
                    .binary_search_by(|probe| probe.label_cmp(&origin))
                    .expect("iteration node missing from the eventual-activity set");
                (label, n)
            })
            .collect();
        labeled.sort_by_key(|(label, _)| *label);
        let beams = labeled
            .into_iter()
            .enumerate()
            .map(|(rf, (label, node))| {
                let point = spec.node_point(node);
                let direction = direction_to_point(&point, h_sat);
                Ok(LabeledBeam {
                    label,
                    node,
                    point,
                    direction,
                    precoder: Precoder::pointing(geometry, &direction, rf)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        iterations.push(beams);
    }
    Ok(CodebookCycle {
        iterations,
        lattice: *spec,
        labels,
    })
}

/// Largest per-iteration beam count over the cycle.
pub fn max_active_count(spec: &LatticeSpec, roi: &Roi) -> (usize, usize) {
    (0..spec.cycle_len)
        .map(|k| (k, iteration_nodes(k as i64, spec, roi).len()))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, 0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticBeam {
    pub id: usize,
    pub point: GroundPoint,
    pub direction: [f64; 3],
    pub precoder: Precoder,
}

/// Rectangular grid-of-beams baseline.
#[derive(Debug, Clone)]
pub struct DftCodebook {
    pub beams: Vec<StaticBeam>,
    /// Target spacing `(s_x, s_y)` in metres.
    pub spacing: (f64, f64),
    /// Distinct target columns and rows.
    pub shape: (usize, usize),
}

fn grid_targets(roi: &Roi, s_x: f64, s_y: f64, offset: (f64, f64)) -> Vec<GroundPoint> {
    let nx = (roi.r_x / s_x).ceil() as i64 + 1;
    let ny = (roi.r_y / s_y).ceil() as i64 + 1;
    let mut out = Vec::new();
    for j in -ny..=ny {
        for i in -nx..=nx {
            let x = (i as f64 + offset.0) * s_x;
            let y = (j as f64 + offset.1) * s_y;
            if roi.contains(x, y) {
                out.push(GroundPoint::satellite(x, y));
            }
        }
    }
    out
}

/// Static rectangular codebook with exactly `n_beams` targets in the ROI.
///
/// The target grid keeps the sub-array's beam-width aspect ratio
/// (`s_y / s_x = N_x / N_y`) and starts from the equal-area spacing, where
/// each beam owns `|ROI| / n_beams` of ground. The scale closest to that
/// spacing (on a 0.1 % logarithmic ladder) that yields exactly `n_beams` points
/// wins; node-centred grids are preferred over half-offset ones.
pub fn dft_baseline(
    roi: &Roi,
    h_sat: f64,
    geometry: &ArrayGeometry,
    n_beams: usize,
) -> Result<DftCodebook> {
    if n_beams == 0 {
        return Err(Error::invalid("n_dft_beams", "must be >= 1"));
    }
    if n_beams > geometry.n_rf() {
        return Err(Error::invalid(
            "n_dft_beams",
            format!("{n_beams} beams exceed {} RF chains", geometry.n_rf()),
        ));
    }
    let (n_x, n_y) = geometry.subarray_dims();
    let aspect = n_x as f64 / n_y as f64;
    let s0 = (PI * roi.r_x * roi.r_y / (n_beams as f64 * aspect)).sqrt();
    const STEP: f64 = 1e-3;
    const MAX_STEPS: i64 = 2000;
    const OFFSETS: [(f64, f64); 4] = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)];

    for m in 0..=MAX_STEPS {
        for sign in [1.0, -1.0] {
            if m == 0 && sign < 0.0 {
                continue;
            }
            let s_x = s0 * (sign * m as f64 * STEP).exp();
            let s_y = aspect * s_x;
            for offset in OFFSETS {
                let mut targets = grid_targets(roi, s_x, s_y, offset);
                if targets.len() != n_beams {
                    continue;
                }
                sort_for_labeling(&mut targets);
                let shape = (distinct(targets.iter().map(|p| p.x)), distinct(targets.iter().map(|p| p.y)));
                let beams = targets
                    .into_iter()
                    .enumerate()
                    .map(|(id, point)| {
                        let direction = direction_to_point(&point, h_sat);
                        Ok(StaticBeam {
                            id,
                            point,
                            direction,
                            precoder: Precoder::pointing(geometry, &direction, id)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(DftCodebook {
                    beams,
                    spacing: (s_x, s_y),
                    shape,
                });
            }
        }
    }
    Err(Error::NoDftGrid { n_beams })
}

fn distinct(values: impl Iterator<Item = f64>) -> usize {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}
