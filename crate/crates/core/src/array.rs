//! Sub-arrayed planar arrays, steering vectors and analog beam gain.
//!
//! Element positions are stored in wavelength units, so the steering phase of
//! element `n` towards the unit direction `v` is `-2π <p_n, v>`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-9;

/// Element layout of an array plus the antenna to RF-chain wiring.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    positions: Vec<[f64; 3]>,
    rf_map: Vec<usize>,
    n_rf: usize,
    subarray_dims: (usize, usize),
    /// Element indices wired to each RF chain, in ascending order.
    members: Vec<Vec<usize>>,
}

impl ArrayGeometry {
    /// Build a geometry from explicit positions and wiring. Every RF chain
    /// must drive exactly `dims.0 * dims.1` elements.
    pub fn new(
        positions: Vec<[f64; 3]>,
        rf_map: Vec<usize>,
        n_rf: usize,
        subarray_dims: (usize, usize),
    ) -> Result<Self> {
        if positions.len() != rf_map.len() {
            return Err(Error::invalid(
                "rf_map",
                format!("has {} entries for {} elements", rf_map.len(), positions.len()),
            ));
        }
        if n_rf == 0 {
            return Err(Error::invalid("n_rf", "must be >= 1"));
        }
        let per_chain = subarray_dims.0 * subarray_dims.1;
        let mut members = vec![Vec::with_capacity(per_chain); n_rf];
        for (n, &rf) in rf_map.iter().enumerate() {
            if rf >= n_rf {
                return Err(Error::invalid(
                    "rf_map",
                    format!("element {n} wired to chain {rf} >= n_rf = {n_rf}"),
                ));
            }
            members[rf].push(n);
        }
        if let Some((rf, m)) = members.iter().enumerate().find(|(_, m)| m.len() != per_chain) {
            return Err(Error::invalid(
                "rf_map",
                format!("chain {rf} drives {} elements, expected {per_chain}", m.len()),
            ));
        }
        Ok(Self {
            positions,
            rf_map,
            n_rf,
            subarray_dims,
            members,
        })
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn rf_map(&self) -> &[usize] {
        &self.rf_map
    }

    pub fn n_rf(&self) -> usize {
        self.n_rf
    }

    pub fn subarray_dims(&self) -> (usize, usize) {
        self.subarray_dims
    }

    /// Elements per RF chain.
    pub fn subarray_len(&self) -> usize {
        self.subarray_dims.0 * self.subarray_dims.1
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Element indices driven by RF chain `rf`.
    pub fn chain_members(&self, rf: usize) -> &[usize] {
        &self.members[rf]
    }
}

/// Positions of an `n_x × n_y` uniform planar array in the `z = 0` plane,
/// centred on the origin. Element `(i, j)` is row `i * n_y + j`.
pub fn upa_positions(n_x: usize, n_y: usize, spacing: f64) -> Result<Vec<[f64; 3]>> {
    if n_x == 0 || n_y == 0 {
        return Err(Error::invalid("upa dims", "element counts must be >= 1"));
    }
    if !(spacing > 0.0) {
        return Err(Error::invalid("element_spacing", "must be > 0"));
    }
    let cx = (n_x - 1) as f64 * spacing / 2.0;
    let cy = (n_y - 1) as f64 * spacing / 2.0;
    let mut out = Vec::with_capacity(n_x * n_y);
    for i in 0..n_x {
        for j in 0..n_y {
            out.push([i as f64 * spacing - cx, j as f64 * spacing - cy, 0.0]);
        }
    }
    Ok(out)
}

/// `n_rf` identical sub-arrays laid out side by side along `x`, separated by
/// a gap of one sub-array aperture.
pub fn satellite_array(
    n_rf: usize,
    subarray_dims: (usize, usize),
    spacing: f64,
) -> Result<ArrayGeometry> {
    if n_rf == 0 {
        return Err(Error::invalid("N_RF", "must be >= 1"));
    }
    let sub = upa_positions(subarray_dims.0, subarray_dims.1, spacing)?;
    let pitch = 2.0 * subarray_dims.0 as f64 * spacing;
    let mut positions = Vec::with_capacity(n_rf * sub.len());
    let mut rf_map = Vec::with_capacity(n_rf * sub.len());
    for rf in 0..n_rf {
        let dx = rf as f64 * pitch;
        positions.extend(sub.iter().map(|p| [p[0] + dx, p[1], p[2]]));
        rf_map.extend(std::iter::repeat_n(rf, sub.len()));
    }
    ArrayGeometry::new(positions, rf_map, n_rf, subarray_dims)
}

fn check_unit(v: &[f64; 3]) -> Result<()> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if (n - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::invalid("direction", format!("norm {n} is not 1")));
    }
    Ok(())
}

#[inline]
fn steering_entry(p: &[f64; 3], v: &[f64; 3]) -> Complex64 {
    let phase = -2.0 * PI * (p[0] * v[0] + p[1] * v[1] + p[2] * v[2]);
    Complex64::from_polar(1.0, phase)
}

/// Array response towards the unit direction `v`.
pub fn steering_vector(geometry: &ArrayGeometry, v: &[f64; 3]) -> Result<Vec<Complex64>> {
    check_unit(v)?;
    Ok(geometry
        .positions
        .iter()
        .map(|p| steering_entry(p, v))
        .collect())
}

/// One analog beam: a phase-only weight column over all satellite elements.
/// Only the elements of `beam_rf` are non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    pub coeffs: Vec<Complex64>,
    pub beam_rf: usize,
}

impl Precoder {
    /// Matched phase-only weights on RF chain `rf` pointing at unit direction
    /// `v`: `a_n(v) / sqrt(N_sub)` on the chain's elements, zero elsewhere.
    pub fn pointing(geometry: &ArrayGeometry, v: &[f64; 3], rf: usize) -> Result<Self> {
        check_unit(v)?;
        if rf >= geometry.n_rf {
            return Err(Error::invalid(
                "rf_chain",
                format!("{rf} is out of range for {} RF chains", geometry.n_rf),
            ));
        }
        let norm = 1.0 / (geometry.subarray_len() as f64).sqrt();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); geometry.len()];
        for &n in geometry.chain_members(rf) {
            coeffs[n] = steering_entry(&geometry.positions[n], v) * norm;
        }
        Ok(Self { coeffs, beam_rf: rf })
    }

    /// Phases of the non-zero entries as `(element_index, radians)`.
    pub fn phases(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, c)| (n, c.arg()))
    }
}

/// Linear power gain `|a(v)^H f|^2` of beam `f` towards unit direction `v`.
/// Lies in `[0, N_sub]`.
pub fn beam_gain(geometry: &ArrayGeometry, f: &Precoder, v: &[f64; 3]) -> f64 {
    let sum: Complex64 = geometry
        .chain_members(f.beam_rf)
        .iter()
        .map(|&n| steering_entry(&geometry.positions[n], v).conj() * f.coeffs[n])
        .sum();
    sum.norm_sqr()
}

/// Closed-form gain of a matched beam on one uniform rectangular sub-array.
///
/// The array factor of a matched UPA beam separates into two Dirichlet
/// kernels, one per axis, so the gain depends only on the difference of the
/// pointing and observation direction cosines. Agrees with [`beam_gain`] for
/// any geometry built by [`satellite_array`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubarrayPattern {
    pub n_x: usize,
    pub n_y: usize,
    pub spacing: f64,
}

impl SubarrayPattern {
    pub fn new(subarray_dims: (usize, usize), spacing: f64) -> Self {
        Self {
            n_x: subarray_dims.0,
            n_y: subarray_dims.1,
            spacing,
        }
    }

    /// Gain towards `v` of a beam pointing at `target`, both unit vectors.
    #[inline]
    pub fn gain(&self, target: &[f64; 3], v: &[f64; 3]) -> f64 {
        let fx = dirichlet_sq(self.n_x, PI * self.spacing * (v[0] - target[0]));
        let fy = dirichlet_sq(self.n_y, PI * self.spacing * (v[1] - target[1]));
        fx * fy / (self.n_x * self.n_y) as f64
    }

    pub fn peak_gain(&self) -> f64 {
        (self.n_x * self.n_y) as f64
    }
}

/// `|sum_{i<n} e^{j 2 i phi}|^2 = (sin(n phi) / sin(phi))^2`.
#[inline]
fn dirichlet_sq(n: usize, phi: f64) -> f64 {
    let s = phi.sin();
    if s.abs() < 1e-12 {
        return (n * n) as f64;
    }
    let r = (n as f64 * phi).sin() / s;
    r * r
}

/// Power in dB; `-inf` for zero.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit(x: f64, y: f64) -> [f64; 3] {
        let z2 = 1.0 - x * x - y * y;
        [x, y, -z2.max(0.0).sqrt()]
    }

    #[test]
    fn upa_layouts() {
        assert_eq!(upa_positions(1, 1, 0.5).unwrap(), vec![[0.0, 0.0, 0.0]]);
        assert_eq!(
            upa_positions(2, 1, 0.5).unwrap(),
            vec![[-0.25, 0.0, 0.0], [0.25, 0.0, 0.0]]
        );
        assert_eq!(upa_positions(12, 24, 0.5).unwrap().len(), 288);
        assert!(upa_positions(0, 3, 0.5).is_err());
        assert!(upa_positions(3, 3, 0.0).is_err());
    }

    #[test]
    fn satellite_array_wiring() {
        let g = satellite_array(13, (12, 24), 0.5).unwrap();
        assert_eq!(g.len(), 3744);
        for rf in 0..13 {
            assert_eq!(g.rf_map().iter().filter(|&&r| r == rf).count(), 288);
        }
        let one = satellite_array(1, (1, 1), 0.5).unwrap();
        assert_eq!(one.rf_map(), &[0]);
        let small = satellite_array(2, (2, 2), 0.5).unwrap();
        assert_eq!(small.len(), 8);
        assert_eq!(small.chain_members(0).len(), 4);
        assert_eq!(small.chain_members(1).len(), 4);
        assert!(satellite_array(0, (2, 2), 0.5).is_err());
    }

    #[test]
    fn geometry_rejects_bad_wiring() {
        let pos = vec![[0.0; 3]; 3];
        assert!(ArrayGeometry::new(pos.clone(), vec![0, 1, 1], 2, (1, 1)).is_err());
        assert!(ArrayGeometry::new(pos, vec![0, 1, 2], 2, (1, 1)).is_err());
    }

    #[test]
    fn steering_examples() {
        let g = satellite_array(2, (3, 4), 0.5).unwrap();
        let a = steering_vector(&g, &[0.0, 0.0, -1.0]).unwrap();
        assert!(a.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-12));

        let pair = ArrayGeometry::new(vec![[0.0; 3], [0.5, 0.0, 0.0]], vec![0, 1], 2, (1, 1))
            .unwrap();
        let a = steering_vector(&pair, &[1.0, 0.0, 0.0]).unwrap();
        let rel = a[1] / a[0];
        assert_relative_eq!(rel.re, -1.0, epsilon = 1e-12);
        assert_relative_eq!(rel.im, 0.0, epsilon = 1e-12);

        assert!(steering_vector(&g, &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn pointed_beam_reaches_subarray_size() {
        let g = satellite_array(13, (12, 24), 0.5).unwrap();
        let v = unit(0.2, -0.1);
        let f = Precoder::pointing(&g, &v, 5).unwrap();
        assert_relative_eq!(beam_gain(&g, &f, &v), 288.0, max_relative = 1e-9);
        assert!((to_db(288.0) - 24.59).abs() < 0.005);
        for (n, c) in f.coeffs.iter().enumerate() {
            if g.rf_map()[n] == 5 {
                assert_relative_eq!(c.norm(), 1.0 / 288f64.sqrt(), epsilon = 1e-15);
            } else {
                assert_eq!(*c, Complex64::new(0.0, 0.0));
            }
        }
        assert!(Precoder::pointing(&g, &v, 13).is_err());
    }

    #[test]
    fn ula_null() {
        let g = satellite_array(1, (4, 1), 0.5).unwrap();
        let f = Precoder::pointing(&g, &[0.0, 0.0, -1.0], 0).unwrap();
        let null = [0.5, 0.0, -(0.75f64.sqrt())];
        assert!(beam_gain(&g, &f, &null) < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gain_properties(tx in -0.5f64..0.5, ty in -0.5f64..0.5,
                           vx in -0.6f64..0.6, vy in -0.6f64..0.6,
                           rot in 0.0f64..std::f64::consts::TAU) {
            let g = satellite_array(3, (12, 24), 0.5).unwrap();
            let target = unit(tx, ty);
            let v = unit(vx, vy);
            let f = Precoder::pointing(&g, &target, 1).unwrap();

            let a = steering_vector(&g, &v).unwrap();
            prop_assert!(a.iter().all(|c| (c.norm() - 1.0).abs() < 1e-12));
            let norm2: f64 = a.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((norm2 - g.len() as f64).abs() < 1e-6);

            let gain = beam_gain(&g, &f, &v);
            prop_assert!(gain <= 288.0 * (1.0 + 1e-12));
            prop_assert!((beam_gain(&g, &f, &target) - 288.0).abs() < 288.0 * 1e-9);

            let rotated = Precoder {
                coeffs: f.coeffs.iter().map(|c| c * Complex64::from_polar(1.0, rot)).collect(),
                beam_rf: f.beam_rf,
            };
            prop_assert!((beam_gain(&g, &rotated, &v) - gain).abs() < 1e-9 * 288.0);

            let closed = SubarrayPattern::new((12, 24), 0.5).gain(&target, &v);
            prop_assert!((closed - gain).abs() < 1e-9 * 288.0, "{} vs {}", closed, gain);
        }
    }
}
