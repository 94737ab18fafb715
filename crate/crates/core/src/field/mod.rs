//! Sampled fields on box grids in `ℝ^{2n}`.
//!
//! Samples are stored grid-major (first axis slowest) and component-minor.

mod fd;
mod generators;
mod io;

pub use fd::{apply_fd, fd_apply_with, fd_at_point, fd_weights, stencil_radius, term_stencils, TermStencil};
pub use generators::{
    bump, cutoff_chi, find_null_spinor, monogenic_plane_wave, Bump, Cutoff, PlaneWaveSpec,
};
pub use io::{read_grid, read_grid_from, write_grid, write_grid_to, GridHeader};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffop::Space;
use crate::error::{Error, Result};

pub const DEFAULT_MEMORY_CAP_MB: u64 = 2048;

/// Bytes per complex sample.
const SAMPLE_BYTES: u64 = 16;

/// Box grid in `ℝ^{2n}`. Equality compares geometry only, not the memory cap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    origin: Vec<f64>,
    extent: Vec<f64>,
    points_per_axis: usize,
    memory_cap_mb: u64,
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.origin == other.origin
            && self.extent == other.extent
            && self.points_per_axis == other.points_per_axis
    }
}

impl GridSpec {
    pub fn new(n: usize, origin: Vec<f64>, extent: Vec<f64>, points_per_axis: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if origin.len() != 2 * n || extent.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!(
                "origin/extent need {} entries, got {}/{}",
                2 * n,
                origin.len(),
                extent.len()
            )));
        }
        if points_per_axis < 4 {
            return Err(Error::InvalidArgument(format!(
                "points_per_axis = {points_per_axis} < 4"
            )));
        }
        if extent.iter().any(|e| !(e.is_finite() && *e > 0.0)) || origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::Geometry("extent must be positive and finite".into()));
        }
        let spec = Self {
            n,
            origin,
            extent,
            points_per_axis,
            memory_cap_mb: DEFAULT_MEMORY_CAP_MB,
        };
        spec.num_points_checked()?;
        Ok(spec)
    }

    /// Cube `center ± half_width` in every axis.
    pub fn cube(n: usize, center: &[f64], half_width: f64, points_per_axis: usize) -> Result<Self> {
        if center.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!("center needs {} entries", 2 * n)));
        }
        Self::new(
            n,
            center.iter().map(|c| c - half_width).collect(),
            vec![2.0 * half_width; 2 * n],
            points_per_axis,
        )
    }

    pub fn with_memory_cap_mb(mut self, cap: u64) -> Self {
        self.memory_cap_mb = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn memory_cap_mb(&self) -> u64 {
        self.memory_cap_mb
    }

    pub fn spacing(&self) -> Vec<f64> {
        self.extent
            .iter()
            .map(|e| e / (self.points_per_axis - 1) as f64)
            .collect()
    }

    fn num_points_checked(&self) -> Result<usize> {
        (self.points_per_axis as u64)
            .checked_pow(self.dim() as u32)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or(Error::MemoryCap {
                need_mb: u64::MAX,
                cap_mb: self.memory_cap_mb,
            })
    }

    pub fn num_points(&self) -> usize {
        self.num_points_checked().expect("validated at construction")
    }

    /// Refuse allocations above the cap rather than swap.
    pub fn check_memory(&self, value_dim: usize) -> Result<()> {
        let bytes = (self.num_points() as u64)
            .saturating_mul(value_dim as u64)
            .saturating_mul(SAMPLE_BYTES);
        let need_mb = bytes.div_ceil(1 << 20);
        if need_mb > self.memory_cap_mb {
            return Err(Error::MemoryCap {
                need_mb,
                cap_mb: self.memory_cap_mb,
            });
        }
        Ok(())
    }

    pub fn strides(&self) -> Vec<usize> {
        let d = self.dim();
        let mut s = vec![1; d];
        for k in (0..d - 1).rev() {
            s[k] = s[k + 1] * self.points_per_axis;
        }
        s
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let p = self.points_per_axis;
        let mut out = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            out[k] = idx % p;
            idx /= p;
        }
        out
    }

    pub fn linear_index(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &i| acc * self.points_per_axis + i)
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(idx)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.origin[k] + i as f64 * h[k])
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.origin.iter().zip(&self.extent))
            .all(|(v, (o, e))| *v >= o - 1e-12 && *v <= o + e + 1e-12)
    }

    /// True if the closed ball fits in the box.
    pub fn contains_ball(&self, center: &[f64], radius: f64) -> bool {
        center.len() == self.dim()
            && center
                .iter()
                .zip(self.origin.iter().zip(&self.extent))
                .all(|(c, (o, e))| c - radius >= o - 1e-12 && c + radius <= o + e + 1e-12)
    }
}

/// What a field takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueSpace {
    Scalar,
    Spinor(Space),
}

impl ValueSpace {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            ValueSpace::Scalar => 1,
            ValueSpace::Spinor(s) => s.dim(n),
        }
    }
}

/// Anything that yields values at the nodes of a grid, stored or computed on demand.
pub trait GridSource: Sync {
    fn spec(&self) -> &GridSpec;
    fn value_space(&self) -> ValueSpace;
    fn node_value(&self, idx: usize, out: &mut [Complex64]);
    /// True when `point_value` is exact rather than interpolated.
    fn exact_points(&self) -> bool {
        false
    }
    /// Value at an arbitrary point of the box; multilinear between nodes unless overridden.
    fn point_value(&self, x: &[f64], out: &mut [Complex64]) {
        let spec = self.spec();
        let h = spec.spacing();
        let p = spec.points_per_axis();
        let d = spec.dim();
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for k in 0..d {
            let t = ((x[k] - spec.origin()[k]) / h[k]).clamp(0.0, (p - 1) as f64);
            let i = (t.floor() as usize).min(p - 2);
            base[k] = i;
            frac[k] = t - i as f64;
        }
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        let mut tmp = vec![Complex64::new(0.0, 0.0); out.len()];
        let mut corner = vec![0usize; d];
        for mask in 0..(1usize << d) {
            let mut w = 1.0;
            for k in 0..d {
                let up = (mask >> k) & 1 == 1;
                corner[k] = base[k] + up as usize;
                w *= if up { frac[k] } else { 1.0 - frac[k] };
            }
            if w == 0.0 {
                continue;
            }
            self.node_value(spec.linear_index(&corner), &mut tmp);
            for (o, t) in out.iter_mut().zip(&tmp) {
                *o += t * w;
            }
        }
    }
}

/// A grid whose values come from a closure, never stored.
pub struct AnalyticGrid<F> {
    spec: GridSpec,
    value_space: ValueSpace,
    f: F,
}

impl<F> AnalyticGrid<F>
where
    F: Fn(&[f64], &mut [Complex64]) + Sync,
{
    pub fn new(spec: GridSpec, value_space: ValueSpace, f: F) -> Self {
        Self { spec, value_space, f }
    }

    /// Store every sample.
    pub fn materialize(&self) -> Result<GridFunction> {
        GridFunction::from_fn(self.spec.clone(), self.value_space, &self.f)
    }
}

impl<F> GridSource for AnalyticGrid<F>
where
    F: Fn(&[f64], &mut [Complex64]) + Sync,
{
    fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn value_space(&self) -> ValueSpace {
        self.value_space
    }

    fn node_value(&self, idx: usize, out: &mut [Complex64]) {
        (self.f)(&self.spec.point(idx), out)
    }

    fn point_value(&self, x: &[f64], out: &mut [Complex64]) {
        (self.f)(x, out)
    }

    fn exact_points(&self) -> bool {
        true
    }
}

impl GridSource for GridFunction {
    fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn value_space(&self) -> ValueSpace {
        self.value_space
    }

    fn node_value(&self, idx: usize, out: &mut [Complex64]) {
        out.copy_from_slice(self.value(idx));
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    value_space: ValueSpace,
    samples: Vec<Complex64>,
    /// Nodes within this many steps of the box edge carry no valid data.
    valid_margin: usize,
}

impl GridFunction {
    pub fn from_samples(
        spec: GridSpec,
        value_space: ValueSpace,
        samples: Vec<Complex64>,
        valid_margin: usize,
    ) -> Result<Self> {
        let vd = value_space.dim(spec.n());
        if samples.len() != spec.num_points() * vd {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for {} points × {vd} components",
                samples.len(),
                spec.num_points()
            )));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Format("non-finite sample".into()));
        }
        Ok(Self {
            spec,
            value_space,
            samples,
            valid_margin,
        })
    }

    /// Sample `f` at every node, in parallel.
    pub fn from_fn<F>(spec: GridSpec, value_space: ValueSpace, f: F) -> Result<Self>
    where
        F: Fn(&[f64], &mut [Complex64]) + Sync,
    {
        let vd = value_space.dim(spec.n());
        spec.check_memory(vd)?;
        let mut samples = vec![Complex64::new(0.0, 0.0); spec.num_points() * vd];
        samples
            .par_chunks_mut(vd)
            .enumerate()
            .for_each(|(i, out)| f(&spec.point(i), out));
        Self::from_samples(spec, value_space, samples, 0)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn value_space(&self) -> ValueSpace {
        self.value_space
    }

    pub fn value_dim(&self) -> usize {
        self.value_space.dim(self.spec.n())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn valid_margin(&self) -> usize {
        self.valid_margin
    }

    pub fn value(&self, idx: usize) -> &[Complex64] {
        let vd = self.value_dim();
        &self.samples[idx * vd..(idx + 1) * vd]
    }

    pub fn is_valid(&self, idx: usize) -> bool {
        let p = self.spec.points_per_axis();
        let m = self.valid_margin;
        self.spec.multi_index(idx).iter().all(|&i| i >= m && i + m < p)
    }

    /// Largest Euclidean norm of a value vector over valid nodes.
    pub fn max_norm(&self) -> f64 {
        (0..self.spec.num_points())
            .into_par_iter()
            .filter(|&i| self.is_valid(i))
            .map(|i| self.value(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .reduce(|| 0.0, f64::max)
    }

    /// Largest difference to `other` over nodes valid in both.
    pub fn max_diff(&self, other: &GridFunction) -> Result<f64> {
        if self.spec != other.spec || self.value_dim() != other.value_dim() {
            return Err(Error::ShapeMismatch("grids differ".into()));
        }
        Ok((0..self.spec.num_points())
            .into_par_iter()
            .filter(|&i| self.is_valid(i) && other.is_valid(i))
            .map(|i| {
                self.value(i)
                    .iter()
                    .zip(other.value(i))
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .reduce(|| 0.0, f64::max))
    }
}
