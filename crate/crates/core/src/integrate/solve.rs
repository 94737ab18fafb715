use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{deterministic_sum, vec_norm};
use crate::clifford::Parity;
use crate::diffop::{build_complex, MatrixDiffOp, Space};
use crate::error::{Error, Result};
use crate::field::{fd_at_point, term_stencils, GridSource, GridSpec, ValueSpace};
use crate::kernels::{loglog_slope, Kernels};

/// Nonzero nodes of a source field, kept as a flat list.
#[derive(Clone, Debug)]
pub struct SupportSet {
    spec: GridSpec,
    value_dim: usize,
    coords: Vec<f64>,
    values: Vec<Complex64>,
}

impl SupportSet {
    pub fn from_source(src: &dyn GridSource) -> Result<Self> {
        let spec = src.spec().clone();
        let vd = src.value_space().dim(spec.n());
        let nodes: Vec<(usize, Vec<Complex64>)> = (0..spec.num_points())
            .into_par_iter()
            .filter_map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); vd];
                src.node_value(i, &mut v);
                v.iter().any(|z| *z != Complex64::new(0.0, 0.0)).then_some((i, v))
            })
            .collect();
        let bytes = nodes.len() as u64 * (spec.dim() as u64 * 8 + vd as u64 * 16);
        let need_mb = bytes.div_ceil(1 << 20);
        if need_mb > spec.memory_cap_mb() {
            return Err(Error::MemoryCap {
                need_mb,
                cap_mb: spec.memory_cap_mb(),
            });
        }
        let mut coords = Vec::with_capacity(nodes.len() * spec.dim());
        let mut values = Vec::with_capacity(nodes.len() * vd);
        for (i, v) in nodes {
            coords.extend(spec.point(i));
            values.extend(v);
        }
        Ok(Self {
            spec,
            value_dim: vd,
            coords,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.value_dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }
}

/// `u(x) = h^{2n} Σ_y H(x − y) f(y)` over the support of `f`.
pub struct Convolver<'a> {
    kernels: &'a Kernels,
    support: &'a SupportSet,
    cell_volume: f64,
}

impl<'a> Convolver<'a> {
    pub fn new(kernels: &'a Kernels, support: &'a SupportSet) -> Result<Self> {
        let n = kernels.n();
        if support.spec.n() != n {
            return Err(Error::ShapeMismatch("kernel and grid disagree on n".into()));
        }
        if support.value_dim != 2 * kernels.dim_minus() {
            return Err(Error::ShapeMismatch(format!(
                "source has {} components, C² ⊗ S- has {}",
                support.value_dim,
                2 * kernels.dim_minus()
            )));
        }
        Ok(Self {
            kernels,
            support,
            cell_volume: support.spec.spacing().iter().product(),
        })
    }

    /// Distance from `x` to the nearest grid node, in units of the smallest spacing.
    pub fn node_distance(&self, x: &[f64]) -> f64 {
        let spec = &self.support.spec;
        let h = spec.spacing();
        let p = spec.points_per_axis() as f64;
        let d2: f64 = (0..spec.dim())
            .map(|k| {
                let t = ((x[k] - spec.origin()[k]) / h[k]).round().clamp(0.0, p - 1.0);
                let dx = x[k] - (spec.origin()[k] + t * h[k]);
                dx * dx
            })
            .sum();
        d2.sqrt() / h.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<Complex64>> {
        if x.len() != self.support.spec.dim() {
            return Err(Error::ShapeMismatch("evaluation point dimension".into()));
        }
        if self.node_distance(x) < 0.5 {
            return Err(Error::Geometry(
                "evaluation point within half a spacing of a source node; use cell centres".into(),
            ));
        }
        let k = self.kernels;
        let n = k.n();
        let dim = 2 * n;
        let vd = self.support.value_dim;
        let scale0 = k.constants().c_bm * self.cell_volume;
        let coords = &self.support.coords;
        let values = &self.support.values;
        Ok(deterministic_sum(self.support.len(), k.dim_plus(), |i, acc| {
            let y = &coords[i * dim..(i + 1) * dim];
            let mut z = [0.0f64; 32];
            let mut r2 = 0.0;
            for t in 0..dim {
                z[t] = x[t] - y[t];
                r2 += z[t] * z[t];
            }
            let scale = scale0 / r2.powi(n as i32);
            k.h_apply_raw(&z[..dim], scale, &values[i * vd..(i + 1) * vd], acc);
        }))
    }
}

/// The cell centre (node + h/2 in every axis) nearest to `x`.
pub fn nearest_cell_centre(spec: &GridSpec, x: &[f64]) -> Vec<f64> {
    let h = spec.spacing();
    (0..spec.dim())
        .map(|k| {
            let t = ((x[k] - spec.origin()[k]) / h[k] - 0.5).round();
            spec.origin()[k] + (t + 0.5) * h[k]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatibilityReport {
    /// `max |D1_h f|` over checked nodes divided by the largest term `|M_α ∂_h^α f|`
    /// of the same sum: how much of `D1 f` survives cancellation.
    pub ratio: f64,
    pub threshold: f64,
    /// Difference step and accuracy actually used.
    pub step: f64,
    pub order: usize,
    pub nodes_checked: usize,
    pub passed: bool,
}

/// Central-difference `D1 f` at every `stride`-th interior node, compared with
/// `threshold` (default `10 h²`, `h` the grid spacing).
///
/// Sources with exact point values may be differenced at the finer step `h / refine`
/// with `order`-accurate stencils; stored grids always use `h` and order 2.
pub fn check_compatibility(
    src: &dyn GridSource,
    stride: usize,
    threshold: Option<f64>,
    refine: usize,
    order: usize,
) -> Result<CompatibilityReport> {
    let spec = src.spec();
    let n = spec.n();
    let d1 = build_complex(n)?.d1;
    let vd = src.value_space().dim(n);
    if vd != d1.domain().dim(n) {
        return Err(Error::ShapeMismatch("compatibility needs a C² ⊗ S- field".into()));
    }
    let h = spec.spacing();
    let hmax = h.iter().cloned().fold(0.0, f64::max);
    let threshold = threshold.unwrap_or(10.0 * hmax * hmax);
    let exact = src.exact_points() && refine > 1;
    let (step, order) = if exact {
        (h.iter().map(|v| v / refine as f64).collect::<Vec<_>>(), order)
    } else {
        (h.clone(), 2)
    };
    let (terms, reach) = term_stencils(&d1, &step, order)?;
    let strides = spec.strides();
    let vout = d1.codomain().dim(n);
    let p = spec.points_per_axis();
    let lo = if exact { 0 } else { reach };
    if p <= 2 * lo {
        return Err(Error::MarginTooSmall { have: p / 2, need: reach });
    }
    let stride = stride.max(1);
    let per_axis: Vec<usize> = (lo..p - lo).step_by(stride).collect();
    let total = per_axis.len().pow(spec.dim() as u32);
    let (num, den) = (0..total)
        .into_par_iter()
        .map(|t| {
            let mut rest = t;
            let mut multi = vec![0usize; spec.dim()];
            for k in (0..spec.dim()).rev() {
                multi[k] = per_axis[rest % per_axis.len()];
                rest /= per_axis.len();
            }
            let base = spec.linear_index(&multi);
            let x = spec.point(base);
            let mut v = vec![Complex64::new(0.0, 0.0); vd];
            let mut total = vec![Complex64::new(0.0, 0.0); vout];
            let mut largest: f64 = 0.0;
            for (m, pts) in &terms {
                let mut acc = vec![Complex64::new(0.0, 0.0); vd];
                for (off, w) in pts {
                    if exact {
                        let y: Vec<f64> = x.iter().zip(off).zip(&step).map(|((a, &o), s)| a + o as f64 * s).collect();
                        src.point_value(&y, &mut v);
                    } else {
                        let j = off.iter().zip(&strides).fold(base as isize, |a, (o, s)| a + o * *s as isize);
                        src.node_value(j as usize, &mut v);
                    }
                    for (a, z) in acc.iter_mut().zip(&v) {
                        *a += z * *w;
                    }
                }
                let term = m.apply(&acc);
                largest = largest.max(vec_norm(&term));
                for (t, z) in total.iter_mut().zip(&term) {
                    *t += z;
                }
            }
            (vec_norm(&total), largest)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let ratio = if den > 0.0 { num / den } else { 0.0 };
    Ok(CompatibilityReport {
        ratio,
        threshold,
        step: step.iter().cloned().fold(0.0, f64::max),
        order,
        nodes_checked: total,
        passed: ratio <= threshold,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOptions {
    pub fd_order: usize,
    /// `None` means `10 h²`.
    pub compat_threshold: Option<f64>,
    pub compat_stride: usize,
    pub compat_refine: usize,
    pub compat_order: usize,
    /// Far-field radii as multiples of the box half-width, measured from the box centre.
    pub far_radii: Vec<f64>,
    pub far_directions: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            fd_order: 4,
            compat_threshold: None,
            compat_stride: 3,
            compat_refine: 8,
            compat_order: 4,
            far_radii: vec![4.0, 6.0, 9.0, 13.5],
            far_directions: 4,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub points_per_axis: usize,
    pub spacing: f64,
    pub support_nodes: usize,
    pub compatibility: CompatibilityReport,
    /// Cell centres actually used.
    pub points: Vec<Vec<f64>>,
    pub u: Vec<Vec<Complex64>>,
    /// `max |D0_h u − f| / max |f|` over the evaluation points.
    pub residual: f64,
    pub far_radii: Vec<f64>,
    pub far_max: Vec<f64>,
    pub far_field_max: f64,
    pub decay_slope: f64,
    pub seed: u64,
}

/// Solve `D0 u = f` for compactly supported `f` by direct summation against `H`.
///
/// Evaluation points move to the nearest cell centre. The residual uses central
/// differences of step `h`.
pub fn solve_d0(
    src: &dyn GridSource,
    kernels: &Kernels,
    eval_points: &[Vec<f64>],
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let spec = src.spec();
    let n = spec.n();
    let expected = ValueSpace::Spinor(Space::new(2, Parity::minus(n)));
    if src.value_space().dim(n) != expected.dim(n) {
        return Err(Error::ShapeMismatch("solve_d0 needs a C² ⊗ S- field".into()));
    }
    let compatibility = check_compatibility(src, opts.compat_stride, opts.compat_threshold, opts.compat_refine, opts.compat_order)?;
    if !compatibility.passed {
        return Err(Error::Incompatible {
            ratio: compatibility.ratio,
            threshold: compatibility.threshold,
        });
    }
    let support = SupportSet::from_source(src)?;
    let conv = Convolver::new(kernels, &support)?;
    let h = spec.spacing();
    let d0: MatrixDiffOp = build_complex(n)?.d0;

    let points: Vec<Vec<f64>> = eval_points.iter().map(|x| nearest_cell_centre(spec, x)).collect();
    let mut u = Vec::with_capacity(points.len());
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    let vd = expected.dim(n);
    for x in &points {
        u.push(conv.eval(x)?);
        let d0u = fd_at_point(&d0, x, &h, opts.fd_order, |y| conv.eval(y))?;
        let mut fx = vec![Complex64::new(0.0, 0.0); vd];
        src.point_value(x, &mut fx);
        let diff: Vec<Complex64> = d0u.iter().zip(&fx).map(|(a, b)| a - b).collect();
        num = num.max(vec_norm(&diff));
        den = den.max(vec_norm(&fx));
    }
    let residual = if den > 0.0 { num / den } else { num };

    let centre: Vec<f64> = spec.origin().iter().zip(spec.extent()).map(|(o, e)| o + e / 2.0).collect();
    let half = spec.extent().iter().cloned().fold(0.0, f64::max) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dirs: Vec<Vec<f64>> = (0..opts.far_directions)
        .map(|_| {
            let g: Vec<f64> = (0..spec.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            g.into_iter().map(|v| v / r).collect()
        })
        .collect();
    let far_radii: Vec<f64> = opts.far_radii.iter().map(|r| r * half).collect();
    let mut far_max = Vec::with_capacity(far_radii.len());
    for &r in &far_radii {
        let mut m: f64 = 0.0;
        for d in &dirs {
            let x: Vec<f64> = centre.iter().zip(d).map(|(c, di)| c + r * di).collect();
            m = m.max(vec_norm(&conv.eval(&x)?));
        }
        far_max.push(m);
    }
    let decay_slope = if far_radii.len() >= 2 && far_max.iter().all(|v| *v > 0.0) {
        loglog_slope(&far_radii, &far_max)
    } else {
        f64::NAN
    };
    Ok(SolveReport {
        n,
        points_per_axis: spec.points_per_axis(),
        spacing: h.iter().cloned().fold(0.0, f64::max),
        support_nodes: support.len(),
        compatibility,
        points,
        u,
        residual,
        far_field_max: far_max.last().copied().unwrap_or(0.0),
        far_radii,
        far_max,
        decay_slope,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AnalyticGrid, Bump};

    fn space() -> ValueSpace {
        ValueSpace::Spinor(Space::new(2, Parity::minus(3)))
    }

    fn spinor() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]
    }

    fn opts() -> SolveOptions {
        SolveOptions {
            far_radii: vec![4.0, 8.0],
            far_directions: 2,
            ..SolveOptions::default()
        }
    }

    #[test]
    fn compatibility_separates_exact_from_arbitrary_data() {
        let k = Kernels::new(3).unwrap();
        let b = Bump::new(vec![0.0; 6], 1.0).unwrap();
        let s = spinor();
        let spec = GridSpec::cube(3, &[0.0; 6], 1.0, 8).unwrap();
        let good = AnalyticGrid::new(spec.clone(), space(), |x: &[f64], out: &mut [Complex64]| {
            out.copy_from_slice(&b.d0_spinor(k.clifford(), &s, x));
        });
        let bad = AnalyticGrid::new(spec, space(), |x: &[f64], out: &mut [Complex64]| {
            let v = b.value(x);
            out[0] = s[0] * v;
            out[1] = s[1] * v;
            out[2] = Complex64::new(0.0, 0.0);
            out[3] = Complex64::new(0.0, 0.0);
        });
        let g = check_compatibility(&good, 2, None, 32, 4).unwrap();
        let w = check_compatibility(&bad, 2, None, 32, 4).unwrap();
        assert!(g.passed, "{g:?}");
        assert!(!w.passed, "{w:?}");
        assert!(w.ratio > 10.0 * g.ratio);
    }

    #[test]
    fn zero_source_gives_zero() {
        let k = Kernels::new(3).unwrap();
        let spec = GridSpec::cube(3, &[0.0; 6], 1.0, 6).unwrap();
        let f = AnalyticGrid::new(spec, space(), |_: &[f64], out: &mut [Complex64]| out.fill(Complex64::new(0.0, 0.0)));
        let r = solve_d0(&f, &k, &[vec![0.1; 6]], &opts()).unwrap();
        assert_eq!(r.support_nodes, 0);
        assert!(r.u[0].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn solution_is_linear_in_the_source() {
        let k = Kernels::new(3).unwrap();
        let b = Bump::new(vec![0.0; 6], 1.0).unwrap();
        let s = spinor();
        let spec = GridSpec::cube(3, &[0.0; 6], 1.0, 7).unwrap();
        let c = Complex64::new(-0.7, 1.3);
        let f1 = AnalyticGrid::new(spec.clone(), space(), |x: &[f64], out: &mut [Complex64]| {
            out.copy_from_slice(&b.d0_spinor(k.clifford(), &s, x));
        });
        let f2 = AnalyticGrid::new(spec, space(), |x: &[f64], out: &mut [Complex64]| {
            for (o, v) in out.iter_mut().zip(b.d0_spinor(k.clifford(), &s, x)) {
                *o = c * v;
            }
        });
        let pts = vec![vec![0.2, 0.0, -0.1, 0.1, 0.0, 0.0]];
        let o = SolveOptions {
            compat_threshold: Some(f64::INFINITY),
            ..opts()
        };
        let u1 = solve_d0(&f1, &k, &pts, &o).unwrap().u;
        let u2 = solve_d0(&f2, &k, &pts, &o).unwrap().u;
        for (a, b) in u1[0].iter().zip(&u2[0]) {
            assert!((c * a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn wrong_value_space_is_rejected() {
        let k = Kernels::new(3).unwrap();
        let spec = GridSpec::cube(3, &[0.0; 6], 1.0, 6).unwrap();
        let f = AnalyticGrid::new(spec, ValueSpace::Scalar, |_: &[f64], out: &mut [Complex64]| out.fill(Complex64::new(1.0, 0.0)));
        assert!(solve_d0(&f, &k, &[vec![0.0; 6]], &opts()).is_err());
    }
}
