use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::solve::{check_compatibility, nearest_cell_centre, CompatibilityReport, Convolver, SolveOptions, SupportSet};
use super::vec_norm;
use crate::clifford::Parity;
use crate::diffop::{build_complex, Space};
use crate::error::{Error, Result};
use crate::field::{fd_at_point, AnalyticGrid, Cutoff, GridSpec, ValueSpace};
use crate::kernels::Kernels;

/// Concentric balls `K ⊂ Ω` and the cutoff radii `r_K < inner < outer < R_Ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HartogsGeometry {
    pub center: Vec<f64>,
    pub k_radius: f64,
    pub inner: f64,
    pub outer: f64,
    pub omega_radius: f64,
}

impl HartogsGeometry {
    pub fn validate(&self) -> Result<()> {
        let ok = self.k_radius > 0.0
            && self.k_radius < self.inner
            && self.inner < self.outer
            && self.outer < self.omega_radius
            && self.omega_radius.is_finite();
        if !ok {
            return Err(Error::Geometry(format!(
                "need 0 < r_K ({}) < inner ({}) < outer ({}) < R_Ω ({}) so that χ ≡ 1 near K",
                self.k_radius, self.inner, self.outer, self.omega_radius
            )));
        }
        Ok(())
    }

    fn radius_of(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HartogsReport {
    pub geometry: HartogsGeometry,
    pub points_per_axis: usize,
    pub support_nodes: usize,
    pub input_monogenic_ratio: f64,
    pub compatibility: CompatibilityReport,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<Complex64>>,
    /// `max |D0_h U| · (outer − inner) / max |U|` at the evaluation points.
    pub monogenic_residual: f64,
    /// Against the supplied ground truth, if any.
    pub max_relative_error: Option<f64>,
}

/// Pointwise ground truth.
pub type Sampler<'a> = dyn Fn(&[f64]) -> Vec<Complex64> + 'a;

const INPUT_MONOGENIC_THRESHOLD: f64 = 1e-5;

/// Extend `u`, monogenic on `Ω ∖ K`, across `K`: `U = (1 − χ) u − Ũ` with `D0 Ũ = −(D0 χ) u`.
pub fn hartogs_extend<U>(
    k: &Kernels,
    u: U,
    geom: &HartogsGeometry,
    points_per_axis: usize,
    eval_points: &[Vec<f64>],
    opts: &SolveOptions,
    truth: Option<&Sampler<'_>>,
) -> Result<HartogsReport>
where
    U: Fn(&[f64]) -> Vec<Complex64> + Sync,
{
    geom.validate()?;
    let n = k.n();
    if geom.center.len() != 2 * n {
        return Err(Error::ShapeMismatch("centre dimension".into()));
    }
    let complex = build_complex(n)?;
    let input_monogenic_ratio = monogenic_ratio(&complex.d0, &u, geom, opts.seed)?;
    if input_monogenic_ratio > INPUT_MONOGENIC_THRESHOLD {
        return Err(Error::NotMonogenic {
            ratio: input_monogenic_ratio,
            threshold: INPUT_MONOGENIC_THRESHOLD,
        });
    }

    let chi = Cutoff::new(geom.center.clone(), geom.inner, geom.outer)?;
    let cliff = k.clifford();
    let spec = GridSpec::cube(n, &geom.center, geom.outer, points_per_axis)?;
    let space = ValueSpace::Spinor(Space::new(2, Parity::minus(n)));
    let source = AnalyticGrid::new(spec.clone(), space, |y: &[f64], out: &mut [Complex64]| {
        let r = geom.radius_of(y);
        if r <= geom.inner || r >= geom.outer {
            out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
            return;
        }
        let g = chi.gradient(y);
        let uy = u(y);
        let a = cliff.plus_to_minus(&g[..n], &uy);
        let b = cliff.plus_to_minus(&g[n..], &uy);
        for (o, v) in out.iter_mut().zip(a.into_iter().chain(b)) {
            *o = -v;
        }
    });
    let compatibility = check_compatibility(&source, opts.compat_stride, opts.compat_threshold, opts.compat_refine, opts.compat_order)?;
    if !compatibility.passed {
        return Err(Error::Incompatible {
            ratio: compatibility.ratio,
            threshold: compatibility.threshold,
        });
    }
    let support = SupportSet::from_source(&source)?;
    let conv = Convolver::new(k, &support)?;
    let extension = |x: &[f64]| -> Result<Vec<Complex64>> {
        let ut = conv.eval(x)?;
        let c = chi.value(x);
        if c < 1.0 {
            let ux = u(x);
            Ok(ux.iter().zip(&ut).map(|(a, b)| a * (1.0 - c) - b).collect())
        } else {
            Ok(ut.iter().map(|b| -b).collect())
        }
    };

    let h = spec.spacing();
    let mut points = Vec::new();
    let mut values = Vec::new();
    let (mut res_num, mut res_den): (f64, f64) = (0.0, 0.0);
    let mut max_err: Option<f64> = None;
    for p in eval_points {
        let x = nearest_cell_centre(&spec, p);
        let r = geom.radius_of(&x);
        if r >= geom.omega_radius || (r > geom.k_radius && r < geom.inner && chi.value(&x) < 1.0) {
            return Err(Error::Geometry("evaluation point outside Ω".into()));
        }
        let v = extension(&x)?;
        let d0v = fd_at_point(&complex.d0, &x, &h, opts.fd_order, extension)?;
        res_num = res_num.max(vec_norm(&d0v));
        res_den = res_den.max(vec_norm(&v));
        if let Some(t) = truth {
            let tv = t(&x);
            let d: Vec<Complex64> = v.iter().zip(&tv).map(|(a, b)| a - b).collect();
            let e = vec_norm(&d) / vec_norm(&tv);
            max_err = Some(max_err.map_or(e, |m: f64| m.max(e)));
        }
        points.push(x);
        values.push(v);
    }
    let monogenic_residual = if res_den > 0.0 {
        res_num * (geom.outer - geom.inner) / res_den
    } else {
        res_num
    };
    Ok(HartogsReport {
        geometry: geom.clone(),
        points_per_axis,
        support_nodes: support.len(),
        input_monogenic_ratio,
        compatibility,
        points,
        values,
        monogenic_residual,
        max_relative_error: max_err,
    })
}

/// `max |D0_h u| · R_Ω / max |u|` at seeded points of the annulus `r_K < r < R_Ω`.
fn monogenic_ratio<U>(d0: &crate::diffop::MatrixDiffOp, u: &U, geom: &HartogsGeometry, seed: u64) -> Result<f64>
where
    U: Fn(&[f64]) -> Vec<Complex64>,
{
    let dim = geom.center.len();
    let step = 1e-2 * (geom.omega_radius - geom.k_radius);
    let h = vec![step; dim];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let (mut num, mut den): (f64, f64) = (0.0, 0.0);
    for _ in 0..16 {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let lo = geom.k_radius + 3.0 * step;
        let hi = geom.omega_radius - 3.0 * step;
        let r = lo + (hi - lo) * rng.gen::<f64>();
        let x: Vec<f64> = geom.center.iter().zip(&g).map(|(c, v)| c + r * v / gn).collect();
        let d = fd_at_point(d0, &x, &h, 4, |y| Ok(u(y)))?;
        num = num.max(vec_norm(&d));
        den = den.max(vec_norm(&u(&x)));
    }
    Ok(if den > 0.0 { num * geom.omega_radius / den } else { 0.0 })
}
