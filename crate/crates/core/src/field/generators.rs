use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec, ValueSpace};
use crate::clifford::{gamma, CliffordVectors, Parity};
use crate::diffop::Space;
use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;

const NULL_TOL: f64 = 1e-14;

fn dist2(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `exp(1 − 1/(1 − ρ²))` for `ρ = |x − c| / R < 1`, zero outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Bump {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("bump radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let rho2 = dist2(x, &self.center) / (self.radius * self.radius);
        if rho2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - rho2)).exp()
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r2 = self.radius * self.radius;
        let rho2 = dist2(x, &self.center) / r2;
        if rho2 >= 1.0 {
            return vec![0.0; x.len()];
        }
        let t = 1.0 - rho2;
        let s = -2.0 * (1.0 - 1.0 / t).exp() / (r2 * t * t);
        x.iter().zip(&self.center).map(|(a, c)| s * (a - c)).collect()
    }

    pub fn support_contains(&self, x: &[f64]) -> bool {
        dist2(x, &self.center) < self.radius * self.radius
    }

    /// Exact `D0(b·s) = (∇_0 b · s; ∇_1 b · s)` in `C² ⊗ S-`.
    pub fn d0_spinor(&self, cliff: &CliffordVectors, s: &[Complex64], x: &[f64]) -> Vec<Complex64> {
        let g = self.gradient(x);
        let n = x.len() / 2;
        let mut out = cliff.plus_to_minus(&g[..n], s);
        out.extend(cliff.plus_to_minus(&g[n..], s));
        out
    }
}

/// `s · bump` sampled on the grid, valued in `S+`.
pub fn bump(spec: &GridSpec, center: &[f64], radius: f64, s: &[Complex64]) -> Result<GridFunction> {
    let n = spec.n();
    let space = Space::new(1, Parity::plus(n));
    if s.len() != space.dim(n) {
        return Err(Error::ShapeMismatch(format!("spinor of length {} for S+ of dim {}", s.len(), space.dim(n))));
    }
    if !spec.contains_ball(center, radius) {
        return Err(Error::Geometry("bump support leaves the grid box".into()));
    }
    let b = Bump::new(center.to_vec(), radius)?;
    GridFunction::from_fn(spec.clone(), ValueSpace::Spinor(space), |x, out| {
        let v = b.value(x);
        for (o, si) in out.iter_mut().zip(s) {
            *o = si * v;
        }
    })
}

fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn dpsi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        psi(t) / (t * t)
    }
}

/// Smooth radial cutoff: 1 for `|x − c| ≤ r1`, 0 for `|x − c| ≥ r2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub center: Vec<f64>,
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub fn new(center: Vec<f64>, inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(Error::Geometry(format!("cutoff radii {inner} < {outer} required")));
        }
        Ok(Self { center, inner, outer })
    }

    fn t(&self, r: f64) -> f64 {
        (self.outer - r) / (self.outer - self.inner)
    }

    pub fn profile(&self, r: f64) -> f64 {
        let t = self.t(r);
        let (a, b) = (psi(t), psi(1.0 - t));
        a / (a + b)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.profile(dist2(x, &self.center).sqrt())
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = dist2(x, &self.center).sqrt();
        if r <= self.inner || r >= self.outer {
            return vec![0.0; x.len()];
        }
        let t = self.t(r);
        let (a, b) = (psi(t), psi(1.0 - t));
        let ds = (dpsi(t) * b + a * dpsi(1.0 - t)) / ((a + b) * (a + b));
        let dr = -ds / (self.outer - self.inner);
        x.iter().zip(&self.center).map(|(v, c)| dr * (v - c) / r).collect()
    }
}

/// Scalar cutoff field on the grid.
pub fn cutoff_chi(spec: &GridSpec, inner: f64, outer: f64, center: &[f64]) -> Result<GridFunction> {
    let c = Cutoff::new(center.to_vec(), inner, outer)?;
    if !spec.contains_ball(center, outer) {
        return Err(Error::Geometry("cutoff annulus leaves the grid box".into()));
    }
    GridFunction::from_fn(spec.clone(), ValueSpace::Scalar, |x, out| {
        out[0] = Complex64::new(c.value(x), 0.0);
    })
}

/// `f(x) = exp(ζ·x_0 + λ ζ·x_1) s` with `ζ·ζ = 0` and `(Σ γ_j ζ_j) s = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveSpec {
    pub zeta: Vec<Complex64>,
    pub lambda: Complex64,
    pub spinor: Vec<Complex64>,
}

impl PlaneWaveSpec {
    /// Pick the spinor from the kernel of `Σ γ_j ζ_j`.
    pub fn with_null_spinor(n: usize, zeta: Vec<Complex64>, lambda: Complex64) -> Result<Self> {
        let spinor = find_null_spinor(n, &zeta)?;
        Ok(Self { zeta, lambda, spinor })
    }

    pub fn n(&self) -> usize {
        self.zeta.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let cliff = CliffordVectors::new(n)?;
        if self.spinor.len() != cliff.dim_plus() {
            return Err(Error::ShapeMismatch(format!("spinor length {} for S+ of dim {}", self.spinor.len(), cliff.dim_plus())));
        }
        let q: Complex64 = self.zeta.iter().map(|z| z * z).sum();
        if q.norm() > NULL_TOL {
            return Err(Error::NotNull(q.norm()));
        }
        let s_norm = self.spinor.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if s_norm == 0.0 {
            return Err(Error::InvalidArgument("zero spinor".into()));
        }
        let res = cliff.plus_to_minus_complex(&self.zeta, &self.spinor);
        let r = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if r > NULL_TOL * s_norm.max(1.0) {
            return Err(Error::InvalidArgument(format!("spinor not annihilated: residual {r:.3e}")));
        }
        Ok(())
    }

    pub fn phase(&self, x: &[f64]) -> Complex64 {
        let n = self.n();
        let a: Complex64 = self.zeta.iter().zip(&x[..n]).map(|(z, v)| z * v).sum();
        let b: Complex64 = self.zeta.iter().zip(&x[n..]).map(|(z, v)| z * v).sum();
        (a + self.lambda * b).exp()
    }

    pub fn value(&self, x: &[f64]) -> Vec<Complex64> {
        let e = self.phase(x);
        self.spinor.iter().map(|s| s * e).collect()
    }
}

pub fn monogenic_plane_wave(spec: &GridSpec, pw: &PlaneWaveSpec) -> Result<GridFunction> {
    pw.validate()?;
    if pw.n() != spec.n() {
        return Err(Error::ShapeMismatch("plane wave and grid disagree on n".into()));
    }
    let space = Space::new(1, Parity::plus(spec.n()));
    GridFunction::from_fn(spec.clone(), ValueSpace::Spinor(space), |x, out| {
        let e = pw.phase(x);
        for (o, s) in out.iter_mut().zip(&pw.spinor) {
            *o = s * e;
        }
    })
}

/// Unit spinor in `ker(Σ γ_j ζ_j) ⊂ S+`; the kernel must have dimension `dim S+ / 2`.
pub fn find_null_spinor(n: usize, zeta: &[Complex64]) -> Result<Vec<Complex64>> {
    if zeta.len() != n {
        return Err(Error::ShapeMismatch(format!("ζ of length {} for n = {n}", zeta.len())));
    }
    let scale = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Err(Error::InvalidArgument("ζ = 0 has no distinguished spinor".into()));
    }
    let plus = Parity::plus(n);
    let mut m: Option<FloatMatrix> = None;
    for (j, z) in zeta.iter().enumerate() {
        let g = gamma(n, j + 1, plus)?.to_float().scale(z);
        m = Some(match m {
            None => g,
            Some(acc) => &acc + &g,
        });
    }
    let m = m.expect("n ≥ 1");
    let dp = m.cols();
    let svd = m.to_nalgebra().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= 1e-10 * scale)
        .collect();
    // Columns beyond the row count are kernel directions too (square here, kept general).
    kernel.extend(svd.singular_values.len()..dp);
    let expected = dp / 2;
    if kernel.len() != expected {
        return Err(Error::EmptyKernel {
            expected,
            found: kernel.len(),
        });
    }
    let row = kernel[0];
    let mut v: Vec<Complex64> = (0..dp).map(|c| v_t[(row, c)].conj()).collect();
    let (imax, _) = v
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, z)| if z.norm() > best.1 + 1e-12 { (i, z.norm()) } else { best });
    let phase = v[imax].conj() / v[imax].norm();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z = *z * phase / nrm;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::build_complex;
    use crate::field::apply_fd;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bump_values() {
        let b = Bump::new(vec![0.0; 6], 1.0).unwrap();
        assert_eq!(b.value(&[0.0; 6]), 1.0);
        assert_eq!(b.value(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 0.0);
        let x = [0.999, 0.0, 0.0, 0.0, 0.0, 0.0];
        let h = 1e-6;
        let fd = (b.value(&[0.999 + h, 0.0, 0.0, 0.0, 0.0, 0.0]) - b.value(&[0.999 - h, 0.0, 0.0, 0.0, 0.0, 0.0])) / (2.0 * h);
        assert!(fd.abs() < 1e-6);
        assert!(b.gradient(&x)[0].abs() < 1e-6);
    }

    #[test]
    fn bump_gradient_matches_fd() {
        let b = Bump::new(vec![0.1, 0.0, -0.2, 0.0], 0.8).unwrap();
        let x = [0.3, 0.2, -0.1, 0.1];
        let g = b.gradient(&x);
        for k in 0..4 {
            let h = 1e-6;
            let mut p = x;
            let mut q = x;
            p[k] += h;
            q[k] -= h;
            let fd = (b.value(&p) - b.value(&q)) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn bump_must_fit() {
        let spec = GridSpec::cube(2, &[0.0; 4], 1.0, 5).unwrap();
        let s = [c(1.0, 0.0)];
        assert!(bump(&spec, &[0.0; 4], 1.0, &s).is_ok());
        assert!(matches!(bump(&spec, &[0.5, 0.0, 0.0, 0.0], 1.0, &s), Err(Error::Geometry(_))));
    }

    #[test]
    fn cutoff_profile() {
        let k = Cutoff::new(vec![0.0; 4], 0.5, 1.0).unwrap();
        assert_eq!(k.value(&[0.0; 4]), 1.0);
        assert_eq!(k.value(&[1.2, 0.0, 0.0, 0.0]), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = k.profile(0.4 + 0.007 * i as f64);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        let x = [0.5, 0.3, 0.2, 0.1];
        let g = k.gradient(&x);
        for j in 0..4 {
            let h = 1e-6;
            let mut p = x;
            let mut q = x;
            p[j] += h;
            q[j] -= h;
            assert!(((k.value(&p) - k.value(&q)) / (2.0 * h) - g[j]).abs() < 1e-7);
        }
        assert!(Cutoff::new(vec![0.0; 4], 1.0, 0.5).is_err());
    }

    #[test]
    fn null_spinor_dimensions() {
        let z4 = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let s = find_null_spinor(4, &z4).unwrap();
        assert_eq!(s.len(), 2);
        let z6: Vec<Complex64> = [c(1.0, 0.0), c(0.0, 1.0)].into_iter().chain(std::iter::repeat_n(c(0.0, 0.0), 4)).collect();
        assert_eq!(find_null_spinor(6, &z6).unwrap().len(), 4);
        let bad = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(find_null_spinor(3, &bad), Err(Error::EmptyKernel { expected: 1, found: 0 })));
    }

    #[test]
    fn plane_wave_validation() {
        let z = vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)];
        let pw = PlaneWaveSpec::with_null_spinor(3, z.clone(), c(0.3, -0.2)).unwrap();
        pw.validate().unwrap();
        let bad = PlaneWaveSpec {
            zeta: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            ..pw.clone()
        };
        assert!(matches!(bad.validate(), Err(Error::NotNull(_))));
        let constant = PlaneWaveSpec {
            zeta: vec![c(0.0, 0.0); 3],
            lambda: c(0.0, 0.0),
            spinor: vec![c(1.0, 0.0), c(0.0, 0.0)],
        };
        constant.validate().unwrap();
    }

    #[test]
    fn plane_wave_monogenic_second_order() {
        let n = 3;
        let pw = PlaneWaveSpec::with_null_spinor(n, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)], c(0.5, 0.5)).unwrap();
        let d0 = build_complex(n).unwrap().d0;
        let ratio = |half: f64| {
            let spec = GridSpec::cube(n, &[0.0; 6], half, 7).unwrap();
            let f = monogenic_plane_wave(&spec, &pw).unwrap();
            let g = apply_fd(&d0, &f, 2).unwrap();
            g.max_norm() / f.max_norm()
        };
        let (a, b) = (ratio(0.3), ratio(0.15));
        let q = a / b;
        assert!((q - 4.0).abs() < 0.8, "{a} {b} {q}");
    }
}
