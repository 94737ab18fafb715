use num_complex::Complex64;

use super::deterministic_sum;
use crate::error::{Error, Result};
use crate::kernels::Kernels;
use crate::quadrature::{gauss_legendre, SphereRule};

/// Closed ball `|y − center| ≤ radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("ball radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn distance_to_center(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    fn require_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.center.len() {
            return Err(Error::ShapeMismatch("point and ball live in different spaces".into()));
        }
        if self.distance_to_center(x) >= self.radius * (1.0 - 1e-12) {
            return Err(Error::Geometry("evaluation point is not inside the ball".into()));
        }
        Ok(())
    }
}

fn check_rule(k: &Kernels, rule: &SphereRule) -> Result<()> {
    if rule.dim() != 2 * k.n() {
        return Err(Error::ShapeMismatch(format!("rule on S^{} for n = {}", rule.dim() - 1, k.n())));
    }
    Ok(())
}

/// `−∮_{∂B} H(x − y) (n_0; n_1) f(y) dS(y)`, where `n_A f = Σ_j n_{Aj} γ_j f`.
pub fn bm_boundary<F>(k: &Kernels, f: F, x: &[f64], ball: &Ball, rule: &SphereRule) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Vec<Complex64> + Sync,
{
    check_rule(k, rule)?;
    ball.require_interior(x)?;
    let n = k.n();
    let big_n = 2 * n;
    let r = ball.radius;
    let area = r.powi(big_n as i32 - 1);
    let cliff = k.clifford();
    let c_bm = k.constants().c_bm;
    let sum = deterministic_sum(rule.len(), k.dim_plus(), |i, acc| {
        let w = rule.node(i);
        let y: Vec<f64> = ball.center.iter().zip(w).map(|(c, wi)| c + r * wi).collect();
        let fy = f(&y);
        let mut v = cliff.plus_to_minus(&w[..n], &fy);
        v.extend(cliff.plus_to_minus(&w[n..], &fy));
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let d2: f64 = z.iter().map(|t| t * t).sum();
        let scale = -c_bm * rule.weights()[i] * area / d2.powi(n as i32);
        k.h_apply_raw(&z, scale, &v, acc);
    });
    Ok(sum)
}

/// Boundary term plus `∫_B H(x − y) D0 f(y) dV(y)`.
///
/// The volume integral runs in polar coordinates about `x`, where the Jacobian `t^{N−1}`
/// cancels the kernel singularity; `radial_points` Gauss–Legendre nodes per ray.
pub fn bm_full<F, G>(
    k: &Kernels,
    f: F,
    d0f: G,
    x: &[f64],
    ball: &Ball,
    rule: &SphereRule,
    radial_points: usize,
) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Vec<Complex64> + Sync,
    G: Fn(&[f64]) -> Vec<Complex64> + Sync,
{
    let boundary = bm_boundary(k, f, x, ball, rule)?;
    let n = k.n();
    let dm = k.dim_minus();
    let c_bm = k.constants().c_bm;
    let cliff = k.clifford();
    let (tq, wq) = gauss_legendre(radial_points.max(1), 0.0, 1.0);
    let xc: Vec<f64> = x.iter().zip(&ball.center).map(|(a, b)| a - b).collect();
    let xc2: f64 = xc.iter().map(|v| v * v).sum();
    let volume = deterministic_sum(rule.len(), k.dim_plus(), |i, acc| {
        let u = rule.node(i);
        // |xc + t u| = R
        let b: f64 = u.iter().zip(&xc).map(|(a, c)| a * c).sum();
        let t_max = -b + (b * b - xc2 + ball.radius * ball.radius).sqrt();
        let mut ray = vec![Complex64::new(0.0, 0.0); dm * 2];
        for (tk, wk) in tq.iter().zip(&wq) {
            let t = tk * t_max;
            let y: Vec<f64> = x.iter().zip(u).map(|(a, ui)| a + t * ui).collect();
            for (r, v) in ray.iter_mut().zip(d0f(&y)) {
                *r += v * (wk * t_max);
            }
        }
        // H(−t u) t^{N−1} = −c_bm Σ_j γ_j u_{Aj}
        let scale = -c_bm * rule.weights()[i];
        for a in 0..2 {
            cliff.minus_to_plus_into(&u[a * n..(a + 1) * n], scale, &ray[a * dm..(a + 1) * dm], acc);
        }
    });
    Ok(boundary.iter().zip(&volume).map(|(a, b)| a + b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Bump, PlaneWaveSpec};
    use crate::quadrature::{sphere_rule, SphereRuleMode};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
        let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        d / b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn constant_reproduced_at_center() {
        let k = Kernels::new(3).unwrap();
        let rule = sphere_rule(3, 10, SphereRuleMode::QuasiRandom, 1).unwrap();
        let s = vec![c(0.3, -1.0), c(2.0, 0.5)];
        let ball = Ball::new(vec![0.0; 6], 1.0).unwrap();
        let out = bm_boundary(&k, |_| s.clone(), &[0.0; 6], &ball, &rule).unwrap();
        assert!(rel(&out, &s) < 1e-12);
    }

    #[test]
    fn plane_wave_reproduced() {
        let k = Kernels::new(3).unwrap();
        let rule = sphere_rule(3, 8, SphereRuleMode::ProductGauss, 0).unwrap();
        let pw = PlaneWaveSpec::with_null_spinor(3, vec![c(0.6, 0.0), c(0.0, 0.6), c(0.0, 0.0)], c(0.5, 0.2)).unwrap();
        let ball = Ball::new(vec![0.1, 0.0, -0.1, 0.0, 0.2, 0.0], 1.0).unwrap();
        for x in [ball.center.clone(), vec![0.4, 0.1, -0.1, 0.2, 0.2, 0.1]] {
            let out = bm_boundary(&k, |y| pw.value(y), &x, &ball, &rule).unwrap();
            assert!(rel(&out, &pw.value(&x)) < 1e-3, "{}", rel(&out, &pw.value(&x)));
        }
    }

    #[test]
    fn rejects_outside_points() {
        let k = Kernels::new(3).unwrap();
        let rule = sphere_rule(3, 2, SphereRuleMode::ProductGauss, 0).unwrap();
        let ball = Ball::new(vec![0.0; 6], 1.0).unwrap();
        let x = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(matches!(bm_boundary(&k, |_| vec![c(1.0, 0.0); 2], &x, &ball, &rule), Err(Error::Geometry(_))));
    }

    #[test]
    fn full_formula_on_non_monogenic_bump() {
        let k = Kernels::new(3).unwrap();
        let rule = sphere_rule(3, 6, SphereRuleMode::ProductGauss, 0).unwrap();
        let ball = Ball::new(vec![0.0; 6], 1.0).unwrap();
        let b = Bump::new(vec![0.1, 0.0, 0.0, -0.1, 0.0, 0.0], 1.4).unwrap();
        let s = vec![c(1.0, 0.0), c(0.0, 0.5)];
        let f = |y: &[f64]| s.iter().map(|v| v * b.value(y)).collect::<Vec<_>>();
        let d0f = |y: &[f64]| b.d0_spinor(k.clifford(), &s, y);
        for x in [vec![0.0; 6], vec![0.2, -0.1, 0.0, 0.3, 0.0, 0.1]] {
            let out = bm_full(&k, f, d0f, &x, &ball, &rule, 24).unwrap();
            let e = rel(&out, &f(&x));
            assert!(e < 2e-2, "{e}");
        }
        let zero = bm_full(&k, |_| vec![c(0.0, 0.0); 2], |_| vec![c(0.0, 0.0); 4], &[0.0; 6], &ball, &rule, 4).unwrap();
        assert!(zero.iter().all(|z| *z == c(0.0, 0.0)));
    }
}
