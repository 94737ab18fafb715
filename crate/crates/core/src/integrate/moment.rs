use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::bm::Ball;
use super::{deterministic_sum, vec_norm};
use crate::diffop::build_complex;
use crate::error::{Error, Result};
use crate::field::fd_at_point;
use crate::kernels::Kernels;
use crate::quadrature::SphereRule;

/// `G(x) = (Σ_j γ_j z_{0j} w; Σ_j γ_j z_{1j} w) / |z|^{2n}` with `z = x − pole`, `w ∈ S+`.
///
/// `D0* G = 0` away from the pole.
pub fn kernel_family_field<'a>(k: &'a Kernels, pole: Vec<f64>, w: Vec<Complex64>) -> impl Fn(&[f64]) -> Vec<Complex64> + Sync + 'a {
    let n = k.n();
    move |x: &[f64]| {
        let z: Vec<f64> = x.iter().zip(&pole).map(|(a, b)| a - b).collect();
        let r2: f64 = z.iter().map(|v| v * v).sum();
        let s = 1.0 / r2.powi(n as i32);
        let mut out = k.clifford().plus_to_minus(&z[..n], &w);
        out.extend(k.clifford().plus_to_minus(&z[n..], &w));
        out.iter_mut().for_each(|v| *v *= s);
        out
    }
}

/// `max |D0*_h G| · R / max |G|` at seeded points of the closed ball.
pub fn check_kernel_condition<G>(k: &Kernels, g: &G, ball: &Ball, samples: usize, seed: u64) -> Result<f64>
where
    G: Fn(&[f64]) -> Vec<Complex64>,
{
    let n = k.n();
    let d0s = build_complex(n)?.d0.formal_adjoint();
    let dim = 2 * n;
    let h = vec![1e-3 * ball.radius; dim];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut num, mut den): (f64, f64) = (0.0, 0.0);
    for i in 0..samples {
        let dir: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let dn = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        // Every other sample on the boundary sphere.
        let r = if i % 2 == 0 { ball.radius } else { ball.radius * rng.gen::<f64>().powf(1.0 / dim as f64) };
        let x: Vec<f64> = ball.center.iter().zip(&dir).map(|(c, v)| c + r * v / dn).collect();
        let gx = g(&x);
        if gx.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Pole);
        }
        let d = fd_at_point(&d0s, &x, &h, 4, |y| Ok(g(y)))?;
        num = num.max(vec_norm(&d));
        den = den.max(vec_norm(&gx));
    }
    Ok(if den > 0.0 { num * ball.radius / den } else { 0.0 })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentResult {
    pub value: Complex64,
    /// `∮ |f| |n_0 G_0 + n_1 G_1| dS`, the size the pairing is measured against.
    pub scale: f64,
    pub normalized: f64,
    pub kernel_ratio: f64,
    pub kernel_threshold: f64,
}

/// `∮_{∂B} ⟨f, n_0 G_0 + n_1 G_1⟩ dS` with `⟨a, b⟩ = Σ a_i conj(b_i)`.
pub fn moment_pairing<F, G>(
    k: &Kernels,
    f: F,
    g: G,
    ball: &Ball,
    rule: &SphereRule,
    kernel_threshold: f64,
    seed: u64,
) -> Result<MomentResult>
where
    F: Fn(&[f64]) -> Vec<Complex64> + Sync,
    G: Fn(&[f64]) -> Vec<Complex64> + Sync,
{
    let n = k.n();
    if rule.dim() != 2 * n {
        return Err(Error::ShapeMismatch("sphere rule dimension".into()));
    }
    let kernel_ratio = check_kernel_condition(k, &g, ball, 32, seed)?;
    if kernel_ratio > kernel_threshold {
        return Err(Error::KernelCondition {
            ratio: kernel_ratio,
            threshold: kernel_threshold,
        });
    }
    let dm = k.dim_minus();
    let dp = k.dim_plus();
    let area = ball.radius.powi(2 * n as i32 - 1);
    let sums = deterministic_sum(rule.len(), 2, |i, acc| {
        let w = rule.node(i);
        let y: Vec<f64> = ball.center.iter().zip(w).map(|(c, wi)| c + ball.radius * wi).collect();
        let gy = g(&y);
        let mut ng = vec![Complex64::new(0.0, 0.0); dp];
        for a in 0..2 {
            k.clifford().minus_to_plus_into(&w[a * n..(a + 1) * n], 1.0, &gy[a * dm..(a + 1) * dm], &mut ng);
        }
        let fy = f(&y);
        let ip: Complex64 = fy.iter().zip(&ng).map(|(a, b)| a * b.conj()).sum();
        let wt = rule.weights()[i] * area;
        acc[0] += ip * wt;
        acc[1] += Complex64::new(vec_norm(&fy) * vec_norm(&ng) * wt, 0.0);
    });
    let value = sums[0];
    let scale = sums[1].re;
    Ok(MomentResult {
        value,
        scale,
        normalized: if scale > 0.0 { value.norm() / scale } else { 0.0 },
        kernel_ratio,
        kernel_threshold,
    })
}
