//! Quadrature on spheres `S^{N-1} ⊂ ℝ^N` and on intervals.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Largest rule we are willing to build.
pub const MAX_NODES: usize = 1 << 24;

/// Surface area of the unit sphere `S^{N-1}`: `2π^{N/2} / Γ(N/2)`.
pub fn sphere_area(ambient_dim: usize) -> f64 {
    // Γ(N/2) by recurrence from Γ(1) or Γ(1/2).
    let (mut g, mut a) = if ambient_dim.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let half = ambient_dim as f64 / 2.0;
    while a < half {
        g *= a;
        a += 1.0;
    }
    2.0 * PI.powf(half) / g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereRuleMode {
    /// Tensor rule in nested coordinates, exact on polynomials of degree `< 2·level`.
    ProductGauss,
    /// Shifted Halton points pushed to the sphere, `2^level` nodes.
    QuasiRandom,
    /// Seeded uniform samples, `2^level` nodes.
    MonteCarlo,
}

/// Nodes and weights on the unit sphere of `ℝ^dim`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    dim: usize,
    mode: SphereRuleMode,
    level: u32,
    seed: u64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(dim: usize, level: u32, mode: SphereRuleMode, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let (nodes, weights) = match mode {
            SphereRuleMode::ProductGauss => {
                let q = level as usize;
                let count = (2 * q).checked_mul(q.checked_pow(dim as u32 - 2).unwrap_or(usize::MAX));
                if q == 0 || count.is_none_or(|c| c > MAX_NODES) {
                    return Err(Error::InvalidLevel(level));
                }
                product_rule(dim, q)
            }
            SphereRuleMode::QuasiRandom | SphereRuleMode::MonteCarlo => {
                if level == 0 || (1usize << level.min(63)) > MAX_NODES {
                    return Err(Error::InvalidLevel(level));
                }
                let count = 1usize << level;
                let nodes = if mode == SphereRuleMode::QuasiRandom {
                    halton_sphere(dim, count, seed)
                } else {
                    random_sphere(dim, count, seed)
                };
                let w = sphere_area(dim) / count as f64;
                (nodes, vec![w; count])
            }
        };
        Ok(Self {
            dim,
            mode,
            level,
            seed,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> SphereRuleMode {
        self.mode
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    /// `∮ f dS` over the unit sphere, summed pairwise for a fixed reduction order.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let terms: Vec<f64> = self.iter().map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

/// Rule on the sphere `S^{2n-1}` of `ℝ^{2n}`.
pub fn sphere_rule(n: usize, level: u32, mode: SphereRuleMode, seed: u64) -> Result<SphereRule> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    SphereRule::new(2 * n, level, mode, seed)
}

/// Summation by recursive halving.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Gauss rule for the weight `(1 - t²)^a` on `[-1, 1]` (Golub–Welsch).
pub fn gauss_gegenbauer(q: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(q > 0 && a > -1.0);
    let lambda = a + 0.5;
    let mut jac = DMatrix::<f64>::zeros(q, q);
    for k in 1..q {
        let kf = k as f64;
        let b = kf * (kf + 2.0 * lambda - 1.0) / (4.0 * (kf + lambda) * (kf + lambda - 1.0));
        jac[(k, k - 1)] = b.sqrt();
        jac[(k - 1, k)] = b.sqrt();
    }
    // ∫(1-t²)^a dt = √π Γ(a+1) / Γ(a+3/2)
    let mu0 = (0.5 * PI.ln() + ln_gamma(a + 1.0) - ln_gamma(a + 1.5)).exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..q)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre nodes and weights on `[lo, hi]`.
pub fn gauss_legendre(q: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_gegenbauer(q, 0.0);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    (
        t.iter().map(|x| mid + half * x).collect(),
        w.iter().map(|x| half * x).collect(),
    )
}

fn product_rule(dim: usize, q: usize) -> (Vec<f64>, Vec<f64>) {
    // S^1: 2q equally spaced angles.
    let m = 2 * q;
    let mut nodes: Vec<Vec<f64>> = (0..m)
        .map(|k| {
            let th = 2.0 * PI * (k as f64 + 0.5) / m as f64;
            vec![th.cos(), th.sin()]
        })
        .collect();
    let mut weights = vec![2.0 * PI / m as f64; m];
    // S^d from S^{d-1}: x = (t, sqrt(1-t²) y), dS^d = (1-t²)^{(d-2)/2} dt dS^{d-1}.
    for d in 2..dim {
        let (ts, tw) = gauss_gegenbauer(q, (d as f64 - 2.0) / 2.0);
        let mut next_nodes = Vec::with_capacity(nodes.len() * q);
        let mut next_weights = Vec::with_capacity(nodes.len() * q);
        for (t, wt) in ts.iter().zip(&tw) {
            let s = (1.0 - t * t).sqrt();
            for (y, wy) in nodes.iter().zip(&weights) {
                let mut x = Vec::with_capacity(d + 1);
                x.push(*t);
                x.extend(y.iter().map(|v| s * v));
                next_nodes.push(x);
                next_weights.push(wt * wy);
            }
        }
        nodes = next_nodes;
        weights = next_weights;
    }
    (nodes.concat(), weights)
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

fn halton_sphere(dim: usize, count: usize, seed: u64) -> Vec<f64> {
    assert!(dim <= PRIMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut out = Vec::with_capacity(dim * count);
    for i in 0..count {
        let g: Vec<f64> = (0..dim)
            .map(|k| {
                let u = (radical_inverse(i as u64 + 1, PRIMES[k]) + shift[k]).fract();
                normal.inverse_cdf(u.clamp(1e-300, 1.0 - 1e-16))
            })
            .collect();
        push_normalized(&mut out, &g);
    }
    out
}

fn random_sphere(dim: usize, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(dim * count);
    while out.len() < dim * count {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        if g.iter().any(|v| *v != 0.0) {
            push_normalized(&mut out, &g);
        }
    }
    out
}

fn push_normalized(out: &mut Vec<f64>, g: &[f64]) {
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.extend(g.iter().map(|v| v / norm));
}
