//! Biharmonic fundamental solution `G0`, the block kernels `G1 = G2`, and the
//! Bochner–Martinelli kernel `H`.
//!
//! Constants are fixed by two oracles rather than taken on faith:
//! the flux of `∂_r Δ_std G0` through every sphere is 1, and `H` reproduces
//! constant spinors through the unit sphere. The resulting values are
//!
//! * `c_g0 = 1 / (2 (N−2)(N−4) σ)` (positive, so that `Δ_std² G0 = δ`),
//! * `c_bm = −1 / σ`,
//!
//! with `N = 2n` and `σ` the area of `S^{N−1}`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::clifford::{gammas, CliffordVectors, Parity};
use crate::diffop::{build_complex, MatrixDiffOp, PartialIndex};
use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;
use crate::quadrature::{sphere_area, sphere_rule, SphereRuleMode};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub sphere_area: f64,
    pub c_g0: f64,
    pub c_bm: f64,
}

impl KernelConstants {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDimension(n));
        }
        let big_n = 2 * n;
        let nf = big_n as f64;
        let sigma = sphere_area(big_n);
        Ok(Self {
            n,
            big_n,
            sphere_area: sigma,
            c_g0: 1.0 / (2.0 * (nf - 2.0) * (nf - 4.0) * sigma),
            c_bm: -1.0 / sigma,
        })
    }

    /// `−8(n−1)(n−2)|c_g0|`, the prefactor obtained by differentiating `G0` three times.
    pub fn prefactor_from_g0(&self) -> f64 {
        let n = self.n as f64;
        -8.0 * (n - 1.0) * (n - 2.0) * self.c_g0.abs()
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Kernel evaluator for a fixed `n`.
#[derive(Clone, Debug)]
pub struct Kernels {
    consts: KernelConstants,
    cliff: CliffordVectors,
    gammas: Vec<FloatMatrix>,
}

impl Kernels {
    pub fn new(n: usize) -> Result<Self> {
        let consts = KernelConstants::new(n)?;
        let gammas = gammas(n, Parity::minus(n))?.iter().map(|g| g.to_float()).collect();
        Ok(Self {
            consts,
            cliff: CliffordVectors::new(n)?,
            gammas,
        })
    }

    pub fn constants(&self) -> &KernelConstants {
        &self.consts
    }

    pub fn clifford(&self) -> &CliffordVectors {
        &self.cliff
    }

    pub fn n(&self) -> usize {
        self.consts.n
    }

    pub fn dim_plus(&self) -> usize {
        self.cliff.dim_plus()
    }

    pub fn dim_minus(&self) -> usize {
        self.cliff.dim_minus()
    }

    fn check_point(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.consts.big_n {
            return Err(Error::ShapeMismatch(format!(
                "point of length {} in R^{}",
                x.len(),
                self.consts.big_n
            )));
        }
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::Pole);
        }
        Ok(r)
    }

    /// `G0(x) = c_g0 |x|^{4−2n}`.
    pub fn g0(&self, x: &[f64]) -> Result<f64> {
        let r = self.check_point(x)?;
        Ok(self.consts.c_g0 * r.powi(4 - self.consts.big_n as i32))
    }

    /// `diag(G0, G0)` on `C² ⊗ S-`.
    pub fn g_block(&self, x: &[f64]) -> Result<FloatMatrix> {
        let g = Complex64::new(self.g0(x)?, 0.0);
        Ok(FloatMatrix::identity(2 * self.dim_minus()).scale(&g))
    }

    /// `(H_0(x), H_1(x))` as a `dim S+ × 2 dim S-` matrix.
    pub fn h_kernel(&self, x: &[f64]) -> Result<FloatMatrix> {
        let r = self.check_point(x)?;
        let n = self.consts.n;
        let (dp, dm) = (self.dim_plus(), self.dim_minus());
        let scale = self.consts.c_bm / r.powi(self.consts.big_n as i32);
        let mut out = FloatMatrix::zeros(dp, 2 * dm);
        for a in 0..2 {
            let mut block = FloatMatrix::zeros(dp, dm);
            for (j, g) in self.gammas.iter().enumerate() {
                block = &block + &g.scale(&Complex64::new(scale * x[a * n + j], 0.0));
            }
            out.set_block(0, a * dm, &block);
        }
        Ok(out)
    }

    /// `H(x) v` for `v ∈ C² ⊗ S-`, accumulated into `out` without building `H`.
    pub fn h_apply_into(&self, x: &[f64], v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let r = self.check_point(x)?;
        let scale = self.consts.c_bm / r.powi(self.consts.big_n as i32);
        self.h_apply_raw(x, scale, v, out);
        Ok(())
    }

    /// Hot-path variant: `scale = c_bm / |x|^N` supplied by the caller.
    #[inline]
    pub fn h_apply_raw(&self, x: &[f64], scale: f64, v: &[Complex64], out: &mut [Complex64]) {
        let n = self.consts.n;
        let dm = self.dim_minus();
        for a in 0..2 {
            self.cliff
                .minus_to_plus_into(&x[a * n..(a + 1) * n], scale, &v[a * dm..(a + 1) * dm], out);
        }
    }
}

/// `Σ coef · x^mono · r^power`, closed under differentiation.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialExpr {
    dim: usize,
    terms: BTreeMap<(Vec<u8>, i32), f64>,
}

impl RadialExpr {
    /// `coef · r^power`.
    pub fn power(dim: usize, coef: f64, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((vec![0; dim], power), coef);
        Self { dim, terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `∂_k`, using `∂_k x^β = β_k x^{β−e_k}` and `∂_k r^p = p x_k r^{p−2}`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut terms: BTreeMap<(Vec<u8>, i32), f64> = BTreeMap::new();
        let mut push = |mono: Vec<u8>, p: i32, c: f64| {
            *terms.entry((mono, p)).or_insert(0.0) += c;
        };
        for ((mono, p), &c) in &self.terms {
            if mono[k] > 0 {
                let mut m = mono.clone();
                m[k] -= 1;
                push(m, *p, c * mono[k] as f64);
            }
            if *p != 0 {
                let mut m = mono.clone();
                m[k] += 1;
                push(m, p - 2, c * *p as f64);
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Self { dim: self.dim, terms }
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self {
            dim: self.dim,
            terms: BTreeMap::new(),
        };
        for k in 0..self.dim {
            for (key, c) in self.derivative(k).derivative(k).terms {
                *out.terms.entry(key).or_insert(0.0) += c;
            }
        }
        out.terms.retain(|_, c| *c != 0.0);
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        self.terms
            .iter()
            .map(|((mono, p), c)| {
                let m: f64 = mono.iter().zip(x).map(|(&e, v)| v.powi(e as i32)).product();
                c * m * r.powi(*p)
            })
            .sum()
    }

    /// `∂_r = (x · ∇) / r`.
    pub fn radial_derivative_at(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        (0..self.dim).map(|k| x[k] * self.derivative(k).eval(x)).sum::<f64>() / r
    }
}

/// Applies a scalar-kernel operator `P[g · Id]` by differentiating `g` symbolically.
pub struct SymbolicApplier {
    base: RadialExpr,
    cache: HashMap<Vec<u8>, RadialExpr>,
}

impl SymbolicApplier {
    pub fn new(base: RadialExpr) -> Self {
        Self {
            base,
            cache: HashMap::new(),
        }
    }

    fn derivative(&mut self, alpha: &[u8]) -> RadialExpr {
        if let Some(e) = self.cache.get(alpha) {
            return e.clone();
        }
        let out = match alpha.iter().position(|&e| e > 0) {
            None => self.base.clone(),
            Some(k) => {
                let mut lower = alpha.to_vec();
                lower[k] -= 1;
                self.derivative(&lower).derivative(k)
            }
        };
        self.cache.insert(alpha.to_vec(), out.clone());
        out
    }

    /// `Σ_α M_α ∂^α g(x)`.
    pub fn apply(&mut self, op: &MatrixDiffOp, x: &[f64]) -> FloatMatrix {
        let n = op.n();
        let mut out = FloatMatrix::zeros(op.codomain().dim(n), op.domain().dim(n));
        for (idx, m) in op.float_terms() {
            let v = self.derivative(idx.exponents()).eval(x);
            out = &out + &m.scale(&Complex64::new(v, 0.0));
        }
        out
    }
}

/// `D0* D0 D0*` as a polynomial operator on `C² ⊗ S-`.
pub fn h_operator(n: usize) -> Result<MatrixDiffOp> {
    let c = build_complex(n)?;
    let d0s = c.d0.formal_adjoint();
    d0s.compose(&c.d0)?.compose(&d0s)
}

/// `G0` as a radial expression.
pub fn g0_expr(consts: &KernelConstants) -> RadialExpr {
    RadialExpr::power(consts.big_n, consts.c_g0, 4 - consts.big_n as i32)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolicHCheck {
    pub points: usize,
    pub seed: u64,
    pub max_relative_error: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Compare `h_kernel` against `D0* D0 D0* G1` at random points with `|x| ∈ [0.5, 2]`.
pub fn check_symbolic_h(n: usize, points: usize, seed: u64, tol: f64) -> Result<SymbolicHCheck> {
    let k = Kernels::new(n)?;
    let op = h_operator(n)?;
    let mut applier = SymbolicApplier::new(g0_expr(k.constants()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel: f64 = 0.0;
    for _ in 0..points {
        let dir = random_unit(2 * n, &mut rng);
        let r = 0.5 + 1.5 * rand::Rng::gen::<f64>(&mut rng);
        let x: Vec<f64> = dir.iter().map(|v| r * v).collect();
        let sym = applier.apply(&op, &x);
        let closed = k.h_kernel(&x)?;
        let err = (&sym - &closed).max_abs() / closed.max_abs();
        max_rel = max_rel.max(err);
    }
    Ok(SymbolicHCheck {
        points,
        seed,
        max_relative_error: max_rel,
        tol,
        passed: max_rel <= tol,
    })
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let r = norm(&g);
        if r > 1e-8 {
            return g.into_iter().map(|v| v / r).collect();
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FluxRecord {
    pub radius: f64,
    pub analytic: f64,
    pub quadrature: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FluxCheck {
    pub records: Vec<FluxRecord>,
    pub max_error: f64,
    pub tol: f64,
    pub passed: bool,
}

/// `∮_{|x|=r} ∂_r Δ_std G0 dS` from the radial expression.
pub fn flux_analytic(consts: &KernelConstants, r: f64) -> f64 {
    let phi = g0_expr(consts).laplacian();
    let mut x = vec![0.0; consts.big_n];
    x[0] = r;
    phi.radial_derivative_at(&x) * consts.sphere_area * r.powi(consts.big_n as i32 - 1)
}

/// Same flux, with `Δ_std` and `∂_r` taken by fourth-order differences of `g0`
/// and the surface integral by a product-Gauss rule.
pub fn flux_quadrature(kernels: &Kernels, r: f64) -> Result<f64> {
    let dim = kernels.constants().big_n;
    let rule = sphere_rule(kernels.n(), 3, SphereRuleMode::ProductGauss, 0)?;
    let h = 0.005 * r;
    let d2 = |f: &dyn Fn(f64) -> f64| {
        (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h)
    };
    let laplacian = |x: &[f64]| -> f64 {
        (0..dim)
            .map(|k| {
                d2(&|t: f64| {
                    let mut y = x.to_vec();
                    y[k] += t;
                    kernels.g0(&y).expect("off the pole")
                })
            })
            .sum()
    };
    let integral = rule.integrate(|w| {
        let at = |t: f64| {
            let x: Vec<f64> = w.iter().map(|v| (r + t) * v).collect();
            laplacian(&x)
        };
        (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
    });
    Ok(integral * r.powi(dim as i32 - 1))
}

pub fn check_flux(n: usize, radii: &[f64], tol: f64) -> Result<FluxCheck> {
    let k = Kernels::new(n)?;
    let mut records = Vec::new();
    let mut max_error: f64 = 0.0;
    for &r in radii {
        let analytic = flux_analytic(k.constants(), r);
        let quadrature = flux_quadrature(&k, r)?;
        max_error = max_error.max((analytic - 1.0).abs()).max((quadrature - 1.0).abs());
        records.push(FluxRecord {
            radius: r,
            analytic,
            quadrature,
        });
    }
    Ok(FluxCheck {
        records,
        max_error,
        tol,
        passed: max_error < tol,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayReport {
    pub m: usize,
    pub radii: Vec<f64>,
    pub seed: u64,
    pub slopes: Vec<f64>,
    pub expected: f64,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Finite-difference `m`-th directional derivatives of `g0` along random rays.
pub fn decay_probe(n: usize, m: usize, radii: &[f64], directions: usize, seed: u64) -> Result<DecayReport> {
    if m > 3 {
        return Err(Error::InvalidArgument(format!("derivative order {m} > 3")));
    }
    if radii.len() < 2 || radii.iter().any(|&r| r <= 0.0 || !r.is_finite()) {
        return Err(Error::InvalidArgument("need at least two positive radii".into()));
    }
    let k = Kernels::new(n)?;
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes = Vec::with_capacity(directions);
    for _ in 0..directions {
        let w = random_unit(dim, &mut rng);
        let u = random_unit(dim, &mut rng);
        let mags: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let h = 1e-3 * r;
                let g = |t: f64| {
                    let x: Vec<f64> = w.iter().zip(&u).map(|(a, b)| r * a + t * h * b).collect();
                    k.g0(&x).expect("off the pole")
                };
                let d = match m {
                    0 => g(0.0),
                    1 => (g(1.0) - g(-1.0)) / (2.0 * h),
                    2 => (g(1.0) - 2.0 * g(0.0) + g(-1.0)) / (h * h),
                    _ => (g(2.0) - 2.0 * g(1.0) + 2.0 * g(-1.0) - g(-2.0)) / (2.0 * h * h * h),
                };
                d.abs()
            })
            .collect();
        slopes.push(loglog_slope(radii, &mags));
    }
    let expected = -((2 * n - 4 + m) as f64);
    let max_deviation = slopes.iter().map(|s| (s - expected).abs()).fold(0.0, f64::max);
    let tol = 0.05;
    Ok(DecayReport {
        m,
        radii: radii.to_vec(),
        seed,
        slopes,
        expected,
        max_deviation,
        tol,
        passed: max_deviation <= tol,
    })
}

/// Unit vector `e_{Aj}` in `ℝ^{2n}`.
pub fn axis_point(n: usize, a: usize, j: usize) -> Vec<f64> {
    let mut x = vec![0.0; 2 * n];
    x[PartialIndex::unit(n, a, j).exponents().iter().position(|&e| e == 1).unwrap()] = 1.0;
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn g0_value_n3() {
        let k = Kernels::new(3).unwrap();
        let g = k.g0(&axis_point(3, 0, 1)).unwrap();
        assert!((g - 1.0 / (16.0 * PI.powi(3))).abs() < 1e-15);
        assert!((g - 2.0150e-3).abs() < 1e-6);
        let x = [0.3, -0.2, 0.5, 0.1, 0.7, -0.4];
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        assert!((k.g0(&x2).unwrap() - k.g0(&x).unwrap() / 4.0).abs() < 1e-17);
        assert!(matches!(k.g0(&[0.0; 6]), Err(Error::Pole)));
    }

    #[test]
    fn fd_biharmonic_is_second_order_small() {
        let k = Kernels::new(3).unwrap();
        let x = [0.5, 0.5, 0.5, 0.5, 0.0, 0.0];
        let bih = |h: f64| {
            let lap = |y: &[f64]| -> f64 {
                (0..6)
                    .map(|i| {
                        let mut p = y.to_vec();
                        let mut q = y.to_vec();
                        p[i] += h;
                        q[i] -= h;
                        (k.g0(&p).unwrap() - 2.0 * k.g0(y).unwrap() + k.g0(&q).unwrap()) / (h * h)
                    })
                    .sum()
            };
            (0..6)
                .map(|i| {
                    let mut p = x.to_vec();
                    let mut q = x.to_vec();
                    p[i] += h;
                    q[i] -= h;
                    (lap(&p) - 2.0 * lap(&x) + lap(&q)) / (h * h)
                })
                .sum::<f64>()
        };
        let (a, b) = (bih(2e-2), bih(1e-2));
        // single Laplacian magnitude is 1/(4π³) ≈ 8e-3; the bilaplacian vanishes
        assert!(b.abs() < 1e-4);
        let ratio = a / b;
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn g_block_diagonal() {
        let k = Kernels::new(3).unwrap();
        let x = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        let g = k.g_block(&x).unwrap();
        let g0 = k.g0(&x).unwrap();
        let d = k.dim_minus();
        assert_eq!(g.shape(), (2 * d, 2 * d));
        let trace: f64 = (0..2 * d).map(|i| g.get(i, i).re).sum();
        assert!((trace - 2.0 * d as f64 * g0).abs() < 1e-16);
        assert_eq!(*g.get(0, d), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn h_at_axis_point() {
        let k = Kernels::new(3).unwrap();
        let h = k.h_kernel(&axis_point(3, 0, 1)).unwrap();
        let c = k.constants().c_bm;
        let g1 = gammas(3, Parity::minus(3)).unwrap()[0].to_float();
        let d = k.dim_minus();
        assert!((&h.block(0, 0, k.dim_plus(), d).scale(&Complex64::new(1.0 / c, 0.0)) - &g1).max_abs() < 1e-15);
        assert!(h.block(0, d, k.dim_plus(), d).max_abs() == 0.0);
        assert!((c.abs() - 3.2251e-2).abs() < 1e-6);
    }

    #[test]
    fn h_homogeneity_and_apply() {
        let k = Kernels::new(4).unwrap();
        let x = [0.3, -0.1, 0.2, 0.4, 0.5, -0.6, 0.1, 0.2];
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let h1 = k.h_kernel(&x).unwrap();
        let h2 = k.h_kernel(&x2).unwrap();
        let s = Complex64::new(2f64.powi(1 - 8), 0.0);
        assert!((&h1.scale(&s) - &h2).max_abs() < 1e-14 * h1.max_abs());
        let v: Vec<Complex64> = (0..2 * k.dim_minus()).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); k.dim_plus()];
        k.h_apply_into(&x, &v, &mut out).unwrap();
        let dense = h1.apply(&v);
        for (a, b) in out.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn clifford_vector_squares_to_minus_norm() {
        let k = Kernels::new(4).unwrap();
        let y = [0.6, 0.0, 0.0, 0.8];
        let s = [Complex64::new(1.0, 0.5), Complex64::new(-1.0, 0.2)];
        let ys = k.clifford().plus_to_minus(&y, &s);
        // Σ γ_j y_j from S- back to S+ through the kernel patterns
        let mut back = vec![Complex64::new(0.0, 0.0); 2];
        let x = [0.6, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0];
        let mut v = ys.clone();
        v.extend(vec![Complex64::new(0.0, 0.0); 2]);
        k.h_apply_raw(&x, 1.0, &v, &mut back);
        for (a, b) in back.iter().zip(&s) {
            assert!((a + b).norm() < 1e-14);
        }
    }

    #[test]
    fn radial_expr_rules() {
        let e = RadialExpr::power(6, 1.0, -2);
        let x = [0.3, 0.1, -0.2, 0.5, 0.4, 0.2];
        let r = norm(&x);
        // Δ r^k = k(k+N-2) r^{k-2}
        let lap = e.laplacian().eval(&x);
        assert!((lap - (-2.0 * 2.0) * r.powi(-4)).abs() < 1e-10);
        let d = e.derivative(3).eval(&x);
        assert!((d + 2.0 * x[3] * r.powi(-4)).abs() < 1e-12);
    }

    #[test]
    fn flux_is_one() {
        for n in [3, 4] {
            let f = check_flux(n, &[0.5, 1.0, 2.0], 1e-6).unwrap();
            assert!(f.passed, "{f:?}");
        }
    }

    #[test]
    fn symbolic_h_matches() {
        let c = check_symbolic_h(3, 20, 7, 1e-12).unwrap();
        assert!(c.passed, "{c:?}");
    }

    #[test]
    fn prefactor_agrees_with_bm_constant() {
        for n in [3, 4, 5] {
            let c = KernelConstants::new(n).unwrap();
            assert!((c.prefactor_from_g0() - c.c_bm).abs() < 1e-15);
        }
    }

    #[test]
    fn decay_slopes() {
        for m in 0..=3 {
            let rep = decay_probe(3, m, &[0.5, 1.0, 2.0, 4.0], 5, 11).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
        assert!(decay_probe(3, 4, &[1.0, 2.0], 1, 0).is_err());
    }

    #[test]
    fn n2_is_rejected() {
        assert!(matches!(KernelConstants::new(2), Err(Error::InvalidDimension(2))));
    }
}
