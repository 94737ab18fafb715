//! Principal symbols and a numerical exactness check of the symbol sequence.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::spinor_dim;
use crate::diffop::{build_complex, complex_spaces, DiracComplex, MatrixDiffOp};
use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;

/// Relative singular-value cutoff used for numerical ranks.
pub const RANK_RTOL: f64 = 1e-10;

/// A covector `ν = (ν_{01}, …, ν_{0n}, ν_{11}, …, ν_{1n})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    n: usize,
    values: Vec<f64>,
}

impl Covector {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 2 * n {
            return Err(Error::ShapeMismatch(format!(
                "covector of length {} for n = {n}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    /// Unit covector dual to `x_{Aj}`.
    pub fn unit(n: usize, a: usize, j: usize) -> Self {
        let mut values = vec![0.0; 2 * n];
        values[a * n + j - 1] = 1.0;
        Self { n, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `|ν_A|`.
    pub fn block_norm(&self, a: usize) -> f64 {
        self.values[a * self.n..(a + 1) * self.n]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// `σ(P)(ν) = Σ_{|α| = deg P} M_α (ν/i)^α`.
pub fn symbol(p: &MatrixDiffOp, nu: &Covector) -> FloatMatrix {
    let n = p.n();
    let top = p.max_degree();
    let z: Vec<Complex64> = nu.values.iter().map(|&v| Complex64::new(0.0, -v)).collect();
    let mut out = FloatMatrix::zeros(p.codomain().dim(n), p.domain().dim(n));
    for (idx, m) in p.terms() {
        if idx.degree() == top {
            out = &out + &m.to_float().scale(&idx.monomial(&z));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub n: usize,
    pub covector: Vec<f64>,
    /// `dim S±`; every rank below should equal it.
    pub expected: usize,
    pub rank_sigma0: usize,
    pub dim_ker_sigma1: usize,
    pub rank_sigma1: usize,
    pub rank_sigma2: usize,
    pub residual_comp01: f64,
    pub residual_comp12: f64,
    pub min_singular_sigma0: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Check exactness of `0 → V0 → V1 → V2 → V3 → 0` under the symbols at `ν`.
pub fn check_exactness_with(complex: &DiracComplex, nu: &Covector, tol: f64) -> Result<ExactnessReport> {
    let norm = nu.norm();
    if norm == 0.0 {
        return Err(Error::ZeroCovector);
    }
    let s0 = symbol(&complex.d0, nu);
    let s1 = symbol(&complex.d1, nu);
    let s2 = symbol(&complex.d2, nu);
    let d = spinor_dim(complex.n);
    let rank_sigma0 = s0.rank(tol);
    let rank_sigma1 = s1.rank(tol);
    let rank_sigma2 = s2.rank(tol);
    let dim_ker_sigma1 = s1.cols() - rank_sigma1;
    let residual_comp01 = (&s1 * &s0).frobenius_norm();
    let residual_comp12 = (&s2 * &s1).frobenius_norm();
    let min_singular_sigma0 = s0.singular_values().last().copied().unwrap_or(0.0);
    let bound = tol * norm.powi(3);
    let passed = rank_sigma0 == d
        && rank_sigma1 == d
        && rank_sigma2 == d
        && dim_ker_sigma1 == d
        && residual_comp01 <= bound
        && residual_comp12 <= bound;
    Ok(ExactnessReport {
        n: complex.n,
        covector: nu.values.clone(),
        expected: d,
        rank_sigma0,
        dim_ker_sigma1,
        rank_sigma1,
        rank_sigma2,
        residual_comp01,
        residual_comp12,
        min_singular_sigma0,
        tol,
        passed,
    })
}

pub fn check_exactness(n: usize, nu: &Covector, tol: f64) -> Result<ExactnessReport> {
    check_exactness_with(&build_complex(n)?, nu, tol)
}

/// Alternating sum of the dimensions of the spaces in the complex.
pub fn euler_characteristic(n: usize) -> Result<i64> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(complex_spaces(n)
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let d = s.dim(n) as i64;
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .sum())
}

/// Uniform samples on the unit sphere of `ℝ^{2n}`, reproducible from `seed`.
pub fn random_unit_covectors(n: usize, count: usize, seed: u64) -> Vec<Covector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..2 * n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break Covector::new(n, v.into_iter().map(|x| x / norm).collect()).unwrap();
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipticitySummary {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub failures: usize,
    pub max_residual: f64,
    /// Smallest `σ_min(σ_0(ν))` over the unit-sphere sample.
    pub min_singular_sigma0: f64,
    pub passed: bool,
}

/// Run [`check_exactness_with`] over `samples` random unit covectors.
pub fn sample_exactness(
    n: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<(Vec<ExactnessReport>, EllipticitySummary)> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let complex = build_complex(n)?;
    let covectors = random_unit_covectors(n, samples, seed);
    let reports: Vec<ExactnessReport> = covectors
        .par_iter()
        .map(|nu| check_exactness_with(&complex, nu, tol))
        .collect::<Result<_>>()?;
    let failures = reports.iter().filter(|r| !r.passed).count();
    let max_residual = reports
        .iter()
        .map(|r| r.residual_comp01.max(r.residual_comp12))
        .fold(0.0, f64::max);
    let min_singular_sigma0 = reports
        .iter()
        .map(|r| r.min_singular_sigma0)
        .fold(f64::INFINITY, f64::min);
    let summary = EllipticitySummary {
        n,
        samples,
        seed,
        tol,
        failures,
        max_residual,
        min_singular_sigma0,
        passed: failures == 0,
    };
    Ok((reports, summary))
}
