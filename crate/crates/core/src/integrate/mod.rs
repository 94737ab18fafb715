//! Integral formulas built on the Bochner–Martinelli kernel `H`.

mod bm;
mod hartogs;
mod moment;
mod solve;

pub use bm::{bm_boundary, bm_full, Ball};
pub use hartogs::{hartogs_extend, HartogsGeometry, HartogsReport};
pub use moment::{check_kernel_condition, kernel_family_field, moment_pairing, MomentResult};
pub use solve::{
    check_compatibility, nearest_cell_centre, solve_d0, CompatibilityReport, Convolver, SolveOptions,
    SolveReport, SupportSet,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::quadrature::pairwise_sum;

/// Fixed block size, so the reduction tree does not depend on the thread count.
const CHUNK: usize = 1024;

/// `Σ_{i < len} term(i)` for vector-valued terms, with a reduction order fixed by `len` alone.
pub(crate) fn deterministic_sum<F>(len: usize, dim: usize, term: F) -> Vec<Complex64>
where
    F: Fn(usize, &mut [Complex64]) + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Complex64::new(0.0, 0.0); dim];
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                term(i, &mut acc);
            }
            acc
        })
        .collect();
    (0..dim)
        .map(|k| {
            let re: Vec<f64> = partial.iter().map(|p| p[k].re).collect();
            let im: Vec<f64> = partial.iter().map(|p| p[k].im).collect();
            Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
        })
        .collect()
}

pub(crate) fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
