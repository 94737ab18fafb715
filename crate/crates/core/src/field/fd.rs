use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{GridFunction, ValueSpace};
use crate::diffop::MatrixDiffOp;
use crate::error::{Error, Result};
use crate::matrix::FloatMatrix;

/// Fornberg weights for derivatives `0..=m` at `z` from nodes `x`; `w[k][j]` multiplies `f(x_j)`.
pub fn fd_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let np = x.len();
    let mut c = vec![vec![0.0; np]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..np {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Half-width of the central stencil for a derivative of order `deriv` at accuracy `order`.
pub fn stencil_radius(deriv: usize, order: usize) -> usize {
    if deriv == 0 {
        return 0;
    }
    let points = 2 * deriv.div_ceil(2) - 1 + order;
    (points - 1) / 2
}

/// Central weights on the integer offsets `-r..=r`, unit spacing.
fn central_weights(deriv: usize, order: usize) -> Vec<f64> {
    let r = stencil_radius(deriv, order) as isize;
    let nodes: Vec<f64> = (-r..=r).map(|k| k as f64).collect();
    fd_weights(0.0, &nodes, deriv).swap_remove(deriv)
}

/// One term `M_α ∂^α` as a matrix and a tensor-product stencil of integer offsets.
pub type TermStencil = (FloatMatrix, Vec<(Vec<isize>, f64)>);

/// Stencils for every term of `P` on spacing `h`, and the largest reach per axis.
pub fn term_stencils(p: &MatrixDiffOp, h: &[f64], order: usize) -> Result<(Vec<TermStencil>, usize)> {
    if order != 2 && order != 4 {
        return Err(Error::InvalidArgument(format!("finite-difference order {order} (use 2 or 4)")));
    }
    let dim = 2 * p.n();
    let mut need = 0;
    let mut out = Vec::new();
    for (idx, m) in p.float_terms() {
        let mut pts: Vec<(Vec<isize>, f64)> = vec![(vec![0; dim], 1.0)];
        for (k, &e) in idx.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as usize;
            need = need.max(stencil_radius(e, order));
            let w = central_weights(e, order);
            let r = (w.len() / 2) as isize;
            let scale = h[k].powi(e as i32);
            let mut next = Vec::new();
            for (off, wt) in &pts {
                for (t, &wk) in w.iter().enumerate() {
                    if wk != 0.0 {
                        let mut o = off.clone();
                        o[k] += t as isize - r;
                        next.push((o, wt * wk / scale));
                    }
                }
            }
            pts = next;
        }
        out.push((m, pts));
    }
    Ok((out, need))
}

/// `P f` at one base point, with `f` supplied at integer offsets (in units of `h`).
///
/// Each distinct offset is evaluated once.
pub fn fd_apply_with<F>(p: &MatrixDiffOp, h: &[f64], order: usize, mut eval: F) -> Result<Vec<Complex64>>
where
    F: FnMut(&[isize]) -> Result<Vec<Complex64>>,
{
    let (stencils, _) = term_stencils(p, h, order)?;
    let n = p.n();
    let vin = p.domain().dim(n);
    let mut cache: HashMap<Vec<isize>, Vec<Complex64>> = HashMap::new();
    let mut out = vec![Complex64::new(0.0, 0.0); p.codomain().dim(n)];
    let mut acc = vec![Complex64::new(0.0, 0.0); vin];
    for (m, pts) in &stencils {
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        for (off, w) in pts {
            if !cache.contains_key(off) {
                let v = eval(off)?;
                if v.len() != vin {
                    return Err(Error::ShapeMismatch(format!("sampler returned {} components, need {vin}", v.len())));
                }
                cache.insert(off.clone(), v);
            }
            for (a, v) in acc.iter_mut().zip(&cache[off]) {
                *a += v * *w;
            }
        }
        for (r, d) in out.iter_mut().enumerate() {
            for (c, a) in acc.iter().enumerate() {
                *d += m.get(r, c) * a;
            }
        }
    }
    Ok(out)
}

/// `P f (x)` by central differences of step `h` around an arbitrary point.
pub fn fd_at_point<F>(p: &MatrixDiffOp, x: &[f64], h: &[f64], order: usize, eval: F) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Result<Vec<Complex64>>,
{
    fd_apply_with(p, h, order, |off| {
        let y: Vec<f64> = x.iter().zip(off).zip(h).map(|((xi, &o), hi)| xi + o as f64 * hi).collect();
        eval(&y)
    })
}

/// Apply `P` to `F` by tensor-product central differences, term by term.
///
/// Nodes within stencil reach of the edge (plus `F`'s own invalid margin) are zero
/// in the result and marked invalid.
pub fn apply_fd(p: &MatrixDiffOp, f: &GridFunction, order: usize) -> Result<GridFunction> {
    let spec = f.spec();
    let n = spec.n();
    if p.n() != n {
        return Err(Error::ShapeMismatch(format!("operator for n = {}, grid for n = {n}", p.n())));
    }
    let vin = p.domain().dim(n);
    if vin != f.value_dim() {
        return Err(Error::ShapeMismatch(format!(
            "operator takes {vin} components, field has {}",
            f.value_dim()
        )));
    }
    let vout = p.codomain().dim(n);
    spec.check_memory(vout)?;

    let strides = spec.strides();
    let (terms, need) = term_stencils(p, &spec.spacing(), order)?;
    let stencils: Vec<(FloatMatrix, Vec<(isize, f64)>)> = terms
        .into_iter()
        .map(|(m, pts)| {
            let lin = pts
                .into_iter()
                .map(|(off, w)| (off.iter().zip(&strides).map(|(o, s)| o * *s as isize).sum(), w))
                .collect();
            (m, lin)
        })
        .collect();

    let margin = f.valid_margin() + need;
    let ppa = spec.points_per_axis();
    if 2 * margin >= ppa {
        return Err(Error::MarginTooSmall {
            have: (ppa - 1) / 2 - f.valid_margin().min((ppa - 1) / 2),
            need,
        });
    }

    let src = f.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); spec.num_points() * vout];
    out.par_chunks_mut(vout)
        .enumerate()
        .for_each_init(
            || vec![Complex64::new(0.0, 0.0); vin],
            |acc, (i, dst)| {
                let mi = spec.multi_index(i);
                if mi.iter().any(|&c| c < margin || c + margin >= ppa) {
                    return;
                }
                for (m, pts) in &stencils {
                    acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
                    for &(off, w) in pts {
                        let j = (i as isize + off) as usize;
                        for (a, v) in acc.iter_mut().zip(&src[j * vin..(j + 1) * vin]) {
                            *a += v * w;
                        }
                    }
                    for (r, d) in dst.iter_mut().enumerate() {
                        for (c, a) in acc.iter().enumerate() {
                            *d += m.get(r, c) * a;
                        }
                    }
                }
            },
        );
    GridFunction::from_samples(spec.clone(), ValueSpace::Spinor(p.codomain()), out, margin)
}
