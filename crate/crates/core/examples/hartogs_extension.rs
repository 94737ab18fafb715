//! Extend a monogenic plane wave from the annulus `Ω ∖ K` across `K` and compare with the
//! known global function.
//!
//! `cargo run --release --example hartogs_extension -- [points_per_axis]`

use std::time::Instant;

use d2lab::field::PlaneWaveSpec;
use d2lab::integrate::{hartogs_extend, HartogsGeometry, SolveOptions};
use d2lab::kernels::Kernels;
use num_complex::Complex64;

fn main() -> d2lab::Result<()> {
    let ppa: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let n = 3;
    let k = Kernels::new(n)?;
    let zeta = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.6), Complex64::new(0.0, 0.0)];
    let pw = PlaneWaveSpec::with_null_spinor(n, zeta, Complex64::new(0.5, 0.0))?;
    let geom = HartogsGeometry {
        center: vec![0.0; 6],
        k_radius: 0.4,
        inner: 0.5,
        outer: 1.0,
        omega_radius: 1.5,
    };
    let points: Vec<Vec<f64>> = vec![
        vec![0.0; 6],
        vec![0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, -0.1, 0.1, 0.0, 0.1, 0.0],
        vec![0.1, 0.1, 0.0, -0.1, 0.0, 0.1],
        vec![0.0, 0.0, 0.0, 0.0, 0.0, -0.25],
    ];
    let t = Instant::now();
    let truth = |x: &[f64]| pw.value(x);
    let rep = hartogs_extend(&k, |x: &[f64]| pw.value(x), &geom, ppa, &points, &SolveOptions::default(), Some(&truth))?;
    println!("points/axis {ppa}, support nodes {}", rep.support_nodes);
    println!("input D0 residual {:.3e}", rep.input_monogenic_ratio);
    println!("compatibility ratio {:.3e} (threshold {:.3e})", rep.compatibility.ratio, rep.compatibility.threshold);
    for (x, v) in rep.points.iter().zip(&rep.values) {
        let tv = pw.value(x);
        let err = v.iter().zip(&tv).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
            / tv.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
        println!("  |x| = {:.3}  relative error {err:.3e}", x.iter().map(|c| c * c).sum::<f64>().sqrt());
    }
    println!("max relative error {:.3e}", rep.max_relative_error.unwrap_or(f64::NAN));
    println!("monogenic residual of U {:.3e}", rep.monogenic_residual);
    println!("elapsed {:.1?}", t.elapsed());
    Ok(())
}
