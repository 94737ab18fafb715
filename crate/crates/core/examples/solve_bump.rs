//! Solve `D0 u = f` for `f = D0(bump · s)` and report the residual and far-field decay.
//!
//! `cargo run --release --example solve_bump -- [points_per_axis]`

use std::time::Instant;

use d2lab::clifford::Parity;
use d2lab::diffop::Space;
use d2lab::field::{AnalyticGrid, Bump, GridSpec, ValueSpace};
use d2lab::integrate::{solve_d0, SolveOptions};
use d2lab::kernels::Kernels;
use num_complex::Complex64;

fn main() -> d2lab::Result<()> {
    let ppa: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let n = 3;
    let k = Kernels::new(n)?;
    let bump = Bump::new(vec![0.0; 6], 1.0)?;
    let s = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)];
    let spec = GridSpec::cube(n, &[0.0; 6], 1.0, ppa)?;
    let space = ValueSpace::Spinor(Space::new(2, Parity::minus(n)));
    let f = AnalyticGrid::new(spec, space, |x: &[f64], out: &mut [Complex64]| {
        out.copy_from_slice(&bump.d0_spinor(k.clifford(), &s, x));
    });
    let points: Vec<Vec<f64>> = vec![
        vec![0.3, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.4, 0.0, 0.2, 0.0, 0.0],
        vec![0.2, -0.2, 0.1, 0.0, 0.3, -0.1],
        vec![-0.5, 0.0, 0.0, 0.0, 0.0, 0.1],
        vec![0.0, 0.0, 0.0, 0.0, -0.4, 0.3],
    ];
    let t = Instant::now();
    let mut opts = SolveOptions::default();
    if let Some(t) = std::env::args().nth(2).and_then(|a| a.parse().ok()) {
        opts.compat_threshold = Some(t);
    }
    let rep = solve_d0(&f, &k, &points, &opts)?;
    println!("points/axis {ppa}, h = {:.4}, support nodes {}", rep.spacing, rep.support_nodes);
    println!("compatibility ratio {:.3e} (threshold {:.3e})", rep.compatibility.ratio, rep.compatibility.threshold);
    println!("residual |D0 u - f| / |f| = {:.4e}", rep.residual);
    for (r, m) in rep.far_radii.iter().zip(&rep.far_max) {
        println!("  |x| = {r:7.3}  max |u| = {m:.4e}");
    }
    println!("far-field slope {:.3}", rep.decay_slope);
    println!("elapsed {:.1?}", t.elapsed());
    Ok(())
}
