//! Bochner–Martinelli reproduction of a constant spinor and of a monogenic plane wave on the
//! unit ball in `R^6`, with quasi-random and product-Gauss sphere rules.
//!
//! `cargo run --release --example bm_reproduction -- [log2_nodes]`

use std::time::Instant;

use d2lab::field::PlaneWaveSpec;
use d2lab::integrate::{bm_boundary, Ball};
use d2lab::kernels::Kernels;
use d2lab::quadrature::{SphereRule, SphereRuleMode};
use num_complex::Complex64;

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let s: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (d / s).sqrt()
}

fn main() -> d2lab::Result<()> {
    let level: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(18);
    let n = 3;
    let k = Kernels::new(n)?;
    let ball = Ball::new(vec![0.0; 6], 1.0)?;
    let t = Instant::now();
    let qmc = SphereRule::new(6, level, SphereRuleMode::QuasiRandom, 0)?;
    println!("quasi-random rule with {} nodes", qmc.len());

    let s = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)];
    let got = bm_boundary(&k, |_: &[f64]| s.clone(), &ball.center, &ball, &qmc)?;
    println!("constant at centre: relative error {:.3e}", rel(&got, &s));

    let zeta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
    let pw = PlaneWaveSpec::with_null_spinor(n, zeta, Complex64::new(0.0, 0.7))?;
    let inside = [vec![0.0; 6], vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0], vec![0.0, 0.2, -0.2, 0.2, 0.2, -0.2]];
    for x in &inside {
        let got = bm_boundary(&k, |y: &[f64]| pw.value(y), x, &ball, &qmc)?;
        println!("plane wave at |x| = {:.3}: relative error {:.3e}", ball.distance_to_center(x), rel(&got, &pw.value(x)));
    }
    println!("elapsed {:.1?}", t.elapsed());

    println!("product-Gauss convergence at |x| = 0.5:");
    for q in [2, 4, 6, 8, 10] {
        let rule = SphereRule::new(6, q, SphereRuleMode::ProductGauss, 0)?;
        let got = bm_boundary(&k, |y: &[f64]| pw.value(y), &inside[1], &ball, &rule)?;
        println!("  q = {q:2} ({:7} nodes): {:.3e}", rule.len(), rel(&got, &pw.value(&inside[1])));
    }
    Ok(())
}
