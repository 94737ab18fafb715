//! Boundary pairing against kernel-family fields: zero for globally monogenic data,
//! visibly nonzero for a kernel column singular inside the ball.
//!
//! `cargo run --release --example moment_pairing`

use d2lab::field::PlaneWaveSpec;
use d2lab::integrate::{kernel_family_field, moment_pairing, Ball};
use d2lab::kernels::Kernels;
use d2lab::quadrature::{SphereRule, SphereRuleMode};
use num_complex::Complex64;

fn main() -> d2lab::Result<()> {
    let n = 3;
    let k = Kernels::new(n)?;
    let ball = Ball::new(vec![0.0; 6], 1.0)?;
    let rule = SphereRule::new(6, 18, SphereRuleMode::QuasiRandom, 0)?;
    let w = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut pole = vec![0.0; 6];
    pole[0] = 2.0;
    let g = kernel_family_field(&k, pole, w);

    let zeta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
    let pw = PlaneWaveSpec::with_null_spinor(n, zeta, Complex64::new(0.0, 0.7))?;
    let pos = moment_pairing(&k, |y: &[f64]| pw.value(y), &g, &ball, &rule, 1e-3, 0)?;
    println!("monogenic data:   |pairing| = {:.3e}, normalized {:.3e}", pos.value.norm(), pos.normalized);

    let x0 = vec![0.1, -0.2, 0.0, 0.3, 0.0, 0.1];
    let column = |y: &[f64]| {
        let z: Vec<f64> = y.iter().zip(&x0).map(|(a, b)| a - b).collect();
        let h = k.h_kernel(&z).expect("off the pole");
        (0..h.rows()).map(|r| *h.get(r, 0)).collect::<Vec<Complex64>>()
    };
    let neg = moment_pairing(&k, column, &g, &ball, &rule, 1e-3, 0)?;
    println!("singular column:  |pairing| = {:.3e}, normalized {:.3e}", neg.value.norm(), neg.normalized);
    println!("kernel condition ratio {:.3e}", pos.kernel_ratio);
    Ok(())
}
