//! Fundamental solution of `Δ²`, the kernel `H = D0* D0 D0* G1`, and their oracles.
//!
//! `cargo run --release --example kernels`

use d2lab::kernels::{check_flux, check_symbolic_h, decay_probe, Kernels};

fn main() -> d2lab::Result<()> {
    for n in [3, 4, 5] {
        let k = Kernels::new(n)?;
        let c = k.constants();
        println!("n = {n}: N = {}, σ = {:.6}, c_g0 = {:.6e}, c_bm = {:.6e}", c.big_n, c.sphere_area, c.c_g0, c.c_bm);
        let mut x = vec![0.0; 2 * n];
        x[0] = 1.0;
        println!("  g0(e_1) = {:.6e}", k.g0(&x)?);
        let flux = check_flux(n, &[0.5, 1.0, 2.0], 1e-6)?;
        for r in &flux.records {
            println!("  flux at r = {}: analytic {:.12}, quadrature {:.9}", r.radius, r.analytic, r.quadrature);
        }
    }
    let sym = check_symbolic_h(3, 100, 1, 1e-12)?;
    println!("H against the symbolic composition: max relative error {:.2e}", sym.max_relative_error);
    for m in 0..=3 {
        let d = decay_probe(3, m, &[0.5, 1.0, 2.0, 4.0], 4, 2)?;
        println!("order-{m} derivatives of g0: slope {:.4} (expected {})", d.slopes[0], d.expected);
    }
    Ok(())
}
