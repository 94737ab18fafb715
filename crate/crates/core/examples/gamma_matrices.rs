//! Gamma matrices on the spin modules and their exact Clifford relations.
//!
//! `cargo run --example gamma_matrices -- [n]`

use d2lab::clifford::{check_algebra, gamma, spinor_dim, Parity};

fn main() -> d2lab::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let plus = Parity::plus(n);
    println!("n = {n}: dim S+ = dim S- = {}", spinor_dim(n));
    for j in 1..=n {
        let g = gamma(n, j, plus)?;
        println!("γ_{j} : S+ → S-");
        for r in 0..g.rows() {
            let row: Vec<String> = (0..g.cols()).map(|c| format!("{:>3}", g.get(r, c).to_string())).collect();
            println!("  [{}]", row.join(" "));
        }
    }
    for m in 2..=8 {
        let c = check_algebra(m)?;
        println!(
            "n = {m}: anticommutation {} skew-adjoint {} unitary {} grading {} entries {}",
            c.anticommutation, c.skew_adjoint, c.unitary, c.grading, c.entry_alphabet
        );
    }
    Ok(())
}
