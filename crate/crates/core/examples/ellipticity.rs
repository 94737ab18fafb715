//! Exactness of the symbol sequence at random unit covectors.
//!
//! `cargo run --release --example ellipticity -- [samples]`

use d2lab::symbols::{check_exactness, euler_characteristic, sample_exactness, Covector};

fn main() -> d2lab::Result<()> {
    let samples: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    for n in 3..=6 {
        let (_, s) = sample_exactness(n, samples, 7, 1e-12)?;
        println!(
            "n = {n}: {} covectors, {} failures, max residual {:.2e}, min σ_min(σ0) {:.3}",
            s.samples, s.failures, s.max_residual, s.min_singular_sigma0
        );
    }
    // A covector vanishing on one variable: still exact.
    let nu = Covector::unit(4, 1, 2);
    let r = check_exactness(4, &nu, 1e-12)?;
    println!("ν = e_{{1,2}}, n = 4: ranks ({}, {}, {}), dim ker σ1 = {}", r.rank_sigma0, r.rank_sigma1, r.rank_sigma2, r.dim_ker_sigma1);
    println!("alternating sum of dimensions, n = 4: {}", euler_characteristic(4)?);
    Ok(())
}
