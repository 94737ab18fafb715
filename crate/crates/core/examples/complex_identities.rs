//! Build `D0, D1, D2` and check the operator identities of the complex exactly.
//!
//! `cargo run --release --example complex_identities -- [n]`

use d2lab::diffop::{build_complex, verify_complex};

fn main() -> d2lab::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let c = build_complex(n)?;
    for (l, op) in [&c.d0, &c.d1, &c.d2].into_iter().enumerate() {
        println!(
            "D{l}: {} → {} components, {} derivative terms of degree ≤ {}",
            op.domain().dim(n),
            op.codomain().dim(n),
            op.num_terms(),
            op.max_degree()
        );
    }
    for check in verify_complex(n)? {
        println!("  {:<24} {}", check.name, if check.passed { "ok" } else { "FAILED" });
    }
    Ok(())
}
