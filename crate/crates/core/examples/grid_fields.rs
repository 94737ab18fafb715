//! Grid fields: a monogenic plane wave, finite-difference operators, and the grid file format.
//!
//! `cargo run --release --example grid_fields`

use d2lab::diffop::build_complex;
use d2lab::field::{apply_fd, monogenic_plane_wave, read_grid, write_grid, GridSpec, PlaneWaveSpec};
use num_complex::Complex64;

fn main() -> d2lab::Result<()> {
    let n = 3;
    let zeta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
    let pw = PlaneWaveSpec::with_null_spinor(n, zeta, Complex64::new(0.5, 0.0))?;
    let d0 = build_complex(n)?.d0;
    let mut last = None;
    for ppa in [6, 11] {
        let spec = GridSpec::cube(n, &[0.0; 6], 0.5, ppa)?;
        let f = monogenic_plane_wave(&spec, &pw)?;
        let g = apply_fd(&d0, &f, 2)?;
        let ratio = g.max_norm() / f.max_norm();
        println!("{ppa}/axis (h = {:.3}): max |D0_h f| / max |f| = {ratio:.3e}", spec.spacing()[0]);
        if let Some(prev) = last {
            println!("  ratio drop under halving h: {:.2}", prev / ratio);
        }
        last = Some(ratio);
        if ppa == 6 {
            let path = std::env::temp_dir().join("plane_wave.d2grid");
            write_grid(&path, &f)?;
            let back = read_grid(&path, 64)?;
            println!("  wrote and reread {}: max difference {:e}", path.display(), back.max_diff(&f)?);
            std::fs::remove_file(path)?;
        }
    }
    Ok(())
}
