use d2lab::clifford::{CliffordVectors, Parity};
use d2lab::diffop::{build_complex, Space};
use d2lab::field::{apply_fd, monogenic_plane_wave, AnalyticGrid, Bump, GridFunction, GridSpec, PlaneWaveSpec, ValueSpace};
use d2lab::integrate::{solve_d0, SolveOptions};
use d2lab::kernels::Kernels;
use num_complex::Complex64;

fn spinor() -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5)]
}

fn d0_of_bump(spec: &GridSpec, cliff: &CliffordVectors, b: &Bump) -> GridFunction {
    let s = spinor();
    let space = ValueSpace::Spinor(Space::new(2, Parity::minus(3)));
    GridFunction::from_fn(spec.clone(), space, |x, out| out.copy_from_slice(&b.d0_spinor(cliff, &s, x))).unwrap()
}

#[test]
fn d1_annihilates_exact_d0_images_at_rate_h2() {
    let cliff = CliffordVectors::new(3).unwrap();
    let b = Bump::new(vec![0.1, 0.0, -0.1, 0.0, 0.2, 0.0], 3.0).unwrap();
    let d1 = build_complex(3).unwrap().d1;
    let ratio = |ppa| {
        let spec = GridSpec::cube(3, &[0.0; 6], 0.5, ppa).unwrap();
        let f = d0_of_bump(&spec, &cliff, &b);
        apply_fd(&d1, &f, 2).unwrap().max_norm() / f.max_norm()
    };
    let coarse = ratio(6);
    let fine = ratio(11);
    assert!(fine < 1e-3, "{fine}");
    let drop = coarse / fine;
    assert!((3.2..=4.8).contains(&drop), "ratio drop {drop}");
}

#[test]
fn plane_wave_monogenicity_converges_at_rate_h2() {
    let zeta = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
    let pw = PlaneWaveSpec::with_null_spinor(3, zeta, Complex64::new(0.5, 0.0)).unwrap();
    let d0 = build_complex(3).unwrap().d0;
    let ratio = |ppa| {
        let spec = GridSpec::cube(3, &[0.0; 6], 0.5, ppa).unwrap();
        let f = monogenic_plane_wave(&spec, &pw).unwrap();
        apply_fd(&d0, &f, 2).unwrap().max_norm() / f.max_norm()
    };
    let drop = ratio(6) / ratio(11);
    assert!((3.2..=4.8).contains(&drop), "ratio drop {drop}");
}

#[test]
fn solve_is_translation_covariant() {
    let k = Kernels::new(3).unwrap();
    let s = spinor();
    let shift = [0.5, -0.25, 1.0, 0.0, 0.75, -1.5];
    let pts = [vec![0.2, 0.0, -0.1, 0.1, 0.0, 0.3], vec![-0.3, 0.1, 0.0, 0.0, 0.2, 0.0]];
    let opts = SolveOptions {
        far_radii: vec![4.0, 8.0],
        far_directions: 2,
        ..SolveOptions::default()
    };
    let run = |c: [f64; 6]| {
        let b = Bump::new(c.to_vec(), 1.0).unwrap();
        let spec = GridSpec::cube(3, &c, 1.0, 8).unwrap();
        let space = ValueSpace::Spinor(Space::new(2, Parity::minus(3)));
        let f = AnalyticGrid::new(spec, space, |x: &[f64], out: &mut [Complex64]| {
            out.copy_from_slice(&b.d0_spinor(k.clifford(), &s, x));
        });
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().zip(&c).map(|(a, b)| a + b).collect()).collect();
        solve_d0(&f, &k, &moved, &opts).unwrap().u
    };
    let a = run([0.0; 6]);
    let b = run(shift);
    for (ua, ub) in a.iter().zip(&b) {
        for (x, y) in ua.iter().zip(ub) {
            assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "{x} vs {y}");
        }
    }
}
