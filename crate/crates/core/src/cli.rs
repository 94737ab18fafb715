//! The `d2lab` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::clifford::{check_algebra, GammaJson, Parity};
use crate::diffop::{build_complex, verify_complex, Space};
use crate::error::{Error, Result};
use crate::field::{apply_fd, monogenic_plane_wave, read_grid, write_grid, Bump, GridFunction, GridSpec, PlaneWaveSpec, ValueSpace};
use crate::integrate::{bm_boundary, hartogs_extend, kernel_family_field, moment_pairing, solve_d0, Ball, HartogsGeometry, SolveOptions};
use crate::kernels::{check_flux, check_symbolic_h, decay_probe, Kernels};
use crate::quadrature::{SphereRule, SphereRuleMode};
use crate::report::RunReport;
use crate::symbols::sample_exactness;

pub const THREADS_ENV: &str = "D2LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "d2lab", version, about = "Dirac complex of two vector variables: checks and integral formulas")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Dimension of each vector variable.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Quadrature level: log2 of the node count for quasi-random rules.
    #[arg(long, global = true)]
    pub level: Option<u32>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    #[arg(long, global = true)]
    pub memory_cap_mb: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact gamma-matrix identities.
    VerifyAlgebra,
    /// Exact operator identities of the complex.
    VerifyComplex,
    /// Symbol exactness at random unit covectors.
    VerifyEllipticity,
    Kernels {
        #[command(subcommand)]
        action: KernelsAction,
    },
    Field {
        #[command(subcommand)]
        action: FieldAction,
    },
    /// Bochner–Martinelli reproduction on a ball.
    BmReproduce {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Solve D0 u = f for a stored right-hand side.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// JSON array of points.
        #[arg(long)]
        points: PathBuf,
        /// Override the default 10 h² compatibility threshold.
        #[arg(long)]
        compat_threshold: Option<f64>,
    },
    /// Extend a monogenic plane wave across a ball.
    HartogsDemo,
    /// Boundary pairing controls.
    Moment,
}

#[derive(Subcommand, Debug)]
pub enum KernelsAction {
    /// Constants, flux oracle, symbolic comparison and decay slopes.
    Check,
}

#[derive(Subcommand, Debug)]
pub enum FieldAction {
    /// Bump times a spinor, or with `--d0` its exact D0 image.
    GenBump {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        d0: bool,
    },
    GenPlanewave {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
    Apply {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: OpName,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpName {
    #[value(name = "D0")]
    D0,
    #[value(name = "D1")]
    D1,
    #[value(name = "D2")]
    D2,
}

/// Exit code and the aggregate report, if one was produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub report: Option<RunReport>,
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::InvalidArgument(_) | Error::InvalidDimension(_) | Error::IndexOutOfRange { .. })
}

/// Parse `argv` (program name first), run, and write the report.
pub fn run<I, T>(argv: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return RunOutcome { code, report: None };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return RunOutcome { code: 2, report: None };
    }
    let start = Instant::now();
    let mut lines = Vec::new();
    let outcome = dispatch(&cli, &mut lines);
    let mut report = match outcome {
        Ok(r) => r,
        Err(e) if usage_error(&e) => {
            eprintln!("error: {e}");
            return RunOutcome { code: 2, report: None };
        }
        Err(e) => {
            let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
            let mut r = RunReport::new(command_name(&cli.command), json!({ "argv": args }), Some(cli.global.seed));
            r.passed = false;
            let _ = r.result("error", e.to_string());
            r
        }
    };
    report.timing.wall_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = emit(cli.global.report.as_deref(), &lines, &report) {
        eprintln!("error: {e}");
        return RunOutcome { code: 1, report: Some(report) };
    }
    RunOutcome {
        code: if report.passed { 0 } else { 1 },
        report: Some(report),
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let t: usize = v
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV}={v}")))?;
        // A pool that already exists keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

fn emit(path: Option<&Path>, lines: &[Value], report: &RunReport) -> Result<()> {
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    for l in lines {
        serde_json::to_writer(&mut w, l)?;
        writeln!(w)?;
    }
    report.write_json(&mut w)?;
    w.flush()?;
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyAlgebra => "verify-algebra",
        Command::VerifyComplex => "verify-complex",
        Command::VerifyEllipticity => "verify-ellipticity",
        Command::Kernels { .. } => "kernels check",
        Command::Field { action } => match action {
            FieldAction::GenBump { .. } => "field gen-bump",
            FieldAction::GenPlanewave { .. } => "field gen-planewave",
            FieldAction::Apply { .. } => "field apply",
        },
        Command::BmReproduce { .. } => "bm-reproduce",
        Command::Solve { .. } => "solve",
        Command::HartogsDemo => "hartogs-demo",
        Command::Moment => "moment",
    }
}

fn dispatch(cli: &Cli, lines: &mut Vec<Value>) -> Result<RunReport> {
    let g = &cli.global;
    match &cli.command {
        Command::VerifyAlgebra => verify_algebra_cmd(g),
        Command::VerifyComplex => verify_complex_cmd(g),
        Command::VerifyEllipticity => verify_ellipticity_cmd(g, lines),
        Command::Kernels {
            action: KernelsAction::Check,
        } => kernels_cmd(g),
        Command::Field { action } => field_cmd(g, action),
        Command::BmReproduce { radius } => bm_cmd(g, *radius),
        Command::Solve {
            input,
            points,
            compat_threshold,
        } => solve_cmd(g, input, points, *compat_threshold),
        Command::HartogsDemo => hartogs_cmd(g),
        Command::Moment => moment_cmd(g),
    }
}

fn dims(g: &Global, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    match g.n {
        Some(n) => vec![n],
        None => default.collect(),
    }
}

fn require_n_at_least(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

fn verify_algebra_cmd(g: &Global) -> Result<RunReport> {
    let ns = dims(g, 2..=8);
    let mut r = RunReport::new("verify-algebra", json!({ "n": ns }), None);
    for &n in &ns {
        let c = check_algebra(n)?;
        r.exact(&format!("n={n}: anticommutation"), c.anticommutation);
        r.exact(&format!("n={n}: skew-adjoint"), c.skew_adjoint);
        r.exact(&format!("n={n}: unitary"), c.unitary);
        r.exact(&format!("n={n}: grading"), c.grading);
        r.exact(&format!("n={n}: entries in {{0, ±1, ±i}}"), c.entry_alphabet);
    }
    if let [n] = ns[..] {
        let gs: Vec<GammaJson> = (1..=n).map(|j| GammaJson::new(n, j)).collect::<Result<_>>()?;
        r.result("gammas", gs)?;
    }
    Ok(r)
}

fn verify_complex_cmd(g: &Global) -> Result<RunReport> {
    let ns = dims(g, 2..=6);
    let mut r = RunReport::new("verify-complex", json!({ "n": ns }), None);
    for &n in &ns {
        for c in verify_complex(n)? {
            r.exact(&format!("n={n}: {}", c.name), c.passed);
        }
    }
    if let [n] = ns[..] {
        let c = build_complex(n)?;
        r.result("D0", c.d0.to_json())?;
        r.result("D1", c.d1.to_json())?;
        r.result("D2", c.d2.to_json())?;
    }
    Ok(r)
}

fn verify_ellipticity_cmd(g: &Global, lines: &mut Vec<Value>) -> Result<RunReport> {
    let ns = dims(g, 3..=6);
    let samples = g.samples.unwrap_or(1000);
    let tol = g.tol.unwrap_or(1e-12);
    let mut r = RunReport::new("verify-ellipticity", json!({ "n": ns, "samples": samples, "tol": tol }), Some(g.seed));
    let mut summaries = Vec::new();
    for &n in &ns {
        let (reports, summary) = sample_exactness(n, samples, g.seed, tol)?;
        for rep in &reports {
            lines.push(serde_json::to_value(rep)?);
        }
        r.at_most(&format!("n={n}: covectors failing rank (d,d,d) / ker σ1 = d"), summary.failures as f64, 0.0);
        r.at_most(&format!("n={n}: composition residual"), summary.max_residual, tol);
        summaries.push(summary);
    }
    r.result("summaries", summaries)?;
    Ok(r)
}

fn kernels_cmd(g: &Global) -> Result<RunReport> {
    let n = g.n.unwrap_or(3);
    let points = g.samples.unwrap_or(100);
    let tol = g.tol.unwrap_or(1e-12);
    let radii = [0.5, 1.0, 2.0];
    let mut r = RunReport::new("kernels check", json!({ "n": n, "points": points, "tol": tol, "flux_radii": radii }), Some(g.seed));
    let k = Kernels::new(n)?;
    r.result("constants", k.constants())?;
    let flux = check_flux(n, &radii, 1e-6)?;
    r.at_most("flux |∮ ∂_r Δ g0 dS − 1|", flux.max_error, flux.tol);
    r.result("flux", &flux)?;
    let sym = check_symbolic_h(n, points, g.seed, tol)?;
    r.at_most("H against D0* D0 D0* G1 (relative)", sym.max_relative_error, sym.tol);
    r.result("symbolic_h", &sym)?;
    let mut decays = Vec::new();
    for m in 0..=3 {
        let d = decay_probe(n, m, &[0.5, 1.0, 2.0, 4.0], 5, g.seed)?;
        r.at_most(&format!("order-{m} derivative decay slope deviation"), d.max_deviation, d.tol);
        decays.push(d);
    }
    r.result("decay", decays)?;
    Ok(r)
}

fn grid_spec(g: &Global, n: usize, half_width: f64) -> Result<GridSpec> {
    let spec = GridSpec::cube(n, &vec![0.0; 2 * n], half_width, g.grid_points.unwrap_or(16))?;
    Ok(match g.memory_cap_mb {
        Some(c) => spec.with_memory_cap_mb(c),
        None => spec,
    })
}

/// `(1, i/2, 0, …)` normalised, in `S+`.
fn default_spinor(n: usize) -> Vec<Complex64> {
    let d = Space::new(1, Parity::plus(n)).dim(n);
    let mut s = vec![Complex64::new(0.0, 0.0); d];
    s[0] = Complex64::new(1.0, 0.0);
    if d > 1 {
        s[1] = Complex64::new(0.0, 0.5);
    }
    s
}

fn default_plane_wave(n: usize, scale: f64, lambda: Complex64) -> Result<PlaneWaveSpec> {
    let mut zeta = vec![Complex64::new(0.0, 0.0); n];
    zeta[0] = Complex64::new(scale, 0.0);
    zeta[1] = Complex64::new(0.0, scale);
    PlaneWaveSpec::with_null_spinor(n, zeta, lambda)
}

fn field_cmd(g: &Global, action: &FieldAction) -> Result<RunReport> {
    let n = g.n.unwrap_or(3);
    require_n_at_least(n, 2)?;
    match action {
        FieldAction::GenBump { out, radius, d0 } => {
            let spec = grid_spec(g, n, *radius)?;
            let s = default_spinor(n);
            let b = Bump::new(vec![0.0; 2 * n], *radius)?;
            let f = if *d0 {
                let k = Kernels::new(n)?;
                let space = ValueSpace::Spinor(Space::new(2, Parity::minus(n)));
                spec.check_memory(space.dim(n))?;
                GridFunction::from_fn(spec.clone(), space, |x, o| o.copy_from_slice(&b.d0_spinor(k.clifford(), &s, x)))?
            } else {
                crate::field::bump(&spec, &vec![0.0; 2 * n], *radius, &s)?
            };
            write_grid(out, &f)?;
            let mut r = RunReport::new("field gen-bump", json!({ "n": n, "radius": radius, "d0": d0, "points_per_axis": spec.points_per_axis() }), None);
            r.result("max_norm", f.max_norm())?;
            r.artifacts.push(out.display().to_string());
            Ok(r)
        }
        FieldAction::GenPlanewave { out, half_width, lambda } => {
            let spec = grid_spec(g, n, *half_width)?;
            let pw = default_plane_wave(n, 1.0, Complex64::new(*lambda, 0.0))?;
            let f = monogenic_plane_wave(&spec, &pw)?;
            write_grid(out, &f)?;
            let mut r = RunReport::new("field gen-planewave", json!({ "n": n, "half_width": half_width, "plane_wave": pw }), None);
            r.result("max_norm", f.max_norm())?;
            r.artifacts.push(out.display().to_string());
            Ok(r)
        }
        FieldAction::Apply { input, op, out, order } => {
            if !matches!(order, 2 | 4) {
                return Err(Error::InvalidArgument(format!("order {order}; use 2 or 4")));
            }
            let f = read_grid(input, g.memory_cap_mb.unwrap_or(crate::field::DEFAULT_MEMORY_CAP_MB))?;
            let c = build_complex(f.spec().n())?;
            let p = match op {
                OpName::D0 => &c.d0,
                OpName::D1 => &c.d1,
                OpName::D2 => &c.d2,
            };
            let res = apply_fd(p, &f, *order)?;
            write_grid(out, &res)?;
            let mut r = RunReport::new("field apply", json!({ "op": format!("{op:?}"), "order": order, "input": input }), None);
            r.result("input_max_norm", f.max_norm())?;
            r.result("output_max_norm", res.max_norm())?;
            r.result("valid_margin", res.valid_margin())?;
            r.artifacts.push(out.display().to_string());
            Ok(r)
        }
    }
}

fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let s: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (d / s).sqrt()
}

fn bm_cmd(g: &Global, radius: f64) -> Result<RunReport> {
    let n = g.n.unwrap_or(3);
    require_n_at_least(n, 3)?;
    let level = g.level.unwrap_or(18);
    let tol = g.tol.unwrap_or(1e-2);
    let mut r = RunReport::new("bm-reproduce", json!({ "n": n, "radius": radius, "level": level, "mode": "quasi-random", "tol": tol }), Some(g.seed));
    let k = Kernels::new(n)?;
    let ball = Ball::new(vec![0.0; 2 * n], radius)?;
    let rule = SphereRule::new(2 * n, level, SphereRuleMode::QuasiRandom, g.seed)?;
    let s = default_spinor(n);
    let c = bm_boundary(&k, |_: &[f64]| s.clone(), &ball.center, &ball, &rule)?;
    r.at_most("constant spinor at centre (relative)", rel_err(&c, &s), 1e-3);
    let pw = default_plane_wave(n, 1.0 / radius, Complex64::new(0.0, 0.7))?;
    let mut off = vec![0.0; 2 * n];
    off[0] = radius / 2.0;
    for (name, x) in [("centre", ball.center.clone()), ("|x − c| = r/2", off)] {
        let v = bm_boundary(&k, |y: &[f64]| pw.value(y), &x, &ball, &rule)?;
        r.at_most(&format!("plane wave at {name} (relative)"), rel_err(&v, &pw.value(&x)), tol);
    }
    r.result("constants", k.constants())?;
    r.result("nodes", rule.len())?;
    Ok(r)
}

fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>> {
    let pts: Vec<Vec<f64>> = serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?;
    if pts.is_empty() || pts.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument(format!("points must be a nonempty list of {dim}-vectors")));
    }
    Ok(pts)
}

fn solve_cmd(g: &Global, input: &Path, points: &Path, compat_threshold: Option<f64>) -> Result<RunReport> {
    let f = read_grid(input, g.memory_cap_mb.unwrap_or(crate::field::DEFAULT_MEMORY_CAP_MB))?;
    let n = f.spec().n();
    if g.n.is_some_and(|m| m != n) {
        return Err(Error::InvalidArgument(format!("--n disagrees with the grid (n = {n})")));
    }
    let pts = read_points(points, 2 * n)?;
    let tol = g.tol.unwrap_or(0.05);
    let opts = SolveOptions {
        compat_threshold,
        seed: g.seed,
        ..SolveOptions::default()
    };
    let k = Kernels::new(n)?;
    let rep = solve_d0(&f, &k, &pts, &opts)?;
    let mut r = RunReport::new("solve", json!({ "input": input, "points": points, "tol": tol, "options": opts }), Some(g.seed));
    r.at_most("D1 f compatibility ratio", rep.compatibility.ratio, rep.compatibility.threshold);
    r.at_most("|D0 u − f| / |f|", rep.residual, tol);
    r.result("solve", &rep)?;
    Ok(r)
}

fn pad(n: usize, head: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; 2 * n];
    for (i, v) in head.iter().enumerate() {
        x[i % (2 * n)] = *v;
    }
    x
}

fn hartogs_cmd(g: &Global) -> Result<RunReport> {
    let n = g.n.unwrap_or(3);
    require_n_at_least(n, 3)?;
    let ppa = g.grid_points.unwrap_or(16);
    let tol = g.tol.unwrap_or(0.05);
    let geom = HartogsGeometry {
        center: vec![0.0; 2 * n],
        k_radius: 0.4,
        inner: 0.5,
        outer: 1.0,
        omega_radius: 1.5,
    };
    grid_spec(g, n, geom.outer)?
        .with_memory_cap_mb(g.memory_cap_mb.unwrap_or(crate::field::DEFAULT_MEMORY_CAP_MB))
        .check_memory(1)?;
    let k = Kernels::new(n)?;
    let pw = default_plane_wave(n, 0.6, Complex64::new(0.5, 0.0))?;
    let points: Vec<Vec<f64>> = [
        &[0.0][..],
        &[0.2],
        &[0.0, -0.1, 0.1, 0.0, 0.1],
        &[0.1, 0.1, 0.0, -0.1, 0.0, 0.1],
        &[0.0, 0.0, 0.0, 0.0, 0.0, -0.25],
    ]
    .iter()
    .map(|h| pad(n, h))
    .collect();
    let opts = SolveOptions {
        seed: g.seed,
        ..SolveOptions::default()
    };
    let truth = |x: &[f64]| pw.value(x);
    let rep = hartogs_extend(&k, |x: &[f64]| pw.value(x), &geom, ppa, &points, &opts, Some(&truth))?;
    let mut r = RunReport::new("hartogs-demo", json!({ "n": n, "points_per_axis": ppa, "tol": tol, "plane_wave": pw }), Some(g.seed));
    r.at_most("D1 f compatibility ratio", rep.compatibility.ratio, rep.compatibility.threshold);
    r.at_most("extension against plane wave inside K (relative)", rep.max_relative_error.unwrap_or(f64::NAN), tol);
    r.result("hartogs", &rep)?;
    Ok(r)
}

fn moment_cmd(g: &Global) -> Result<RunReport> {
    let n = g.n.unwrap_or(3);
    require_n_at_least(n, 3)?;
    let level = g.level.unwrap_or(18);
    let tol = g.tol.unwrap_or(1e-2);
    let kernel_threshold = 1e-3;
    let k = Kernels::new(n)?;
    let ball = Ball::new(vec![0.0; 2 * n], 1.0)?;
    let rule = SphereRule::new(2 * n, level, SphereRuleMode::QuasiRandom, g.seed)?;
    let mut pole = vec![0.0; 2 * n];
    pole[0] = 2.0;
    let w = default_spinor(n);
    let gf = kernel_family_field(&k, pole, w);
    let pw = default_plane_wave(n, 1.0, Complex64::new(0.0, 0.7))?;
    let pos = moment_pairing(&k, |y: &[f64]| pw.value(y), &gf, &ball, &rule, kernel_threshold, g.seed)?;
    let x0 = pad(n, &[0.1, -0.2, 0.0, 0.3, 0.0, 0.1]);
    let column = |y: &[f64]| -> Vec<Complex64> {
        let z: Vec<f64> = y.iter().zip(&x0).map(|(a, b)| a - b).collect();
        match k.h_kernel(&z) {
            Ok(h) => (0..h.rows()).map(|i| *h.get(i, 0)).collect(),
            Err(_) => vec![Complex64::new(f64::NAN, 0.0); k.dim_plus()],
        }
    };
    let neg = moment_pairing(&k, column, &gf, &ball, &rule, kernel_threshold, g.seed)?;
    let mut r = RunReport::new("moment", json!({ "n": n, "level": level, "tol": tol, "kernel_threshold": kernel_threshold }), Some(g.seed));
    r.at_most("monogenic data: normalized pairing", pos.normalized, tol);
    r.at_least("kernel column singular inside: normalized pairing", neg.normalized, 10.0 * tol);
    r.result("positive", &pos)?;
    r.result("negative", &neg)?;
    Ok(r)
}
