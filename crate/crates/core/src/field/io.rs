use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec, ValueSpace};
use crate::clifford::Parity;
use crate::diffop::Space;
use crate::error::{Error, Result};

/// First line of a `.d2grid` file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub version: u32,
    pub n: usize,
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub points_per_axis: usize,
    pub value_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_space: Option<ValueSpace>,
    #[serde(default)]
    pub valid_margin: usize,
}

fn infer_space(n: usize, value_dim: usize) -> Result<ValueSpace> {
    let plus = Space::new(1, Parity::plus(n));
    let pair = Space::new(2, Parity::minus(n));
    if value_dim == plus.dim(n) {
        Ok(ValueSpace::Spinor(plus))
    } else if value_dim == pair.dim(n) {
        Ok(ValueSpace::Spinor(pair))
    } else if value_dim == 1 {
        Ok(ValueSpace::Scalar)
    } else {
        Err(Error::Format(format!("cannot place value_dim {value_dim} for n = {n}")))
    }
}

pub fn write_grid_to(w: &mut impl Write, f: &GridFunction) -> Result<()> {
    let spec = f.spec();
    let header = GridHeader {
        version: 1,
        n: spec.n(),
        origin: spec.origin().to_vec(),
        extent: spec.extent().to_vec(),
        points_per_axis: spec.points_per_axis(),
        value_dim: f.value_dim(),
        value_space: Some(f.value_space()),
        valid_margin: f.valid_margin(),
    };
    serde_json::to_writer(&mut *w, &header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(f.samples().len() * 16);
    for z in f.samples() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn write_grid(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_grid_to(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn read_grid_from(r: impl Read, memory_cap_mb: u64) -> Result<GridFunction> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: GridHeader = serde_json::from_str(line.trim_end())?;
    if header.version != 1 {
        return Err(Error::Format(format!("unsupported version {}", header.version)));
    }
    let spec = GridSpec::new(header.n, header.origin, header.extent, header.points_per_axis)?
        .with_memory_cap_mb(memory_cap_mb);
    let value_space = match header.value_space {
        Some(v) => v,
        None => infer_space(header.n, header.value_dim)?,
    };
    if value_space.dim(header.n) != header.value_dim {
        return Err(Error::Format("value_dim disagrees with value_space".into()));
    }
    spec.check_memory(header.value_dim)?;
    let count = spec.num_points() * header.value_dim;
    let mut bytes = Vec::with_capacity(count * 16);
    r.read_to_end(&mut bytes)?;
    if bytes.len() != count * 16 {
        return Err(Error::Format(format!("expected {} payload bytes, found {}", count * 16, bytes.len())));
    }
    let samples = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    GridFunction::from_samples(spec, value_space, samples, header.valid_margin)
}

pub fn read_grid(path: impl AsRef<Path>, memory_cap_mb: u64) -> Result<GridFunction> {
    read_grid_from(File::open(path)?, memory_cap_mb)
}
