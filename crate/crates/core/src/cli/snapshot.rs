//! Binary snapshot files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! "NLS6SNAP"            8 bytes
//! version               u32
//! grid type             u8   (0 radial, 1 tensor)
//! d                     u32
//! n                     u64  (total samples)
//! r_max or L            f64
//! kappa                 f64
//! t                     f64
//! u                     n × (re f64, im f64)
//! v                     n × (re f64, im f64)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{FieldPair, Grid, RadialGrid, TensorGrid};
use crate::{Error, Result};

pub const MAGIC: &[u8; 8] = b"NLS6SNAP";
pub const VERSION: u32 = 1;

pub fn encode(t: f64, fp: &FieldPair, out: &mut impl Write) -> Result<()> {
    let grid = fp.grid();
    let (kind, extent) = match grid {
        Grid::Radial(g) => (0u8, g.r_max()),
        Grid::Tensor(g) => (1u8, g.l()),
    };
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[kind])?;
    out.write_all(&(grid.d() as u32).to_le_bytes())?;
    out.write_all(&(grid.len() as u64).to_le_bytes())?;
    for x in [extent, fp.kappa(), t] {
        out.write_all(&x.to_le_bytes())?;
    }
    for z in fp.u().iter().chain(fp.v()) {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn take<const N: usize>(input: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf).map_err(|e| Error::Snapshot(format!("truncated file: {e}")))?;
    Ok(buf)
}

fn f64_at(input: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(take(input)?))
}

pub fn decode(input: &mut impl Read) -> Result<(f64, FieldPair)> {
    if &take::<8>(input)? != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(input)?);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let [kind] = take::<1>(input)?;
    let d = u32::from_le_bytes(take(input)?) as usize;
    let n = u64::from_le_bytes(take(input)?) as usize;
    let extent = f64_at(input)?;
    let kappa = f64_at(input)?;
    let t = f64_at(input)?;
    let grid: Grid = match kind {
        0 => RadialGrid::new(d, n, extent)?.into(),
        1 => {
            let m = (n as f64).powf(1.0 / d.max(1) as f64).round() as usize;
            let g = TensorGrid::new(d, m, extent)?;
            if g.len() != n {
                return Err(Error::Snapshot(format!("{n} samples do not form a {d}-dimensional tensor grid")));
            }
            g.into()
        }
        other => return Err(Error::Snapshot(format!("unknown grid type {other}"))),
    };
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..2 * n {
        let re = f64_at(input)?;
        let im = f64_at(input)?;
        values.push(Complex64::new(re, im));
    }
    let v = values.split_off(n);
    let fp = FieldPair::new(Arc::new(grid), kappa, values, v)?;
    Ok((t, fp))
}

pub fn write(path: &Path, t: f64, fp: &FieldPair) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    encode(t, fp, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read(path: &Path) -> Result<(f64, FieldPair)> {
    decode(&mut BufReader::new(File::open(path)?))
}
