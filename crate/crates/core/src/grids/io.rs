//! Binary and CSV serialisation of sampled functions.
//!
//! Binary layout, all little-endian: the magic bytes `HYSF`, a `u32`
//! version, then d, N and L as `f64`, then re/im `f64` pairs in row-major
//! order.

use super::grid::Grid;
use super::sampled::SampledFunction;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const MAGIC: &[u8; 4] = b"HYSF";
pub const VERSION: u32 = 1;

pub fn write_binary<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    let g = f.grid();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for x in [g.dim() as f64, g.points_per_axis() as f64, g.half_width()] {
        w.write_all(&x.to_le_bytes())?;
    }
    for z in f.values() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_binary<R: Read>(mut r: R) -> Result<SampledFunction> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let d = read_f64(&mut r)?;
    let n = read_f64(&mut r)?;
    let l = read_f64(&mut r)?;
    if d.fract() != 0.0 || n.fract() != 0.0 || d < 1.0 || n < 1.0 {
        return Err(Error::Format("non-integral header field".into()));
    }
    let grid = Grid::new(d as usize, l, n as usize)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        values.push(Complex64::new(re, im));
    }
    let f = SampledFunction::new(grid, values)?;
    f.validate()?;
    Ok(f)
}

/// CSV with header `x,re,im` (one dimension) or `x1,x2,re,im`.
pub fn write_csv<W: Write>(f: &SampledFunction, mut w: W) -> Result<()> {
    let g = f.grid();
    match g.dim() {
        1 => writeln!(w, "x,re,im")?,
        _ => writeln!(w, "x1,x2,re,im")?,
    }
    for (i, z) in f.values().iter().enumerate() {
        let x = g.point(i);
        match g.dim() {
            1 => writeln!(w, "{},{},{}", x[0], z.re, z.im)?,
            _ => writeln!(w, "{},{},{},{}", x[0], x[1], z.re, z.im)?,
        }
    }
    Ok(())
}
