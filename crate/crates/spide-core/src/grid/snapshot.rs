//! Field snapshot files: 32-byte header (magic `SPIDEFLD`, u32 d, u32 N,
//! f64 L, u32 slice-count, u32 complex-flag), then little-endian IEEE-754
//! float64 payload, row-major, slices concatenated. Complex payloads
//! interleave re, im.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{Domain, Field, SpectralGrid};
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"SPIDEFLD";

pub fn write_snapshot(path: &Path, fields: &[Field]) -> Result<()> {
    if fields.is_empty() {
        return Err(Error::Shape("snapshot needs at least one slice".into()));
    }
    let grid = fields[0].grid().clone();
    for f in fields {
        if f.grid().as_ref() != grid.as_ref() {
            return Err(Error::Shape("snapshot slices live on different grids".into()));
        }
    }
    let complex = fields.iter().any(|f| f.max_imag() > 1e-12);
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&(grid.dim() as u32).to_le_bytes())?;
    out.write_all(&(grid.nodes_per_axis() as u32).to_le_bytes())?;
    out.write_all(&grid.half_width().to_le_bytes())?;
    out.write_all(&(fields.len() as u32).to_le_bytes())?;
    out.write_all(&(complex as u32).to_le_bytes())?;
    for f in fields {
        let phys = f.to_physical();
        for v in phys.values() {
            out.write_all(&v.re.to_le_bytes())?;
            if complex {
                out.write_all(&v.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Vec<Field>> {
    let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut header = [0u8; 32];
    input.read_exact(&mut header)?;
    if &header[0..8] != MAGIC {
        return Err(Error::Shape(format!("{}: bad snapshot magic", path.display())));
    }
    let d = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let n = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let l = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let slices = u32::from_le_bytes(header[24..28].try_into().unwrap()) as usize;
    let complex = u32::from_le_bytes(header[28..32].try_into().unwrap()) != 0;
    let grid = SpectralGrid::new(d, n, l)?;
    let mut fields = Vec::with_capacity(slices);
    let mut buf = [0u8; 8];
    for _ in 0..slices {
        let mut data = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            input.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            let im = if complex {
                input.read_exact(&mut buf)?;
                f64::from_le_bytes(buf)
            } else {
                0.0
            };
            data.push(Complex64::new(re, im));
        }
        fields.push(Field::from_values(&grid, Domain::Physical, data)?);
    }
    Ok(fields)
}
