//! Binary cache for the reference factorization.
//!
//! Layout (little endian): magic `LFEF`, `u32` version, `u64` n, `u64` m,
//! `f64` T, then U (row-major, re/im pairs), σ, V (row-major, re/im pairs).

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use lfe_core::linalg::{Complex, ComplexMatrix, SvdFactors};
use lfe_core::window::{build_reference, ReferenceFactors, WindowConfig};
use thiserror::Error;

const MAGIC: &[u8; 4] = b"LFEF";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("not a factor cache file")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    Version(u32),
    #[error("cache was built for n={n}, m={m}, T={t}")]
    Mismatch { n: usize, m: usize, t: f64 },
    #[error("cache contents rejected: {0}")]
    Invalid(#[from] lfe_core::Error),
}

pub fn write_factors<W: Write>(factors: &ReferenceFactors, mut out: W) -> Result<(), CacheError> {
    let c = factors.config();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(c.n as u64).to_le_bytes())?;
    out.write_all(&(c.m as u64).to_le_bytes())?;
    out.write_all(&c.t.to_le_bytes())?;
    let svd = factors.svd();
    write_matrix(&svd.u, &mut out)?;
    for s in &svd.sigma {
        out.write_all(&s.to_le_bytes())?;
    }
    write_matrix(&svd.v, &mut out)?;
    Ok(())
}

fn write_matrix<W: Write>(a: &ComplexMatrix, out: &mut W) -> io::Result<()> {
    for z in a.as_slice() {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    read_u64(r).map(f64::from_bits)
}

fn read_matrix<R: Read>(r: &mut R, rows: usize, cols: usize) -> Result<ComplexMatrix, CacheError> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re = read_f64(r)?;
        let im = read_f64(r)?;
        data.push(Complex::new(re, im));
    }
    Ok(ComplexMatrix::from_row_major(rows, cols, data)?)
}

/// Reads factors for `config`; `config.epsilon` is not stored and may differ
/// from the run that wrote the cache.
pub fn read_factors<R: Read>(config: &WindowConfig, mut input: R) -> Result<ReferenceFactors, CacheError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let mut v = [0u8; 4];
    input.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(CacheError::Version(version));
    }
    let n = read_u64(&mut input)? as usize;
    let m = read_u64(&mut input)? as usize;
    let t = read_f64(&mut input)?;
    if n != config.n || m != config.m || t.to_bits() != config.t.to_bits() {
        return Err(CacheError::Mismatch { n, m, t });
    }
    config.validate()?;
    let modes = config.modes();
    let r = m.min(modes);
    let u = read_matrix(&mut input, m, r)?;
    let sigma = (0..r).map(|_| read_f64(&mut input)).collect::<io::Result<Vec<_>>>()?;
    let v = read_matrix(&mut input, modes, r)?;
    Ok(ReferenceFactors::from_svd(*config, SvdFactors { u, sigma, v })?)
}

/// Loads the cache at `path` if it exists and matches, otherwise builds the
/// factors and writes them there.
pub fn load_or_build(config: &WindowConfig, path: &Path) -> Result<ReferenceFactors, CacheError> {
    if path.exists() {
        return read_factors(config, io::BufReader::new(fs::File::open(path)?));
    }
    let factors = build_reference(config)?;
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write_factors(&factors, &mut file)?;
    file.flush()?;
    Ok(factors)
}
