//! Two-column `x,f` sample files.

use std::io::Read;
use std::path::Path;

use lfe_core::{SampledFunction, UniformGrid};
use thiserror::Error;

/// Relative deviation from the inferred spacing tolerated per node.
pub const SPACING_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("need at least 3 samples, found {0}")]
    TooFewSamples(usize),
    #[error("x values must be strictly increasing (row {row})")]
    Unsorted { row: usize },
    #[error("non-uniform spacing at row {row}: node off by {deviation:e} h")]
    NonUniform { row: usize, deviation: f64 },
    #[error("non-finite value on row {row}")]
    NonFinite { row: usize },
}

pub fn read_samples_from_path(path: &Path) -> Result<SampledFunction, IngestError> {
    read_samples(std::fs::File::open(path)?)
}

/// Reads comma-separated `x,f` rows. A first row whose first field is not a
/// number is treated as a header.
pub fn read_samples<R: Read>(input: R) -> Result<SampledFunction, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IngestError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        if k == 0 && record.get(0).is_some_and(|s| s.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 2 {
            return Err(IngestError::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let field = |i: usize| {
            record[i].parse::<f64>().map_err(|e| IngestError::Parse {
                line,
                message: format!("`{}`: {e}", &record[i]),
            })
        };
        xs.push(field(0)?);
        fs.push(field(1)?);
    }
    build(&xs, fs)
}

fn build(xs: &[f64], fs: Vec<f64>) -> Result<SampledFunction, IngestError> {
    if xs.len() < 3 {
        return Err(IngestError::TooFewSamples(xs.len()));
    }
    for (row, (x, f)) in xs.iter().zip(&fs).enumerate() {
        if !x.is_finite() || !f.is_finite() {
            return Err(IngestError::NonFinite { row });
        }
    }
    if let Some(row) = (1..xs.len()).find(|&j| xs[j] <= xs[j - 1]) {
        return Err(IngestError::Unsorted { row });
    }
    let cells = xs.len() - 1;
    let (a, b) = (xs[0], xs[cells]);
    let h = (b - a) / cells as f64;
    let ulp = 4.0 * f64::EPSILON * a.abs().max(b.abs());
    for (j, &x) in xs.iter().enumerate() {
        let off = (x - (a + j as f64 * h)).abs();
        if off > SPACING_TOLERANCE * h + ulp {
            return Err(IngestError::NonUniform { row: j, deviation: off / h });
        }
    }
    let grid = UniformGrid::new(a, b, cells).map_err(|_| IngestError::Unsorted { row: cells })?;
    SampledFunction::new(grid, fs).map_err(|_| IngestError::NonFinite { row: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(rows: usize) -> String {
        let mut s = String::from("x,f\n");
        for j in 0..rows {
            let x = j as f64 / (rows - 1) as f64;
            s.push_str(&format!("{x},{}\n", x * x));
        }
        s
    }

    #[test]
    fn reads_uniform_rows() {
        let s = read_samples(uniform(21).as_bytes()).unwrap();
        assert_eq!(s.grid().cells(), 20);
        assert_eq!(s.grid().a(), 0.0);
        assert_eq!(s.grid().b(), 1.0);
        let no_header = uniform(21).replacen("x,f\n", "", 1);
        assert_eq!(read_samples(no_header.as_bytes()).unwrap(), s);
    }

    #[test]
    fn perturbed_node_is_rejected() {
        let h = 0.05;
        let mut s = String::new();
        for j in 0..21 {
            let mut x = j as f64 * h;
            if j == 7 {
                x += 1e-6 * h;
            }
            s.push_str(&format!("{x:.17e},1\n"));
        }
        assert!(matches!(read_samples(s.as_bytes()), Err(IngestError::NonUniform { row: 7, .. })));
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(read_samples("0,1\n1,2\n".as_bytes()), Err(IngestError::TooFewSamples(2))));
        assert!(matches!(read_samples("0,1\n2,2\n1,3\n".as_bytes()), Err(IngestError::Unsorted { row: 2 })));
        assert!(matches!(read_samples("0,1\n1,x\n2,3\n".as_bytes()), Err(IngestError::Parse { .. })));
        assert!(matches!(read_samples("0,1\n1,2,3\n2,3\n".as_bytes()), Err(IngestError::Parse { .. })));
        assert!(matches!(read_samples("0,1\n1,inf\n2,3\n".as_bytes()), Err(IngestError::NonFinite { row: 1 })));
    }
}
