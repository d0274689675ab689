//! Error-versus-`M` sweeps over the registry.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use lfe_core::baselines::{clenshaw_curtis, simpson};
use lfe_core::{correction, engine, Error as CoreError, ReferenceFactors, SampledFunction, UniformGrid};
use serde::Serialize;
use thiserror::Error;

use crate::registry::{get, FunctionId, RegistryError, TestFunction};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("M values must be even and strictly ascending, got {0:?}")]
    InvalidM(Vec<usize>),
    #[error("unknown method `{0}` (expected lfe, lfe_corrected, simpson or cc)")]
    UnknownMethod(String),
    #[error("unknown preset `{0}` (expected table1, table-osc, table-piecewise or table-cc)")]
    UnknownPreset(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("{method} failed for {function} at M={m}: {source}")]
    Method {
        function: String,
        method: Method,
        m: usize,
        #[source]
        source: CoreError,
    },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lfe,
    LfeCorrected,
    Simpson,
    Cc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Lfe, Method::LfeCorrected, Method::Simpson, Method::Cc];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lfe => "lfe",
            Method::LfeCorrected => "lfe_corrected",
            Method::Simpson => "simpson",
            Method::Cc => "cc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| SweepError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub function: TestFunction,
    pub ms: Vec<usize>,
    pub methods: Vec<Method>,
}

impl SweepSpec {
    pub fn new(function: TestFunction, ms: Vec<usize>, methods: Vec<Method>) -> Result<Self, SweepError> {
        let ok = ms.iter().all(|m| m % 2 == 0 && *m > 0) && ms.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(SweepError::InvalidM(ms));
        }
        Ok(Self { function, ms, methods })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub function: String,
    pub params: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub method: Method,
    pub abs_error: f64,
    pub runtime_ms: Option<f64>,
}

/// Approximates the integral of `f` with one method on `M` cells.
///
/// For `lfe_corrected`, grids too coarse for detection (fewer than three
/// windows) fall back to the plain LFE value.
pub fn evaluate(f: &TestFunction, method: Method, m: usize, factors: &ReferenceFactors) -> Result<f64, CoreError> {
    let samples = || -> Result<SampledFunction, CoreError> { Ok(SampledFunction::from_fn(UniformGrid::new(f.a, f.b, m)?, |x| f.eval(x))) };
    match method {
        Method::Lfe => Ok(engine::integrate(&samples()?, factors.config(), factors)?.value),
        Method::LfeCorrected => {
            let s = samples()?;
            let plain = engine::integrate(&s, factors.config(), factors)?;
            match correction::correct(&s, factors, &plain) {
                Ok(r) => Ok(r.value),
                Err(CoreError::DetectionUnavailable { .. }) => Ok(plain.value),
                Err(e) => Err(e),
            }
        }
        Method::Simpson => simpson(&samples()?),
        Method::Cc => clenshaw_curtis(|x| f.eval(x), f.a, f.b, m),
    }
}

/// Rows ordered by `M`, then by method.
pub fn run_sweep(spec: &SweepSpec, factors: &ReferenceFactors, timing: bool) -> Result<Vec<Row>, SweepError> {
    let f = &spec.function;
    let mut rows = Vec::with_capacity(spec.ms.len() * spec.methods.len());
    for &m in &spec.ms {
        for &method in &spec.methods {
            let start = Instant::now();
            let value = evaluate(f, method, m, factors).map_err(|source| SweepError::Method {
                function: f.id.to_string(),
                method,
                m,
                source,
            })?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            rows.push(Row {
                function: f.id.to_string(),
                params: f.params_label(),
                m,
                method,
                abs_error: (value - f.exact).abs(),
                runtime_ms: timing.then_some(elapsed),
            });
        }
    }
    Ok(rows)
}

fn merged(lists: &[&[usize]]) -> Vec<usize> {
    let mut v: Vec<usize> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Sweeps regenerating one of the benchmark tables.
pub fn preset(name: &str) -> Result<Vec<SweepSpec>, SweepError> {
    use FunctionId::*;
    use Method::*;
    let spec = |id, p: Option<f64>, ms: Vec<usize>, methods: &[Method]| -> Result<SweepSpec, SweepError> {
        SweepSpec::new(get(id, p)?, ms, methods.to_vec())
    };
    match name {
        "table1" => vec![
            spec(F1, None, merged(&[&[10, 12, 14], &[92, 288, 912]]), &[Lfe, Simpson]),
            spec(F2, None, merged(&[&[10, 14, 16], &[76, 240, 758]]), &[Lfe, Simpson]),
            spec(F3, None, merged(&[&[20, 26, 32], &[134, 420, 1324]]), &[Lfe, Simpson]),
        ]
        .into_iter()
        .collect(),
        "table-osc" => vec![
            spec(F4, Some(100.0), merged(&[&[154, 178, 196], &[1024, 3232, 10204]]), &[Lfe, Simpson]),
            spec(F4, Some(200.0), merged(&[&[276, 296, 392], &[1448, 3568, 14444]]), &[Lfe, Simpson]),
            spec(F5, Some(50.0), merged(&[&[228, 260, 308], &[3844, 12148, 38340]]), &[Lfe, Simpson]),
            spec(F5, Some(100.0), merged(&[&[418, 478, 592], &[7364, 23268, 73396]]), &[Lfe, Simpson]),
            spec(F6, Some(0.2), merged(&[&[100, 164, 260], &[948, 2964, 9364]]), &[Lfe, Simpson]),
            spec(F6, Some(0.1), merged(&[&[228, 340, 500], &[2196, 6932, 21876]]), &[Lfe, Simpson]),
        ]
        .into_iter()
        .collect(),
        "table-piecewise" => {
            let ms = vec![160, 320, 640, 1280];
            vec![
                spec(F7, Some(0.3), ms.clone(), &[Lfe, LfeCorrected]),
                spec(F7, Some(PI / 5.0), ms.clone(), &[Lfe, LfeCorrected]),
                spec(F8, Some(0.6), ms.clone(), &[Lfe, LfeCorrected]),
                spec(F8, Some(0.73), ms, &[Lfe, LfeCorrected]),
            ]
            .into_iter()
            .collect()
        }
        "table-cc" => {
            let ms = vec![128, 256, 512, 1024];
            vec![
                spec(F4, Some(200.0), ms.clone(), &[Lfe, Cc]),
                spec(F5, Some(100.0), ms.clone(), &[Lfe, Cc]),
                spec(F7, Some(0.3), ms.clone(), &[LfeCorrected, Cc]),
                spec(F8, Some(0.73), ms, &[LfeCorrected, Cc]),
            ]
            .into_iter()
            .collect()
        }
        other => Err(SweepError::UnknownPreset(other.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_rows<W: Write>(rows: &[Row], format: Format, mut out: W) -> Result<(), SweepError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["function", "params", "M", "method", "abs_error", "runtime_ms"])?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
