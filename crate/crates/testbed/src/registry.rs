//! Benchmark integrands with closed-form reference integrals.

use std::collections::BTreeMap;
use std::f64::consts::{E, FRAC_PI_4, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error("unknown test function `{0}` (expected f1..f8)")]
    UnknownFunction(String),
    #[error("{function} requires parameter `{name}`")]
    MissingParameter { function: FunctionId, name: &'static str },
    #[error("{function} does not take parameter `{name}`")]
    UnexpectedParameter { function: FunctionId, name: String },
    #[error("parameter `{name}` = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("cannot parse parameter `{0}` (expected key=value)")]
    BadParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
}

impl FunctionId {
    pub const ALL: [FunctionId; 8] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
    ];

    /// Name of the single parameter, if any.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            FunctionId::F1 | FunctionId::F2 | FunctionId::F3 => None,
            FunctionId::F4 => Some("omega"),
            FunctionId::F5 => Some("kappa"),
            FunctionId::F6 => Some("alpha"),
            FunctionId::F7 => Some("xi"),
            FunctionId::F8 => Some("zeta"),
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            FunctionId::F1 => (0.1, 1.5),
            FunctionId::F2 => (0.2, 1.3),
            FunctionId::F3 => (-0.1, 1.4),
            FunctionId::F4 => (0.0, 1.1),
            FunctionId::F5 => (0.2, 1.3),
            FunctionId::F6 | FunctionId::F7 | FunctionId::F8 => (0.0, 1.0),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = *self as usize + 1;
        write!(f, "f{k}")
    }
}

impl FromStr for FunctionId {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| RegistryError::UnknownFunction(s.to_string()))
    }
}

/// Named parameter values, e.g. from `--param omega=100`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    /// Parses `key=value`; the value may be a number or a multiple or
    /// fraction of `pi` (`pi/5`, `2*pi`, `3*pi/4`).
    pub fn parse_assignment(&mut self, s: &str) -> Result<(), RegistryError> {
        let (k, v) = s.split_once('=').ok_or_else(|| RegistryError::BadParameter(s.to_string()))?;
        let value = parse_value(v).ok_or_else(|| RegistryError::BadParameter(s.to_string()))?;
        self.0.insert(k.trim().to_string(), value);
        Ok(())
    }
}

fn parse_value(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let factor = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k.trim().strip_suffix('*')?.trim().parse::<f64>().ok()?,
        None => return None,
    };
    Some(factor * PI / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub id: FunctionId,
    /// `(name, value)` of the parameter for parametrized families.
    pub parameter: Option<(&'static str, f64)>,
    pub a: f64,
    pub b: f64,
    pub exact: f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let p = self.parameter.map_or(0.0, |(_, v)| v);
        match self.id {
            FunctionId::F1 => 3.0 * x * x - (-x).exp() - 2.0 * (2.0 * x).sin(),
            FunctionId::F2 => x.exp() * (3.0 * x).cos() + x * x / (1.0 + x),
            FunctionId::F3 => 1.0 / (1.0 + x * x) + 2.0 * (2.0 * x).sin().cos() * (2.0 * x).cos(),
            FunctionId::F4 => (-x).exp() * (p * x).sin(),
            FunctionId::F5 => -2.0 * p * x * (p * x * x).sin(),
            FunctionId::F6 => {
                let d = 1.0 + p - x * x;
                2.0 * x / (d * d)
            }
            FunctionId::F7 => 1.0 / (1.0 + x * x) + (5.0 * x).sin() + if x >= p { x - p } else { 0.0 },
            FunctionId::F8 => {
                x.exp() * (2.0 * x).cos() + x / (1.0 + x * x) + if x >= p { (x - p) * (x - p) } else { 0.0 }
            }
        }
    }

    /// `name=value`, or empty for unparametrized functions.
    pub fn params_label(&self) -> String {
        self.parameter.map_or_else(String::new, |(k, v)| format!("{k}={v}"))
    }
}

fn primitive(id: FunctionId, p: f64, x: f64) -> f64 {
    match id {
        FunctionId::F1 => x.powi(3) + (-x).exp() + (2.0 * x).cos(),
        FunctionId::F2 => {
            x.exp() * ((3.0 * x).cos() + 3.0 * (3.0 * x).sin()) / 10.0 + x * x / 2.0 - x + (1.0 + x).ln()
        }
        FunctionId::F3 => x.atan() + (2.0 * x).sin().sin(),
        FunctionId::F4 => (-x).exp() * (-p * (p * x).cos() - (p * x).sin()) / (1.0 + p * p),
        FunctionId::F5 => (p * x * x).cos(),
        FunctionId::F6 => 1.0 / (1.0 + p - x * x),
        FunctionId::F7 | FunctionId::F8 => unreachable!("piecewise integrals are closed-form totals"),
    }
}

fn exact_integral(id: FunctionId, p: f64) -> f64 {
    let (a, b) = id.domain();
    match id {
        FunctionId::F7 => FRAC_PI_4 + (1.0 - 5f64.cos()) / 5.0 + (1.0 - p).powi(2) / 2.0,
        FunctionId::F8 => (E * 2f64.cos() + 2.0 * E * 2f64.sin() - 1.0) / 5.0 + LN_2 / 2.0 + (1.0 - p).powi(3) / 3.0,
        _ => primitive(id, p, b) - primitive(id, p, a),
    }
}

fn check_range(id: FunctionId, name: &'static str, v: f64) -> Result<(), RegistryError> {
    let (ok, range) = match id {
        FunctionId::F6 => (v > 0.0, "(0, inf)"),
        FunctionId::F7 | FunctionId::F8 => ((0.0..=1.0).contains(&v), "[0, 1]"),
        _ => (true, "finite reals"),
    };
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(RegistryError::OutOfRange { name, value: v, range })
    }
}

/// Looks up a test function and validates its parameters.
pub fn lookup(id: FunctionId, params: &Params) -> Result<TestFunction, RegistryError> {
    let expected = id.parameter();
    if let Some(extra) = params.0.keys().find(|k| Some(k.as_str()) != expected) {
        return Err(RegistryError::UnexpectedParameter { function: id, name: extra.clone() });
    }
    let parameter = match expected {
        None => None,
        Some(name) => {
            let v = *params.0.get(name).ok_or(RegistryError::MissingParameter { function: id, name })?;
            check_range(id, name, v)?;
            Some((name, v))
        }
    };
    let (a, b) = id.domain();
    let exact = exact_integral(id, parameter.map_or(0.0, |(_, v)| v));
    Ok(TestFunction { id, parameter, a, b, exact })
}

/// Shorthand for [`lookup`] with at most one parameter.
pub fn get(id: FunctionId, value: Option<f64>) -> Result<TestFunction, RegistryError> {
    let mut params = Params::new();
    if let (Some(name), Some(v)) = (id.parameter(), value) {
        params = params.with(name, v);
    }
    lookup(id, &params)
}
