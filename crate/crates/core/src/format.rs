//! JSON and CSV layouts for functions, restricted forms, audit reports,
//! singular-value probes and Fourier coefficient files.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::audit::ClaimReport;
use crate::bounds::Mode;
use crate::dyadic::DyadicInterval;
use crate::error::{Error, Result};
use crate::haar::{DyadicFunction, ExactFunction, LeafVector};
use crate::oracle::{Constraint, SvdReport};
use crate::scalar::Sqrt2Scalar;
use crate::shift::RestrictedShiftForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafMode {
    Exact,
    Float,
}

/// `{"root":"k:l","depth":D,"mode":"exact"|"float","leaves":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub root: DyadicInterval,
    pub depth: u32,
    #[serde(default = "exact_mode")]
    pub mode: LeafMode,
    pub leaves: Vec<Value>,
}

fn exact_mode() -> LeafMode {
    LeafMode::Exact
}

/// A function read from disk, in whichever arithmetic it was written.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedFunction {
    Exact(ExactFunction),
    Float(DyadicFunction<f64>),
}

impl LoadedFunction {
    pub fn root(&self) -> DyadicInterval {
        match self {
            LoadedFunction::Exact(f) => f.root(),
            LoadedFunction::Float(f) => f.root(),
        }
    }

    pub fn to_f64(&self) -> DyadicFunction<f64> {
        match self {
            LoadedFunction::Exact(f) => f.to_f64(),
            LoadedFunction::Float(f) => f.clone(),
        }
    }
}

fn exact_leaf(v: &Value) -> Result<Sqrt2Scalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.is_i64() => Ok(Sqrt2Scalar::from_integer(n.as_i64().expect("checked"))),
        other => Err(Error::Parse(format!("exact leaf must be a string such as \"1/2+3/4√2\", got {other}"))),
    }
}

fn float_leaf(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("leaf {n} is not a finite number"))),
        Value::String(s) => s
            .parse::<f64>()
            .or_else(|_| s.parse::<Sqrt2Scalar>().map(|x| x.to_f64()))
            .map_err(|_| Error::Parse(format!("leaf {s:?} is not a number"))),
        other => Err(Error::Parse(format!("float leaf must be a number, got {other}"))),
    }
}

pub fn parse_function(text: &str) -> Result<LoadedFunction> {
    let file: FunctionFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match file.mode {
        LeafMode::Exact => {
            let values = file.leaves.iter().map(exact_leaf).collect::<Result<Vec<_>>>()?;
            let v = LeafVector::new(file.root, file.depth, values)?;
            Ok(LoadedFunction::Exact(DyadicFunction::analyze(&v)))
        }
        LeafMode::Float => {
            let values = file.leaves.iter().map(float_leaf).collect::<Result<Vec<_>>>()?;
            let v = LeafVector::new(file.root, file.depth, values)?;
            Ok(LoadedFunction::Float(DyadicFunction::analyze(&v)))
        }
    }
}

pub fn exact_function_file(f: &ExactFunction) -> FunctionFile {
    FunctionFile {
        root: f.root(),
        depth: f.depth(),
        mode: LeafMode::Exact,
        leaves: f.synthesize().values().iter().map(|x| Value::String(x.to_string())).collect(),
    }
}

pub fn float_function_file(f: &DyadicFunction<f64>) -> FunctionFile {
    FunctionFile {
        root: f.root(),
        depth: f.depth(),
        mode: LeafMode::Float,
        leaves: f.synthesize().values().iter().map(|x| Value::from(*x)).collect(),
    }
}

pub fn write_function(file: &FunctionFile) -> String {
    serde_json::to_string_pretty(file).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerTerm {
    #[serde(rename = "L")]
    pub l: DyadicInterval,
    pub coef: String,
}

/// `{"K","constant","haar","inner":[{"L","coef"}],"norm2"}`, exact values as
/// canonical strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    #[serde(rename = "K")]
    pub k: DyadicInterval,
    pub constant: String,
    pub haar: String,
    pub inner: Vec<InnerTerm>,
    pub norm2: String,
}

impl From<&RestrictedShiftForm> for FormJson {
    fn from(form: &RestrictedShiftForm) -> Self {
        Self {
            k: form.k,
            constant: form.constant.to_string(),
            haar: form.haar.to_string(),
            inner: form
                .inner
                .iter()
                .map(|(l, e)| InnerTerm {
                    l: *l,
                    coef: e.to_string(),
                })
                .collect(),
            norm2: form.norm2().to_string(),
        }
    }
}

impl FormJson {
    /// Parses the strings back into a form; fails if `norm2` disagrees.
    pub fn to_form(&self) -> Result<RestrictedShiftForm> {
        let mut form = RestrictedShiftForm::zero(self.k);
        form.constant = self.constant.parse()?;
        form.haar = self.haar.parse()?;
        for t in &self.inner {
            if !self.k.contains(&t.l) {
                return Err(Error::Parse(format!("inner interval {} is not inside {}", t.l, self.k)));
            }
            let c: Sqrt2Scalar = t.coef.parse()?;
            if !c.is_zero() {
                form.inner.insert(t.l, c);
            }
        }
        let n: Sqrt2Scalar = self.norm2.parse()?;
        if n != form.norm2() {
            return Err(Error::Parse(format!("norm2 {n} does not match the coefficients ({})", form.norm2())));
        }
        Ok(form)
    }
}

pub fn write_audit(reports: &[ClaimReport]) -> String {
    serde_json::to_string_pretty(reports).expect("plain data serializes")
}

pub fn parse_audit(text: &str) -> Result<Vec<ClaimReport>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub const SVD_CSV_HEADER: &str = "I,K,depth,constraint,sigma_min,sigma_max,rank_numeric";

pub fn svd_csv_row(i: &DyadicInterval, k: &DyadicInterval, depth: u32, constraint: Constraint, r: &SvdReport) -> String {
    format!(
        "{i},{k},{depth},{},{:.12e},{:.12e},{}",
        constraint.name(),
        r.sigma_min,
        r.sigma_max,
        r.rank_numeric
    )
}

/// `{"coefficients":[{"k":0,"re":2.0,"im":0.0},…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub coefficients: Vec<Mode>,
}

pub fn parse_coefficients(text: &str) -> Result<Vec<Mode>> {
    let file: CoefficientFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(file.coefficients)
}
