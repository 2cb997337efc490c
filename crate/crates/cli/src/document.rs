//! The JSON interchange document and its conversion to library types.
//!
//! Integers whose magnitude exceeds 2⁵³ are written as decimal strings;
//! smaller ones as plain numbers. Either form is accepted on input.

use std::fmt;

use foliated_tori::exact_linalg::IntMatrix;
use foliated_tori::grassmannian::IsotropicPlane;
use foliated_tori::numeric::{CMat, RMat};
use foliated_tori::torus::{PeriodMatrix, TorusShape};
use foliated_tori::Tolerances;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;
const SAFE_MAGNITUDE: u64 = 1 << 53;

/// A structurally invalid document: right JSON, wrong content.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at `{field}`: {message}")]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.unsigned_abs() <= SAFE_MAGNITUDE => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer, or a decimal string for magnitudes above 2^53")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Int, E> {
        if v.is_finite() && v.fract() == 0.0 && v.abs() <= SAFE_MAGNITUDE as f64 {
            Ok(Int(BigInt::from(v as i64)))
        } else if v.is_finite() && v.fract() == 0.0 {
            Err(E::custom("integers above 2^53 must be given as strings"))
        } else {
            Err(E::custom(format!("expected an integer, found {v}")))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
        v.trim()
            .parse::<BigInt>()
            .map(Int)
            .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexDoc {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeDoc {
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodDoc {
    pub complex: Vec<Vec<ComplexDoc>>,
    pub real: Vec<Vec<f64>>,
}

/// `M = [[A, B], [0, C]]` and `P`, certifying `M·Ω = Ω′·P`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub a: Vec<Vec<ComplexDoc>>,
    pub b: Vec<Vec<ComplexDoc>>,
    pub c: Vec<Vec<f64>>,
    pub p: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<PeriodDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PeriodDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<Vec<Vec<Int>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<Vec<Vec<ComplexDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Int>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Vec<Int>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// JSON syntax or type errors, with position and field path.
#[derive(Debug, Error)]
#[error("line {line}, column {column}{}: {message}", path_suffix(.path))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub path: String,
    pub message: String,
}

fn path_suffix(path: &str) -> String {
    if path.is_empty() || path == "." {
        String::new()
    } else {
        format!(", at `{path}`")
    }
}

impl Document {
    pub fn new(shape: Option<TorusShape>) -> Self {
        Self {
            version: FORMAT_VERSION,
            shape: shape.map(|s| ShapeDoc { n: s.n(), k: s.k() }),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: Document = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ParseError {
                line: inner.line(),
                column: inner.column(),
                path,
                message: strip_position(&inner.to_string()),
            }
        })?;
        de.end().map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            path: String::new(),
            message: strip_position(&e.to_string()),
        })?;
        Ok(doc)
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Converts every present field, so that structural problems surface
    /// before any command runs.
    pub fn check(&self) -> Result<(), InputError> {
        if self.version != FORMAT_VERSION {
            return Err(InputError::new("version", format!("unsupported version {}, expected {FORMAT_VERSION}", self.version)));
        }
        let shape = self.shape.map(|_| self.shape()).transpose()?;
        if let Some(shape) = shape {
            if self.period.is_some() {
                self.period_matrix("period")?;
            }
            if self.target.is_some() {
                self.period_matrix("target")?;
            }
            if self.plane.is_some() {
                self.plane_basis()?;
            }
            if self.polarization.is_some() {
                let e = self.int_matrix("polarization")?;
                expect_shape("polarization", e.shape(), (shape.real_dim(), shape.real_dim()))?;
            }
            if self.divisors.is_some() {
                self.divisors(shape)?;
            }
            if self.witness.is_some() {
                self.witness_parts(shape)?;
            }
            if self.alpha.is_some() {
                let a = self.int_matrix("alpha")?;
                expect_shape("alpha", a.shape(), (2 * shape.n(), 2 * shape.n()))?;
            }
        } else {
            for (name, present) in [
                ("period", self.period.is_some()),
                ("target", self.target.is_some()),
                ("plane", self.plane.is_some()),
                ("witness", self.witness.is_some()),
                ("divisors", self.divisors.is_some()),
            ] {
                if present {
                    return Err(InputError::new("shape", format!("required when `{name}` is present")));
                }
            }
        }
        if self.matrix.is_some() {
            self.int_matrix("matrix")?;
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<TorusShape, InputError> {
        let s = self.shape.ok_or_else(|| InputError::new("shape", "missing"))?;
        TorusShape::new(s.n, s.k).map_err(|e| InputError::new("shape", e.to_string()))
    }

    fn period_doc(&self, field: &str) -> Result<&PeriodDoc, InputError> {
        match field {
            "period" => self.period.as_ref(),
            "target" => self.target.as_ref(),
            _ => None,
        }
        .ok_or_else(|| InputError::new(field, "missing"))
    }

    pub fn period_matrix(&self, field: &str) -> Result<PeriodMatrix, InputError> {
        let shape = self.shape()?;
        let doc = self.period_doc(field)?;
        let cols = shape.real_dim();
        let c = complex_matrix(&format!("{field}.complex"), &doc.complex, shape.n(), cols)?;
        let r = real_matrix(&format!("{field}.real"), &doc.real, shape.k(), cols)?;
        PeriodMatrix::new(shape, c, r).map_err(|e| InputError::new(field, e.to_string()))
    }

    pub fn plane_basis(&self) -> Result<CMat, InputError> {
        let shape = self.shape()?;
        let rows = self.plane.as_ref().ok_or_else(|| InputError::new("plane", "missing"))?;
        complex_matrix("plane", rows, shape.n(), shape.real_dim())
    }

    /// `Err(Ok(_))` is a structural problem, `Err(Err(_))` a degenerate basis.
    pub fn plane(&self, tol: &Tolerances) -> Result<Result<IsotropicPlane, String>, InputError> {
        let basis = self.plane_basis()?;
        Ok(IsotropicPlane::new(basis, tol).map_err(|e| e.to_string()))
    }

    pub fn int_matrix(&self, field: &str) -> Result<IntMatrix, InputError> {
        let rows = match field {
            "polarization" => self.polarization.as_ref(),
            "matrix" => self.matrix.as_ref(),
            "alpha" => self.alpha.as_ref(),
            _ => None,
        }
        .ok_or_else(|| InputError::new(field, "missing"))?;
        int_matrix(field, rows)
    }

    pub fn divisors(&self, shape: TorusShape) -> Result<Option<Vec<BigInt>>, InputError> {
        let Some(d) = &self.divisors else {
            return Ok(None);
        };
        if d.len() != shape.n() {
            return Err(InputError::new("divisors", format!("expected {} entries, found {}", shape.n(), d.len())));
        }
        if let Some(i) = d.iter().position(|v| !v.0.is_positive()) {
            return Err(InputError::new(format!("divisors[{i}]"), "divisors must be positive"));
        }
        Ok(Some(d.iter().map(|v| v.0.clone()).collect()))
    }

    pub fn witness_parts(&self, shape: TorusShape) -> Result<(CMat, CMat, RMat, IntMatrix), InputError> {
        let w = self.witness.as_ref().ok_or_else(|| InputError::new("witness", "missing"))?;
        let (n, k) = (shape.n(), shape.k());
        let a = complex_matrix("witness.a", &w.a, n, n)?;
        let b = complex_matrix("witness.b", &w.b, n, k)?;
        let c = real_matrix("witness.c", &w.c, k, k)?;
        let p = int_matrix("witness.p", &w.p)?;
        expect_shape("witness.p", p.shape(), (shape.real_dim(), shape.real_dim()))?;
        Ok((a, b, c, p))
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn expect_shape(field: &str, found: (usize, usize), expected: (usize, usize)) -> Result<(), InputError> {
    if found == expected {
        Ok(())
    } else {
        Err(InputError::new(field, format!("expected a {}×{} matrix, found {}×{}", expected.0, expected.1, found.0, found.1)))
    }
}

fn check_rows<T>(field: &str, rows: &[Vec<T>], nrows: usize, ncols: usize) -> Result<(), InputError> {
    if rows.len() != nrows {
        return Err(InputError::new(field, format!("expected {nrows} rows, found {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(InputError::new(format!("{field}[{i}]"), format!("expected {ncols} entries, found {}", row.len())));
        }
    }
    Ok(())
}

fn complex_matrix(field: &str, rows: &[Vec<ComplexDoc>], nrows: usize, ncols: usize) -> Result<CMat, InputError> {
    check_rows(field, rows, nrows, ncols)?;
    Ok(CMat::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j].re, rows[i][j].im)))
}

fn real_matrix(field: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<RMat, InputError> {
    check_rows(field, rows, nrows, ncols)?;
    Ok(RMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn int_matrix(field: &str, rows: &[Vec<Int>]) -> Result<IntMatrix, InputError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 {
        return Err(InputError::new(field, "matrix must be non-empty"));
    }
    check_rows(field, rows, rows.len(), ncols)?;
    Ok(IntMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j].0.clone()))
}

pub fn complex_rows(m: &CMat) -> Vec<Vec<ComplexDoc>> {
    m.row_iter().map(|r| r.iter().map(|&z| z.into()).collect()).collect()
}

pub fn real_rows(m: &RMat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn int_rows(m: &IntMatrix) -> Vec<Vec<Int>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|v| Int(v.clone())).collect()).collect()
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().map(|x| Int(x.clone())).collect()
}

impl From<&PeriodMatrix> for PeriodDoc {
    fn from(p: &PeriodMatrix) -> Self {
        Self {
            complex: complex_rows(p.c_block()),
            real: real_rows(p.r_block()),
        }
    }
}
