//! JSON documents: subspace files (`K ⊆ ∧²V` and subspaces of `V^∨`) and
//! command reports. Every number is written as a decimal or `a/b` string.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_integer::binomial;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::engine::Subspace2;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, FieldConfig};
use crate::linalg::rank;
use crate::sparse::SparseMatrix;

pub const PAIRS_ORDER: &str = "lex";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Rational,
    Prime { p: String },
}

impl FieldSpec {
    pub fn from_config(field: FieldConfig) -> Self {
        match field {
            FieldConfig::Rational => FieldSpec::Rational,
            FieldConfig::Prime(p) => FieldSpec::Prime { p: p.to_string() },
        }
    }

    pub fn to_config(&self) -> Result<FieldConfig> {
        match self {
            FieldSpec::Rational => Ok(FieldConfig::Rational),
            FieldSpec::Prime { p } => {
                let p: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("prime modulus {p:?} is not a decimal integer")))?;
                FieldConfig::prime(p)
            }
        }
    }
}

/// On-disk form of a subspace of `∧²V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KFile {
    pub n: usize,
    pub field: FieldSpec,
    pub pairs_order: String,
    pub basis: Vec<Vec<String>>,
}

/// On-disk form of a subspace of `V^∨` (rows of length `n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovectorFile {
    pub n: usize,
    pub field: FieldSpec,
    pub basis: Vec<Vec<String>>,
}

fn encode_rows(m: &SparseMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row_dense(r).iter().map(format_rational).collect()).collect()
}

fn decode_rows(field: FieldConfig, width: usize, rows: &[Vec<String>]) -> Result<SparseMatrix> {
    let mut dense = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::DimensionMismatch(format!("basis row {i} has {} entries, expected {width}", row.len())));
        }
        let parsed = row
            .iter()
            .map(|s| parse_rational(s).and_then(|x| field.normalize(&x)))
            .collect::<Result<Vec<BigRational>>>()?;
        dense.push(parsed);
    }
    SparseMatrix::from_dense(field, width, &dense)
}

impl KFile {
    pub fn from_subspace(k: &Subspace2) -> Self {
        KFile {
            n: k.n(),
            field: FieldSpec::from_config(k.field()),
            pairs_order: PAIRS_ORDER.to_string(),
            basis: encode_rows(k.basis()),
        }
    }

    /// Validates the document and builds the subspace (full rank is required).
    pub fn to_subspace(&self) -> Result<Subspace2> {
        if self.pairs_order != PAIRS_ORDER {
            return Err(Error::Malformed(format!("pairs_order must be {PAIRS_ORDER:?}, got {:?}", self.pairs_order)));
        }
        if self.n == 0 {
            return Err(Error::Malformed("n must be positive".into()));
        }
        let field = self.field.to_config()?;
        let basis = decode_rows(field, binomial(self.n, 2), &self.basis)?;
        Subspace2::new(self.n, basis)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl CovectorFile {
    pub fn from_matrix(n: usize, m: &SparseMatrix) -> Self {
        CovectorFile { n, field: FieldSpec::from_config(m.field()), basis: encode_rows(m) }
    }

    /// Rows must be linearly independent.
    pub fn to_matrix(&self) -> Result<SparseMatrix> {
        let field = self.field.to_config()?;
        let m = decode_rows(field, self.n, &self.basis)?;
        let r = rank(&m);
        if r != m.rows() {
            return Err(Error::RankDeficient { expected: m.rows(), found: r });
        }
        Ok(m)
    }
}

pub fn read_subspace(path: &Path) -> Result<Subspace2> {
    KFile::parse(&fs::read_to_string(path)?)?.to_subspace()
}

pub fn write_subspace(path: &Path, k: &Subspace2) -> Result<()> {
    write_atomic(path, &KFile::from_subspace(k).to_json())
}

pub fn read_covectors(path: &Path) -> Result<SparseMatrix> {
    let file: CovectorFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    file.to_matrix()
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::env::current_dir()?,
    };
    let name =
        path.file_name().ok_or_else(|| Error::InvalidParameter(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// A command report. Values in `inputs` and `results` are strings, booleans,
/// or nested arrays/objects of those.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub field: Option<String>,
    pub results: Map<String, Value>,
    pub elapsed_ms: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            field: None,
            results: Map::new(),
            elapsed_ms: "0".to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), Value::String(value.to_string()));
        self
    }

    pub fn with_field(mut self, field: FieldConfig) -> Self {
        self.field = Some(field.label());
        self
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn set_num(&mut self, key: &str, value: impl ToString) {
        self.set(key, Value::String(value.to_string()));
    }

    pub fn set_bool(&mut self, key: &str, value: bool) {
        self.set(key, Value::Bool(value));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Array of decimal strings.
pub fn num_list<T: ToString>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

/// True when a JSON value holds no floating-point number anywhere.
pub fn float_free(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(xs) => xs.iter().all(float_free),
        Value::Object(m) => m.values().all(float_free),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{codim_one, random_subspace, weyman};

    #[test]
    fn round_trip() {
        let p = FieldConfig::prime(101).unwrap();
        for k in [
            weyman(5, FieldConfig::Rational).unwrap(),
            codim_one(4, p).unwrap(),
            random_subspace(5, 6, FieldConfig::Rational, 3).unwrap(),
        ] {
            let text = KFile::from_subspace(&k).to_json();
            let back = KFile::parse(&text).unwrap().to_subspace().unwrap();
            assert_eq!(back, k);
        }
    }

    #[test]
    fn rejects_bad_documents() {
        let ok = r#"{"n":3,"field":{"kind":"rational"},"pairs_order":"lex","basis":[["1","0","1/2"]]}"#;
        assert_eq!(KFile::parse(ok).unwrap().to_subspace().unwrap().dim(), 1);
        let bad_order = ok.replace("\"lex\"", "\"revlex\"");
        assert!(matches!(KFile::parse(&bad_order).unwrap().to_subspace(), Err(Error::Malformed(_))));
        let short = r#"{"n":3,"field":{"kind":"rational"},"pairs_order":"lex","basis":[["1","0"]]}"#;
        assert!(matches!(KFile::parse(short).unwrap().to_subspace(), Err(Error::DimensionMismatch(_))));
        let dependent =
            r#"{"n":3,"field":{"kind":"prime","p":"7"},"pairs_order":"lex","basis":[["1","2","3"],["2","4","6"]]}"#;
        assert!(matches!(
            KFile::parse(dependent).unwrap().to_subspace(),
            Err(Error::RankDeficient { expected: 2, found: 1 })
        ));
        let composite = dependent.replace("\"7\"", "\"9\"");
        assert!(matches!(KFile::parse(&composite).unwrap().to_subspace(), Err(Error::NotPrime(9))));
        assert!(KFile::parse(r#"{"n":3}"#).is_err());
        let garbage = ok.replace("1/2", "x");
        assert!(KFile::parse(&garbage).unwrap().to_subspace().is_err());
    }

    #[test]
    fn report_has_no_floats() {
        let mut r = Report::new("wq").input("q", 2).with_field(FieldConfig::Rational);
        r.set_num("dim", 5);
        r.set("dims", num_list(&[1, 2, 3]));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert!(float_free(&v));
        assert!(!float_free(&serde_json::json!({"x": 1.5})));
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.json");
        let k = codim_one(4, FieldConfig::Rational).unwrap();
        write_subspace(&path, &k).unwrap();
        assert_eq!(read_subspace(&path).unwrap(), k);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
