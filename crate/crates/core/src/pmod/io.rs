//! Canonical JSON wire format for modules and bases.
//!
//! Matrices are arrays of rows; entries are rendered as canonical rational
//! strings ("3", "-1/2") and accepted as strings or bare integers. Matrix
//! shapes are reconstructed from the dims data, so zero-row matrices survive
//! round trips. 2D maps are keyed by their source degree as an "i,j" string.
//! Serialization is a pure function of the value, so equal modules always
//! produce identical bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    DegreeElement, GradedBasis, Module, Module1d, Module2d, ValidationError, Window1d, Window2d,
};
use crate::ratmat::{Matrix, Rational};

/// Failure to turn bytes into a validated value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Malformed JSON or wrong field types; includes line/column context.
    Json(String),
    /// Well-formed JSON that violates a shape or window invariant.
    Invalid(ValidationError),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Json(msg) => write!(f, "ParseError: {msg}"),
            ParseError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<ValidationError> for ParseError {
    fn from(e: ValidationError) -> Self {
        ParseError::Invalid(e)
    }
}

fn invalid(msg: String) -> ParseError {
    ParseError::Invalid(ValidationError(msg))
}

type MatrixRows = Vec<Vec<Rational>>;

#[derive(Serialize, Deserialize)]
struct Window1dDoc {
    alpha: i64,
    beta: i64,
}

#[derive(Serialize, Deserialize)]
struct Module1dDoc {
    index: String,
    window: Window1dDoc,
    dims: Vec<usize>,
    maps: Vec<MatrixRows>,
}

#[derive(Serialize, Deserialize)]
struct Window2dDoc {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

#[derive(Serialize, Deserialize)]
struct Module2dDoc {
    index: String,
    window: Window2dDoc,
    dims: Vec<Vec<usize>>,
    hmaps: BTreeMap<String, MatrixRows>,
    vmaps: BTreeMap<String, MatrixRows>,
}

#[derive(Deserialize)]
struct IndexProbe {
    index: String,
}

/// Builds a matrix from parsed rows, taking the expected shape from the
/// module dims so that zero-row matrices keep their column count.
fn matrix_from_rows(
    rows: MatrixRows,
    expected: (usize, usize),
    what: &str,
) -> Result<Matrix, ParseError> {
    if rows.len() != expected.0 {
        return Err(invalid(format!(
            "{what} has {} rows, expected {}",
            rows.len(),
            expected.0
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != expected.1 {
            return Err(invalid(format!(
                "{what} row {i} has {} entries, expected {}",
                row.len(),
                expected.1
            )));
        }
    }
    let mut m = Matrix::zero(expected.0, expected.1);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, entry) in row.into_iter().enumerate() {
            m.set(i, j, entry);
        }
    }
    Ok(m)
}

fn matrix_to_rows(m: &Matrix) -> MatrixRows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect())
        .collect()
}

fn map_key(source: (i64, i64)) -> String {
    format!("{},{}", source.0, source.1)
}

/// Parses a module document, dispatching on its "index" field ("Z" or "Z2").
pub fn parse_module(text: &str) -> Result<Module, ParseError> {
    let probe: IndexProbe =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    match probe.index.as_str() {
        "Z" => parse_module_1d(text).map(Module::One),
        "Z2" => parse_module_2d(text).map(Module::Two),
        other => Err(invalid(format!(
            "unknown index kind {other:?}, expected \"Z\" or \"Z2\""
        ))),
    }
}

fn parse_module_1d(text: &str) -> Result<Module1d, ParseError> {
    let doc: Module1dDoc =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let window = Window1d::new(doc.window.alpha, doc.window.beta)?;
    if doc.dims.len() != window.len() {
        return Err(invalid(format!(
            "expected {} dims, found {}",
            window.len(),
            doc.dims.len()
        )));
    }
    if doc.maps.len() + 1 != window.len() {
        return Err(invalid(format!(
            "expected {} maps, found {}",
            window.len() - 1,
            doc.maps.len()
        )));
    }
    let mut maps = Vec::with_capacity(doc.maps.len());
    for (k, rows) in doc.maps.into_iter().enumerate() {
        let source = window.alpha() + k as i64;
        maps.push(matrix_from_rows(
            rows,
            (doc.dims[k + 1], doc.dims[k]),
            &format!("map at degree {source}"),
        )?);
    }
    Ok(Module1d::new(window, doc.dims, maps)?)
}

fn parse_module_2d(text: &str) -> Result<Module2d, ParseError> {
    let doc: Module2dDoc =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let window = Window2d::new(
        doc.window.alpha,
        doc.window.beta,
        doc.window.gamma,
        doc.window.delta,
    )?;
    let (w, h) = (window.width(), window.height());
    if doc.dims.len() != w || doc.dims.iter().any(|col| col.len() != h) {
        return Err(invalid(format!("dims grid must be {w} x {h}")));
    }
    let dim_at = |i: i64, j: i64| -> usize {
        doc.dims[(i - window.alpha()) as usize][(j - window.gamma()) as usize]
    };

    let mut hdocs = doc.hmaps;
    let mut hmaps = Vec::new();
    for i in window.alpha()..window.beta() {
        let mut col = Vec::new();
        for j in window.gamma()..=window.delta() {
            let key = map_key((i, j));
            let rows = hdocs
                .remove(&key)
                .ok_or_else(|| invalid(format!("missing hmap at ({i}, {j})")))?;
            col.push(matrix_from_rows(
                rows,
                (dim_at(i + 1, j), dim_at(i, j)),
                &format!("hmap at ({i}, {j})"),
            )?);
        }
        hmaps.push(col);
    }
    if let Some(key) = hdocs.into_keys().next() {
        return Err(invalid(format!("unexpected hmap key {key:?}")));
    }

    let mut vdocs = doc.vmaps;
    let mut vmaps = Vec::new();
    for i in window.alpha()..=window.beta() {
        let mut col = Vec::new();
        for j in window.gamma()..window.delta() {
            let key = map_key((i, j));
            let rows = vdocs
                .remove(&key)
                .ok_or_else(|| invalid(format!("missing vmap at ({i}, {j})")))?;
            col.push(matrix_from_rows(
                rows,
                (dim_at(i, j + 1), dim_at(i, j)),
                &format!("vmap at ({i}, {j})"),
            )?);
        }
        vmaps.push(col);
    }
    if let Some(key) = vdocs.into_keys().next() {
        return Err(invalid(format!("unexpected vmap key {key:?}")));
    }

    Ok(Module2d::new(window, doc.dims, hmaps, vmaps)?)
}

pub fn serialize_module_1d(m: &Module1d) -> String {
    let doc = Module1dDoc {
        index: "Z".to_string(),
        window: Window1dDoc {
            alpha: m.window().alpha(),
            beta: m.window().beta(),
        },
        dims: m.dims().to_vec(),
        maps: m.maps().iter().map(matrix_to_rows).collect(),
    };
    serde_json::to_string(&doc).expect("module document serializes")
}

pub fn serialize_module_2d(m: &Module2d) -> String {
    let window = m.window();
    let mut hmaps = BTreeMap::new();
    for i in window.alpha()..window.beta() {
        for j in window.gamma()..=window.delta() {
            hmaps.insert(map_key((i, j)), matrix_to_rows(m.hmap((i, j))));
        }
    }
    let mut vmaps = BTreeMap::new();
    for i in window.alpha()..=window.beta() {
        for j in window.gamma()..window.delta() {
            vmaps.insert(map_key((i, j)), matrix_to_rows(m.vmap((i, j))));
        }
    }
    let doc = Module2dDoc {
        index: "Z2".to_string(),
        window: Window2dDoc {
            alpha: window.alpha(),
            beta: window.beta(),
            gamma: window.gamma(),
            delta: window.delta(),
        },
        dims: (window.alpha()..=window.beta())
            .map(|i| {
                (window.gamma()..=window.delta())
                    .map(|j| m.dim((i, j)))
                    .collect()
            })
            .collect(),
        hmaps,
        vmaps,
    };
    serde_json::to_string(&doc).expect("module document serializes")
}

pub fn serialize_module(m: &Module) -> String {
    match m {
        Module::One(m) => serialize_module_1d(m),
        Module::Two(m) => serialize_module_2d(m),
    }
}

#[derive(Serialize, Deserialize)]
struct BasisElementDoc<D> {
    degree: D,
    vector: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct BasisDoc<D> {
    elements: Vec<BasisElementDoc<D>>,
}

/// Parses a basis file whose degrees are single integers.
pub fn parse_basis_1d(text: &str) -> Result<GradedBasis<i64>, ParseError> {
    let doc: BasisDoc<i64> =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Ok(GradedBasis {
        elements: doc
            .elements
            .into_iter()
            .map(|e| DegreeElement {
                degree: e.degree,
                vector: e.vector,
            })
            .collect(),
    })
}

/// Parses a basis file whose degrees are integer pairs.
pub fn parse_basis_2d(text: &str) -> Result<GradedBasis<(i64, i64)>, ParseError> {
    let doc: BasisDoc<[i64; 2]> =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Ok(GradedBasis {
        elements: doc
            .elements
            .into_iter()
            .map(|e| DegreeElement {
                degree: (e.degree[0], e.degree[1]),
                vector: e.vector,
            })
            .collect(),
    })
}

pub fn serialize_basis_1d(b: &GradedBasis<i64>) -> String {
    let doc = BasisDoc {
        elements: b
            .elements
            .iter()
            .map(|e| BasisElementDoc {
                degree: e.degree,
                vector: e.vector.clone(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("basis document serializes")
}

pub fn serialize_basis_2d(b: &GradedBasis<(i64, i64)>) -> String {
    let doc = BasisDoc {
        elements: b
            .elements
            .iter()
            .map(|e| BasisElementDoc {
                degree: [e.degree.0, e.degree.1],
                vector: e.vector.clone(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("basis document serializes")
}
