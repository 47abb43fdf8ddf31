//! JSON document formats. Rationals travel as strings ("p/q" or "p") so
//! no float round trip can corrupt them; only the unscaled monomial basis
//! is accepted.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use sosgram::forms::basis_size;
use sosgram::{BigRational, Form, MultiIndex, RatMat, SymMatrix};

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: &str = "1";
pub const BASIS_UNSCALED: &str = "unscaled";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDocument {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDocument {
    pub schema_version: String,
    pub n: usize,
    pub degree: usize,
    pub basis: String,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub schema_version: String,
    pub n: usize,
    pub d: usize,
    pub basis: String,
    pub rows: Vec<Vec<String>>,
}

/// Parse "p/q" or "p" into an exact rational. Rejects zero denominators
/// instead of panicking, and anything that is not plain integers.
pub fn parse_rational(text: &str) -> CliResult<BigRational> {
    let bad = || CliError::Document(format!("cannot parse rational from {text:?}"));
    let mut pieces = text.splitn(2, '/');
    let numer = BigInt::from_str(pieces.next().ok_or_else(bad)?.trim()).map_err(|_| bad())?;
    let denom = match pieces.next() {
        Some(d) => BigInt::from_str(d.trim()).map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(CliError::Document(format!(
            "zero denominator in rational {text:?}"
        )));
    }
    Ok(BigRational::new(numer, denom))
}

pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

fn check_header(schema_version: &str, basis: &str) -> CliResult<()> {
    if schema_version != SCHEMA_VERSION {
        return Err(CliError::Document(format!(
            "unsupported schema_version {schema_version:?}, expected {SCHEMA_VERSION:?}"
        )));
    }
    if basis != BASIS_UNSCALED {
        return Err(CliError::Document(format!(
            "unsupported basis {basis:?}: only the unscaled monomial basis is exact; \
             scaled views are available via --scaled-float"
        )));
    }
    Ok(())
}

pub fn form_to_document(form: &Form) -> FormDocument {
    FormDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        n: form.n(),
        degree: form.degree(),
        basis: BASIS_UNSCALED.to_string(),
        terms: form
            .terms()
            .map(|(idx, c)| TermDocument {
                exponents: idx.exps().to_vec(),
                coeff: format_rational(c),
            })
            .collect(),
    }
}

pub fn form_from_document(doc: &FormDocument) -> CliResult<Form> {
    check_header(&doc.schema_version, &doc.basis)?;
    if doc.n == 0 {
        return Err(CliError::Document("n must be at least 1".into()));
    }
    let mut seen = std::collections::HashSet::new();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for term in &doc.terms {
        if term.exponents.len() != doc.n {
            return Err(CliError::Document(format!(
                "term {:?} has {} exponents, expected {}",
                term.exponents,
                term.exponents.len(),
                doc.n
            )));
        }
        let total: usize = term.exponents.iter().map(|&e| e as usize).sum();
        if total != doc.degree {
            return Err(CliError::Document(format!(
                "term {:?} has degree {}, document declares {}",
                term.exponents, total, doc.degree
            )));
        }
        if !seen.insert(term.exponents.clone()) {
            return Err(CliError::Document(format!(
                "duplicate exponent vector {:?}",
                term.exponents
            )));
        }
        let coeff = parse_rational(&term.coeff)?;
        if coeff.is_zero() {
            return Err(CliError::Document(format!(
                "zero coefficient stored for {:?}; omit the term instead",
                term.exponents
            )));
        }
        terms.push((MultiIndex::new(term.exponents.clone()), coeff));
    }
    Form::from_terms(doc.n, doc.degree, terms).map_err(CliError::from)
}

pub fn matrix_to_document(n: usize, d: usize, mat: &RatMat) -> MatrixDocument {
    MatrixDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        n,
        d,
        basis: BASIS_UNSCALED.to_string(),
        rows: (0..mat.nrows())
            .map(|i| mat.row(i).iter().map(format_rational).collect())
            .collect(),
    }
}

pub fn sym_matrix_to_document(m: &SymMatrix) -> MatrixDocument {
    matrix_to_document(m.n(), m.index_degree(), m.mat())
}

fn rows_from_document(doc: &MatrixDocument) -> CliResult<RatMat> {
    check_header(&doc.schema_version, &doc.basis)?;
    let side = doc.rows.len();
    let mut rows = Vec::with_capacity(side);
    for row in &doc.rows {
        if row.len() != side {
            return Err(CliError::Document(format!(
                "matrix is not square: {side} rows but a row of length {}",
                row.len()
            )));
        }
        rows.push(
            row.iter()
                .map(|s| parse_rational(s))
                .collect::<CliResult<Vec<_>>>()?,
        );
    }
    RatMat::from_rows(rows).map_err(CliError::from)
}

/// Parse a monomial-indexed symmetric matrix (a Gram-type document):
/// the side must match the basis size and the entries must be symmetric.
pub fn sym_matrix_from_document(doc: &MatrixDocument) -> CliResult<SymMatrix> {
    let mat = rows_from_document(doc)?;
    if doc.n == 0 {
        return Err(CliError::Document("n must be at least 1".into()));
    }
    let expected = basis_size(doc.n, doc.d);
    if mat.nrows() != expected {
        return Err(CliError::Document(format!(
            "matrix side {} does not match the size {} of the degree-{} basis in {} variables",
            mat.nrows(),
            expected,
            doc.d,
            doc.n
        )));
    }
    SymMatrix::new(doc.n, doc.d, mat).map_err(CliError::from)
}

/// Parse an n x n linear transformation (a degree-1 document). Unlike
/// Gram documents these are not required to be symmetric.
pub fn linear_map_from_document(doc: &MatrixDocument) -> CliResult<RatMat> {
    if doc.d != 1 {
        return Err(CliError::Document(format!(
            "a transformation matrix document must have d = 1, got d = {}",
            doc.d
        )));
    }
    if doc.n == 0 {
        return Err(CliError::Document("n must be at least 1".into()));
    }
    let mat = rows_from_document(doc)?;
    if mat.nrows() != doc.n {
        return Err(CliError::Document(format!(
            "transformation matrix side {} does not match n = {}",
            mat.nrows(),
            doc.n
        )));
    }
    Ok(mat)
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn form_document_from_json(text: &str) -> CliResult<FormDocument> {
    serde_json::from_str(text).map_err(|e| CliError::Document(format!("invalid form JSON: {e}")))
}

pub fn matrix_document_from_json(text: &str) -> CliResult<MatrixDocument> {
    serde_json::from_str(text).map_err(|e| CliError::Document(format!("invalid matrix JSON: {e}")))
}
