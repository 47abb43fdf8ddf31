//! Implementations of the subcommands. Each returns the output text; the
//! binary decides where it goes.

use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use sosgram::cgtools::{
    harmonic_decompose, matrix_transvectant, support_profile, transvectant_poly,
};
use sosgram::grams::{canonical_gram, gram_eval, gram_transform, psd_check, PsdVerdict};
use sosgram::lifting::{induced_matrix, monomial_lift, scaled_lift_weights};
use sosgram::structured::{corollary_pipeline, Certificate, GramSource};
use sosgram::symprod::sym_tensor_product;
use sosgram::{Form, SymMatrix};

use crate::docs::{
    self, form_document_from_json, form_from_document, form_to_document, linear_map_from_document,
    matrix_document_from_json, matrix_to_document, parse_rational, sym_matrix_from_document,
    sym_matrix_to_document, to_json_string,
};
use crate::{read_file, CliError, CliResult};

fn load_form(path: &Path) -> CliResult<Form> {
    form_from_document(&form_document_from_json(&read_file(path)?)?)
}

fn load_sym_matrix(path: &Path) -> CliResult<SymMatrix> {
    sym_matrix_from_document(&matrix_document_from_json(&read_file(path)?)?)
}

fn load_linear_map(path: &Path) -> CliResult<sosgram::RatMat> {
    linear_map_from_document(&matrix_document_from_json(&read_file(path)?)?)
}

pub fn lift(point: &str, degree: usize, scaled_float: bool) -> CliResult<String> {
    let coords = point
        .split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<CliResult<Vec<_>>>()?;
    if coords.is_empty() {
        return Err(CliError::Usage(
            "--point needs at least one coordinate".into(),
        ));
    }
    let lifted = monomial_lift(&coords, degree);
    if scaled_float {
        let weights = scaled_lift_weights(lifted.n, lifted.d);
        let entries: Vec<Value> = lifted
            .entries
            .iter()
            .zip(&weights)
            .map(|(v, w)| {
                let approx = v.to_f64().unwrap_or(f64::NAN) * w.to_f64().unwrap_or(f64::NAN).sqrt();
                json!(approx)
            })
            .collect();
        return Ok(to_json_string(&json!({
            "schema_version": docs::SCHEMA_VERSION,
            "n": lifted.n,
            "d": lifted.d,
            "basis": "scaled_float_approximate",
            "entries": entries,
        })));
    }
    let entries: Vec<String> = lifted.entries.iter().map(docs::format_rational).collect();
    Ok(to_json_string(&json!({
        "schema_version": docs::SCHEMA_VERSION,
        "n": lifted.n,
        "d": lifted.d,
        "basis": docs::BASIS_UNSCALED,
        "entries": entries,
    })))
}

pub fn induced(matrix: &Path, degree: usize) -> CliResult<String> {
    let a = load_linear_map(matrix)?;
    let n = a.nrows();
    let lifted = induced_matrix(&a, degree)?;
    Ok(to_json_string(&matrix_to_document(n, degree, &lifted)))
}

pub fn gram_canonical(form: &Path, scaled_float: bool) -> CliResult<String> {
    let p = load_form(form)?;
    let g = canonical_gram(&p)?;
    if scaled_float {
        return Ok(to_json_string(&scaled_float_view(&g)));
    }
    Ok(to_json_string(&sym_matrix_to_document(&g)))
}

/// Approximate scaled-basis view of a matrix: entry (i, j) divided by
/// sqrt(w_i w_j) with w the multinomial weights. Display only; the exact
/// pipeline never leaves the unscaled basis.
fn scaled_float_view(m: &SymMatrix) -> Value {
    let weights = scaled_lift_weights(m.n(), m.index_degree());
    let rows: Vec<Vec<Value>> = (0..m.side())
        .map(|i| {
            (0..m.side())
                .map(|j| {
                    let scale = (weights[i].to_f64().unwrap_or(f64::NAN)
                        * weights[j].to_f64().unwrap_or(f64::NAN))
                    .sqrt();
                    json!(m.entry(i, j).to_f64().unwrap_or(f64::NAN) / scale)
                })
                .collect()
        })
        .collect();
    json!({
        "schema_version": docs::SCHEMA_VERSION,
        "n": m.n(),
        "d": m.index_degree(),
        "basis": "scaled_float_approximate",
        "rows": rows,
    })
}

pub fn gram_eval_cmd(matrix: &Path) -> CliResult<String> {
    let q = load_sym_matrix(matrix)?;
    Ok(to_json_string(&form_to_document(&gram_eval(&q))))
}

pub fn gram_transform_cmd(matrix: &Path, by: &Path) -> CliResult<String> {
    let q = load_sym_matrix(matrix)?;
    let a = load_linear_map(by)?;
    let transformed = gram_transform(&q, &a)?;
    Ok(to_json_string(&sym_matrix_to_document(&transformed)))
}

fn verdict_to_json(verdict: &PsdVerdict) -> Value {
    match verdict {
        PsdVerdict::Psd { rank } => json!({ "is_psd": true, "rank": rank }),
        PsdVerdict::NotPsd { witness } => json!({
            "is_psd": false,
            "witness": witness.iter().map(docs::format_rational).collect::<Vec<_>>(),
        }),
    }
}

pub fn psd(matrix: &Path) -> CliResult<String> {
    let q = load_sym_matrix(matrix)?;
    Ok(to_json_string(&verdict_to_json(&psd_check(&q))))
}

pub fn transvect_matrix(matrix: &Path, power: usize) -> CliResult<String> {
    let mut current = load_sym_matrix(matrix)?;
    for _ in 0..power {
        current = matrix_transvectant(&current)?;
    }
    Ok(to_json_string(&sym_matrix_to_document(&current)))
}

pub fn transvect_poly(p: &Path, q: &Path, order: usize) -> CliResult<String> {
    let pf = load_form(p)?;
    let qf = load_form(q)?;
    let result = transvectant_poly(&pf, &qf, order)?;
    Ok(to_json_string(&form_to_document(&result)))
}

pub fn symprod(a: &Path, b: &Path) -> CliResult<String> {
    let am = load_sym_matrix(a)?;
    let bm = load_sym_matrix(b)?;
    let product = sym_tensor_product(&am, &bm)?;
    Ok(to_json_string(&sym_matrix_to_document(&product)))
}

pub fn harmonic(form: &Path) -> CliResult<String> {
    let p = load_form(form)?;
    let hd = harmonic_decompose(&p)?;
    let parts: Vec<Value> = hd
        .parts
        .iter()
        .map(|part| {
            json!({
                "degree": part.degree(),
                "form": form_to_document(part),
            })
        })
        .collect();
    Ok(to_json_string(&parts))
}

pub fn support(matrix: &Path) -> CliResult<String> {
    let q = load_sym_matrix(matrix)?;
    let profile = support_profile(&q)?;
    Ok(to_json_string(&json!({
        "component_degrees": profile.component_degrees(),
        "nonzero_mask": profile.nonzero_mask(),
    })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    Exact,
    Roots,
}

pub fn certify(
    form: &Path,
    quotient_gram: Option<&Path>,
    mode: Option<CertifyMode>,
    pairing_tol: f64,
) -> CliResult<String> {
    if !(pairing_tol > 0.0 && pairing_tol < 1.0) {
        return Err(CliError::Usage(format!(
            "--pairing-tol must lie strictly between 0 and 1, got {pairing_tol}"
        )));
    }
    let p = load_form(form)?;
    let supplied = quotient_gram.map(load_sym_matrix).transpose()?;
    let effective_mode = match (mode, supplied.is_some()) {
        (Some(CertifyMode::Exact), false) => {
            return Err(CliError::Usage(
                "--mode exact requires --quotient-gram FILE".into(),
            ))
        }
        (Some(CertifyMode::Roots), true) => {
            return Err(CliError::Usage(
                "--mode roots conflicts with --quotient-gram; drop one of them".into(),
            ))
        }
        (Some(m), _) => m,
        (None, true) => CertifyMode::Exact,
        (None, false) => CertifyMode::Roots,
    };
    let cert = match effective_mode {
        CertifyMode::Exact => corollary_pipeline(&p, supplied.as_ref(), pairing_tol)?,
        CertifyMode::Roots => corollary_pipeline(&p, None, pairing_tol)?,
    };
    Ok(to_json_string(&certificate_to_json(&cert)))
}

pub fn certificate_to_json(cert: &Certificate) -> Value {
    let source = match cert.provenance.gram_source {
        GramSource::Supplied => "supplied",
        GramSource::RootPairing => "root_pairing",
        GramSource::ZeroForm => "zero_form",
    };
    json!({
        "target": form_to_document(&cert.target),
        "gram": sym_matrix_to_document(&cert.gram),
        "psd": verdict_to_json(&cert.psd),
        "support": {
            "component_degrees": cert.profile.component_degrees(),
            "nonzero_mask": cert.profile.nonzero_mask(),
        },
        "provenance": {
            "canonical_factor": form_to_document(&cert.provenance.canonical_factor),
            "other_factor": form_to_document(&cert.provenance.other_factor),
            "gram_source": source,
            "d1": cert.provenance.d1,
            "d2": cert.provenance.d2,
            "observed_components": cert.observed_components(),
            "theorem_claim": cert.provenance.theorem_claim,
            "lemma_bound": cert.provenance.lemma_bound,
        },
    })
}
