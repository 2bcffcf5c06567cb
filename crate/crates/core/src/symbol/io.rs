//! JSON serialization of operator specs.
//!
//! The document layout is fixed: matrices are row-major k-by-k real arrays
//! split into `re`/`im` parts, one mode per `(p, q)` entry. Unknown keys are
//! rejected outright.

use super::periodic::{PeriodicFunction, SemiPeriodicCoefficient};
use super::spec::{BaseManifold, OperatorSpec};
use super::Side;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorSpecJson {
    base: BaseManifold,
    k: usize,
    #[serde(rename = "N")]
    order: usize,
    terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    j: usize,
    alpha: usize,
    plus: Vec<ModeJson>,
    minus: Vec<ModeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeJson {
    p: i64,
    q: i64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn matrix_from_parts(k: usize, re: &[Vec<f64>], im: &[Vec<f64>], context: &str) -> Result<CMat> {
    let check = |part: &[Vec<f64>], name: &str| -> Result<()> {
        if part.len() != k || part.iter().any(|row| row.len() != k) {
            return Err(Error::Schema(format!(
                "{context}: `{name}` must be a {k}x{k} row-major array"
            )));
        }
        Ok(())
    };
    check(re, "re")?;
    check(im, "im")?;
    Ok(Array2::from_shape_fn((k, k), |(r, c)| {
        Complex64::new(re[r][c], im[r][c])
    }))
}

fn modes_to_function(k: usize, modes: &[ModeJson], context: &str) -> Result<PeriodicFunction> {
    let mut f = PeriodicFunction::zero(k);
    for (i, mode) in modes.iter().enumerate() {
        let ctx = format!("{context}, mode #{i} (p={}, q={})", mode.p, mode.q);
        let m = matrix_from_parts(k, &mode.re, &mode.im, &ctx)?;
        if f.coefficient(mode.p, mode.q).is_some() {
            return Err(Error::Schema(format!("{ctx}: duplicate mode")));
        }
        f = f.with_mode(mode.p, mode.q, m);
    }
    Ok(f)
}

/// Parse an operator spec document, rejecting unknown fields and malformed
/// matrices with a named diagnostic.
pub fn parse_operator_spec(text: &str) -> Result<OperatorSpec> {
    let json: OperatorSpecJson = serde_json::from_str(text)
        .map_err(|e| Error::Schema(format!("operator spec: {e}")))?;
    let mut terms = Vec::new();
    for (i, term) in json.terms.iter().enumerate() {
        let context = format!("term #{i} (j={}, alpha={})", term.j, term.alpha);
        let minus = modes_to_function(json.k, &term.minus, &format!("{context}, minus"))?;
        let plus = modes_to_function(json.k, &term.plus, &format!("{context}, plus"))?;
        terms.push((
            (term.j, term.alpha),
            SemiPeriodicCoefficient::new(minus, plus)?,
        ));
    }
    OperatorSpec::new(json.base, json.k, json.order, terms)
}

fn function_to_modes(f: &PeriodicFunction) -> Vec<ModeJson> {
    f.modes()
        .map(|(&(p, q), m)| ModeJson {
            p,
            q,
            re: (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| m[(r, c)].re).collect())
                .collect(),
            im: (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| m[(r, c)].im).collect())
                .collect(),
        })
        .collect()
}

/// Canonical JSON form of a spec (terms and modes in sorted order).
pub fn spec_to_json(spec: &OperatorSpec) -> String {
    let json = OperatorSpecJson {
        base: spec.base(),
        k: spec.k(),
        order: spec.order(),
        terms: spec
            .terms()
            .map(|(&(j, alpha), c)| TermJson {
                j,
                alpha,
                plus: function_to_modes(c.side(Side::Plus)),
                minus: function_to_modes(c.side(Side::Minus)),
            })
            .collect(),
    };
    serde_json::to_string(&json).expect("spec serialization cannot fail")
}

/// SHA-256 of the canonical serialization, as lowercase hex.
pub fn spec_hash(spec: &OperatorSpec) -> String {
    let digest = Sha256::digest(spec_to_json(spec).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT_SPEC: &str = r#"{
        "base": "point", "k": 1, "N": 1,
        "terms": [
            {"j": 1, "alpha": 0,
             "plus":  [{"p": 0, "q": 0, "re": [[1.0]], "im": [[0.0]]}],
             "minus": [{"p": 0, "q": 0, "re": [[1.0]], "im": [[0.0]]}]}
        ]
    }"#;

    #[test]
    fn parses_and_roundtrips() {
        let spec = parse_operator_spec(DT_SPEC).unwrap();
        assert_eq!(spec.k(), 1);
        assert_eq!(spec.order(), 1);
        let text = spec_to_json(&spec);
        let again = parse_operator_spec(&text).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec_hash(&spec), spec_hash(&again));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = DT_SPEC.replace("\"base\"", "\"extra\": 1, \"base\"");
        let err = parse_operator_spec(&bad).unwrap_err();
        assert!(matches!(err, Error::Schema(_)), "{err}");
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn nonzero_q_over_point_base_is_rejected() {
        let bad = DT_SPEC.replace("\"q\": 0", "\"q\": 1");
        let err = parse_operator_spec(&bad).unwrap_err();
        assert!(err.to_string().contains("q = 0"), "{err}");
    }

    #[test]
    fn malformed_matrix_is_rejected_with_context() {
        let bad = DT_SPEC.replace("[[1.0]]", "[[1.0, 2.0]]");
        let err = parse_operator_spec(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("1x1") && msg.contains("term #0"), "{msg}");
    }
}
