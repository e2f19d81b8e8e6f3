//! JSON file formats for distributions, predicates, Kleisli maps,
//! metric spaces and complex matrices.
//!
//! Numbers are plain decimal doubles. Shapes:
//!
//! ```text
//! distribution  {"points": ["a","b"], "probs": [0.5, 0.5]}
//! predicate     {"points": ["a","b"], "values": [0.25, 1.0]}
//! kleisli       {"domain": [...], "codomain": [...], "matrix": [[...]]}
//! metric space  {"points": [...], "d": [[...]]}
//! matrix        {"dim": n, "entries": [[[re,im], ...], ...]}   (row-major)
//! ```
//!
//! Density matrices and effects reuse the matrix format; validation
//! happens on load.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{Dist, DistError, FuzzyPredicate, KleisliMap, Label};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::quantum::{ComplexMatrix, DensityMatrix, Effect, QuantumError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Serialize, Deserialize)]
struct DistDoc {
    points: Vec<String>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PredicateDoc {
    points: Vec<String>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct KleisliDoc {
    domain: Vec<String>,
    codomain: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct MetricDoc {
    points: Vec<String>,
    d: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

fn parse_labels(names: &[String]) -> Result<Vec<Label>, DistError> {
    names.iter().map(|n| Label::new(n)).collect()
}

fn zip_checked<T: Clone>(points: Vec<Label>, values: &[T]) -> Result<Vec<(Label, T)>, DistError> {
    if points.len() != values.len() {
        return Err(DistError::ShapeMismatch);
    }
    Ok(points.into_iter().zip(values.iter().cloned()).collect())
}

pub fn dist_from_json(text: &str) -> Result<Dist, IoError> {
    let doc: DistDoc = serde_json::from_str(text)?;
    let pairs = zip_checked(parse_labels(&doc.points)?, &doc.probs)?;
    Ok(Dist::new(pairs)?)
}

pub fn dist_to_json(d: &Dist) -> String {
    serde_json::to_string_pretty(&DistDoc {
        points: d.points().iter().map(|l| l.as_str().to_string()).collect(),
        probs: d.probs().to_vec(),
    })
    .expect("distribution serializes")
}

pub fn predicate_from_json(text: &str) -> Result<FuzzyPredicate, IoError> {
    let doc: PredicateDoc = serde_json::from_str(text)?;
    let pairs = zip_checked(parse_labels(&doc.points)?, &doc.values)?;
    Ok(FuzzyPredicate::new(pairs)?)
}

pub fn predicate_to_json(p: &FuzzyPredicate) -> String {
    serde_json::to_string_pretty(&PredicateDoc {
        points: p.points().iter().map(|l| l.as_str().to_string()).collect(),
        values: p.values().to_vec(),
    })
    .expect("predicate serializes")
}

pub fn kleisli_from_json(text: &str) -> Result<KleisliMap, IoError> {
    let doc: KleisliDoc = serde_json::from_str(text)?;
    Ok(KleisliMap::new(
        parse_labels(&doc.domain)?,
        parse_labels(&doc.codomain)?,
        doc.matrix,
    )?)
}

pub fn metric_from_json(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let doc: MetricDoc = serde_json::from_str(text)?;
    Ok(FiniteMetricSpace::new(parse_labels(&doc.points)?, doc.d)?)
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix, IoError> {
    let doc: MatrixDoc = serde_json::from_str(text)?;
    if doc.entries.len() != doc.dim || doc.entries.iter().any(|r| r.len() != doc.dim) {
        return Err(IoError::Quantum(QuantumError::DimensionMismatch(
            doc.dim,
            doc.entries.len(),
        )));
    }
    let rows = doc
        .entries
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect()
        })
        .collect();
    Ok(ComplexMatrix::from_rows(rows)?)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    let entries: Vec<Vec<[f64; 2]>> = (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&MatrixDoc {
        dim: m.dim(),
        entries,
    })
    .expect("matrix serializes")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix, IoError> {
    Ok(DensityMatrix::new(matrix_from_json(text)?)?)
}

pub fn effect_from_json(text: &str) -> Result<Effect, IoError> {
    Ok(Effect::new(matrix_from_json(text)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_round_trip() {
        let text = r#"{"points": ["a", "b"], "probs": [0.5, 0.5]}"#;
        let d = dist_from_json(text).unwrap();
        let again = dist_from_json(&dist_to_json(&d)).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(dist_from_json("{}").is_err());
        assert!(dist_from_json(r#"{"points": ["a"], "probs": [0.5, 0.5]}"#).is_err());
        assert!(dist_from_json(r#"{"points": ["a"], "probs": [0.7]}"#).is_err());
        assert!(matrix_from_json(r#"{"dim": 2, "entries": [[[1,0]]]}"#).is_err());
    }

    #[test]
    fn metric_and_matrix_parse() {
        let space =
            metric_from_json(r#"{"points": ["a", "b"], "d": [[0.0, 0.5], [0.5, 0.0]]}"#).unwrap();
        assert_eq!(space.dist(0, 1), 0.5);

        let m =
            matrix_from_json(r#"{"dim": 2, "entries": [[[0.5,0],[0,-0.5]],[[0,0.5],[0.5,0]]]}"#)
                .unwrap();
        assert_eq!(m.get(0, 1), Complex64::new(0.0, -0.5));
        let again = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn density_and_effect_validation_on_load() {
        let ok = r#"{"dim": 2, "entries": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
        assert!(density_from_json(ok).is_ok());
        assert!(effect_from_json(ok).is_ok());
        let bad = r#"{"dim": 2, "entries": [[[0.9,0],[0,0]],[[0,0],[0.9,0]]]}"#;
        assert!(density_from_json(bad).is_err());
        assert!(effect_from_json(bad).is_ok());
    }
}
