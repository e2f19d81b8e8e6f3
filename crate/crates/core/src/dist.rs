//! Finite discrete probability distributions, fuzzy predicates, Kleisli
//! transformers, and the total variation distance with its sharp witness.
//!
//! A state is a map `ω : X → [0,1]` with `Σ ω(x) = 1`, a predicate is a
//! map `p : X → [0,1]`, and their validity is the expected value
//! `ω ⊨ p = Σ ω(x)·p(x)`. The total variation distance is
//! `tvd(ω₁, ω₂) = ½ Σ |ω₁(x) − ω₂(x)|` and is attained by the sharp
//! predicate (indicator) of the set `{x : ω₁(x) > ω₂(x)}`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::tol::{SHARP_TOL, SUM_TOL};

/// Errors from distribution, predicate and Kleisli constructors and
/// operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("invalid label {0:?}: {1}")]
    InvalidLabel(String, &'static str),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("negative probability {value} at {label:?}")]
    NegativeProb { label: String, value: f64 },
    #[error("value {value} at {label:?} outside [0,1]")]
    ValueOutOfRange { label: String, value: f64 },
    #[error("row {0} of Kleisli matrix sums to {1}, not 1")]
    RowNotNormalized(usize, f64),
    #[error("matrix shape does not match domain/codomain")]
    ShapeMismatch,
    #[error("operands live on different point lists")]
    SpaceMismatch,
    #[error("label {0:?} is not a pair label \"(x,y)\"")]
    NotAProductSpace(String),
}

/// A point of a finite space. Labels are compared in lexicographic byte
/// order, which is the canonical order of every point list in this crate.
///
/// An atomic label is a nonempty token without whitespace, parentheses or
/// commas. Pair labels `"(x,y)"` of two atomic labels are also accepted,
/// so that product spaces serialize without escaping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: &str) -> Result<Self, DistError> {
        let err = |why| DistError::InvalidLabel(name.to_string(), why);
        if name.is_empty() {
            return Err(err("empty"));
        }
        if name.chars().any(|c| c.is_whitespace()) {
            return Err(err("contains whitespace"));
        }
        let atomic = |s: &str| !s.is_empty() && !s.contains(['(', ')', ',']);
        if atomic(name) {
            return Ok(Label(name.to_string()));
        }
        // Pair label "(x,y)" with atomic components.
        if let Some(body) = name.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let mut parts = body.split(',');
            if let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) {
                if atomic(a) && atomic(b) {
                    return Ok(Label(name.to_string()));
                }
            }
        }
        Err(err(
            "not an atomic label or a pair \"(x,y)\" of atomic labels",
        ))
    }

    /// The pair label `"(x,y)"`. No escaping is performed, which is why
    /// atomic labels may not contain parentheses or commas.
    pub fn pair(x: &Label, y: &Label) -> Self {
        Label(format!("({},{})", x.0, y.0))
    }

    /// Splits a pair label into its components; `None` for atomic labels.
    pub fn split_pair(&self) -> Option<(Label, Label)> {
        let body = self.0.strip_prefix('(')?.strip_suffix(')')?;
        let mut parts = body.split(',');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                Some((Label(a.to_string()), Label(b.to_string())))
            }
            _ => None,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn check_distinct_sorted(points: &[Label]) -> Result<(), DistError> {
    for w in points.windows(2) {
        if w[0] == w[1] {
            return Err(DistError::DuplicateLabel(w[0].as_str().to_string()));
        }
    }
    Ok(())
}

fn sort_by_label<T: Clone>(pairs: &mut [(Label, T)]) {
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
}

/// A finite discrete probability distribution over labeled points.
///
/// Invariants: the point list is sorted and duplicate-free, every
/// probability is in `[0,1]`, and the total mass is 1 within
/// [`SUM_TOL`]. Zero entries are allowed but excluded from
/// [`Dist::support`].
/// Malformed input is rejected rather than renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    points: Vec<Label>,
    probs: Vec<f64>,
}

impl Dist {
    /// Builds a distribution from `(label, probability)` pairs, sorting
    /// the points into canonical order.
    pub fn new(pairs: Vec<(Label, f64)>) -> Result<Self, DistError> {
        let mut pairs = pairs;
        sort_by_label(&mut pairs);
        let points: Vec<Label> = pairs.iter().map(|(l, _)| l.clone()).collect();
        check_distinct_sorted(&points)?;
        let mut sum = 0.0;
        for (l, p) in &pairs {
            if *p < 0.0 {
                return Err(DistError::NegativeProb {
                    label: l.as_str().to_string(),
                    value: *p,
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(DistError::NotNormalized(sum));
        }
        Ok(Dist {
            points,
            probs: pairs.into_iter().map(|(_, p)| p).collect(),
        })
    }

    /// Convenience constructor from `&str` labels.
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Result<Self, DistError> {
        let pairs = pairs
            .iter()
            .map(|(n, p)| Ok((Label::new(n)?, *p)))
            .collect::<Result<Vec<_>, DistError>>()?;
        Dist::new(pairs)
    }

    /// The point mass `δ_x`.
    pub fn dirac(points: &[Label], at: &Label) -> Result<Self, DistError> {
        if !points.contains(at) {
            return Err(DistError::InvalidLabel(
                at.as_str().to_string(),
                "not a point of the space",
            ));
        }
        Dist::new(
            points
                .iter()
                .map(|l| (l.clone(), if l == at { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, l: &Label) -> f64 {
        match self.points.binary_search(l) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    /// The set of points with probability above [`SHARP_TOL`].
    pub fn support(&self) -> BTreeSet<Label> {
        self.points
            .iter()
            .zip(&self.probs)
            .filter(|(_, p)| **p > SHARP_TOL)
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// Re-expresses the distribution over a superset of its support,
    /// inserting zeros. Fails if some mass lives outside `points`.
    pub fn align_to(&self, points: &[Label]) -> Result<Dist, DistError> {
        let mut probs = vec![0.0; points.len()];
        for (l, p) in self.points.iter().zip(&self.probs) {
            match points.binary_search(l) {
                Ok(i) => probs[i] = *p,
                Err(_) if *p <= SHARP_TOL => {}
                Err(_) => return Err(DistError::SpaceMismatch),
            }
        }
        Ok(Dist {
            points: points.to_vec(),
            probs,
        })
    }
}

/// A fuzzy predicate `p : X → [0,1]` over a labeled point list.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPredicate {
    points: Vec<Label>,
    values: Vec<f64>,
}

impl FuzzyPredicate {
    pub fn new(pairs: Vec<(Label, f64)>) -> Result<Self, DistError> {
        let mut pairs = pairs;
        sort_by_label(&mut pairs);
        let points: Vec<Label> = pairs.iter().map(|(l, _)| l.clone()).collect();
        check_distinct_sorted(&points)?;
        for (l, v) in &pairs {
            if !(0.0..=1.0).contains(v) {
                return Err(DistError::ValueOutOfRange {
                    label: l.as_str().to_string(),
                    value: *v,
                });
            }
        }
        Ok(FuzzyPredicate {
            points,
            values: pairs.into_iter().map(|(_, v)| v).collect(),
        })
    }

    /// Predicate with the same value everywhere.
    pub fn constant(points: &[Label], value: f64) -> Result<Self, DistError> {
        FuzzyPredicate::new(points.iter().map(|l| (l.clone(), value)).collect())
    }

    /// The indicator `1_U` of a subset.
    pub fn indicator(points: &[Label], subset: &BTreeSet<Label>) -> Result<Self, DistError> {
        FuzzyPredicate::new(
            points
                .iter()
                .map(|l| (l.clone(), if subset.contains(l) { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sharp iff every value is 0 or 1 within [`SHARP_TOL`].
    pub fn is_sharp(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.abs() <= SHARP_TOL || (v - 1.0).abs() <= SHARP_TOL)
    }
}

/// A Kleisli map `f : X → D(Y)`: a row-stochastic matrix with rows
/// indexed by the domain and columns by the codomain.
#[derive(Debug, Clone, PartialEq)]
pub struct KleisliMap {
    domain: Vec<Label>,
    codomain: Vec<Label>,
    matrix: Vec<Vec<f64>>,
}

impl KleisliMap {
    /// Builds a Kleisli map; domain and codomain are sorted into
    /// canonical order with the matrix permuted to match.
    pub fn new(
        domain: Vec<Label>,
        codomain: Vec<Label>,
        matrix: Vec<Vec<f64>>,
    ) -> Result<Self, DistError> {
        if matrix.len() != domain.len() || matrix.iter().any(|r| r.len() != codomain.len()) {
            return Err(DistError::ShapeMismatch);
        }
        let mut dom_idx: Vec<usize> = (0..domain.len()).collect();
        dom_idx.sort_by(|&a, &b| domain[a].cmp(&domain[b]));
        let mut cod_idx: Vec<usize> = (0..codomain.len()).collect();
        cod_idx.sort_by(|&a, &b| codomain[a].cmp(&codomain[b]));

        let sorted_dom: Vec<Label> = dom_idx.iter().map(|&i| domain[i].clone()).collect();
        let sorted_cod: Vec<Label> = cod_idx.iter().map(|&j| codomain[j].clone()).collect();
        check_distinct_sorted(&sorted_dom)?;
        check_distinct_sorted(&sorted_cod)?;

        let mut sorted = Vec::with_capacity(domain.len());
        for (row_out, &i) in dom_idx.iter().enumerate() {
            let row: Vec<f64> = cod_idx.iter().map(|&j| matrix[i][j]).collect();
            for (j, v) in row.iter().enumerate() {
                if *v < 0.0 {
                    return Err(DistError::NegativeProb {
                        label: format!("{}->{}", sorted_dom[row_out], sorted_cod[j]),
                        value: *v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > SUM_TOL {
                return Err(DistError::RowNotNormalized(row_out, sum));
            }
            sorted.push(row);
        }
        Ok(KleisliMap {
            domain: sorted_dom,
            codomain: sorted_cod,
            matrix: sorted,
        })
    }

    /// The unit `η`: Dirac rows on a space.
    pub fn identity(points: &[Label]) -> Result<Self, DistError> {
        let n = points.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        KleisliMap::new(points.to_vec(), points.to_vec(), matrix)
    }

    pub fn domain(&self) -> &[Label] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Label] {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// The distribution `f(x)` at a domain point.
    pub fn row_dist(&self, x: &Label) -> Result<Dist, DistError> {
        let i = self
            .domain
            .binary_search(x)
            .map_err(|_| DistError::SpaceMismatch)?;
        Dist::new(
            self.codomain
                .iter()
                .cloned()
                .zip(self.matrix[i].iter().cloned())
                .collect(),
        )
    }
}

/// The validity `ω ⊨ p = Σ ω(x)·p(x)`, a number in `[0,1]`.
pub fn validity(omega: &Dist, p: &FuzzyPredicate) -> Result<f64, DistError> {
    if omega.points != p.points {
        return Err(DistError::SpaceMismatch);
    }
    Ok(omega.probs.iter().zip(&p.values).map(|(w, v)| w * v).sum())
}

/// State transformation `f∗(ω)(y) = Σ_x f(x)(y)·ω(x)`.
pub fn state_transform(f: &KleisliMap, omega: &Dist) -> Result<Dist, DistError> {
    if omega.points != f.domain {
        return Err(DistError::SpaceMismatch);
    }
    let mut out = vec![0.0; f.codomain.len()];
    for (i, w) in omega.probs.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o += f.matrix[i][j] * w;
        }
    }
    Dist::new(f.codomain.iter().cloned().zip(out).collect())
}

/// Predicate transformation `f∗(q)(x) = Σ_y f(x)(y)·q(y)`.
pub fn pred_transform(f: &KleisliMap, q: &FuzzyPredicate) -> Result<FuzzyPredicate, DistError> {
    if q.points != f.codomain {
        return Err(DistError::SpaceMismatch);
    }
    let values: Vec<f64> = f
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(&q.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                .clamp(0.0, 1.0)
        })
        .collect();
    FuzzyPredicate::new(f.domain.iter().cloned().zip(values).collect())
}

/// Aligns two distributions over the union of their point lists, with
/// implicit zeros.
pub fn align(a: &Dist, b: &Dist) -> (Dist, Dist) {
    if a.points == b.points {
        return (a.clone(), b.clone());
    }
    let union: Vec<Label> = a
        .points
        .iter()
        .chain(b.points.iter())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Supports are subsets of the union, so align_to cannot fail.
    (a.align_to(&union).unwrap(), b.align_to(&union).unwrap())
}

/// Total variation distance `½ Σ |ω₁(x) − ω₂(x)|`. Distributions over
/// different point lists are first aligned over the union of labels.
pub fn tvd(omega1: &Dist, omega2: &Dist) -> f64 {
    let (a, b) = align(omega1, omega2);
    let s: f64 = a
        .probs
        .iter()
        .zip(&b.probs)
        .map(|(x, y)| (x - y).abs())
        .sum();
    (0.5 * s).clamp(0.0, 1.0)
}

/// The sharp witness of the total variation distance: the subset
/// `U = {x : ω₁(x) > ω₂(x)}` together with the validity gap
/// `(ω₁ ⊨ 1_U) − (ω₂ ⊨ 1_U)`, which equals `tvd(ω₁, ω₂)`.
pub fn tvd_witness(omega1: &Dist, omega2: &Dist) -> (BTreeSet<Label>, f64) {
    let (a, b) = align(omega1, omega2);
    let mut subset = BTreeSet::new();
    let mut gap = 0.0;
    for ((l, &p), &q) in a.points.iter().zip(&a.probs).zip(&b.probs) {
        if p > q {
            subset.insert(l.clone());
            gap += p - q;
        }
    }
    (subset, gap)
}

/// The product state `ω₁ ⊗ ω₂` over pair labels `"(x,y)"`.
pub fn tensor(omega1: &Dist, omega2: &Dist) -> Dist {
    let mut pairs = Vec::with_capacity(omega1.points.len() * omega2.points.len());
    for (x, &p) in omega1.points.iter().zip(&omega1.probs) {
        for (y, &q) in omega2.points.iter().zip(&omega2.probs) {
            pairs.push((Label::pair(x, y), p * q));
        }
    }
    sort_by_label(&mut pairs);
    let (points, probs) = pairs.into_iter().unzip();
    Dist { points, probs }
}

/// Which factor of a product to keep when marginalizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Marginal of a distribution over pair labels, summing out the
/// discarded coordinate.
pub fn marginal(omega: &Dist, side: Side) -> Result<Dist, DistError> {
    let mut acc: Vec<(Label, f64)> = Vec::new();
    for (l, &p) in omega.points.iter().zip(&omega.probs) {
        let (x, y) = l
            .split_pair()
            .ok_or_else(|| DistError::NotAProductSpace(l.as_str().to_string()))?;
        let key = match side {
            Side::First => x,
            Side::Second => y,
        };
        match acc.iter_mut().find(|(k, _)| *k == key) {
            Some((_, mass)) => *mass += p,
            None => acc.push((key, p)),
        }
    }
    Dist::new(acc)
}
