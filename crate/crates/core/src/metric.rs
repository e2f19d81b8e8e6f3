//! Finite 1-bounded metric spaces, the supremum metric on predicates,
//! and the Kantorovich distance with its non-expansive dual witness.
//!
//! The Kantorovich distance is the join of validity gaps over
//! non-expansive predicates `p : X → [0,1]`; on a finite space it equals
//! the optimum of the transportation problem with the metric as cost,
//! which [`kantorovich`] computes exactly via [`crate::transport`]. The
//! dual witness is rebuilt from the solver's potentials.

use thiserror::Error;

use crate::dist::{Dist, DistError, FuzzyPredicate, KleisliMap, Label};
use crate::tol::{DUAL_TOL, MET_TOL};
use crate::transport::{solve_transport, TransportError, TransportProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix must be square of the point count")]
    BadShape,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("d({0},{1}) != d({1},{0})")]
    NotSymmetric(String, String),
    #[error("d({0},{0}) must be 0")]
    NonzeroSelfDistance(String),
    #[error("triangle inequality fails: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(String, String, String),
    #[error("d({0},{1}) = {2} is outside [0,1]")]
    NotOneBounded(String, String, f64),
    #[error("distinct points {0}, {1} at distance 0")]
    ZeroDistanceDistinctPoints(String, String),
    #[error("predicate is not non-expansive between {0} and {1}")]
    NotNonexpansive(String, String),
    #[error("operands live on different point lists")]
    SpaceMismatch,
    #[error("transport solver failed: {0}")]
    SolverFailure(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl From<TransportError> for MetricError {
    fn from(e: TransportError) -> Self {
        MetricError::SolverFailure(e.to_string())
    }
}

/// A finite 1-bounded metric space: sorted distinct labels and a
/// symmetric matrix `d : X × X → [0,1]` with zero diagonal, positive
/// off-diagonal entries, and the triangle inequality within [`MET_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    points: Vec<Label>,
    d: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Validates the metric axioms, reporting the violated axiom and the
    /// offending points. Points are sorted into canonical order with the
    /// matrix permuted to match.
    pub fn new(points: Vec<Label>, d: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let n = points.len();
        if n == 0 || d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(MetricError::BadShape);
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
        let pts: Vec<Label> = idx.iter().map(|&i| points[i].clone()).collect();
        for w in pts.windows(2) {
            if w[0] == w[1] {
                return Err(MetricError::DuplicateLabel(w[0].as_str().to_string()));
            }
        }
        let d: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| d[i][j]).collect())
            .collect();

        let name = |i: usize| pts[i].as_str().to_string();
        for i in 0..n {
            if d[i][i].abs() > MET_TOL {
                return Err(MetricError::NonzeroSelfDistance(name(i)));
            }
            for j in 0..n {
                if !(0.0..=1.0).contains(&d[i][j]) || !d[i][j].is_finite() {
                    return Err(MetricError::NotOneBounded(name(i), name(j), d[i][j]));
                }
                if (d[i][j] - d[j][i]).abs() > MET_TOL {
                    return Err(MetricError::NotSymmetric(name(i), name(j)));
                }
                if i != j && d[i][j] == 0.0 {
                    return Err(MetricError::ZeroDistanceDistinctPoints(name(i), name(j)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > d[i][j] + d[j][k] + MET_TOL {
                        return Err(MetricError::TriangleViolation(name(i), name(j), name(k)));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { points: pts, d })
    }

    /// The discrete metric: distance 0 between equal points, 1 otherwise.
    pub fn discrete(labels: &[Label]) -> Result<Self, MetricError> {
        let n = labels.len();
        let d = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        FiniteMetricSpace::new(labels.to_vec(), d)
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.d
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.points.binary_search(l).ok()
    }
}

/// A predicate `p : X → [0,1]` that is non-expansive for the space's
/// metric: `|p(x) − p(y)| ≤ d(x,y)` within [`MET_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct NonexpansivePredicate {
    space: FiniteMetricSpace,
    pred: FuzzyPredicate,
}

impl NonexpansivePredicate {
    pub fn new(space: FiniteMetricSpace, values: Vec<f64>) -> Result<Self, MetricError> {
        if values.len() != space.points.len() {
            return Err(MetricError::SpaceMismatch);
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if (values[i] - values[j]).abs() > space.d[i][j] + MET_TOL {
                    return Err(MetricError::NotNonexpansive(
                        space.points[i].as_str().to_string(),
                        space.points[j].as_str().to_string(),
                    ));
                }
            }
        }
        let pred = FuzzyPredicate::new(space.points.iter().cloned().zip(values).collect())?;
        Ok(NonexpansivePredicate { space, pred })
    }

    /// McShane-style envelope `p(x) = min_y (c(y) + d(x,y))`, clamped to
    /// `[0,1]`: non-expansive by construction for any `c ∈ [0,1]^X`.
    pub fn envelope(space: &FiniteMetricSpace, c: &[f64]) -> Result<Self, MetricError> {
        if c.len() != space.points.len() {
            return Err(MetricError::SpaceMismatch);
        }
        let values: Vec<f64> = (0..c.len())
            .map(|x| {
                (0..c.len())
                    .map(|y| c[y] + space.d[x][y])
                    .fold(f64::INFINITY, f64::min)
                    .clamp(0.0, 1.0)
            })
            .collect();
        NonexpansivePredicate::new(space.clone(), values)
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn fuzzy(&self) -> &FuzzyPredicate {
        &self.pred
    }

    pub fn values(&self) -> &[f64] {
        self.pred.values()
    }
}

/// The supremum distance `spd(p,q) = ⋁_x |p(x) − q(x)|`.
pub fn sup_distance(p: &FuzzyPredicate, q: &FuzzyPredicate) -> Result<f64, DistError> {
    if p.points() != q.points() {
        return Err(DistError::SpaceMismatch);
    }
    Ok(p.values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn aligned_pair(
    space: &FiniteMetricSpace,
    omega1: &Dist,
    omega2: &Dist,
) -> Result<(Dist, Dist), MetricError> {
    let a = omega1
        .align_to(&space.points)
        .map_err(|_| MetricError::SpaceMismatch)?;
    let b = omega2
        .align_to(&space.points)
        .map_err(|_| MetricError::SpaceMismatch)?;
    Ok((a, b))
}

/// The Kantorovich distance of two distributions on a finite metric
/// space: the optimum of the transportation problem with cost `d`,
/// which by LP duality equals the join of validity gaps over
/// non-expansive predicates.
pub fn kantorovich(
    space: &FiniteMetricSpace,
    omega1: &Dist,
    omega2: &Dist,
) -> Result<f64, MetricError> {
    Ok(kantorovich_plan(space, omega1, omega2)?
        .value
        .clamp(0.0, 1.0))
}

/// As [`kantorovich`], but returns the full optimal coupling.
pub fn kantorovich_plan(
    space: &FiniteMetricSpace,
    omega1: &Dist,
    omega2: &Dist,
) -> Result<crate::transport::TransportPlan, MetricError> {
    let (a, b) = aligned_pair(space, omega1, omega2)?;
    let prob = TransportProblem::new(space.d.clone(), a.probs().to_vec(), b.probs().to_vec())?;
    Ok(solve_transport(&prob)?)
}

/// The non-expansive predicate attaining the Kantorovich distance,
/// derived from the solver's dual potentials.
///
/// The row potentials `u` are lifted to the 1-Lipschitz upper envelope
/// `φ(x) = max_i (u_i − d(x_i, x))`, shifted into `[0,1]`, clamped, and
/// re-regularized by `p(x) ← min_y (p(y) + d(x,y))` since clamping alone
/// can break the Lipschitz constraint. The validity gap of the result is
/// re-verified against the primal optimum within [`DUAL_TOL`].
pub fn lipschitz_witness(
    space: &FiniteMetricSpace,
    omega1: &Dist,
    omega2: &Dist,
) -> Result<NonexpansivePredicate, MetricError> {
    let (a, b) = aligned_pair(space, omega1, omega2)?;
    let plan = kantorovich_plan(space, &a, &b)?;
    let n = space.points.len();
    let u = &plan.row_potentials;

    let mut phi: Vec<f64> = (0..n)
        .map(|x| {
            (0..n)
                .map(|i| u[i] - space.d[i][x])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let lo = phi.iter().copied().fold(f64::INFINITY, f64::min);
    for v in &mut phi {
        *v = (*v - lo).clamp(0.0, 1.0);
    }
    let regularized: Vec<f64> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| phi[y] + space.d[x][y])
                .fold(f64::INFINITY, f64::min)
                .clamp(0.0, 1.0)
        })
        .collect();
    let witness = NonexpansivePredicate::new(space.clone(), regularized)?;

    let gap = witness_gap(&witness, &a, &b)?;
    if (gap - plan.value).abs() > DUAL_TOL {
        return Err(MetricError::SolverFailure(format!(
            "dual witness gap {gap} does not certify primal value {}",
            plan.value
        )));
    }
    Ok(witness)
}

/// `|ω₁ ⊨ p − ω₂ ⊨ p|` for a non-expansive predicate.
pub fn witness_gap(
    p: &NonexpansivePredicate,
    omega1: &Dist,
    omega2: &Dist,
) -> Result<f64, MetricError> {
    let (a, b) = aligned_pair(p.space(), omega1, omega2)?;
    let g1 = crate::dist::validity(&a, p.fuzzy())?;
    let g2 = crate::dist::validity(&b, p.fuzzy())?;
    Ok((g1 - g2).abs())
}

/// Outcome of checking a Kleisli map for non-expansiveness: the largest
/// value of `kvd(f(x), f(x')) − d(x, x')` over all pairs, and the pair
/// attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct NonexpansivenessReport {
    pub nonexpansive: bool,
    pub worst_pair: Option<(Label, Label)>,
    pub worst_excess: f64,
}

/// Checks `kvd(f(x), f(x')) ≤ d(x, x')` for every pair of domain points,
/// with [`MET_TOL`] slack; the state transformer of a non-expansive map
/// is then non-expansive as well.
pub fn check_nonexpansive_kleisli(
    space_x: &FiniteMetricSpace,
    space_y: &FiniteMetricSpace,
    f: &KleisliMap,
) -> Result<NonexpansivenessReport, MetricError> {
    if f.domain() != space_x.points() || f.codomain() != space_y.points() {
        return Err(MetricError::SpaceMismatch);
    }
    let rows: Vec<Dist> = space_x
        .points()
        .iter()
        .map(|x| f.row_dist(x))
        .collect::<Result<_, _>>()?;
    let mut worst: Option<(Label, Label)> = None;
    let mut worst_excess = f64::NEG_INFINITY;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let kvd = kantorovich(space_y, &rows[i], &rows[j])?;
            let excess = kvd - space_x.d[i][j];
            if excess > worst_excess {
                worst_excess = excess;
                worst = Some((space_x.points()[i].clone(), space_x.points()[j].clone()));
            }
        }
    }
    Ok(NonexpansivenessReport {
        nonexpansive: worst.is_none() || worst_excess <= MET_TOL,
        worst_pair: worst,
        worst_excess: if worst_excess.is_finite() {
            worst_excess
        } else {
            0.0
        },
    })
}
