//! Effect modules: partial commutative sum `⋎`, orthosupplement,
//! `[0,1]`-scalar action, the derived partial subtraction `⊖`, and the
//! Archimedean distance `ard`, instantiated for fuzzy predicates, matrix
//! effects, and plain scalars.
//!
//! The distance is defined purely from order comparisons against scalar
//! multiples of 1:
//!
//! ```text
//! ard(x,y) = max( inf { r : ½x ≤ ½y ⋎ (r/2)·1 },
//!                 inf { r : ½y ≤ ½x ⋎ (r/2)·1 } )
//! ```
//!
//! [`ard`] computes both one-sided infima by bisection of the monotone
//! order test and returns the max; the models' `direct_ard` fast paths
//! (supremum metric, operator norm, `|r−s|`) are kept separate so the
//! two routes can be checked against each other.

use thiserror::Error;

use crate::dist::{Dist, FuzzyPredicate, Label};
use crate::quantum::{herm_eig, opnorm, ComplexMatrix, DensityMatrix, Effect};
use crate::tol::{BISECT_ITERS, PSD_TOL, SUM_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EffectError {
    #[error("x ⋎ y is undefined: x exceeds the orthosupplement of y by {0}")]
    NotSummable(f64),
    #[error("x is not below y (margin {0})")]
    NotBelow(f64),
    #[error("sequence is not ascending at index {0}")]
    NotAscending(usize),
    #[error("empty sequence has no join")]
    EmptySequence,
    #[error("meet is not canonical for these elements: {0}")]
    UnsupportedLattice(String),
}

/// A concrete effect module: carrier with partial sum, orthosupplement,
/// scalar action and an order test.
///
/// `order_margin(x,y)` is a signed slack by which `x ≤ y` holds (the
/// minimal pointwise gap, the least eigenvalue of `y − x`, …); `leq`
/// accepts margins above `-order_slack()`.
pub trait EffectModule {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn order_margin(&self, x: &Self::Elem, y: &Self::Elem) -> f64;
    fn order_slack(&self) -> f64;
    fn perp(&self, x: &Self::Elem) -> Self::Elem;
    fn ovee(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, EffectError>;
    fn scalar(&self, r: f64, x: &Self::Elem) -> Self::Elem;

    /// Model-native distance, when available (supremum metric, operator
    /// norm, `|r−s|`). Independent of the bisection in [`ard`].
    fn direct_ard(&self, x: &Self::Elem, y: &Self::Elem) -> Option<f64>;

    /// Canonical meet where the model has one; refuses otherwise.
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, EffectError>;

    /// The join proxy of a (validated) ascending sequence.
    fn join_proxy(&self, seq: &[Self::Elem]) -> Self::Elem;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.order_margin(x, y) >= -self.order_slack()
    }

    fn approx_eq(&self, x: &Self::Elem, y: &Self::Elem, tol: f64) -> bool {
        match self.direct_ard(x, y) {
            Some(d) => d <= tol,
            None => self.leq(x, y) && self.leq(y, x),
        }
    }
}

/// Partial subtraction `y ⊖ x = (y⊥ ⋎ x)⊥`, defined for `x ≤ y`.
pub fn ominus<M: EffectModule>(m: &M, y: &M::Elem, x: &M::Elem) -> Result<M::Elem, EffectError> {
    let margin = m.order_margin(x, y);
    if margin < -m.order_slack() {
        return Err(EffectError::NotBelow(margin));
    }
    let inner = m.ovee(&m.perp(y), x)?;
    Ok(m.perp(&inner))
}

fn one_sided_inf<M: EffectModule>(m: &M, x: &M::Elem, y: &M::Elem) -> f64 {
    let hx = m.scalar(0.5, x);
    let hy = m.scalar(0.5, y);
    let one = m.one();
    // ½y ⋎ (r/2)·1 always exists, so the order test is total in r.
    let holds = |r: f64| {
        let bump = m
            .ovee(&hy, &m.scalar(r * 0.5, &one))
            .expect("half-scaled sum with (r/2)·1 is always summable");
        m.leq(&hx, &bump)
    };
    if holds(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The Archimedean distance, computed generically by bisection of the
/// order test `½x ≤ ½y ⋎ (r/2)·1` and its mirror image.
pub fn ard<M: EffectModule>(m: &M, x: &M::Elem, y: &M::Elem) -> f64 {
    one_sided_inf(m, x, y).max(one_sided_inf(m, y, x))
}

/// Property probe for the Archimedean law: if `½x ≤ ½y ⋎ (1/2n)·1` for
/// all `n = 1..N`, then `x ≤ y` up to `1/N` slack. Returns true when the
/// premise fails (vacuously) or the slackened conclusion holds.
pub fn archimedean_check<M: EffectModule>(m: &M, x: &M::Elem, y: &M::Elem, n_max: u32) -> bool {
    let hx = m.scalar(0.5, x);
    let hy = m.scalar(0.5, y);
    let one = m.one();
    let premise = |n: f64| {
        let bump = m
            .ovee(&hy, &m.scalar(1.0 / (2.0 * n), &one))
            .expect("half-scaled sums are summable");
        m.leq(&hx, &bump)
    };
    for n in 1..=n_max {
        if !premise(n as f64) {
            return true;
        }
    }
    premise(n_max as f64)
}

/// Join of a finite ascending sequence, tagged with the Cauchy gap of
/// its last step as residual.
#[derive(Debug, Clone)]
pub struct AscendingJoin<E> {
    pub join: E,
    pub residual: f64,
}

pub fn sup_of_ascending<M: EffectModule>(
    m: &M,
    seq: &[M::Elem],
) -> Result<AscendingJoin<M::Elem>, EffectError> {
    if seq.is_empty() {
        return Err(EffectError::EmptySequence);
    }
    for (i, w) in seq.windows(2).enumerate() {
        if !m.leq(&w[0], &w[1]) {
            return Err(EffectError::NotAscending(i));
        }
    }
    let join = m.join_proxy(seq);
    let residual = if seq.len() >= 2 {
        let a = &seq[seq.len() - 2];
        let b = &seq[seq.len() - 1];
        m.direct_ard(a, b).unwrap_or_else(|| ard(m, a, b))
    } else {
        0.0
    };
    Ok(AscendingJoin { join, residual })
}

/// Fuzzy predicates `[0,1]^X` with pointwise order; `p ⋎ q` exists iff
/// `p + q ≤ 1` pointwise.
#[derive(Debug, Clone)]
pub struct FuzzyModel {
    points: Vec<Label>,
}

impl FuzzyModel {
    pub fn new(points: Vec<Label>) -> Self {
        let mut points = points;
        points.sort();
        FuzzyModel { points }
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn element(&self, values: &[f64]) -> FuzzyPredicate {
        self.clamped(values.to_vec())
    }

    fn clamped(&self, values: Vec<f64>) -> FuzzyPredicate {
        FuzzyPredicate::new(
            self.points
                .iter()
                .cloned()
                .zip(values.into_iter().map(|v| v.clamp(0.0, 1.0)))
                .collect(),
        )
        .expect("clamped values over the model's points are a valid predicate")
    }

    /// `⋁_ω |ω ⊨ p − ω ⊨ q|` with the Dirac witness at the point of
    /// largest pointwise gap; equals the supremum metric.
    pub fn validity_distance(&self, p: &FuzzyPredicate, q: &FuzzyPredicate) -> (f64, Dist) {
        let mut best = 0.0;
        let mut at = 0usize;
        for (i, (a, b)) in p.values().iter().zip(q.values()).enumerate() {
            let gap = (a - b).abs();
            if gap > best {
                best = gap;
                at = i;
            }
        }
        let witness = Dist::dirac(&self.points, &self.points[at])
            .expect("witness point is taken from the model's own point list");
        (best, witness)
    }
}

impl EffectModule for FuzzyModel {
    type Elem = FuzzyPredicate;

    fn zero(&self) -> FuzzyPredicate {
        self.clamped(vec![0.0; self.points.len()])
    }

    fn one(&self) -> FuzzyPredicate {
        self.clamped(vec![1.0; self.points.len()])
    }

    fn order_margin(&self, x: &FuzzyPredicate, y: &FuzzyPredicate) -> f64 {
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| b - a)
            .fold(f64::INFINITY, f64::min)
    }

    fn order_slack(&self) -> f64 {
        SUM_TOL
    }

    fn perp(&self, x: &FuzzyPredicate) -> FuzzyPredicate {
        self.clamped(x.values().iter().map(|v| 1.0 - v).collect())
    }

    fn ovee(&self, x: &FuzzyPredicate, y: &FuzzyPredicate) -> Result<FuzzyPredicate, EffectError> {
        let margin = self.order_margin(x, &self.perp(y));
        if margin < -SUM_TOL {
            return Err(EffectError::NotSummable(-margin));
        }
        Ok(self.clamped(
            x.values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    fn scalar(&self, r: f64, x: &FuzzyPredicate) -> FuzzyPredicate {
        self.clamped(x.values().iter().map(|v| r * v).collect())
    }

    fn direct_ard(&self, x: &FuzzyPredicate, y: &FuzzyPredicate) -> Option<f64> {
        crate::metric::sup_distance(x, y).ok()
    }

    fn meet(&self, x: &FuzzyPredicate, y: &FuzzyPredicate) -> Result<FuzzyPredicate, EffectError> {
        Ok(self.clamped(
            x.values()
                .iter()
                .zip(y.values())
                .map(|(a, b)| a.min(*b))
                .collect(),
        ))
    }

    fn join_proxy(&self, seq: &[FuzzyPredicate]) -> FuzzyPredicate {
        let mut acc = vec![0.0f64; self.points.len()];
        for e in seq {
            for (a, v) in acc.iter_mut().zip(e.values()) {
                *a = a.max(*v);
            }
        }
        self.clamped(acc)
    }
}

/// Matrix effects `[0,1]_{M_n}` with the positive-semidefinite order.
#[derive(Debug, Clone)]
pub struct MatrixEffectModel {
    dim: usize,
}

impl MatrixEffectModel {
    pub fn new(dim: usize) -> Self {
        MatrixEffectModel { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn wrap(&self, m: ComplexMatrix) -> Effect {
        Effect::new_unchecked(m)
    }

    /// `⋁_ω |ω ⊨ e − ω ⊨ d|` with the pure-state witness from the
    /// top-magnitude eigenvector of `e − d`; equals the operator norm of
    /// the difference.
    pub fn validity_distance(&self, e: &Effect, d: &Effect) -> (f64, DensityMatrix) {
        let diff = e.matrix().sub(d.matrix());
        let eig = herm_eig(&diff).expect("difference of effects is Hermitian");
        let mut best = 0;
        for (k, l) in eig.eigenvalues.iter().enumerate() {
            if l.abs() > eig.eigenvalues[best].abs() {
                best = k;
            }
        }
        let value = eig.eigenvalues[best].abs();
        let witness = DensityMatrix::pure(&eig.eigenvector(best));
        (value, witness)
    }
}

impl EffectModule for MatrixEffectModel {
    type Elem = Effect;

    fn zero(&self) -> Effect {
        Effect::zero(self.dim)
    }

    fn one(&self) -> Effect {
        Effect::identity(self.dim)
    }

    fn order_margin(&self, x: &Effect, y: &Effect) -> f64 {
        let diff = y.matrix().sub(x.matrix());
        let eig = herm_eig(&diff).expect("difference of effects is Hermitian");
        eig.eigenvalues.last().copied().unwrap_or(0.0)
    }

    fn order_slack(&self) -> f64 {
        PSD_TOL
    }

    fn perp(&self, x: &Effect) -> Effect {
        self.wrap(ComplexMatrix::identity(self.dim).sub(x.matrix()))
    }

    fn ovee(&self, x: &Effect, y: &Effect) -> Result<Effect, EffectError> {
        let margin = self.order_margin(x, &self.perp(y));
        if margin < -PSD_TOL {
            return Err(EffectError::NotSummable(-margin));
        }
        Ok(self.wrap(x.matrix().add(y.matrix())))
    }

    fn scalar(&self, r: f64, x: &Effect) -> Effect {
        self.wrap(x.matrix().scale(r))
    }

    fn direct_ard(&self, x: &Effect, y: &Effect) -> Option<f64> {
        opnorm(&x.matrix().sub(y.matrix())).ok()
    }

    /// Meets are canonical only for simultaneously diagonal effects;
    /// general matrix effects may have no meet at all.
    fn meet(&self, x: &Effect, y: &Effect) -> Result<Effect, EffectError> {
        let offdiag = |m: &ComplexMatrix| -> f64 {
            let mut worst = 0.0f64;
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    if i != j {
                        worst = worst.max(m.get(i, j).norm());
                    }
                }
            }
            worst
        };
        if offdiag(x.matrix()) > PSD_TOL || offdiag(y.matrix()) > PSD_TOL {
            return Err(EffectError::UnsupportedLattice(
                "matrix meet is only taken for diagonal effects".into(),
            ));
        }
        let diag: Vec<f64> = (0..self.dim)
            .map(|i| x.matrix().get(i, i).re.min(y.matrix().get(i, i).re))
            .collect();
        Ok(self.wrap(ComplexMatrix::diag(&diag)))
    }

    fn join_proxy(&self, seq: &[Effect]) -> Effect {
        seq.last().expect("sequence is nonempty").clone()
    }
}

/// The scalars `[0,1]`, themselves an Archimedean effect module.
#[derive(Debug, Clone, Default)]
pub struct UnitIntervalModel;

impl EffectModule for UnitIntervalModel {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn one(&self) -> f64 {
        1.0
    }

    fn order_margin(&self, x: &f64, y: &f64) -> f64 {
        y - x
    }

    fn order_slack(&self) -> f64 {
        SUM_TOL
    }

    fn perp(&self, x: &f64) -> f64 {
        1.0 - x
    }

    fn ovee(&self, x: &f64, y: &f64) -> Result<f64, EffectError> {
        if x + y > 1.0 + SUM_TOL {
            return Err(EffectError::NotSummable(x + y - 1.0));
        }
        Ok((x + y).min(1.0))
    }

    fn scalar(&self, r: f64, x: &f64) -> f64 {
        r * x
    }

    fn direct_ard(&self, x: &f64, y: &f64) -> Option<f64> {
        Some((x - y).abs())
    }

    fn meet(&self, x: &f64, y: &f64) -> Result<f64, EffectError> {
        Ok(x.min(*y))
    }

    fn join_proxy(&self, seq: &[f64]) -> f64 {
        *seq.last().expect("sequence is nonempty")
    }
}
