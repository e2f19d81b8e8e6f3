//! Finite realizations of the state-and-effect adjunction: black-box
//! homomorphisms are converted back into the distributions, Kleisli
//! maps, predicates and effects that induce them, and the round trips
//! are verified with residual reports.
//!
//! The reconstructions evaluate the black box on a fixed probe family:
//! an effect-module map `h : [0,1]^X → [0,1]` yields the state
//! `ω(x) = h(1_{x})`, a map `[0,1]^Y → [0,1]^X` yields the Kleisli
//! matrix `f(x)(y) = h(1_{y})(x)`, an affine map on states yields the
//! predicate `p(x) = g(δ_x)`, and an affine map on density matrices is
//! probed on `{|j⟩⟨j|}` and the pure states `ρ⁺_jk`, `ρⁱ_jk` to recover
//! an effect matrix entry by entry.
//!
//! Black boxes cannot be verified exhaustively, so each operation first
//! samples 64 structured inputs (indicators, constants, random convex
//! pairs) against the claimed algebraic laws and rejects on any
//! violation beyond [`HOM_TOL`].

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::dist::{validity, Dist, FuzzyPredicate, KleisliMap, Label};
use crate::quantum::{q_validity, ComplexMatrix, DensityMatrix, Effect, QuantumError};
use crate::sample;
use crate::tol::{HOM_TOL, PSD_TOL};

/// Seed of the fixed probe panel; reconstruction is deterministic.
const PANEL_SEED: u64 = 0x7A11_5EED;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangleError {
    #[error("not an effect-module homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an affine map: {0}")]
    NotAffine(String),
    #[error("reconstructed matrix is not an effect: {0}")]
    NotAnEffect(String),
    #[error(transparent)]
    Dist(#[from] crate::dist::DistError),
}

impl From<QuantumError> for TriangleError {
    fn from(e: QuantumError) -> Self {
        TriangleError::NotAnEffect(e.to_string())
    }
}

/// Black-box effect-module map `[0,1]^X → [0,1]`.
pub struct EmodMapBlackBox {
    points: Vec<Label>,
    eval: Box<dyn Fn(&FuzzyPredicate) -> f64>,
}

impl EmodMapBlackBox {
    pub fn new(points: Vec<Label>, eval: impl Fn(&FuzzyPredicate) -> f64 + 'static) -> Self {
        let mut points = points;
        points.sort();
        EmodMapBlackBox {
            points,
            eval: Box::new(eval),
        }
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn eval(&self, p: &FuzzyPredicate) -> f64 {
        (self.eval)(p)
    }
}

/// Black-box affine map `D(X) → [0,1]`.
pub struct AffineMapBlackBox {
    points: Vec<Label>,
    eval: Box<dyn Fn(&Dist) -> f64>,
}

impl AffineMapBlackBox {
    pub fn new(points: Vec<Label>, eval: impl Fn(&Dist) -> f64 + 'static) -> Self {
        let mut points = points;
        points.sort();
        AffineMapBlackBox {
            points,
            eval: Box::new(eval),
        }
    }

    pub fn points(&self) -> &[Label] {
        &self.points
    }

    pub fn eval(&self, omega: &Dist) -> f64 {
        (self.eval)(omega)
    }
}

/// Black-box affine map on density matrices of a fixed dimension.
pub struct AffineStateMapBlackBox {
    dim: usize,
    eval: Box<dyn Fn(&DensityMatrix) -> f64>,
}

impl AffineStateMapBlackBox {
    pub fn new(dim: usize, eval: impl Fn(&DensityMatrix) -> f64 + 'static) -> Self {
        AffineStateMapBlackBox {
            dim,
            eval: Box::new(eval),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, rho: &DensityMatrix) -> f64 {
        (self.eval)(rho)
    }
}

fn fuzzy_from(points: &[Label], values: Vec<f64>) -> FuzzyPredicate {
    FuzzyPredicate::new(
        points
            .iter()
            .cloned()
            .zip(values.into_iter().map(|v| v.clamp(0.0, 1.0)))
            .collect(),
    )
    .expect("clamped values form a predicate")
}

/// Sampled homomorphism panel for maps out of `[0,1]^X`; applies the
/// same checks to every coordinate of the output via `project`.
fn check_emod_hom(
    points: &[Label],
    apply: &dyn Fn(&FuzzyPredicate) -> Vec<f64>,
) -> Result<(), TriangleError> {
    let fail = |what: String| Err(TriangleError::NotAHomomorphism(what));
    let n = points.len();
    let one = fuzzy_from(points, vec![1.0; n]);
    let top = apply(&one);
    if top.iter().any(|v| (v - 1.0).abs() > HOM_TOL) {
        return fail("h(1) differs from 1".into());
    }
    let mut rng = sample::rng(PANEL_SEED);
    for round in 0..32 {
        let p = sample::fuzzy(&mut rng, points);
        // q = u·(1 − p) is summable with p by construction.
        let u: f64 = rng.gen();
        let q = fuzzy_from(points, p.values().iter().map(|v| u * (1.0 - v)).collect());
        let sum = fuzzy_from(
            points,
            p.values()
                .iter()
                .zip(q.values())
                .map(|(a, b)| a + b)
                .collect(),
        );
        let hp = apply(&p);
        let hq = apply(&q);
        let hsum = apply(&sum);
        for i in 0..hsum.len() {
            if (hsum[i] - hp[i] - hq[i]).abs() > HOM_TOL {
                return fail(format!("h(p ⋎ q) ≠ h(p) + h(q) on sample {round}"));
            }
        }
        let r: f64 = rng.gen();
        let scaled = fuzzy_from(points, p.values().iter().map(|v| r * v).collect());
        let hscaled = apply(&scaled);
        for i in 0..hscaled.len() {
            if (hscaled[i] - r * hp[i]).abs() > HOM_TOL {
                return fail(format!("h(r·p) ≠ r·h(p) on sample {round}"));
            }
        }
    }
    Ok(())
}

/// Recovers the state represented by an effect-module map
/// `h : [0,1]^X → [0,1]` via `ω(x) = h(1_{x})`; `h` then agrees with
/// `validity(ω, ·)`.
pub fn emod_map_to_dist(h: &EmodMapBlackBox) -> Result<Dist, TriangleError> {
    check_emod_hom(&h.points, &|p| vec![h.eval(p)])?;
    let masses: Vec<f64> = h
        .points
        .iter()
        .map(|x| {
            let ind = FuzzyPredicate::indicator(&h.points, &[x.clone()].into_iter().collect())
                .expect("indicator over own points");
            h.eval(&ind).clamp(0.0, 1.0)
        })
        .collect();
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > HOM_TOL {
        return Err(TriangleError::NotAHomomorphism(format!(
            "indicator masses sum to {total}, not 1"
        )));
    }
    // Exact renormalization absorbs the sampled slack so the result is a
    // well-formed distribution.
    let omega = Dist::new(
        h.points
            .iter()
            .cloned()
            .zip(masses.into_iter().map(|v| v / total))
            .collect(),
    )?;
    // Cross-check h against validity in the reconstructed state.
    let mut rng = sample::rng(PANEL_SEED ^ 1);
    for _ in 0..16 {
        let p = sample::fuzzy(&mut rng, &h.points);
        let lhs = h.eval(&p);
        let rhs = validity(&omega, &p)?;
        if (lhs - rhs).abs() > HOM_TOL {
            return Err(TriangleError::NotAHomomorphism(format!(
                "h(p) = {lhs} but ω ⊨ p = {rhs}"
            )));
        }
    }
    Ok(omega)
}

/// Black-box effect-module map `[0,1]^Y → [0,1]^X`, recovered as the
/// Kleisli map `f(x)(y) = h(1_{y})(x)`; `h` then agrees with `f∗`.
pub fn emod_hom_to_kleisli(
    domain: &[Label],
    codomain: &[Label],
    h: impl Fn(&FuzzyPredicate) -> FuzzyPredicate,
) -> Result<KleisliMap, TriangleError> {
    let mut dom = domain.to_vec();
    dom.sort();
    let mut cod = codomain.to_vec();
    cod.sort();
    check_emod_hom(&cod, &|q| h(q).values().to_vec())?;

    let mut rows = vec![vec![0.0; cod.len()]; dom.len()];
    for (j, y) in cod.iter().enumerate() {
        let ind = FuzzyPredicate::indicator(&cod, &[y.clone()].into_iter().collect())
            .expect("indicator over own points");
        let col = h(&ind);
        for (i, v) in col.values().iter().enumerate() {
            rows[i][j] = v.clamp(0.0, 1.0);
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > HOM_TOL {
            return Err(TriangleError::NotAHomomorphism(format!(
                "row {i} of the reconstructed kernel sums to {total}"
            )));
        }
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    let f = KleisliMap::new(dom.clone(), cod.clone(), rows)?;

    let mut rng = sample::rng(PANEL_SEED ^ 2);
    for _ in 0..16 {
        let q = sample::fuzzy(&mut rng, &cod);
        let via_f = crate::dist::pred_transform(&f, &q)?;
        let via_h = h(&q);
        let worst = via_f
            .values()
            .iter()
            .zip(via_h.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if worst > HOM_TOL {
            return Err(TriangleError::NotAHomomorphism(format!(
                "f∗(q) differs from h(q) by {worst}"
            )));
        }
    }
    Ok(f)
}

/// Recovers the predicate represented by an affine map `g : D(X) → [0,1]`
/// via `p(x) = g(δ_x)`; `g` then agrees with `validity(·, p)`.
pub fn affine_map_to_predicate(g: &AffineMapBlackBox) -> Result<FuzzyPredicate, TriangleError> {
    let mut rng = sample::rng(PANEL_SEED ^ 3);
    for round in 0..32 {
        let a = sample::dist(&mut rng, &g.points);
        let b = sample::dist(&mut rng, &g.points);
        let r: f64 = rng.gen();
        let mix = Dist::new(
            g.points
                .iter()
                .cloned()
                .zip(
                    a.probs()
                        .iter()
                        .zip(b.probs())
                        .map(|(x, y)| r * x + (1.0 - r) * y),
                )
                .collect(),
        )?;
        let lhs = g.eval(&mix);
        let rhs = r * g.eval(&a) + (1.0 - r) * g.eval(&b);
        if (lhs - rhs).abs() > HOM_TOL {
            return Err(TriangleError::NotAffine(format!(
                "convex combination violated by {} on sample {round}",
                (lhs - rhs).abs()
            )));
        }
    }
    let values: Vec<f64> = g
        .points
        .iter()
        .map(|x| {
            let d = Dist::dirac(&g.points, x).expect("dirac over own points");
            g.eval(&d).clamp(0.0, 1.0)
        })
        .collect();
    let p = fuzzy_from(&g.points, values);

    let mut rng = sample::rng(PANEL_SEED ^ 4);
    for _ in 0..16 {
        let omega = sample::dist(&mut rng, &g.points);
        let lhs = g.eval(&omega);
        let rhs = validity(&omega, &p)?;
        if (lhs - rhs).abs() > HOM_TOL {
            return Err(TriangleError::NotAffine(format!(
                "g(ω) = {lhs} but ω ⊨ p = {rhs}"
            )));
        }
    }
    Ok(p)
}

/// Deterministic probe basis for effect reconstruction: the diagonal
/// states `|j⟩⟨j|` and, for `j < k`, the pure states on `|j⟩ + |k⟩` and
/// `|j⟩ − i|k⟩` (the latter's sign fixed so the recovered imaginary part
/// satisfies the round trip `g = tr(·E)`).
fn probe_plus(dim: usize, j: usize, k: usize) -> DensityMatrix {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[j] = Complex64::new(1.0, 0.0);
    v[k] = Complex64::new(1.0, 0.0);
    DensityMatrix::pure(&v)
}

fn probe_imag(dim: usize, j: usize, k: usize) -> DensityMatrix {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[j] = Complex64::new(1.0, 0.0);
    v[k] = Complex64::new(0.0, -1.0);
    DensityMatrix::pure(&v)
}

/// Recovers the effect represented by an affine map on states via the
/// fixed probe basis; `g` then agrees with `tr(· E)`.
pub fn affine_state_map_to_effect(g: &AffineStateMapBlackBox) -> Result<Effect, TriangleError> {
    let dim = g.dim;
    let mut rng = sample::rng(PANEL_SEED ^ 5);
    for round in 0..32 {
        let a = sample::density(&mut rng, dim);
        let b = sample::density(&mut rng, dim);
        let r: f64 = rng.gen();
        let mix = DensityMatrix::new(a.matrix().scale(r).add(&b.matrix().scale(1.0 - r)))?;
        let lhs = g.eval(&mix);
        let rhs = r * g.eval(&a) + (1.0 - r) * g.eval(&b);
        if (lhs - rhs).abs() > HOM_TOL {
            return Err(TriangleError::NotAffine(format!(
                "convex combination violated by {} on sample {round}",
                (lhs - rhs).abs()
            )));
        }
    }

    let mut e = ComplexMatrix::zeros(dim);
    let diag: Vec<f64> = (0..dim)
        .map(|j| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[j] = Complex64::new(1.0, 0.0);
            g.eval(&DensityMatrix::pure(&v))
        })
        .collect();
    for (j, d) in diag.iter().enumerate() {
        e.set(j, j, Complex64::new(*d, 0.0));
    }
    for j in 0..dim {
        for k in j + 1..dim {
            let mean = 0.5 * (diag[j] + diag[k]);
            let re = g.eval(&probe_plus(dim, j, k)) - mean;
            let im = g.eval(&probe_imag(dim, j, k)) - mean;
            e.set(j, k, Complex64::new(re, im));
            e.set(k, j, Complex64::new(re, -im));
        }
    }
    let eig = crate::quantum::herm_eig(&e)?;
    let lo = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let hi = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if lo < -PSD_TOL || hi > 1.0 + PSD_TOL {
        return Err(TriangleError::NotAnEffect(format!(
            "reconstructed spectrum [{lo}, {hi}] escapes [0,1]"
        )));
    }
    let effect = Effect::new(eig.apply(|l| l.clamp(0.0, 1.0)))?;

    let mut rng = sample::rng(PANEL_SEED ^ 6);
    for _ in 0..16 {
        let rho = sample::density(&mut rng, dim);
        let lhs = g.eval(&rho);
        let rhs = q_validity(&rho, &effect)?;
        if (lhs - rhs).abs() > HOM_TOL {
            return Err(TriangleError::NotAffine(format!(
                "g(ρ) = {lhs} but tr(ρE) = {rhs}"
            )));
        }
    }
    Ok(effect)
}

/// Residual report of the classical round trips on a finite space.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ClassicalTriangleReport {
    pub size: usize,
    pub trials: usize,
    pub seed: u64,
    /// Kleisli → predicate transformer → Kleisli, entrywise.
    pub kleisli_roundtrip: f64,
    /// State → validity homomorphism → state, entrywise.
    pub state_roundtrip: f64,
    /// Predicate → affine validity map → predicate, entrywise.
    pub predicate_roundtrip: f64,
}

impl ClassicalTriangleReport {
    pub fn max_residual(&self) -> f64 {
        self.kleisli_roundtrip
            .max(self.state_roundtrip)
            .max(self.predicate_roundtrip)
    }
}

/// Runs the three classical representation round-trips on random
/// instances over a space of the given size, reporting the worst
/// entrywise discrepancies.
pub fn triangle_commutes_classical(
    size: usize,
    trials: usize,
    seed: u64,
) -> Result<ClassicalTriangleReport, TriangleError> {
    assert!(size >= 1, "distributions need a nonempty space");
    let points = sample::labels(size);
    let mut rng = sample::rng(seed);
    let mut worst_kleisli = 0.0f64;
    let mut worst_state = 0.0f64;
    let mut worst_pred = 0.0f64;
    for _ in 0..trials {
        let f = sample::kleisli(&mut rng, &points, &points);
        let f2 = f.clone();
        let pts = points.clone();
        let rebuilt = emod_hom_to_kleisli(&points, &points, move |q| {
            crate::dist::pred_transform(&f2, q).expect("q lives on f's codomain")
        })?;
        for (ra, rb) in f.matrix().iter().zip(rebuilt.matrix()) {
            for (a, b) in ra.iter().zip(rb) {
                worst_kleisli = worst_kleisli.max((a - b).abs());
            }
        }

        let omega = sample::dist(&mut rng, &points);
        let om = omega.clone();
        let h = EmodMapBlackBox::new(points.clone(), move |p| {
            validity(&om, p).expect("p lives on ω's points")
        });
        let rebuilt = emod_map_to_dist(&h)?;
        for (a, b) in omega.probs().iter().zip(rebuilt.probs()) {
            worst_state = worst_state.max((a - b).abs());
        }

        let p = sample::fuzzy(&mut rng, &points);
        let pc = p.clone();
        let gmap = AffineMapBlackBox::new(pts, move |w| {
            validity(w, &pc).expect("ω lives on p's points")
        });
        let rebuilt = affine_map_to_predicate(&gmap)?;
        for (a, b) in p.values().iter().zip(rebuilt.values()) {
            worst_pred = worst_pred.max((a - b).abs());
        }
    }
    Ok(ClassicalTriangleReport {
        size,
        trials,
        seed,
        kleisli_roundtrip: worst_kleisli,
        state_roundtrip: worst_state,
        predicate_roundtrip: worst_pred,
    })
}

/// Worst entrywise residual of effect reconstruction from `tr(· E)` over
/// random effects of the given dimension.
pub fn effect_roundtrip_residual(
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<f64, TriangleError> {
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let e = sample::effect(&mut rng, dim);
        let ec = e.clone();
        let g = AffineStateMapBlackBox::new(dim, move |rho| {
            q_validity(rho, &ec).expect("dimensions agree")
        });
        let rebuilt = affine_state_map_to_effect(&g)?;
        worst = worst.max(e.matrix().max_abs_diff(rebuilt.matrix()));
    }
    Ok(worst)
}
