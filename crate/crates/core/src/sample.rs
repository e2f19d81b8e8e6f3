//! Seeded random generators for distributions, predicates, Kleisli maps,
//! metric spaces, density matrices and effects.
//!
//! Everything is driven by `ChaCha8Rng` from a 64-bit seed, so a fixed
//! seed reproduces the same objects within one build of this crate.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{Dist, FuzzyPredicate, KleisliMap, Label};
use crate::metric::{FiniteMetricSpace, NonexpansivePredicate};
use crate::quantum::{herm_eig, ComplexMatrix, DensityMatrix, Effect};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Canonical point list `x00, x01, …` of a given size.
pub fn labels(n: usize) -> Vec<Label> {
    (0..n)
        .map(|i| Label::new(&format!("x{i:02}")).expect("generated labels are atomic"))
        .collect()
}

/// Uniform point of the probability simplex over the given labels.
pub fn dist(rng: &mut impl Rng, points: &[Label]) -> Dist {
    let raw: Vec<f64> = points
        .iter()
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    Dist::new(
        points
            .iter()
            .cloned()
            .zip(raw.into_iter().map(|g| g / total))
            .collect(),
    )
    .expect("normalized samples form a distribution")
}

/// Independent uniform values in `[0,1]`.
pub fn fuzzy(rng: &mut impl Rng, points: &[Label]) -> FuzzyPredicate {
    FuzzyPredicate::new(points.iter().map(|l| (l.clone(), rng.gen())).collect())
        .expect("uniform values form a predicate")
}

/// Row-stochastic matrix with simplex-uniform rows.
pub fn kleisli(rng: &mut impl Rng, domain: &[Label], codomain: &[Label]) -> KleisliMap {
    let matrix = domain
        .iter()
        .map(|_| dist(rng, codomain).probs().to_vec())
        .collect();
    KleisliMap::new(domain.to_vec(), codomain.to_vec(), matrix)
        .expect("sampled rows are stochastic")
}

/// Random 1-bounded metric: symmetric uniform draws shortcut-closed with
/// Floyd–Warshall, which enforces the triangle inequality while keeping
/// distances positive.
pub fn metric_space(rng: &mut impl Rng, points: &[Label]) -> FiniteMetricSpace {
    let n = points.len();
    let mut d = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.05 + 0.95 * rng.gen::<f64>();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(points.to_vec(), d).expect("shortcut closure is a metric")
}

/// Random non-expansive predicate via the McShane envelope of uniform
/// values; feasible by construction.
pub fn nonexpansive_predicate(
    rng: &mut impl Rng,
    space: &FiniteMetricSpace,
) -> NonexpansivePredicate {
    let c: Vec<f64> = space.points().iter().map(|_| rng.gen()).collect();
    NonexpansivePredicate::envelope(space, &c).expect("envelope is non-expansive")
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, complex_gaussian(rng));
        }
    }
    g.add(&g.adjoint()).scale(0.5)
}

/// Ginibre-style random density matrix `GG†/tr(GG†)`, full rank almost
/// surely.
pub fn density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, complex_gaussian(rng));
        }
    }
    let pos = g.matmul(&g.adjoint());
    let tr = pos.trace().re;
    DensityMatrix::new(pos.scale(1.0 / tr)).expect("normalized Gram matrix is a state")
}

/// Random effect `V diag(u) V†` with uniform eigenvalues in `[0,1]` and
/// the eigenbasis of a random Hermitian matrix.
pub fn effect(rng: &mut impl Rng, dim: usize) -> Effect {
    let basis = herm_eig(&hermitian(rng, dim)).expect("random Hermitian matrix diagonalizes");
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.gen()).collect();
    let v = &basis.eigenvectors;
    let mut m = ComplexMatrix::zeros(dim);
    for (k, s) in spectrum.iter().enumerate() {
        for i in 0..dim {
            for j in 0..dim {
                let val = m.get(i, j) + v.get(i, k) * v.get(j, k).conj() * *s;
                m.set(i, j, val);
            }
        }
    }
    Effect::new(m).expect("bounded spectrum in a unitary basis is an effect")
}
