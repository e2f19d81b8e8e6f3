//! Dense complex-matrix kernels and the quantum distances: trace
//! distance with its sharp projection witness, operator norm, and the
//! validity distance on finite-dimensional matrix-algebra states.
//!
//! The trace distance is `trd(ϱ₁, ϱ₂) = ½ tr|ϱ₁ − ϱ₂|` with
//! `|T| = √(T†T)`. Splitting `ϱ₁ − ϱ₂` into its positive and negative
//! parts shows the distance is attained by the projection onto the
//! support of the positive part, which [`trd_witness`] returns. The
//! validity distance [`vld`] — the join of validity gaps over all
//! effects — is computed through that witness and coincides with the
//! trace distance on matrix-algebra states.
//!
//! Eigendecompositions use a cyclic Jacobi iteration for Hermitian
//! matrices: dependency-free and accurate for the small dimensions this
//! crate targets.

use num_complex::Complex64;
use thiserror::Error;

use crate::dist::Dist;
use crate::tol::{HERM_TOL, IM_TOL, PSD_TOL, SHARP_TOL_Q, SUM_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Off-diagonal Frobenius mass below which the Jacobi sweep stops.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("matrix is not Hermitian (max |A − A†| = {0})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")]
    NoConvergence,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),
    #[error("trace is {0}, not 1")]
    InvalidTrace(f64),
    #[error("eigenvalues escape [0,1] (range [{0}, {1}])")]
    NotAnEffect(f64, f64),
}

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, QuantumError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(QuantumError::DimensionMismatch(dim, 0));
        }
        let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QuantumError::NonFiniteEntry);
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(*v, 0.0));
        }
        m
    }

    /// The rank-one projection `v v† / ⟨v,v⟩`.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm2 > 0.0, "cannot project onto the zero vector");
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, v[i] * v[j].conj() / norm2);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, r: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * r).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose `A†`.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise absolute value of `A − B`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERM_TOL
    }

    /// Kronecker product; the result has dimension `dim(A)·dim(B)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = ComplexMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                let v = self.get(i, j);
                for k in 0..b {
                    for l in 0..b {
                        out.set(i * b + k, j * b + l, v * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Partial trace of an operator on `H₁ ⊗ H₂` with `dim = d1·d2`,
    /// keeping the chosen factor and tracing out the other.
    pub fn partial_trace(
        &self,
        d1: usize,
        d2: usize,
        keep: crate::dist::Side,
    ) -> Result<Self, QuantumError> {
        if d1 * d2 != self.dim || d1 == 0 || d2 == 0 {
            return Err(QuantumError::DimensionMismatch(d1 * d2, self.dim));
        }
        match keep {
            crate::dist::Side::First => {
                let mut out = ComplexMatrix::zeros(d1);
                for i in 0..d1 {
                    for j in 0..d1 {
                        let mut s = ZERO;
                        for k in 0..d2 {
                            s += self.get(i * d2 + k, j * d2 + k);
                        }
                        out.set(i, j, s);
                    }
                }
                Ok(out)
            }
            crate::dist::Side::Second => {
                let mut out = ComplexMatrix::zeros(d2);
                for i in 0..d2 {
                    for j in 0..d2 {
                        let mut s = ZERO;
                        for k in 0..d1 {
                            s += self.get(k * d2 + i, k * d2 + j);
                        }
                        out.set(i, j, s);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Eigendecomposition `H = V Λ V†` of a Hermitian matrix, eigenvalues
/// descending, eigenvectors as the columns of a unitary `V`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V diag(f(λ)) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for (k, lam) in self.eigenvalues.iter().enumerate() {
            let w = f(*lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let val = out.get(i, j) + v.get(i, k) * v.get(j, k).conj() * w;
                    out.set(i, j, val);
                }
            }
        }
        out
    }

    /// The column `k` as a vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.dim())
            .map(|i| self.eigenvectors.get(i, k))
            .collect()
    }
}

fn offdiag_frobenius(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first rephases the pivot column so the 2×2 pivot block
/// is real symmetric, then annihilates it with the classical rotation.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEigen, QuantumError> {
    let defect = h.hermiticity_defect();
    if defect > HERM_TOL {
        return Err(QuantumError::NotHermitian(defect));
    }
    let n = h.dim();
    let mut a = h.clone();
    // Symmetrize so rounding in the input cannot bias the iteration.
    let adj = a.adjoint();
    a = a.add(&adj).scale(0.5);
    let mut v = ComplexMatrix::identity(n);

    let mut converged = n <= 1 || offdiag_frobenius(&a) <= JACOBI_OFF_TOL;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let beta = a.get(p, q);
                let b = beta.norm();
                if b <= 1e-16 {
                    continue;
                }
                // u rephases column q; the pivot block becomes
                // [[α, b], [b, γ]] with α, γ the real diagonal entries.
                let u = beta.conj() / b;
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let theta = (gamma - alpha) / (2.0 * b);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A ← U† A U with U = [[c, s], [−s·u, c·u]] on (p,q).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * (u * s));
                    a.set(k, q, akp * s + akq * (u * c));
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * (u.conj() * s));
                    a.set(q, k, apk * s + aqk * (u.conj() * c));
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * (u * s));
                    v.set(k, q, vkp * s + vkq * (u * c));
                }
            }
        }
        converged = offdiag_frobenius(&a) <= JACOBI_OFF_TOL;
    }
    if !converged {
        return Err(QuantumError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let lambda: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&x, &y| lambda[y].partial_cmp(&lambda[x]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| lambda[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, col, v.get(i, src));
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// The operator absolute value `|A| = √(A†A)`; for Hermitian `A` this is
/// `V |Λ| V†`.
pub fn mat_abs(a: &ComplexMatrix) -> Result<ComplexMatrix, QuantumError> {
    if a.is_hermitian() {
        let eig = herm_eig(a)?;
        return Ok(eig.apply(f64::abs));
    }
    let gram = a.adjoint().matmul(a);
    let eig = herm_eig(&gram)?;
    Ok(eig.apply(|l| l.max(0.0).sqrt()))
}

/// The operator norm: largest singular value; `max |λ|` for Hermitian
/// input.
pub fn opnorm(a: &ComplexMatrix) -> Result<f64, QuantumError> {
    if a.is_hermitian() {
        let eig = herm_eig(a)?;
        return Ok(eig.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs())));
    }
    let gram = a.adjoint().matmul(a);
    let eig = herm_eig(&gram)?;
    Ok(eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, l| m.max(l.max(0.0)))
        .sqrt())
}

/// Jordan decomposition of a Hermitian matrix into positive and negative
/// parts: `H = H₊ − H₋` with both positive semidefinite and
/// `H₊ H₋ = 0`.
pub fn jordan_decompose(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), QuantumError> {
    let eig = herm_eig(h)?;
    let plus = eig.apply(|l| l.max(0.0));
    let minus = eig.apply(|l| (-l).max(0.0));
    Ok((plus, minus))
}

/// A positive trace-one Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QuantumError> {
        let defect = matrix.hermiticity_defect();
        if defect > HERM_TOL {
            return Err(QuantumError::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > SUM_TOL || tr.im.abs() > IM_TOL {
            return Err(QuantumError::InvalidTrace(tr.re));
        }
        let eig = herm_eig(&matrix)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(QuantumError::NotPsd(min));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Diagonal embedding of a discrete distribution; the points keep
    /// their canonical order.
    pub fn from_dist(omega: &Dist) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::diag(omega.probs()),
        }
    }

    /// The pure state `v v† / ⟨v,v⟩`.
    pub fn pure(v: &[Complex64]) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::projector(v),
        }
    }

    /// The maximally mixed state `I/n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Reduced state on the kept factor; the partial trace of a density
    /// matrix is again a density matrix.
    pub fn partial_trace(
        &self,
        d1: usize,
        d2: usize,
        keep: crate::dist::Side,
    ) -> Result<DensityMatrix, QuantumError> {
        DensityMatrix::new(self.matrix.partial_trace(d1, d2, keep)?)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}

/// A Hermitian matrix `e` with `0 ≤ e ≤ I` (within [`PSD_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QuantumError> {
        let defect = matrix.hermiticity_defect();
        if defect > HERM_TOL {
            return Err(QuantumError::NotHermitian(defect));
        }
        let eig = herm_eig(&matrix)?;
        let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL || max > 1.0 + PSD_TOL {
            return Err(QuantumError::NotAnEffect(min, max));
        }
        Ok(Effect { matrix })
    }

    /// For crate-internal algebraic constructions whose bounds are
    /// guaranteed by the effect-module laws (complements, scalings,
    /// summable sums of validated effects).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Effect { matrix }
    }

    pub fn zero(dim: usize) -> Self {
        Effect {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Effect {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Sharp (a projection) iff `‖e² − e‖ ≤ SHARP_TOL_Q`.
    pub fn is_sharp(&self) -> Result<bool, QuantumError> {
        let e2 = self.matrix.matmul(&self.matrix);
        Ok(opnorm(&e2.sub(&self.matrix))? <= SHARP_TOL_Q)
    }
}

/// The validity `ϱ ⊨ e = tr(ϱ e)`, clamped to `[0,1]`.
pub fn q_validity(rho: &DensityMatrix, e: &Effect) -> Result<f64, QuantumError> {
    if rho.dim() != e.dim() {
        return Err(QuantumError::DimensionMismatch(rho.dim(), e.dim()));
    }
    let tr = rho.matrix.matmul(&e.matrix).trace();
    debug_assert!(
        tr.im.abs() <= IM_TOL,
        "validity trace has imaginary part {}",
        tr.im
    );
    Ok(tr.re.clamp(0.0, 1.0))
}

/// The trace distance `½ tr|ϱ₁ − ϱ₂|`.
pub fn trd(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64, QuantumError> {
    if rho1.dim() != rho2.dim() {
        return Err(QuantumError::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let diff = rho1.matrix.sub(&rho2.matrix);
    let abs = mat_abs(&diff)?;
    Ok((0.5 * abs.trace().re).clamp(0.0, 1.0))
}

/// The sharp effect attaining the trace distance: the projection onto
/// the support of the positive part of `ϱ₁ − ϱ₂` (eigenvalues above
/// [`PSD_TOL`]), together with its validity gap.
pub fn trd_witness(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<(Effect, f64), QuantumError> {
    if rho1.dim() != rho2.dim() {
        return Err(QuantumError::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let diff = rho1.matrix.sub(&rho2.matrix);
    let eig = herm_eig(&diff)?;
    let proj = eig.apply(|l| if l > PSD_TOL { 1.0 } else { 0.0 });
    let s = Effect::new(proj)?;
    let gap = q_validity(rho1, &s)? - q_validity(rho2, &s)?;
    Ok((s, gap))
}

/// The validity distance `⋁_e |ϱ₁ ⊨ e − ϱ₂ ⊨ e|`, computed through the
/// sharp witness that attains the join. On matrix-algebra states it
/// equals the trace distance (and half the norm of the difference of
/// the induced functionals).
pub fn vld(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64, QuantumError> {
    let (_, gap) = trd_witness(rho1, rho2)?;
    Ok(gap.clamp(0.0, 1.0))
}

/// The Bell state `|b⟩ = (|00⟩ + |11⟩)/√2` as a density matrix.
pub fn bell_state() -> DensityMatrix {
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DensityMatrix::pure(&[inv, ZERO, ZERO, inv])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{tvd, Dist, Side};
    use crate::tol::EIG_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn eig_of_diagonal_matrix() {
        let eig = herm_eig(&ComplexMatrix::diag(&[0.3, 0.7])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.7, 0.3]);
    }

    #[test]
    fn eig_of_pauli_x() {
        let m = ComplexMatrix::from_rows(vec![vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let eig = herm_eig(&m).unwrap();
        assert_close(eig.eigenvalues[0], 1.0, 1e-12);
        assert_close(eig.eigenvalues[1], -1.0, 1e-12);
        // Eigenvectors are (1, ±1)/√2 up to phase.
        for k in 0..2 {
            let v = eig.eigenvector(k);
            assert_close(v[0].norm(), std::f64::consts::FRAC_1_SQRT_2, 1e-12);
            assert_close(v[1].norm(), std::f64::consts::FRAC_1_SQRT_2, 1e-12);
        }
        let rebuilt = eig.apply(|l| l);
        assert!(rebuilt.max_abs_diff(&m) <= EIG_TOL);
    }

    #[test]
    fn eig_of_bell_difference() {
        // Oracle: the nonzero block of β − β₁⊗β₂ is [[¼, ½], [½, ¼]]
        // with characteristic roots ¾ and −¼; the two middle diagonal
        // entries contribute −¼ each.
        let beta = bell_state();
        let prod = ComplexMatrix::identity(4).scale(0.25);
        let diff = beta.matrix().sub(&prod);
        let eig = herm_eig(&diff).unwrap();
        let expect = [0.75, -0.25, -0.25, -0.25];
        for (got, want) in eig.eigenvalues.iter().zip(expect) {
            assert_close(*got, want, 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(vec![vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(QuantumError::NotHermitian(_))));
    }

    #[test]
    fn mat_abs_examples() {
        let m = ComplexMatrix::diag(&[0.3, -0.3]);
        let abs = mat_abs(&m).unwrap();
        assert!(abs.max_abs_diff(&ComplexMatrix::diag(&[0.3, 0.3])) <= 1e-12);

        let zero = ComplexMatrix::zeros(3);
        assert!(mat_abs(&zero).unwrap().max_abs_diff(&zero) <= 1e-15);
    }

    #[test]
    fn mat_abs_of_bell_difference_matches_the_known_matrix() {
        // β − ¼I = |b⟩⟨b| − ¼I has spectrum {¾, −¼, −¼, −¼}, so the
        // absolute value is ¼I + ½|b⟩⟨b|: diagonal (½,¼,¼,½), corners ¼.
        let beta = bell_state();
        let prod = ComplexMatrix::identity(4).scale(0.25);
        let diff = beta.matrix().sub(&prod);
        let abs = mat_abs(&diff).unwrap();
        let mut expect = ComplexMatrix::diag(&[0.5, 0.25, 0.25, 0.5]);
        expect.set(0, 3, c(0.25, 0.0));
        expect.set(3, 0, c(0.25, 0.0));
        assert!(abs.max_abs_diff(&expect) <= 1e-9);
        // The definition |T|² = T†T pins the corners down.
        assert!(abs.matmul(&abs).max_abs_diff(&diff.adjoint().matmul(&diff)) <= 1e-9);
    }

    #[test]
    fn kron_and_partial_trace_of_bell_state() {
        let beta = bell_state();
        assert_close(beta.matrix().trace().re, 1.0, 1e-15);
        let b1 = beta.partial_trace(2, 2, Side::First).unwrap();
        let b2 = beta.partial_trace(2, 2, Side::Second).unwrap();
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(b1.matrix().max_abs_diff(&half) <= 1e-12);
        assert!(b2.matrix().max_abs_diff(&half) <= 1e-12);
        let prod = b1.tensor(&b2);
        assert!(
            prod.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale(0.25))
                <= 1e-12
        );
    }

    #[test]
    fn trace_distance_of_bell_state_to_its_marginals_product() {
        let beta = bell_state();
        let b1 = beta.partial_trace(2, 2, Side::First).unwrap();
        let b2 = beta.partial_trace(2, 2, Side::Second).unwrap();
        let prod = b1.tensor(&b2);
        assert_close(trd(&beta, &prod).unwrap(), 0.75, 1e-9);
        assert_close(trd(&beta, &beta).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn trace_distance_extends_total_variation() {
        let a = Dist::from_pairs(&[("a", 0.5), ("b", 0.125), ("c", 0.375)]).unwrap();
        let b = Dist::from_pairs(&[("a", 0.25), ("b", 0.5), ("c", 0.25)]).unwrap();
        let ra = DensityMatrix::from_dist(&a);
        let rb = DensityMatrix::from_dist(&b);
        assert_close(trd(&ra, &rb).unwrap(), tvd(&a, &b), 1e-12);
    }

    #[test]
    fn q_validity_examples() {
        let beta = bell_state();
        assert_close(q_validity(&beta, &Effect::identity(4)).unwrap(), 1.0, 1e-12);
        // β is itself the projection onto |b⟩.
        let onto_bell = Effect::new(beta.matrix().clone()).unwrap();
        assert_close(q_validity(&beta, &onto_bell).unwrap(), 1.0, 1e-12);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert_close(q_validity(&mixed, &onto_bell).unwrap(), 0.25, 1e-12);
    }

    #[test]
    fn jordan_decomposition_examples() {
        let m = ComplexMatrix::diag(&[0.3, -0.3]);
        let (p, n) = jordan_decompose(&m).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::diag(&[0.3, 0.0])) <= 1e-12);
        assert!(n.max_abs_diff(&ComplexMatrix::diag(&[0.0, 0.3])) <= 1e-12);

        let psd = ComplexMatrix::diag(&[0.4, 0.6]);
        let (p, n) = jordan_decompose(&psd).unwrap();
        assert!(p.max_abs_diff(&psd) <= 1e-12);
        assert!(opnorm(&n).unwrap() <= 1e-12);

        // β − β₁⊗β₂ has positive part ¾·|b⟩⟨b|.
        let beta = bell_state();
        let diff = beta.matrix().sub(&ComplexMatrix::identity(4).scale(0.25));
        let (p, n) = jordan_decompose(&diff).unwrap();
        assert!(p.max_abs_diff(&beta.matrix().scale(0.75)) <= 1e-9);
        assert!(p.matmul(&n).trace().norm() <= EIG_TOL);
        // Traceless input balances the two parts.
        assert_close(p.trace().re, n.trace().re, 1e-12);
    }

    #[test]
    fn trd_witness_is_the_bell_projection() {
        let beta = bell_state();
        let b1 = beta.partial_trace(2, 2, Side::First).unwrap();
        let prod = b1.tensor(&beta.partial_trace(2, 2, Side::Second).unwrap());
        let (s, gap) = trd_witness(&beta, &prod).unwrap();
        assert!(s.is_sharp().unwrap());
        assert!(s.matrix().max_abs_diff(beta.matrix()) <= 1e-9);
        assert_close(gap, 0.75, 1e-9);

        let (s, gap) = trd_witness(&beta, &beta).unwrap();
        assert!(opnorm(s.matrix()).unwrap() <= 1e-12);
        assert_close(gap, 0.0, 1e-12);
    }

    #[test]
    fn diagonal_witness_matches_classical_witness() {
        let a = Dist::from_pairs(&[("a", 0.75), ("b", 0.25)]).unwrap();
        let b = Dist::from_pairs(&[("a", 0.25), ("b", 0.75)]).unwrap();
        let (s, gap) =
            trd_witness(&DensityMatrix::from_dist(&a), &DensityMatrix::from_dist(&b)).unwrap();
        // The classical witness set is {a}, the first diagonal slot.
        assert!(s.matrix().max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) <= 1e-9);
        assert_close(gap, 0.5, 1e-12);
    }

    #[test]
    fn opnorm_examples() {
        assert_close(opnorm(&ComplexMatrix::identity(3)).unwrap(), 1.0, 1e-12);
        assert_close(
            opnorm(&ComplexMatrix::diag(&[0.2, -0.9])).unwrap(),
            0.9,
            1e-12,
        );
        let beta = bell_state();
        let diff = beta.matrix().sub(&ComplexMatrix::identity(4).scale(0.25));
        assert_close(opnorm(&diff).unwrap(), 0.75, 1e-9);
        // Non-Hermitian path: the shift [[0,1],[0,0]] has norm 1.
        let shift = ComplexMatrix::from_rows(vec![vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert_close(opnorm(&shift).unwrap(), 1.0, 1e-9);
    }

    #[test]
    fn vld_equals_trd_on_bell_example() {
        let beta = bell_state();
        let b1 = beta.partial_trace(2, 2, Side::First).unwrap();
        let prod = b1.tensor(&beta.partial_trace(2, 2, Side::Second).unwrap());
        assert_close(vld(&beta, &prod).unwrap(), 0.75, 1e-9);
        assert_close(vld(&beta, &beta).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.6])),
            Err(QuantumError::InvalidTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])),
            Err(QuantumError::NotPsd(_))
        ));
        let mut skew = ComplexMatrix::diag(&[0.5, 0.5]);
        skew.set(0, 1, c(0.2, 0.0));
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(QuantumError::NotHermitian(_))
        ));
    }

    #[test]
    fn effect_validation_and_sharpness() {
        assert!(Effect::new(ComplexMatrix::diag(&[0.0, 1.0])).is_ok());
        assert!(matches!(
            Effect::new(ComplexMatrix::diag(&[1.2, 0.0])),
            Err(QuantumError::NotAnEffect(..))
        ));
        let sharp = Effect::new(ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        assert!(sharp.is_sharp().unwrap());
        let fuzzy = Effect::new(ComplexMatrix::diag(&[0.5, 0.0])).unwrap();
        assert!(!fuzzy.is_sharp().unwrap());
    }

    #[test]
    fn partial_trace_requires_matching_dimensions() {
        let beta = bell_state();
        assert!(matches!(
            beta.matrix().partial_trace(3, 2, Side::First),
            Err(QuantumError::DimensionMismatch(6, 4))
        ));
        assert!(matches!(
            trd(&beta, &DensityMatrix::maximally_mixed(2)),
            Err(QuantumError::DimensionMismatch(4, 2))
        ));
    }

    #[test]
    fn eig_residual_on_a_dense_hermitian_matrix() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.9, 0.0), c(0.2, 0.4), c(-0.1, 0.3)],
            vec![c(0.2, -0.4), c(-0.5, 0.0), c(0.0, -0.6)],
            vec![c(-0.1, -0.3), c(0.0, 0.6), c(0.25, 0.0)],
        ])
        .unwrap();
        let eig = herm_eig(&m).unwrap();
        assert!(eig.apply(|l| l).max_abs_diff(&m) <= EIG_TOL);
        // V†V = I.
        let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(3)) <= EIG_TOL);
    }
}
