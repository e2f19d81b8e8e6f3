//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with its worst observed residual.
//!
//! Run with `cargo test -p valdist-core --test acceptance -- --nocapture`
//! to see the lines.

use std::time::Instant;

use rand::Rng;

use valdist_core::dist::{marginal, tensor, tvd, tvd_witness, Dist, Side};
use valdist_core::effect::{
    ard, sup_of_ascending, EffectModule, FuzzyModel, MatrixEffectModel, UnitIntervalModel,
};
use valdist_core::metric::{kantorovich, lipschitz_witness, witness_gap, FiniteMetricSpace};
use valdist_core::quantum::{
    bell_state, mat_abs, opnorm, q_validity, trd, trd_witness, vld, ComplexMatrix,
};
use valdist_core::sample;
use valdist_core::triangle::{effect_roundtrip_residual, triangle_commutes_classical};
use valdist_core::verify::{run_suite, tvd_by_enumeration, Suite};

const SEED: u64 = 0xACCE97ED;

fn report(criterion: u32, name: &str, ok: bool, detail: String) {
    println!(
        "criterion {criterion:2} ({name}): {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_classical_entwinedness() {
    let omega = Dist::from_pairs(&[("(a,0)", 0.5), ("(b,1)", 0.5)]).unwrap();
    let m1 = marginal(&omega, Side::First).unwrap();
    let m2 = marginal(&omega, Side::Second).unwrap();
    let product = tensor(&m1, &m2);
    let start = Instant::now();
    let d = tvd(&omega, &product);
    let elapsed = start.elapsed();
    let ok = (d - 0.5).abs() <= 1e-12 && elapsed.as_micros() < 1000;
    report(
        1,
        "classical entwinedness",
        ok,
        format!("tvd = {d}, residual {:.3e}, {elapsed:?}", (d - 0.5).abs()),
    );
}

#[test]
fn criterion_02_quantum_entwinedness() {
    let beta = bell_state();
    let start = Instant::now();
    let b1 = beta.partial_trace(2, 2, Side::First).unwrap();
    let b2 = beta.partial_trace(2, 2, Side::Second).unwrap();
    let product = b1.tensor(&b2);
    let d = trd(&beta, &product).unwrap();
    let elapsed = start.elapsed();

    // |β − β₁⊗β₂| = ¼I + ½|b⟩⟨b|: diagonal (½,¼,¼,½), corners ¼ — the
    // value forced by |T| = √(T†T) and the spectrum {¾,−¼,−¼,−¼}.
    let diff = beta.matrix().sub(product.matrix());
    let abs = mat_abs(&diff).unwrap();
    let mut expect = ComplexMatrix::diag(&[0.5, 0.25, 0.25, 0.5]);
    expect.set(0, 3, num_complex::Complex64::new(0.25, 0.0));
    expect.set(3, 0, num_complex::Complex64::new(0.25, 0.0));
    let entrywise = abs.max_abs_diff(&expect);
    let squares = abs.matmul(&abs).max_abs_diff(&diff.adjoint().matmul(&diff));

    let ok = (d - 0.75).abs() <= 1e-9
        && entrywise <= 1e-9
        && squares <= 1e-9
        && elapsed.as_millis() < 10;
    report(
        2,
        "quantum entwinedness",
        ok,
        format!(
            "trd = {d}, |diff| entrywise residual {entrywise:.3e}, |T|^2 residual {squares:.3e}, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_03_tvd_sharp_duality() {
    let mut rng = sample::rng(SEED ^ 3);
    let mut worst_duality = 0.0f64;
    let mut worst_witness = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let pts = sample::labels(n);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let direct = tvd(&a, &b);
        worst_duality = worst_duality.max((tvd_by_enumeration(&a, &b) - direct).abs());
        let (_, gap) = tvd_witness(&a, &b);
        worst_witness = worst_witness.max((gap - direct).abs());
    }
    let ok = worst_duality <= 1e-9 && worst_witness <= 1e-9;
    report(
        3,
        "tvd sharp duality",
        ok,
        format!("500 pairs, enumeration residual {worst_duality:.3e}, witness residual {worst_witness:.3e}"),
    );
}

#[test]
fn criterion_04_kantorovich_specialization() {
    let mut rng = sample::rng(SEED ^ 4);
    let mut worst_tvd = 0.0f64;
    let mut worst_dual = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let pts = sample::labels(n);
        let space = FiniteMetricSpace::discrete(&pts).unwrap();
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let value = kantorovich(&space, &a, &b).unwrap();
        worst_tvd = worst_tvd.max((value - tvd(&a, &b)).abs());
        let w = lipschitz_witness(&space, &a, &b).unwrap();
        worst_dual = worst_dual.max((witness_gap(&w, &a, &b).unwrap() - value).abs());
    }
    let ok = worst_tvd <= 1e-7 && worst_dual <= 1e-7;
    report(
        4,
        "kantorovich specializes to tvd",
        ok,
        format!(
            "500 pairs, tvd residual {worst_tvd:.3e}, strong-duality residual {worst_dual:.3e}"
        ),
    );
}

#[test]
fn criterion_05_trace_distance_duality() {
    let mut rng = sample::rng(SEED ^ 5);
    let mut worst_witness = 0.0f64;
    let mut worst_excess = 0.0f64;
    for case in 0..200 {
        let dim = 2 + case % 3;
        let r1 = sample::density(&mut rng, dim);
        let r2 = sample::density(&mut rng, dim);
        let direct = trd(&r1, &r2).unwrap();
        let (_, gap) = trd_witness(&r1, &r2).unwrap();
        worst_witness = worst_witness.max((gap - direct).abs());
        for _ in 0..1000 {
            let e = sample::effect(&mut rng, dim);
            let gap = (q_validity(&r1, &e).unwrap() - q_validity(&r2, &e).unwrap()).abs();
            worst_excess = worst_excess.max(gap - direct);
        }
    }
    let ok = worst_witness <= 1e-8 && worst_excess <= 1e-8;
    report(
        5,
        "trace-distance duality",
        ok,
        format!(
            "200 pairs x 1000 effects, witness residual {worst_witness:.3e}, effect excess {worst_excess:.3e}"
        ),
    );
}

#[test]
fn criterion_06_vld_equals_trd() {
    let mut rng = sample::rng(SEED ^ 6);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let dim = 2 + case % 3;
        let r1 = sample::density(&mut rng, dim);
        let r2 = sample::density(&mut rng, dim);
        worst = worst.max((vld(&r1, &r2).unwrap() - trd(&r1, &r2).unwrap()).abs());
    }
    let ok = worst <= 1e-9;
    report(
        6,
        "vld coincides with trd",
        ok,
        format!("200 pairs dims 2-4, residual {worst:.3e}"),
    );
}

#[test]
fn criterion_07_effect_module_laws() {
    // The per-law checks run 1000 seeded cases per law per model inside
    // the effect-module suite; zero failures means every law check
    // passes at its module tolerance.
    let report_suite = run_suite(Suite::EffectModule, SEED ^ 7);
    let failed: Vec<&str> = report_suite
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let ok = failed.is_empty();
    report(
        7,
        "effect-module law suite",
        ok,
        format!(
            "{} named law checks over fuzzy/matrix/scalar, failing: {:?}",
            report_suite.checks.len(),
            failed
        ),
    );
}

#[test]
fn criterion_08_ard_agreement() {
    let mut rng = sample::rng(SEED ^ 8);
    let mut worst_fuzzy = 0.0f64;
    let fm = FuzzyModel::new(sample::labels(5));
    for _ in 0..500 {
        let p = sample::fuzzy(&mut rng, fm.points());
        let q = sample::fuzzy(&mut rng, fm.points());
        let bisected = ard(&fm, &p, &q);
        let direct = valdist_core::metric::sup_distance(&p, &q).unwrap();
        worst_fuzzy = worst_fuzzy.max((bisected - direct).abs());
        let (value, witness) = fm.validity_distance(&p, &q);
        let gap = (valdist_core::dist::validity(&witness, &p).unwrap()
            - valdist_core::dist::validity(&witness, &q).unwrap())
        .abs();
        worst_fuzzy = worst_fuzzy
            .max((gap - value).abs())
            .max((value - direct).abs());
    }
    let mut worst_matrix = 0.0f64;
    let mm = MatrixEffectModel::new(3);
    for _ in 0..500 {
        let e = sample::effect(&mut rng, 3);
        let d = sample::effect(&mut rng, 3);
        let bisected = ard(&mm, &e, &d);
        let direct = opnorm(&e.matrix().sub(d.matrix())).unwrap();
        worst_matrix = worst_matrix.max((bisected - direct).abs());
        let (value, witness) = mm.validity_distance(&e, &d);
        let gap = (q_validity(&witness, &e).unwrap() - q_validity(&witness, &d).unwrap()).abs();
        worst_matrix = worst_matrix
            .max((gap - value).abs())
            .max((value - direct).abs());
    }
    let ok = worst_fuzzy <= 1e-8 && worst_matrix <= 1e-8;
    report(
        8,
        "ard agreement with sup metric and operator norm",
        ok,
        format!(
            "500 cases each, fuzzy residual {worst_fuzzy:.3e}, matrix residual {worst_matrix:.3e}"
        ),
    );
}

#[test]
fn criterion_09_completeness_probe() {
    fn probe<M: EffectModule>(
        m: &M,
        rng: &mut rand_chacha::ChaCha8Rng,
        sampler: impl Fn(&mut rand_chacha::ChaCha8Rng) -> M::Elem,
        cases: usize,
    ) -> f64 {
        let steps = 25;
        let mut worst = 0.0f64;
        for _ in 0..cases {
            let x = sampler(rng);
            let seq: Vec<M::Elem> = (1..=steps)
                .map(|k| m.scalar(1.0 - 0.5f64.powi(k), &x))
                .collect();
            let join = sup_of_ascending(m, &seq).unwrap();
            let norm = m.direct_ard(&x, &m.zero()).unwrap();
            let tail_bound = 0.5f64.powi(steps) * norm + 1e-12;
            // The proxy join must sit within the geometric tail of both
            // the last element and the true limit.
            worst = worst
                .max(m.direct_ard(&join.join, seq.last().unwrap()).unwrap() - join.residual)
                .max(m.direct_ard(&join.join, &x).unwrap() - tail_bound);
        }
        worst
    }

    let mut rng = sample::rng(SEED ^ 9);
    let fm = FuzzyModel::new(sample::labels(5));
    let fuzzy_pts = fm.points().to_vec();
    let worst_fuzzy = probe(&fm, &mut rng, |r| sample::fuzzy(r, &fuzzy_pts), 200);
    let mm = MatrixEffectModel::new(3);
    let worst_matrix = probe(&mm, &mut rng, |r| sample::effect(r, 3), 200);
    let sm = UnitIntervalModel;
    let worst_scalar = probe(&sm, &mut rng, |r| r.gen(), 200);
    let ok = worst_fuzzy <= 1e-9 && worst_matrix <= 1e-8 && worst_scalar <= 1e-12;
    report(
        9,
        "ascending joins within geometric tail",
        ok,
        format!(
            "200 cases per model, residuals fuzzy {worst_fuzzy:.3e} / matrix {worst_matrix:.3e} / scalar {worst_scalar:.3e}"
        ),
    );
}

#[test]
fn criterion_10_triangle_roundtrips_and_full_verify() {
    let classical = triangle_commutes_classical(4, 100, SEED ^ 10).unwrap();
    let mut worst_effect = 0.0f64;
    for dim in 2..=4 {
        worst_effect =
            worst_effect.max(effect_roundtrip_residual(dim, 100, SEED ^ 10 ^ dim as u64).unwrap());
    }
    let start = Instant::now();
    let full = run_suite(Suite::All, SEED ^ 10);
    let elapsed = start.elapsed();
    let ok = classical.max_residual() <= 1e-7
        && worst_effect <= 1e-7
        && full.all_passed()
        && elapsed.as_secs() < 60;
    report(
        10,
        "triangle round-trips and full verify",
        ok,
        format!(
            "100 trials: kleisli {:.3e}, state {:.3e}, predicate {:.3e}, effect {:.3e}; verify all ({} checks) in {elapsed:?}",
            classical.kleisli_roundtrip,
            classical.state_roundtrip,
            classical.predicate_roundtrip,
            worst_effect,
            full.checks.len(),
        ),
    );
}
