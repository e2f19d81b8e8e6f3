//! Seeded verification suites: every distance law, duality, effect-module
//! law and round-trip in this crate as a named pass/fail check with its
//! worst observed residual.
//!
//! Checks are grouped into suites named after the library's modules.
//! All randomness flows from the suite seed through per-check offsets,
//! so a fixed seed reproduces the identical report within one build.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::{align, pred_transform, state_transform, tvd, tvd_witness, validity, Dist};
use crate::effect::{
    archimedean_check, ard, ominus, sup_of_ascending, EffectModule, FuzzyModel, MatrixEffectModel,
    UnitIntervalModel,
};
use crate::metric::{
    check_nonexpansive_kleisli, kantorovich, lipschitz_witness, sup_distance, witness_gap,
    FiniteMetricSpace,
};
use crate::quantum::{
    herm_eig, jordan_decompose, mat_abs, opnorm, q_validity, trd, trd_witness, vld, ComplexMatrix,
    DensityMatrix, Effect,
};
use crate::sample;
use crate::tol::{CAUCHY_TOL, DUAL_TOL, EIG_TOL, SUM_TOL};
use crate::transport::{brute_force_transport, solve_transport, TransportProblem};
use crate::triangle::{effect_roundtrip_residual, triangle_commutes_classical};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    DistCore,
    MetricCore,
    Transport,
    QuantumCore,
    EffectModule,
    Triangle,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "dist-core" => Some(Suite::DistCore),
            "metric-core" => Some(Suite::MetricCore),
            "transport" => Some(Suite::Transport),
            "quantum-core" => Some(Suite::QuantumCore),
            "effect-module" => Some(Suite::EffectModule),
            "triangle" => Some(Suite::Triangle),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::DistCore => "dist-core",
            Suite::MetricCore => "metric-core",
            Suite::Transport => "transport",
            Suite::QuantumCore => "quantum-core",
            Suite::EffectModule => "effect-module",
            Suite::Triangle => "triangle",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Stable human rendering; byte-identical for a fixed seed.
    pub fn render_text(&self) -> String {
        let mut out = format!("suite {}  seed {}\n", self.suite, self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "  {} {:<42} worst {:.6e}  (tol {:.1e})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
            ));
        }
        out.push_str(&format!("{} passed, {} failed\n", self.passed, self.failed));
        out
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn record(&mut self, name: &str, tolerance: f64, worst: f64) {
        let worst = if worst == 0.0 { 0.0 } else { worst };
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: worst <= tolerance,
            worst,
            tolerance,
        });
    }
}

fn mix(seed: u64, salt: u64) -> ChaCha8Rng {
    sample::rng(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs one suite (or all of them) under the given seed.
pub fn run_suite(suite: Suite, seed: u64) -> VerifyReport {
    let mut rec = Recorder::new();
    match suite {
        Suite::DistCore => dist_core_checks(&mut rec, seed),
        Suite::MetricCore => metric_core_checks(&mut rec, seed),
        Suite::Transport => transport_checks(&mut rec, seed),
        Suite::QuantumCore => quantum_core_checks(&mut rec, seed),
        Suite::EffectModule => effect_module_checks(&mut rec, seed),
        Suite::Triangle => triangle_checks(&mut rec, seed),
        Suite::All => {
            dist_core_checks(&mut rec, seed);
            metric_core_checks(&mut rec, seed);
            transport_checks(&mut rec, seed);
            quantum_core_checks(&mut rec, seed);
            effect_module_checks(&mut rec, seed);
            triangle_checks(&mut rec, seed);
        }
    }
    let passed = rec.checks.iter().filter(|c| c.passed).count();
    let failed = rec.checks.len() - passed;
    VerifyReport {
        suite: suite.name().to_string(),
        seed,
        checks: rec.checks,
        passed,
        failed,
    }
}

// ---------------------------------------------------------------- dist-core

/// Max validity gap over every sharp predicate, by subset enumeration.
pub fn tvd_by_enumeration(a: &Dist, b: &Dist) -> f64 {
    let (a, b) = align(a, b);
    let n = a.points().len();
    assert!(n <= 20, "enumeration over 2^n subsets");
    let mut best = 0.0f64;
    for mask in 0u64..(1 << n) {
        let gap: f64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| a.probs()[i] - b.probs()[i])
            .sum();
        best = best.max(gap);
    }
    best
}

fn dist_core_checks(rec: &mut Recorder, seed: u64) {
    let mut rng = mix(seed, 1);
    let mut axioms = 0.0f64;
    let mut range = 0.0f64;
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let pts = sample::labels(n);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let c = sample::dist(&mut rng, &pts);
        let dab = tvd(&a, &b);
        axioms = axioms
            .max((dab - tvd(&b, &a)).abs())
            .max(tvd(&a, &a))
            .max(dab - tvd(&a, &c) - tvd(&c, &b));
        range = range.max(-dab).max(dab - 1.0);
    }
    rec.record("tvd-metric-axioms", SUM_TOL, axioms);
    rec.record("tvd-range", 0.0, range);

    let mut rng = mix(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let nx = rng.gen_range(1..=6);
        let ny = rng.gen_range(1..=6);
        let xs = sample::labels(nx);
        let ys: Vec<_> = (0..ny)
            .map(|i| crate::dist::Label::new(&format!("y{i:02}")).unwrap())
            .collect();
        let f = sample::kleisli(&mut rng, &xs, &ys);
        let omega = sample::dist(&mut rng, &xs);
        let q = sample::fuzzy(&mut rng, &ys);
        let lhs = validity(&state_transform(&f, &omega).unwrap(), &q).unwrap();
        let rhs = validity(&omega, &pred_transform(&f, &q).unwrap()).unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    rec.record("validity-transformation-equality", 1e-12, worst);

    let mut rng = mix(seed, 3);
    let mut duality = 0.0f64;
    let mut witness = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let pts = sample::labels(n);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let direct = tvd(&a, &b);
        duality = duality.max((tvd_by_enumeration(&a, &b) - direct).abs());
        let (_, gap) = tvd_witness(&a, &b);
        witness = witness.max((gap - direct).abs());
    }
    rec.record("tvd-sharp-duality", 1e-9, duality);
    rec.record("tvd-witness-gap", 1e-12, witness);

    // Completeness probe at finite scale: a geometric Cauchy sequence of
    // distributions tvd-converges to its pointwise limit, which is
    // itself a distribution.
    let mut rng = mix(seed, 4);
    let mut worst = 0.0f64;
    let steps = 30;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let pts = sample::labels(n);
        let limit = sample::dist(&mut rng, &pts);
        let start = sample::dist(&mut rng, &pts);
        let mut gap_prev = tvd(&start, &limit);
        for k in 1..=steps {
            let x_k = mix_dists(&limit, &start, 1.0 - 0.5f64.powi(k));
            let gap = tvd(&x_k, &limit);
            // Successive gaps halve, so the sequence is Cauchy, and the
            // distance to the pointwise limit tracks the tail bound.
            worst = worst.max(gap - 0.5 * gap_prev - 1e-12);
            gap_prev = gap;
        }
        worst = worst.max(gap_prev - 0.5f64.powi(steps) - 1e-12);
    }
    rec.record("tvd-cauchy-completeness", 0.0, worst.max(0.0));
}

// -------------------------------------------------------------- metric-core

fn mix_dists(a: &Dist, b: &Dist, r: f64) -> Dist {
    Dist::new(
        a.points()
            .iter()
            .cloned()
            .zip(
                a.probs()
                    .iter()
                    .zip(b.probs())
                    .map(|(x, y)| r * x + (1.0 - r) * y),
            )
            .collect(),
    )
    .expect("convex combinations stay normalized")
}

fn metric_core_checks(rec: &mut Recorder, seed: u64) {
    let mut rng = mix(seed, 10);
    let mut discrete_gap = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let pts = sample::labels(n);
        let space = FiniteMetricSpace::discrete(&pts).unwrap();
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let kvd = kantorovich(&space, &a, &b).unwrap();
        discrete_gap = discrete_gap.max((kvd - tvd(&a, &b)).abs());
    }
    rec.record("kvd-discrete-matches-tvd", 1e-7, discrete_gap);

    let mut rng = mix(seed, 11);
    let mut primal_dual = 0.0f64;
    let mut below_tvd = 0.0f64;
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let pts = sample::labels(n);
        let space = sample::metric_space(&mut rng, &pts);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let value = kantorovich(&space, &a, &b).unwrap();
        let w = lipschitz_witness(&space, &a, &b).unwrap();
        primal_dual = primal_dual.max((witness_gap(&w, &a, &b).unwrap() - value).abs());
        below_tvd = below_tvd.max(value - tvd(&a, &b));
    }
    rec.record("kvd-primal-dual-agreement", DUAL_TOL, primal_dual);
    rec.record("kvd-below-tvd", 1e-9, below_tvd);

    let mut rng = mix(seed, 12);
    let mut state_nonexp = 0.0f64;
    let mut pred_nonexp = 0.0f64;
    let mut pred_contract = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let pts = sample::labels(n);
        let space = sample::metric_space(&mut rng, &pts);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);

        // Non-expansive Kleisli maps: any map out of a discrete space,
        // and mixtures r·η + s·constant on a general space.
        let discrete = FiniteMetricSpace::discrete(&pts).unwrap();
        let f = sample::kleisli(&mut rng, &pts, &pts);
        let report = check_nonexpansive_kleisli(&discrete, &space, &f).unwrap();
        state_nonexp = state_nonexp.max(report.worst_excess);
        state_nonexp = state_nonexp.max(
            kantorovich(
                &space,
                &state_transform(&f, &a).unwrap(),
                &state_transform(&f, &b).unwrap(),
            )
            .unwrap()
                - tvd(&a, &b),
        );

        let r: f64 = rng.gen();
        let tau = sample::dist(&mut rng, &pts);
        let matrix: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| r * if i == j { 1.0 } else { 0.0 } + (1.0 - r) * tau.probs()[j])
                    .collect()
            })
            .collect();
        let g = crate::dist::KleisliMap::new(pts.to_vec(), pts.to_vec(), matrix).unwrap();
        let report = check_nonexpansive_kleisli(&space, &space, &g).unwrap();
        state_nonexp = state_nonexp.max(report.worst_excess);
        state_nonexp = state_nonexp.max(
            kantorovich(
                &space,
                &state_transform(&g, &a).unwrap(),
                &state_transform(&g, &b).unwrap(),
            )
            .unwrap()
                - kantorovich(&space, &a, &b).unwrap(),
        );

        // Predicate transformer: g∗ preserves non-expansiveness and
        // contracts the supremum metric.
        let q1 = sample::nonexpansive_predicate(&mut rng, &space);
        let q2 = sample::nonexpansive_predicate(&mut rng, &space);
        let gq1 = pred_transform(&g, q1.fuzzy()).unwrap();
        let gq2 = pred_transform(&g, q2.fuzzy()).unwrap();
        for i in 0..n {
            for j in 0..n {
                pred_nonexp =
                    pred_nonexp.max((gq1.values()[i] - gq1.values()[j]).abs() - space.dist(i, j));
            }
        }
        pred_contract = pred_contract
            .max(sup_distance(&gq1, &gq2).unwrap() - sup_distance(q1.fuzzy(), q2.fuzzy()).unwrap());
    }
    rec.record("state-transformer-nonexpansive", 1e-9, state_nonexp);
    rec.record("pred-transformer-nonexpansive", 1e-9, pred_nonexp);
    rec.record("pred-transformer-contracts-spd", 1e-9, pred_contract);

    let mut rng = mix(seed, 13);
    let mut convex = 0.0f64;
    let mut axioms = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let pts = sample::labels(n);
        let space = sample::metric_space(&mut rng, &pts);
        let s1 = sample::dist(&mut rng, &pts);
        let s2 = sample::dist(&mut rng, &pts);
        let t1 = sample::dist(&mut rng, &pts);
        let t2 = sample::dist(&mut rng, &pts);
        let r: f64 = rng.gen();
        let lhs = kantorovich(&space, &mix_dists(&s1, &s2, r), &mix_dists(&t1, &t2, r)).unwrap();
        let rhs = r * kantorovich(&space, &s1, &t1).unwrap()
            + (1.0 - r) * kantorovich(&space, &s2, &t2).unwrap();
        convex = convex.max(lhs - rhs);

        let dab = kantorovich(&space, &s1, &s2).unwrap();
        axioms = axioms
            .max((dab - kantorovich(&space, &s2, &s1).unwrap()).abs())
            .max(kantorovich(&space, &s1, &s1).unwrap())
            .max(
                dab - kantorovich(&space, &s1, &t1).unwrap()
                    - kantorovich(&space, &t1, &s2).unwrap(),
            );
    }
    rec.record("kvd-convex-combination", DUAL_TOL, convex);
    rec.record("kvd-metric-axioms", DUAL_TOL, axioms);
}

// ---------------------------------------------------------------- transport

fn random_problem(rng: &mut ChaCha8Rng, max_side: usize) -> TransportProblem {
    let m = rng.gen_range(1..=max_side);
    let n = rng.gen_range(1..=max_side);
    let cost: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen()).collect())
        .collect();
    let simplex = |rng: &mut ChaCha8Rng, k: usize| {
        let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect::<Vec<f64>>()
    };
    let supply = simplex(rng, m);
    let demand = simplex(rng, n);
    TransportProblem::new(cost, supply, demand).expect("sampled problems are balanced")
}

fn transport_checks(rec: &mut Recorder, seed: u64) {
    let mut rng = mix(seed, 20);
    let mut duality = 0.0f64;
    let mut marginals = 0.0f64;
    let mut determinism = 0.0f64;
    for _ in 0..300 {
        let prob = random_problem(&mut rng, 6);
        let plan = solve_transport(&prob).unwrap();
        let dual: f64 = plan
            .row_potentials
            .iter()
            .zip(prob.supply())
            .map(|(u, s)| u * s)
            .sum::<f64>()
            + plan
                .col_potentials
                .iter()
                .zip(prob.demand())
                .map(|(v, d)| v * d)
                .sum::<f64>();
        duality = duality.max((dual - plan.value).abs());
        for (i, s) in prob.supply().iter().enumerate() {
            marginals = marginals.max((plan.plan[i].iter().sum::<f64>() - s).abs());
        }
        for (j, d) in prob.demand().iter().enumerate() {
            let col: f64 = plan.plan.iter().map(|r| r[j]).sum();
            marginals = marginals.max((col - d).abs());
        }
        let again = solve_transport(&prob).unwrap();
        if again != plan {
            determinism = 1.0;
        }
    }
    rec.record("transport-strong-duality", DUAL_TOL, duality);
    rec.record("transport-plan-marginals", SUM_TOL, marginals);
    rec.record("transport-determinism", 0.0, determinism);

    let mut rng = mix(seed, 21);
    let mut oracle_gap = 0.0f64;
    for _ in 0..200 {
        let prob = random_problem(&mut rng, 3);
        let plan = solve_transport(&prob).unwrap();
        let oracle = brute_force_transport(&prob).unwrap();
        oracle_gap = oracle_gap.max((plan.value - oracle).abs());
    }
    rec.record("transport-brute-force-agreement", 1e-9, oracle_gap);
}

// -------------------------------------------------------------- quantum-core

fn quantum_core_checks(rec: &mut Recorder, seed: u64) {
    let mut rng = mix(seed, 30);
    let mut axioms = 0.0f64;
    for _ in 0..150 {
        let dim = rng.gen_range(2..=5);
        let a = sample::density(&mut rng, dim);
        let b = sample::density(&mut rng, dim);
        let c = sample::density(&mut rng, dim);
        let dab = trd(&a, &b).unwrap();
        axioms = axioms
            .max((dab - trd(&b, &a).unwrap()).abs())
            .max(trd(&a, &a).unwrap())
            .max(dab - trd(&a, &c).unwrap() - trd(&c, &b).unwrap());
    }
    rec.record("trd-metric-axioms", 1e-8, axioms);

    let mut rng = mix(seed, 31);
    let mut duality = 0.0f64;
    let mut witness = 0.0f64;
    for _ in 0..20 {
        let dim = rng.gen_range(2..=4);
        let r1 = sample::density(&mut rng, dim);
        let r2 = sample::density(&mut rng, dim);
        let direct = trd(&r1, &r2).unwrap();
        for _ in 0..200 {
            let e = sample::effect(&mut rng, dim);
            let gap = (q_validity(&r1, &e).unwrap() - q_validity(&r2, &e).unwrap()).abs();
            duality = duality.max(gap - direct);
        }
        let (s, gap) = trd_witness(&r1, &r2).unwrap();
        witness = witness.max((gap - direct).abs());
        let _ = s;
    }
    rec.record("trd-effect-duality", 1e-8, duality);
    rec.record("trd-witness-gap", 1e-8, witness);

    let mut rng = mix(seed, 32);
    let mut embed = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let pts = sample::labels(n);
        let a = sample::dist(&mut rng, &pts);
        let b = sample::dist(&mut rng, &pts);
        let qd = trd(&DensityMatrix::from_dist(&a), &DensityMatrix::from_dist(&b)).unwrap();
        embed = embed.max((qd - tvd(&a, &b)).abs());
    }
    rec.record("trd-classical-embedding", 1e-12, embed);

    let mut rng = mix(seed, 33);
    let mut jordan = 0.0f64;
    let mut residual = 0.0f64;
    let mut absq = 0.0f64;
    for _ in 0..100 {
        let dim = rng.gen_range(2..=16);
        let h = sample::hermitian(&mut rng, dim);
        let eig = herm_eig(&h).unwrap();
        residual = residual.max(eig.apply(|l| l).max_abs_diff(&h));
        let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        residual = residual.max(vtv.max_abs_diff(&ComplexMatrix::identity(dim)));

        // Traceless input balances the Jordan parts.
        let shift = h.trace().re / dim as f64;
        let traceless = h.sub(&ComplexMatrix::identity(dim).scale(shift));
        let (p, m) = jordan_decompose(&traceless).unwrap();
        jordan = jordan.max((p.trace().re - m.trace().re).abs());

        if dim <= 6 {
            let abs = mat_abs(&h).unwrap();
            absq = absq.max(abs.matmul(&abs).max_abs_diff(&h.adjoint().matmul(&h)));
        }
    }
    rec.record("herm-eig-residual", EIG_TOL, residual);
    rec.record("jordan-trace-balance", 1e-10, jordan);
    rec.record("mat-abs-square", 1e-8, absq);

    let mut rng = mix(seed, 34);
    let mut agreement = 0.0f64;
    for _ in 0..200 {
        let dim = rng.gen_range(2..=4);
        let r1 = sample::density(&mut rng, dim);
        let r2 = sample::density(&mut rng, dim);
        agreement = agreement.max((vld(&r1, &r2).unwrap() - trd(&r1, &r2).unwrap()).abs());
    }
    rec.record("vld-matches-trd", 1e-9, agreement);
}

// ------------------------------------------------------------ effect-module

type ElemSampler<M> = Box<dyn Fn(&mut ChaCha8Rng, &M) -> <M as EffectModule>::Elem>;
type BelowSampler<M> =
    Box<dyn Fn(&mut ChaCha8Rng, &M, &<M as EffectModule>::Elem) -> <M as EffectModule>::Elem>;

struct ModelHarness<M: EffectModule> {
    model: M,
    name: &'static str,
    /// Residual tolerance for element comparisons.
    tol: f64,
    sampler: ElemSampler<M>,
    /// Draws an element below the given one.
    below: BelowSampler<M>,
    /// Draws from the family whose meets are canonical.
    diag: ElemSampler<M>,
}

fn dist_of<M: EffectModule>(m: &M, a: &M::Elem, b: &M::Elem) -> f64 {
    m.direct_ard(a, b)
        .expect("all bundled models have a native metric")
}

fn effect_law_checks<M: EffectModule>(
    rec: &mut Recorder,
    h: &ModelHarness<M>,
    seed: u64,
    cases: usize,
) {
    let m = &h.model;
    let name = |law: &str| format!("effect-{}-{law}", h.name);
    let slack = m.order_slack();

    // PCM laws, orthosupplement, bihomomorphism of the scalar action.
    let mut rng = mix(seed, 40);
    let mut worst = 0.0f64;
    let mut bool_failures = 0.0f64;
    for _ in 0..cases {
        let x = (h.sampler)(&mut rng, m);
        let y = (h.sampler)(&mut rng, m);
        let z = (h.sampler)(&mut rng, m);
        let (u1, u2, u3) = (
            rng.gen::<f64>() / 3.0,
            rng.gen::<f64>() / 3.0,
            rng.gen::<f64>() / 3.0,
        );
        let (sx, sy, sz) = (m.scalar(u1, &x), m.scalar(u2, &y), m.scalar(u3, &z));
        let xy = m.ovee(&sx, &sy).unwrap();
        let yx = m.ovee(&sy, &sx).unwrap();
        worst = worst.max(dist_of(m, &xy, &yx));
        let assoc1 = m.ovee(&xy, &sz).unwrap();
        let assoc2 = m.ovee(&sx, &m.ovee(&sy, &sz).unwrap()).unwrap();
        worst = worst.max(dist_of(m, &assoc1, &assoc2));
        worst = worst.max(dist_of(m, &m.ovee(&x, &m.zero()).unwrap(), &x));
        worst = worst.max(dist_of(m, &m.perp(&m.perp(&x)), &x));
        worst = worst.max(dist_of(m, &m.ovee(&x, &m.perp(&x)).unwrap(), &m.one()));
        // x ⋎ 1 defined forces x = 0.
        if dist_of(m, &x, &m.zero()) > 100.0 * slack && m.ovee(&x, &m.one()).is_ok() {
            bool_failures += 1.0;
        }
        // Scalar action is a bihomomorphism.
        let r: f64 = rng.gen();
        let s: f64 = rng.gen::<f64>() * (1.0 - r);
        worst = worst.max(dist_of(
            m,
            &m.scalar(r, &xy),
            &m.ovee(&m.scalar(r, &sx), &m.scalar(r, &sy)).unwrap(),
        ));
        worst = worst.max(dist_of(
            m,
            &m.scalar(r + s, &x),
            &m.ovee(&m.scalar(r, &x), &m.scalar(s, &x)).unwrap(),
        ));
        worst = worst.max(dist_of(m, &m.scalar(1.0, &x), &x));
        worst = worst.max(dist_of(
            m,
            &m.scalar(r, &m.scalar(s, &x)),
            &m.scalar(r * s, &x),
        ));
    }
    rec.record(&name("pcm-laws"), h.tol, worst.max(bool_failures));

    // The ⊖ laws (a)-(h).
    let mut rng = mix(seed, 41);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let z = (h.sampler)(&mut rng, m);
        let y = (h.below)(&mut rng, m, &z);
        let x = (h.below)(&mut rng, m, &y);

        // (a) x⊖0 = x, x⊖x = 0, 1⊖x = x⊥.
        worst = worst.max(dist_of(m, &ominus(m, &x, &m.zero()).unwrap(), &x));
        worst = worst.max(dist_of(m, &ominus(m, &x, &x).unwrap(), &m.zero()));
        worst = worst.max(dist_of(m, &ominus(m, &m.one(), &x).unwrap(), &m.perp(&x)));

        // (b) z = x ⋎ y ⟺ x = z ⊖ y, in both directions: the sum
        // recovers its summand, and the difference rebuilds the sum.
        let u: f64 = rng.gen();
        let w = m.scalar(u, &m.perp(&x));
        let sum = m.ovee(&x, &w).unwrap();
        worst = worst.max(dist_of(m, &ominus(m, &sum, &w).unwrap(), &x));
        let back = ominus(m, &z, &y).unwrap();
        worst = worst.max(dist_of(m, &m.ovee(&back, &y).unwrap(), &z));

        // (c) margin of x ⋎ y ≤ z equals margin of x ≤ z ⊖ y for y ≤ z.
        let xc = m.scalar(rng.gen(), &m.perp(&y));
        if let Ok(sum) = m.ovee(&xc, &y) {
            let m1 = m.order_margin(&sum, &z);
            let m2 = m.order_margin(&xc, &ominus(m, &z, &y).unwrap());
            worst = worst.max((m1 - m2).abs());
        }

        // (d) (y ⋎ w) ⊖ x = (y ⊖ x) ⋎ w for x ≤ y and summable w.
        let w = m.scalar(rng.gen(), &m.perp(&y));
        let lhs = ominus(m, &m.ovee(&y, &w).unwrap(), &x).unwrap();
        let rhs = m.ovee(&ominus(m, &y, &x).unwrap(), &w).unwrap();
        worst = worst.max(dist_of(m, &lhs, &rhs));

        // (e) x ≤ y ≤ z gives y⊖x ≤ z⊖x.
        let margin = m.order_margin(&ominus(m, &y, &x).unwrap(), &ominus(m, &z, &x).unwrap());
        worst = worst.max(-margin - slack);

        // (f) for x ≥ y (here y ≤ z with w summable): margins of
        // z ≤ y ⋎ w and z ⊖ y ≤ w agree.
        let w = m.scalar(rng.gen(), &m.perp(&y));
        let m1 = m.order_margin(&z, &m.ovee(&y, &w).unwrap());
        let m2 = m.order_margin(&ominus(m, &z, &y).unwrap(), &w);
        worst = worst.max((m1 - m2).abs());

        // (g) r·y ⊖ r·x = r·(y ⊖ x).
        let r: f64 = rng.gen();
        let lhs = ominus(m, &m.scalar(r, &y), &m.scalar(r, &x)).unwrap();
        let rhs = m.scalar(r, &ominus(m, &y, &x).unwrap());
        worst = worst.max(dist_of(m, &lhs, &rhs));

        // (h) (s−r)·x = s·x ⊖ r·x for scalars r ≤ s.
        let (mut r, mut s) = (rng.gen::<f64>(), rng.gen::<f64>());
        if r > s {
            std::mem::swap(&mut r, &mut s);
        }
        let lhs = m.scalar(s - r, &x);
        let rhs = ominus(m, &m.scalar(s, &x), &m.scalar(r, &x)).unwrap();
        worst = worst.max(dist_of(m, &lhs, &rhs));
    }
    rec.record(&name("ominus-laws"), h.tol.max(10.0 * slack), worst);

    // Scalar meets of 1 and the conditional meet law (i) on canonical
    // (diagonal) families.
    let mut rng = mix(seed, 42);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let scalars: Vec<f64> = (0..4).map(|_| rng.gen()).collect();
        let min = scalars.iter().copied().fold(f64::INFINITY, f64::min);
        let mut acc = m.scalar(scalars[0], &m.one());
        for s in &scalars[1..] {
            acc = m.meet(&acc, &m.scalar(*s, &m.one())).unwrap();
        }
        worst = worst.max(dist_of(m, &m.scalar(min, &m.one()), &acc));

        let y = (h.diag)(&mut rng, m);
        let s1 = m.scalar(rng.gen(), &m.perp(&y));
        let s2 = m.scalar(rng.gen(), &m.perp(&y));
        let lhs = m.ovee(&y, &m.meet(&s1, &s2).unwrap()).unwrap();
        let rhs = m
            .meet(&m.ovee(&y, &s1).unwrap(), &m.ovee(&y, &s2).unwrap())
            .unwrap();
        worst = worst.max(dist_of(m, &lhs, &rhs));
    }
    rec.record(&name("scalar-meet"), h.tol, worst);

    // Norm item: ard(x,y) ≤ r iff y ⊖ x ≤ r·1, probed on a grid.
    let mut rng = mix(seed, 43);
    let mut failures = 0.0f64;
    for _ in 0..cases {
        let y = (h.sampler)(&mut rng, m);
        let x = (h.below)(&mut rng, m, &y);
        let a = ard(m, &x, &y);
        let diff = ominus(m, &y, &x).unwrap();
        for k in 0..=10 {
            let r = k as f64 / 10.0;
            if (r - a).abs() <= 0.02 {
                continue;
            }
            let holds = m.leq(&diff, &m.scalar(r, &m.one()));
            if holds != (r > a) {
                failures += 1.0;
            }
        }
    }
    rec.record(&name("norm-item"), 0.0, failures);

    // Continuity of ⋎ along ard-convergent summable sequences.
    let mut rng = mix(seed, 44);
    let mut worst = 0.0f64;
    let steps = 30;
    for _ in 0..cases {
        let x = (h.sampler)(&mut rng, m);
        let y = m.scalar(rng.gen(), &m.perp(&x));
        let limit = m.ovee(&x, &y).unwrap();
        let shrink = 1.0 - 0.5f64.powi(steps);
        let tail = m
            .ovee(&m.scalar(shrink, &x), &m.scalar(shrink, &y))
            .unwrap();
        worst = worst.max(dist_of(m, &tail, &limit));
    }
    rec.record(&name("ovee-continuity"), 10.0 * CAUCHY_TOL, worst);

    // Generic bisection agrees with the native metric.
    let mut rng = mix(seed, 45);
    let mut worst = 0.0f64;
    for _ in 0..cases.min(500) {
        let x = (h.sampler)(&mut rng, m);
        let y = (h.sampler)(&mut rng, m);
        worst = worst.max((ard(m, &x, &y) - dist_of(m, &x, &y)).abs());
    }
    rec.record(&name("ard-agreement"), 1e-8, worst);

    // Ascending joins: the proxy sits within the geometric tail bound of
    // the true limit, and the tagged residual matches the last gap.
    let mut rng = mix(seed, 46);
    let mut worst = 0.0f64;
    let n_steps = 25;
    for _ in 0..cases.min(200) {
        let x = (h.sampler)(&mut rng, m);
        let seq: Vec<M::Elem> = (1..=n_steps)
            .map(|k| m.scalar(1.0 - 0.5f64.powi(k), &x))
            .collect();
        let join = sup_of_ascending(m, &seq).unwrap();
        let norm = dist_of(m, &x, &m.zero());
        let tail_bound = 0.5f64.powi(n_steps) * norm + 1e-12;
        worst = worst.max(dist_of(m, &join.join, &x) - tail_bound);
        worst = worst.max(dist_of(m, &join.join, seq.last().unwrap()) - join.residual - h.tol);
    }
    rec.record(&name("sup-ascending"), h.tol, worst.max(0.0));

    // Archimedean probe.
    let mut rng = mix(seed, 47);
    let mut failures = 0.0f64;
    for _ in 0..cases.min(200) {
        let x = (h.sampler)(&mut rng, m);
        let y = (h.sampler)(&mut rng, m);
        if !archimedean_check(m, &x, &y, 16) {
            failures += 1.0;
        }
        let bumped = m
            .ovee(&m.scalar(0.5, &y), &m.scalar(1.0 / 32.0, &m.one()))
            .unwrap();
        if !archimedean_check(m, &bumped, &m.scalar(0.5, &y), 16) {
            failures += 1.0;
        }
    }
    rec.record(&name("archimedean-probe"), 0.0, failures);
}

fn effect_module_checks(rec: &mut Recorder, seed: u64) {
    let fuzzy = ModelHarness {
        model: FuzzyModel::new(sample::labels(6)),
        name: "fuzzy",
        tol: 1e-9,
        sampler: Box::new(|rng, m: &FuzzyModel| sample::fuzzy(rng, m.points())),
        below: Box::new(|rng, m: &FuzzyModel, y| {
            let vals: Vec<f64> = y.values().iter().map(|v| rng.gen::<f64>() * v).collect();
            m.element(&vals)
        }),
        diag: Box::new(|rng, m: &FuzzyModel| sample::fuzzy(rng, m.points())),
    };
    effect_law_checks(rec, &fuzzy, seed, 1000);

    let matrix = ModelHarness {
        model: MatrixEffectModel::new(4),
        name: "matrix",
        tol: 1e-8,
        sampler: Box::new(|rng, m: &MatrixEffectModel| sample::effect(rng, m.dim())),
        below: Box::new(|rng, m: &MatrixEffectModel, y: &Effect| {
            // √y F √y ≤ y for any effect F, by congruence.
            let eig = herm_eig(y.matrix()).expect("effects are Hermitian");
            let sqrt = eig.apply(|l| l.max(0.0).sqrt());
            let f = sample::effect(rng, m.dim());
            Effect::new(sqrt.matmul(f.matrix()).matmul(&sqrt))
                .expect("congruence keeps the effect bounds")
        }),
        diag: Box::new(|rng, m: &MatrixEffectModel| {
            let d: Vec<f64> = (0..m.dim()).map(|_| rng.gen()).collect();
            Effect::new(ComplexMatrix::diag(&d)).expect("diagonal unit entries are an effect")
        }),
    };
    effect_law_checks(rec, &matrix, seed, 1000);

    let scalar = ModelHarness {
        model: UnitIntervalModel,
        name: "scalar",
        tol: 1e-12,
        sampler: Box::new(|rng, _| rng.gen()),
        below: Box::new(|rng, _, y| rng.gen::<f64>() * y),
        diag: Box::new(|rng, _| rng.gen()),
    };
    effect_law_checks(rec, &scalar, seed, 1000);

    // Fuzzy validity-distance witnesses attain the supremum metric, and
    // the matrix ones the operator norm.
    let mut rng = mix(seed, 48);
    let mut worst = 0.0f64;
    let fm = FuzzyModel::new(sample::labels(6));
    for _ in 0..300 {
        let p = sample::fuzzy(&mut rng, fm.points());
        let q = sample::fuzzy(&mut rng, fm.points());
        let (value, witness) = fm.validity_distance(&p, &q);
        worst = worst.max((value - sup_distance(&p, &q).unwrap()).abs());
        let gap = (validity(&witness, &p).unwrap() - validity(&witness, &q).unwrap()).abs();
        worst = worst.max((gap - value).abs());
    }
    let mm = MatrixEffectModel::new(3);
    for _ in 0..300 {
        let e = sample::effect(&mut rng, 3);
        let d = sample::effect(&mut rng, 3);
        let (value, witness) = mm.validity_distance(&e, &d);
        worst = worst.max((value - opnorm(&e.matrix().sub(d.matrix())).unwrap()).abs());
        let gap = (q_validity(&witness, &e).unwrap() - q_validity(&witness, &d).unwrap()).abs();
        worst = worst.max((gap - value).abs());
    }
    rec.record("effect-validity-distance-witness", EIG_TOL, worst);
}

// ----------------------------------------------------------------- triangle

fn triangle_checks(rec: &mut Recorder, seed: u64) {
    let mut rng = mix(seed, 50);
    let mut kleisli = 0.0f64;
    let mut state = 0.0f64;
    let mut pred = 0.0f64;
    for _ in 0..5 {
        let size = rng.gen_range(1..=6);
        let sub_seed = rng.gen::<u64>();
        let report = triangle_commutes_classical(size, 20, sub_seed)
            .expect("validity-induced black boxes pass their panels");
        kleisli = kleisli.max(report.kleisli_roundtrip);
        state = state.max(report.state_roundtrip);
        pred = pred.max(report.predicate_roundtrip);
    }
    rec.record("triangle-kleisli-roundtrip", 1e-9, kleisli);
    rec.record("triangle-state-roundtrip", 1e-9, state);
    rec.record("triangle-predicate-roundtrip", 1e-9, pred);

    let mut rng = mix(seed, 51);
    let mut effect = 0.0f64;
    for dim in 2..=4 {
        let sub_seed = rng.gen::<u64>();
        effect = effect.max(
            effect_roundtrip_residual(dim, 25, sub_seed)
                .expect("trace-induced black boxes pass their panels"),
        );
    }
    rec.record("triangle-effect-roundtrip", 1e-8, effect);

    // Reconstructed objects satisfy their type invariants: rebuild from
    // exact black boxes and re-validate through the public constructors.
    let mut rng = mix(seed, 52);
    let mut failures = 0.0f64;
    for _ in 0..20 {
        let pts = sample::labels(4);
        let f = sample::kleisli(&mut rng, &pts, &pts);
        let fc = f.clone();
        let rebuilt = crate::triangle::emod_hom_to_kleisli(&pts, &pts, move |q| {
            pred_transform(&fc, q).unwrap()
        });
        match rebuilt {
            Ok(k) => {
                for row in k.matrix() {
                    if (row.iter().sum::<f64>() - 1.0).abs() > SUM_TOL {
                        failures += 1.0;
                    }
                }
            }
            Err(_) => failures += 1.0,
        }
        let e = sample::effect(&mut rng, 3);
        let ec = e.clone();
        let g = crate::triangle::AffineStateMapBlackBox::new(3, move |rho| {
            q_validity(rho, &ec).unwrap()
        });
        match crate::triangle::affine_state_map_to_effect(&g) {
            Ok(rebuilt) => {
                if Effect::new(rebuilt.matrix().clone()).is_err() {
                    failures += 1.0;
                }
            }
            Err(_) => failures += 1.0,
        }
    }
    rec.record("triangle-reconstruction-invariants", 0.0, failures);
}
