//! Exact solver for the finite transportation problem, producing the
//! optimal coupling together with the dual potentials that certify it.
//!
//! The algorithm is the transportation simplex (MODI): northwest-corner
//! initialization, potentials from the basis tree, Bland-style
//! smallest-index entering rule, and leaving-cell selection by smallest
//! index among the minimizers. Supplies are perturbed by `ε_i = i·1e-12`
//! (with the total added to the last demand to keep the problem
//! balanced) so that no basis is degenerate and no pivot cycles.
//!
//! A brute-force oracle enumerates the spanning-tree bases of the
//! bipartite supply/demand graph for small instances.

use thiserror::Error;

use crate::tol::SUM_TOL;

/// Strictly negative reduced costs below this enter the basis; smaller
/// magnitudes are treated as optimal rounding noise.
const REDUCED_COST_TOL: f64 = 1e-11;

const PERTURBATION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("infeasible transportation problem: {0}")]
    Infeasible(String),
    #[error("pivot cap reached ({0} iterations)")]
    DegeneracyLimit(usize),
    #[error("problem too large for brute force ({0} cells, max {1})")]
    TooLarge(usize, usize),
}

/// A balanced transportation problem over probability marginals: an
/// `m×n` nonnegative cost matrix, a supply vector and a demand vector
/// each summing to 1 within [`SUM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    cost: Vec<Vec<f64>>,
    supply: Vec<f64>,
    demand: Vec<f64>,
}

impl TransportProblem {
    pub fn new(
        cost: Vec<Vec<f64>>,
        supply: Vec<f64>,
        demand: Vec<f64>,
    ) -> Result<Self, TransportError> {
        let m = supply.len();
        let n = demand.len();
        if m == 0 || n == 0 || cost.len() != m || cost.iter().any(|r| r.len() != n) {
            return Err(TransportError::Infeasible(
                "cost matrix shape does not match supply/demand".into(),
            ));
        }
        if cost.iter().flatten().any(|c| *c < 0.0 || !c.is_finite()) {
            return Err(TransportError::Infeasible(
                "cost entries must be finite and nonnegative".into(),
            ));
        }
        for (name, v) in [("supply", &supply), ("demand", &demand)] {
            if v.iter().any(|x| *x < 0.0) {
                return Err(TransportError::Infeasible(format!("negative {name} entry")));
            }
            let s: f64 = v.iter().sum();
            if (s - 1.0).abs() > SUM_TOL {
                return Err(TransportError::Infeasible(format!(
                    "{name} sums to {s}, not 1"
                )));
            }
        }
        Ok(TransportProblem {
            cost,
            supply,
            demand,
        })
    }

    pub fn cost(&self) -> &[Vec<f64>] {
        &self.cost
    }

    pub fn supply(&self) -> &[f64] {
        &self.supply
    }

    pub fn demand(&self) -> &[f64] {
        &self.demand
    }
}

/// An optimal coupling with its certificate.
///
/// Invariants: row sums reproduce the supply and column sums the demand
/// (within [`SUM_TOL`]); `value = Σ cost·plan`; the potentials are dual
/// feasible (`u_i + v_j ≤ cost_ij` up to rounding) and complementary
/// (`plan_ij > 0 ⇒ u_i + v_j = cost_ij`).
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub plan: Vec<Vec<f64>>,
    pub value: f64,
    pub row_potentials: Vec<f64>,
    pub col_potentials: Vec<f64>,
}

struct Tableau {
    m: usize,
    n: usize,
    flow: Vec<Vec<f64>>,
    basis: Vec<(usize, usize)>,
}

impl Tableau {
    /// Northwest-corner start: walks from (0,0) to (m-1,n-1) allocating
    /// the feasible min at each step, yielding exactly m+n-1 basic cells.
    fn northwest(supply: &[f64], demand: &[f64]) -> Tableau {
        let m = supply.len();
        let n = demand.len();
        let mut s = supply.to_vec();
        let mut d = demand.to_vec();
        let mut flow = vec![vec![0.0; n]; m];
        let mut basis = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let a = s[i].min(d[j]).max(0.0);
            flow[i][j] = a;
            s[i] -= a;
            d[j] -= a;
            basis.push((i, j));
            if i == m - 1 && j == n - 1 {
                break;
            }
            if i == m - 1 {
                j += 1;
            } else if j == n - 1 || s[i] <= d[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Tableau { m, n, flow, basis }
    }

    /// Solves u_i + v_j = c_ij over the basis tree, rooted at u_0 = 0.
    fn potentials(&self, cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let mut u = vec![f64::NAN; self.m];
        let mut v = vec![f64::NAN; self.n];
        u[0] = 0.0;
        // The basis is a spanning tree, so repeated sweeps settle every
        // node; each sweep fixes at least one new potential.
        let mut remaining = self.m + self.n - 1;
        while remaining > 0 {
            let mut progressed = false;
            for &(i, j) in &self.basis {
                match (u[i].is_nan(), v[j].is_nan()) {
                    (false, true) => {
                        v[j] = cost[i][j] - u[i];
                        remaining -= 1;
                        progressed = true;
                    }
                    (true, false) => {
                        u[i] = cost[i][j] - v[j];
                        remaining -= 1;
                        progressed = true;
                    }
                    _ => {}
                }
            }
            if !progressed {
                // Disconnected basis cannot happen with a tree invariant;
                // bail out rather than loop.
                break;
            }
        }
        (u, v)
    }

    /// The unique cycle created by adding `entering` to the basis tree,
    /// as an alternating cell sequence starting at the entering cell.
    fn cycle(&self, entering: (usize, usize)) -> Vec<(usize, usize)> {
        // Nodes: rows 0..m, cols m..m+n. Find the tree path from the
        // entering row to the entering column.
        let nodes = self.m + self.n;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes]; // (neighbor, basis idx)
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            adj[i].push((self.m + j, k));
            adj[self.m + j].push((i, k));
        }
        let start = entering.0;
        let goal = self.m + entering.1;
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes]; // (node, basis idx)
        let mut stack = vec![start];
        let mut seen = vec![false; nodes];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            if x == goal {
                break;
            }
            for &(y, k) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, k));
                    stack.push(y);
                }
            }
        }
        let mut path_cells = Vec::new();
        let mut node = goal;
        while node != start {
            let (p, k) = prev[node].expect("basis must span the entering cell's row and column");
            path_cells.push(self.basis[k]);
            node = p;
        }
        // path_cells now runs from the entering column back to the
        // entering row; prepending the entering cell makes the flows
        // alternate +θ, −θ, +θ, … along the sequence.
        let mut cycle = vec![entering];
        cycle.extend(path_cells);
        cycle
    }
}

/// Solves the transportation problem to optimality. Deterministic: a
/// fixed input yields a bitwise-identical plan.
pub fn solve_transport(prob: &TransportProblem) -> Result<TransportPlan, TransportError> {
    let m = prob.supply.len();
    let n = prob.demand.len();

    // Classical ε-perturbation keeps every basis nondegenerate; the
    // total is added to the last demand so the problem stays balanced.
    let mut supply = prob.supply.clone();
    let mut demand = prob.demand.clone();
    let mut eps_total = 0.0;
    for (i, s) in supply.iter_mut().enumerate() {
        *s += i as f64 * PERTURBATION;
        eps_total += i as f64 * PERTURBATION;
    }
    demand[n - 1] += eps_total;
    // Absorb any residual input imbalance (≤ 2·SUM_TOL) as well, so the
    // northwest walk allocates everything.
    let imbalance: f64 = supply.iter().sum::<f64>() - demand.iter().sum::<f64>();
    demand[n - 1] += imbalance;

    let mut t = Tableau::northwest(&supply, &demand);
    let cap = 50 * m * n;
    for _ in 0..=cap {
        let (u, v) = t.potentials(&prob.cost);
        if u.iter().chain(v.iter()).any(|x| x.is_nan()) {
            return Err(TransportError::Infeasible(
                "basis lost spanning-tree connectivity".into(),
            ));
        }

        // Bland-style entering rule: first cell in row-major order with
        // a clearly negative reduced cost.
        let mut entering = None;
        'scan: for i in 0..m {
            for j in 0..n {
                let reduced = prob.cost[i][j] - u[i] - v[j];
                if reduced < -REDUCED_COST_TOL {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some(entering) = entering else {
            let value: f64 = t
                .flow
                .iter()
                .zip(&prob.cost)
                .flat_map(|(fr, cr)| fr.iter().zip(cr).map(|(f, c)| f * c))
                .sum();
            return Ok(TransportPlan {
                plan: t.flow,
                value,
                row_potentials: u,
                col_potentials: v,
            });
        };

        let cycle = t.cycle(entering);
        // Cells at odd positions lose θ; pick the tightest, breaking
        // ties by smallest (i,j).
        let mut theta = f64::INFINITY;
        let mut leaving = None;
        for (pos, &(i, j)) in cycle.iter().enumerate() {
            if pos % 2 == 1 {
                let f = t.flow[i][j];
                if f < theta || (f == theta && leaving.is_none_or(|l| (i, j) < l)) {
                    theta = f;
                    leaving = Some((i, j));
                }
            }
        }
        let leaving = leaving.ok_or_else(|| {
            TransportError::Infeasible("pivot cycle without a leaving cell".into())
        })?;
        for (pos, &(i, j)) in cycle.iter().enumerate() {
            if pos % 2 == 0 {
                t.flow[i][j] += theta;
            } else {
                t.flow[i][j] -= theta;
            }
        }
        t.flow[leaving.0][leaving.1] = 0.0;
        let k = t
            .basis
            .iter()
            .position(|&c| c == leaving)
            .expect("leaving cell is basic");
        t.basis[k] = entering;
    }
    Err(TransportError::DegeneracyLimit(cap))
}

/// Exact optimum by enumerating the spanning-tree bases of the bipartite
/// graph. Test oracle; limited to `m·n ≤ 12`.
pub fn brute_force_transport(prob: &TransportProblem) -> Result<f64, TransportError> {
    let m = prob.supply.len();
    let n = prob.demand.len();
    let cells = m * n;
    if cells > 12 {
        return Err(TransportError::TooLarge(cells, 12));
    }
    let k = m + n - 1;
    let all: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let edges: Vec<(usize, usize)> = pick.iter().map(|&e| all[e]).collect();
        if let Some(cost) = tree_vertex_cost(&edges, prob, m, n) {
            best = Some(best.map_or(cost, |b: f64| b.min(cost)));
        }
        // Next k-combination of cell indices.
        let mut idx = k;
        loop {
            if idx == 0 {
                match best {
                    Some(v) => return Ok(v),
                    None => {
                        return Err(TransportError::Infeasible(
                            "no feasible basic solution".into(),
                        ))
                    }
                }
            }
            idx -= 1;
            if pick[idx] != cells - (k - idx) {
                pick[idx] += 1;
                for t in idx + 1..k {
                    pick[t] = pick[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Solves the flows on a candidate basis by stripping leaves; returns
/// the plan cost when the edge set is a spanning tree with nonnegative
/// flows, `None` otherwise.
fn tree_vertex_cost(
    edges: &[(usize, usize)],
    prob: &TransportProblem,
    m: usize,
    n: usize,
) -> Option<f64> {
    let nodes = m + n;
    let mut degree = vec![0usize; nodes];
    for &(i, j) in edges {
        degree[i] += 1;
        degree[m + j] += 1;
    }
    // m+n-1 edges form a spanning tree iff the graph is connected iff
    // leaf-stripping consumes every edge.
    let mut balance: Vec<f64> = prob
        .supply
        .iter()
        .copied()
        .chain(prob.demand.iter().copied())
        .collect();
    let mut alive: Vec<bool> = vec![true; edges.len()];
    let mut flows = vec![0.0f64; edges.len()];
    for _ in 0..edges.len() {
        let (e, leaf) = edges.iter().enumerate().find_map(|(e, &(i, j))| {
            if !alive[e] {
                return None;
            }
            if degree[i] == 1 {
                Some((e, i))
            } else if degree[m + j] == 1 {
                Some((e, m + j))
            } else {
                None
            }
        })?;
        let (i, j) = edges[e];
        let other = if leaf == i { m + j } else { i };
        flows[e] = balance[leaf];
        balance[other] -= balance[leaf];
        balance[leaf] = 0.0;
        degree[leaf] -= 1;
        degree[other] -= 1;
        alive[e] = false;
    }
    if flows.iter().any(|f| *f < -1e-12) {
        return None;
    }
    Some(
        edges
            .iter()
            .zip(&flows)
            .map(|(&(i, j), f)| prob.cost[i][j] * f.max(0.0))
            .sum(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::DUAL_TOL;

    fn check_certificate(prob: &TransportProblem, plan: &TransportPlan) {
        let m = prob.supply().len();
        let n = prob.demand().len();
        for i in 0..m {
            let row: f64 = plan.plan[i].iter().sum();
            assert!(
                (row - prob.supply()[i]).abs() <= SUM_TOL,
                "row {i} sum {row}"
            );
        }
        for j in 0..n {
            let col: f64 = (0..m).map(|i| plan.plan[i][j]).sum();
            assert!(
                (col - prob.demand()[j]).abs() <= SUM_TOL,
                "col {j} sum {col}"
            );
        }
        for i in 0..m {
            for j in 0..n {
                let u = plan.row_potentials[i] + plan.col_potentials[j];
                assert!(
                    u <= prob.cost()[i][j] + DUAL_TOL,
                    "dual infeasible at ({i},{j})"
                );
                if plan.plan[i][j] > SUM_TOL {
                    assert!(
                        (u - prob.cost()[i][j]).abs() <= DUAL_TOL,
                        "complementary slackness fails at ({i},{j})"
                    );
                }
            }
        }
        // Strong duality.
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
        assert!(
            (dual - plan.value).abs() <= DUAL_TOL,
            "duality gap {dual} vs {}",
            plan.value
        );
    }

    #[test]
    fn zero_diagonal_costs_nothing() {
        let prob = TransportProblem::new(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
            vec![0.5, 0.5],
        )
        .unwrap();
        let plan = solve_transport(&prob).unwrap();
        assert!(plan.value.abs() < 1e-10);
        check_certificate(&prob, &plan);
    }

    #[test]
    fn one_by_one_problem() {
        let prob = TransportProblem::new(vec![vec![0.7]], vec![1.0], vec![1.0]).unwrap();
        let plan = solve_transport(&prob).unwrap();
        assert!((plan.plan[0][0] - 1.0).abs() < 1e-9);
        assert!((plan.value - 0.7).abs() < 1e-12);
        check_certificate(&prob, &plan);
    }

    #[test]
    fn forced_plan_costs_a_quarter() {
        // Supplies (½,½), demand all on the first column: both vertex
        // plans coincide and route the second row at cost 0.5.
        let prob = TransportProblem::new(
            vec![vec![0.0, 0.9], vec![0.5, 0.9]],
            vec![0.5, 0.5],
            vec![1.0, 0.0],
        )
        .unwrap();
        let plan = solve_transport(&prob).unwrap();
        assert!((plan.value - 0.25).abs() < 1e-10);
        check_certificate(&prob, &plan);
    }

    #[test]
    fn brute_force_trivia() {
        let zero = TransportProblem::new(
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            vec![0.5, 0.5],
            vec![0.25, 0.75],
        )
        .unwrap();
        assert_eq!(brute_force_transport(&zero).unwrap(), 0.0);

        // Discrete-metric cost with point masses at distinct labels.
        let prob = TransportProblem::new(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        )
        .unwrap();
        assert!((brute_force_transport(&prob).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_rejects_large_instances() {
        let prob =
            TransportProblem::new(vec![vec![0.0; 5]; 4], vec![0.25; 4], vec![0.2; 5]).unwrap();
        assert!(matches!(
            brute_force_transport(&prob).unwrap_err(),
            TransportError::TooLarge(20, 12)
        ));
    }

    #[test]
    fn simplex_matches_brute_force_on_random_instances() {
        // Deterministic LCG; the verify suite covers seeded batches.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..200 {
            let cost: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| next()).collect()).collect();
            let raw: Vec<f64> = (0..3).map(|_| next() + 1e-3).collect();
            let s: f64 = raw.iter().sum();
            let supply: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let raw: Vec<f64> = (0..3).map(|_| next() + 1e-3).collect();
            let s: f64 = raw.iter().sum();
            let demand: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let prob = TransportProblem::new(cost, supply, demand).unwrap();
            let plan = solve_transport(&prob).unwrap();
            let oracle = brute_force_transport(&prob).unwrap();
            assert!(
                (plan.value - oracle).abs() < 1e-9,
                "simplex {} vs oracle {}",
                plan.value,
                oracle
            );
            check_certificate(&prob, &plan);
        }
    }

    #[test]
    fn deterministic_plans() {
        let prob = TransportProblem::new(
            vec![vec![0.3, 0.8, 0.1], vec![0.2, 0.4, 0.9]],
            vec![0.6, 0.4],
            vec![0.2, 0.3, 0.5],
        )
        .unwrap();
        let a = solve_transport(&prob).unwrap();
        let b = solve_transport(&prob).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_unbalanced_input() {
        let e = TransportProblem::new(vec![vec![0.0]], vec![0.9], vec![1.0]).unwrap_err();
        assert!(matches!(e, TransportError::Infeasible(_)));
    }
}
