//! Exact linear programming over rationals.
//!
//! A dense two-phase primal simplex. Pivoting follows Dantzig's rule until
//! progress stalls and then switches to Bland's anti-cycling rule, so every
//! solve terminates. All arithmetic is on [`Rational`]; the returned point
//! is a basic feasible solution (a vertex of the feasible polytope) and is
//! re-verified against every constraint by exact substitution before it is
//! returned.

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Row sense of one linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// `maximize c'x  s.t.  A x {<=,=,>=} d,  x >= lower_bounds` (bounds default
/// to zero).
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<Rational>,
    pub lower_bounds: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; zero unless `status == Optimal`.
    pub optimal_value: Rational,
    /// Primal point attaining the optimum; empty unless `status == Optimal`.
    pub point: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            lower_bounds: vec![Rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars(), "row width mismatch");
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    /// Exact check of `A point {<=,=,>=} d` and the variable bounds.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars() {
            return false;
        }
        if point.iter().zip(&self.lower_bounds).any(|(x, lb)| x < lb) {
            return false;
        }
        self.rows
            .iter()
            .zip(&self.senses)
            .zip(&self.rhs)
            .all(|((row, sense), d)| {
                let lhs: Rational = row
                    .iter()
                    .zip(point)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, x)| c.clone() * x)
                    .sum();
                match sense {
                    Sense::Le => lhs <= *d,
                    Sense::Eq => lhs == *d,
                    Sense::Ge => lhs >= *d,
                }
            })
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c.clone() * x)
            .sum()
    }

    /// Debug dump of the program as text, one row per line.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let term = |c: &Rational, j: usize| format!("{c}*x{j}");
        let _ = writeln!(
            out,
            "max {}",
            self.objective
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| term(c, j))
                .collect::<Vec<_>>()
                .join(" + ")
        );
        for ((row, sense), d) in self.rows.iter().zip(&self.senses).zip(&self.rhs) {
            let lhs = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| term(c, j))
                .collect::<Vec<_>>()
                .join(" + ");
            let op = match sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, "{lhs} {op} {d}");
        }
        out
    }
}

/// Solve `lp` to optimality (maximization).
///
/// Infeasibility and unboundedness are reported as statuses. Panics if the
/// post-solve exact feasibility check fails, since that would mean the pivot
/// arithmetic is broken.
pub fn solve_max(lp: &LinearProgram) -> LpSolution {
    assert!(lp.num_rows() > 0, "LP has no constraints");
    let mut tableau = Tableau::from_lp(lp);
    match tableau.solve() {
        TableauOutcome::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            optimal_value: Rational::zero(),
            point: Vec::new(),
        },
        TableauOutcome::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            optimal_value: Rational::zero(),
            point: Vec::new(),
        },
        TableauOutcome::Optimal => {
            let point = tableau.extract_point(lp);
            assert!(
                lp.is_feasible(&point),
                "post-solve check failed: simplex returned an infeasible point"
            );
            let optimal_value = lp.objective_at(&point);
            LpSolution {
                status: LpStatus::Optimal,
                optimal_value,
                point,
            }
        }
    }
}

enum TableauOutcome {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Number of non-improving pivots after which the pivot rule switches from
/// Dantzig to Bland. Dantzig needs far fewer iterations in practice; Bland
/// guarantees termination on degenerate problems.
const STALL_LIMIT: usize = 40;

/// Dense simplex tableau in standard equality form.
///
/// Columns: the original variables (shifted so their lower bound is zero),
/// then slack/surplus variables, then artificials. `rows[i]` holds the
/// constraint coefficients, `rhs[i] >= 0`, `basis[i]` the basic column of
/// row `i`. The reduced-cost row is maintained incrementally across pivots.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    num_structural: usize,
    first_artificial: usize,
    objective: Vec<Rational>,
    /// Current reduced costs and objective value for the phase being run.
    reduced: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn from_lp(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let m = lp.num_rows();
        let shift_rhs: Vec<Rational> = (0..m)
            .map(|i| {
                // Substitute x = lb + x' with x' >= 0.
                let mut d = lp.rhs[i].clone();
                for (c, lb) in lp.rows[i].iter().zip(&lp.lower_bounds) {
                    if !c.is_zero() && !lb.is_zero() {
                        d -= c.clone() * lb;
                    }
                }
                d
            })
            .collect();

        // One slack/surplus column per inequality row.
        let num_slack = lp.senses.iter().filter(|s| !matches!(s, Sense::Eq)).count();
        let num_structural = n + num_slack;
        let total = num_structural + m; // worst case: one artificial per row

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_col = n;
        let mut artificial_col = num_structural;

        for (i, shifted) in shift_rhs.iter().enumerate() {
            let mut row = vec![Rational::zero(); total];
            let negate = shifted.is_negative();
            for (j, c) in lp.rows[i].iter().enumerate() {
                if !c.is_zero() {
                    row[j] = if negate { -c.clone() } else { c.clone() };
                }
            }
            let d = if negate {
                -shift_rhs[i].clone()
            } else {
                shift_rhs[i].clone()
            };
            let sense = match (lp.senses[i], negate) {
                (Sense::Eq, _) => Sense::Eq,
                (Sense::Le, false) | (Sense::Ge, true) => Sense::Le,
                (Sense::Ge, false) | (Sense::Le, true) => Sense::Ge,
            };
            match sense {
                Sense::Le => {
                    row[slack_col] = Rational::one();
                    if d.is_zero() {
                        // Slack is basic at zero; fine.
                    }
                    basis.push(slack_col);
                    slack_col += 1;
                }
                Sense::Ge => {
                    row[slack_col] = -Rational::one();
                    slack_col += 1;
                    row[artificial_col] = Rational::one();
                    basis.push(artificial_col);
                    artificial_col += 1;
                }
                Sense::Eq => {
                    row[artificial_col] = Rational::one();
                    basis.push(artificial_col);
                    artificial_col += 1;
                }
            }
            rows.push(row);
            rhs.push(d);
        }

        // Shrink rows to the columns actually used.
        let used = artificial_col;
        for row in &mut rows {
            row.truncate(used);
        }

        let mut objective = vec![Rational::zero(); used];
        for (j, c) in lp.objective.iter().enumerate() {
            objective[j] = c.clone();
        }
        let mut is_basic = vec![false; used];
        for &b in &basis {
            is_basic[b] = true;
        }

        Tableau {
            rows,
            rhs,
            basis,
            is_basic,
            num_structural,
            first_artificial: num_structural,
            objective,
            reduced: Vec::new(),
            value: Rational::zero(),
        }
    }

    fn solve(&mut self) -> TableauOutcome {
        let width = self.rows.first().map_or(0, Vec::len);
        if width > self.num_structural {
            // Phase I: maximize -sum(artificials).
            let mut phase1 = vec![Rational::zero(); width];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            self.load_objective(&phase1);
            if let TableauOutcome::Unbounded = self.run_simplex(self.first_artificial) {
                unreachable!("phase I objective is bounded");
            }
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, d)| d.clone())
                .sum();
            if !infeasibility.is_zero() {
                return TableauOutcome::Infeasible;
            }
            self.evict_artificials();
        }
        let objective = self.objective.clone();
        self.load_objective(&objective);
        self.run_simplex(usize::MAX)
    }

    /// Compute the reduced-cost row `c - c_B B^{-1} A` for a fresh objective.
    fn load_objective(&mut self, objective: &[Rational]) {
        let width = self.rows.first().map_or(0, Vec::len);
        let mut reduced: Vec<Rational> = objective[..width].to_vec();
        let mut value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &objective[b];
            if cb.is_zero() {
                continue;
            }
            value += cb.clone() * &self.rhs[i];
            for (r, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *r -= cb.clone() * a;
                }
            }
        }
        self.reduced = reduced;
        self.value = value;
    }

    /// Drive artificial variables out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                debug_assert!(self.rhs[i].is_zero());
                if let Some(col) = (0..self.num_structural)
                    .find(|&c| !self.rows[i][c].is_zero() && !self.is_basic[c])
                {
                    self.pivot(i, col);
                } else {
                    self.is_basic[self.basis[i]] = false;
                    self.rows.swap_remove(i);
                    self.rhs.swap_remove(i);
                    self.basis.swap_remove(i);
                    continue;
                }
            }
            i += 1;
        }
        // Artificial columns are dead from here on.
        for row in &mut self.rows {
            row.truncate(self.first_artificial);
        }
    }

    /// Primal simplex on the loaded objective (maximization). Columns at
    /// `forbidden_from` or later may not enter the basis. Pivots by Dantzig's
    /// rule until progress stalls, then by Bland's rule, which cannot cycle.
    fn run_simplex(&mut self, forbidden_from: usize) -> TableauOutcome {
        let width = self.rows.first().map_or(0, Vec::len);
        let mut stall = 0usize;
        loop {
            let enter = if stall < STALL_LIMIT {
                // Dantzig: most positive reduced cost.
                let mut best: Option<usize> = None;
                for j in 0..width.min(forbidden_from) {
                    if self.is_basic[j] || !self.reduced[j].is_positive() {
                        continue;
                    }
                    best = match best {
                        Some(b) if self.reduced[b] >= self.reduced[j] => Some(b),
                        _ => Some(j),
                    };
                }
                best
            } else {
                // Bland: smallest index with positive reduced cost.
                (0..width.min(forbidden_from))
                    .find(|&j| !self.is_basic[j] && self.reduced[j].is_positive())
            };
            let Some(enter) = enter else {
                return TableauOutcome::Optimal;
            };
            // Ratio test; ties broken by smallest basic variable index (Bland).
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if a.is_positive() {
                    let ratio = self.rhs[i].clone() / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((leave_row, step)) = leave else {
                return TableauOutcome::Unbounded;
            };
            if step.is_zero() {
                stall += 1;
            } else {
                stall = 0;
            }
            self.pivot(leave_row, enter);
        }
    }

    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let pivot = self.rows[pivot_row][pivot_col].clone();
        debug_assert!(!pivot.is_zero());
        let inv = pivot.recip();
        if !inv.is_one() {
            for a in self.rows[pivot_row].iter_mut() {
                if !a.is_zero() {
                    *a *= &inv;
                }
            }
            self.rhs[pivot_row] *= &inv;
        }

        let pr = std::mem::take(&mut self.rows[pivot_row]);
        let prhs = self.rhs[pivot_row].clone();
        for i in 0..self.rows.len() {
            if i == pivot_row {
                continue;
            }
            let factor = self.rows[i][pivot_col].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, p) in self.rows[i].iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *a -= factor.clone() * p;
                }
            }
            self.rhs[i] -= factor * &prhs;
        }
        // Keep the reduced-cost row in lockstep.
        let factor = self.reduced[pivot_col].clone();
        if !factor.is_zero() {
            for (r, p) in self.reduced.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *r -= factor.clone() * p;
                }
            }
            self.value += factor * &prhs;
        }
        self.rows[pivot_row] = pr;
        self.is_basic[self.basis[pivot_row]] = false;
        self.is_basic[pivot_col] = true;
        self.basis[pivot_row] = pivot_col;
    }

    fn extract_point(&self, lp: &LinearProgram) -> Vec<Rational> {
        let mut point = lp.lower_bounds.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars() {
                point[b] += &self.rhs[i];
            }
        }
        point
    }
}

/// Dual of a maximization LP, as a maximization LP over split-sign dual
/// variables. Used by tests to assert exact strong duality.
pub fn dual_of(lp: &LinearProgram) -> LinearProgram {
    assert!(
        lp.lower_bounds.iter().all(|lb| lb.is_zero()),
        "dual_of expects zero lower bounds"
    );
    let m = lp.num_rows();
    // Dual: minimize d'y s.t. A'y >= c, with y_i >= 0 (Le), free (Eq, split
    // into y+ - y-), <= 0 (Ge, negated). Expressed as max of -d'y.
    let mut dual = LinearProgram::new(2 * m);
    for (i, sense) in lp.senses.iter().enumerate() {
        let d = &lp.rhs[i];
        match sense {
            Sense::Le => {
                dual.objective[2 * i] = -d.clone();
            }
            Sense::Ge => {
                dual.objective[2 * i] = d.clone();
            }
            Sense::Eq => {
                dual.objective[2 * i] = -d.clone();
                dual.objective[2 * i + 1] = d.clone();
            }
        }
    }
    for j in 0..lp.num_vars() {
        let mut row = vec![Rational::zero(); 2 * m];
        for i in 0..m {
            let a = &lp.rows[i][j];
            if a.is_zero() {
                continue;
            }
            match lp.senses[i] {
                Sense::Le => row[2 * i] = a.clone(),
                Sense::Ge => row[2 * i] = -a.clone(),
                Sense::Eq => {
                    row[2 * i] = a.clone();
                    row[2 * i + 1] = -a.clone();
                }
            }
        }
        dual.push_row(row, Sense::Ge, lp.objective[j].clone());
    }
    dual
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn single_variable_box() {
        let mut lp = LinearProgram::new(1);
        lp.objective[0] = rat(1, 1);
        lp.push_row(vec![rat(1, 1)], Sense::Le, rat(3, 1));
        let sol = solve_max(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.optimal_value, rat(3, 1));
        assert_eq!(sol.point, vec![rat(3, 1)]);
    }

    #[test]
    fn equality_simplex_face() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![rat(1, 1), rat(1, 1)];
        lp.push_row(vec![rat(1, 1), rat(1, 1)], Sense::Eq, rat(1, 1));
        let sol = solve_max(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.optimal_value, rat(1, 1));
    }

    #[test]
    fn infeasible_and_unbounded_are_statuses() {
        let mut lp = LinearProgram::new(1);
        lp.objective[0] = rat(1, 1);
        lp.push_row(vec![rat(1, 1)], Sense::Le, rat(-1, 1));
        assert_eq!(solve_max(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = vec![rat(1, 1), rat(0, 1)];
        lp.push_row(vec![rat(0, 1), rat(1, 1)], Sense::Le, rat(1, 1));
        assert_eq!(solve_max(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![rat(2, 1), rat(3, 1)];
        lp.push_row(vec![rat(1, 1), rat(1, 1)], Sense::Eq, rat(1, 1));
        lp.push_row(vec![rat(2, 1), rat(2, 1)], Sense::Eq, rat(2, 1));
        lp.push_row(vec![rat(3, 1), rat(3, 1)], Sense::Eq, rat(3, 1));
        let sol = solve_max(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.optimal_value, rat(3, 1));
    }

    #[test]
    fn lower_bounds_shift() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![rat(-1, 1), rat(1, 1)];
        lp.lower_bounds = vec![rat(1, 2), rat(0, 1)];
        lp.push_row(vec![rat(1, 1), rat(1, 1)], Sense::Le, rat(2, 1));
        let sol = solve_max(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        // x = 1/2 (its lower bound), y = 3/2.
        assert_eq!(sol.point, vec![rat(1, 2), rat(3, 2)]);
        assert_eq!(sol.optimal_value, rat(1, 1));
    }

    #[test]
    fn strong_duality_on_samples() {
        let mut lps = Vec::new();

        let mut lp = LinearProgram::new(2);
        lp.objective = vec![rat(3, 1), rat(5, 1)];
        lp.push_row(vec![rat(1, 1), rat(0, 1)], Sense::Le, rat(4, 1));
        lp.push_row(vec![rat(0, 1), rat(2, 1)], Sense::Le, rat(12, 1));
        lp.push_row(vec![rat(3, 1), rat(2, 1)], Sense::Le, rat(18, 1));
        lps.push(lp);

        let mut lp = LinearProgram::new(3);
        lp.objective = vec![rat(1, 1), rat(2, 1), rat(-1, 3)];
        lp.push_row(vec![rat(1, 1), rat(1, 1), rat(1, 1)], Sense::Eq, rat(1, 1));
        lp.push_row(
            vec![rat(1, 1), rat(-1, 1), rat(0, 1)],
            Sense::Ge,
            rat(-1, 2),
        );
        lps.push(lp);

        for lp in &lps {
            let primal = solve_max(lp);
            assert_eq!(primal.status, LpStatus::Optimal);
            let dual = solve_max(&dual_of(lp));
            assert_eq!(dual.status, LpStatus::Optimal);
            // max c'x = -(max -d'y) exactly.
            assert_eq!(primal.optimal_value, -dual.optimal_value);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Degenerate random LPs terminate (Bland) and the returned point is
        /// exactly feasible; feasibility of the all-zero point is preserved.
        #[test]
        fn random_degenerate_lps_terminate(
            n in 1usize..=30,
            m in 1usize..=18,
            seed_rows in proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 30), 18),
            obj in proptest::collection::vec(-4i64..=4, 30),
            rhs_zero in proptest::collection::vec(proptest::bool::ANY, 18),
        ) {
            let mut lp = LinearProgram::new(n);
            for (c, &o) in lp.objective.iter_mut().zip(&obj) {
                *c = rat(o, 1);
            }
            for i in 0..m {
                let row: Vec<Rational> = (0..n).map(|j| rat(seed_rows[i][j], 1)).collect();
                // Many zero right-hand sides force degenerate vertices.
                let d = if rhs_zero[i] { rat(0, 1) } else { rat(1, 1) };
                lp.push_row(row, Sense::Le, d);
            }
            // x <= 1 keeps everything bounded.
            for j in 0..n {
                let mut row = vec![rat(0, 1); n];
                row[j] = rat(1, 1);
                lp.push_row(row, Sense::Le, rat(1, 1));
            }
            let sol = solve_max(&lp);
            prop_assert_eq!(sol.status, LpStatus::Optimal);
            prop_assert!(lp.is_feasible(&sol.point));
        }
    }
}
