//! Moment-matrix semidefinite relaxation of the quantum value at level
//! "1+MN" and a self-contained first-order solver.
//!
//! The moment matrix is indexed by the monomials `{1} u {M_x(a)} u {N_y(b)}
//! u {M_x(a) N_y(b)}` acting on the shared state. Projector algebra pins
//! many entries to each other, to marginals, to zero or to one, and the
//! completeness sums `sum_x M_x(a) = 1` tie the last outcome's monomials to
//! the rest. The solver works on the equivalent moment matrix over the
//! independent monomials (last outcome eliminated), where completeness is
//! structural and the remaining constraints are disjoint entry classes: the
//! full matrix is positive semidefinite exactly when the reduced one is,
//! because it is the reduced matrix conjugated by the full-rank expansion
//! map.
//!
//! Solving alternates a PSD projection (full symmetric eigendecomposition by
//! cyclic Jacobi, warm-started across iterations) with the orthogonal
//! projection onto the affine constraint set. The reported value is the
//! objective plus a residual-based safety margin: a valid upper bound on the
//! quantum winning probability up to the reported residuals.

use crate::error::{Error, Result};
use crate::game::GameTable;
use crate::scalar::Scalar;

/// Monomial layout of the full level-"1+MN" moment matrix: the identity,
/// `M_x(a)`, `N_y(b)`, then `M_x(a) N_y(b)`, each block ordered x-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialIndex {
    pub x_size: usize,
    pub a_size: usize,
    pub b_size: usize,
}

impl MonomialIndex {
    pub fn dimension(&self) -> usize {
        1 + self.x_size * self.a_size
            + self.x_size * self.b_size
            + self.x_size * self.x_size * self.a_size * self.b_size
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn alice(&self, x: usize, a: usize) -> usize {
        1 + x * self.a_size + a
    }

    pub fn bob(&self, y: usize, b: usize) -> usize {
        1 + self.x_size * self.a_size + y * self.b_size + b
    }

    pub fn joint(&self, x: usize, a: usize, y: usize, b: usize) -> usize {
        1 + self.x_size * (self.a_size + self.b_size)
            + ((x * self.a_size + a) * self.x_size + y) * self.b_size
            + b
    }
}

/// A single projector factor: outcome and input.
type Factor = (u8, u8);

/// Canonical reduced word of a product of at most two `M` and two `N`
/// factors: `None` marks the zero word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Word {
    m: Vec<Factor>,
    n: Vec<Factor>,
}

fn reduce_factors(mut factors: Vec<Factor>) -> Option<Vec<Factor>> {
    // Adjacent factors with the same input: orthogonal for different
    // outcomes, idempotent otherwise.
    if factors.len() == 2 && factors[0].1 == factors[1].1 {
        if factors[0].0 != factors[1].0 {
            return None;
        }
        factors.pop();
    }
    Some(factors)
}

fn canonical_word(m: Vec<Factor>, n: Vec<Factor>) -> Option<Word> {
    let m = reduce_factors(m)?;
    let n = reduce_factors(n)?;
    // A word and its reversal have the same moment in the real formulation.
    let mut rev_m = m.clone();
    rev_m.reverse();
    let mut rev_n = n.clone();
    rev_n.reverse();
    let forward = Word { m, n };
    let backward = Word { m: rev_m, n: rev_n };
    Some(forward.min(backward))
}

/// The level-"1+MN" moment relaxation of a two-player game.
pub struct MomentSdp {
    pub monomials: MonomialIndex,
    /// Reduced block: monomials over outcomes `0..x_size-1` only.
    reduced: MonomialIndex,
    /// For each reduced-matrix cell: the entry-class id, `ZERO_CELL`, or
    /// `UNIT_CELL`.
    class_of: Vec<u32>,
    class_count: usize,
    class_sizes: Vec<f64>,
    /// Symmetric objective on the reduced block (`<H~, F>` equals the
    /// winning probability `<H, G>` of the full matrix).
    objective: Vec<f64>,
    objective_norm: f64,
}

const ZERO_CELL: u32 = u32::MAX;
const UNIT_CELL: u32 = u32::MAX - 1;

impl MomentSdp {
    /// Dimension of the full moment matrix.
    pub fn dimension(&self) -> usize {
        self.monomials.dimension()
    }

    /// Dimension of the reduced PSD block actually solved.
    pub fn reduced_dimension(&self) -> usize {
        self.reduced.dimension()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn zero_cell_count(&self) -> usize {
        self.class_of.iter().filter(|&&c| c == ZERO_CELL).count()
    }

    fn class_at(&self, row: usize, col: usize) -> u32 {
        self.class_of[row * self.reduced.dimension() + col]
    }

    /// True when the cell for two reduced monomials is pinned to zero
    /// (orthogonal projectors with equal input, different outcome).
    pub fn is_zero_cell(&self, row: usize, col: usize) -> bool {
        self.class_at(row, col) == ZERO_CELL
    }

    /// True when the cell is pinned to one (the identity-identity corner).
    pub fn is_unit_cell(&self, row: usize, col: usize) -> bool {
        self.class_at(row, col) == UNIT_CELL
    }

    /// Sparse text dump of the constraint system and objective, for
    /// cross-checking with external solvers. Lines: `dim <n>`; `unit <i> <j>`;
    /// `zero <i> <j>`; `class <id> <i> <j>` (entries of one class are equal);
    /// `obj <i> <j> <coeff>`.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let rdim = self.reduced.dimension();
        let mut out = String::new();
        let _ = writeln!(out, "dim {rdim}");
        for i in 0..rdim {
            for j in i..rdim {
                match self.class_at(i, j) {
                    UNIT_CELL => {
                        let _ = writeln!(out, "unit {i} {j}");
                    }
                    ZERO_CELL => {
                        let _ = writeln!(out, "zero {i} {j}");
                    }
                    c => {
                        let _ = writeln!(out, "class {c} {i} {j}");
                    }
                }
            }
        }
        for i in 0..rdim {
            for j in i..rdim {
                let h = self.objective[i * rdim + j];
                if h != 0.0 {
                    let sym = if i == j { h } else { 2.0 * h };
                    let _ = writeln!(out, "obj {i} {j} {sym}");
                }
            }
        }
        out
    }
}

/// Build the level-"1+MN" relaxation of a two-player game.
pub fn build_1mn<S: Scalar>(game: &GameTable<S>) -> Result<MomentSdp> {
    if game.num_players() != 2 {
        return Err(Error::Shape(format!(
            "the moment relaxation needs exactly 2 players, game has {}",
            game.num_players()
        )));
    }
    let x_size = game.x_size();
    let a_size = game.input_sizes()[0];
    let b_size = game.input_sizes()[1];
    let monomials = MonomialIndex {
        x_size,
        a_size,
        b_size,
    };
    let reduced = MonomialIndex {
        x_size: x_size - 1,
        a_size,
        b_size,
    };
    let rdim = reduced.dimension();

    // Factor lists of each reduced monomial.
    let mut factors: Vec<(Vec<Factor>, Vec<Factor>)> = Vec::with_capacity(rdim);
    factors.push((Vec::new(), Vec::new()));
    for x in 0..x_size - 1 {
        for a in 0..a_size {
            factors.push((vec![(x as u8, a as u8)], Vec::new()));
        }
    }
    for y in 0..x_size - 1 {
        for b in 0..b_size {
            factors.push((Vec::new(), vec![(y as u8, b as u8)]));
        }
    }
    for x in 0..x_size - 1 {
        for a in 0..a_size {
            for y in 0..x_size - 1 {
                for b in 0..b_size {
                    factors.push((vec![(x as u8, a as u8)], vec![(y as u8, b as u8)]));
                }
            }
        }
    }
    debug_assert_eq!(factors.len(), rdim);

    let mut class_of = vec![0u32; rdim * rdim];
    let mut class_ids: std::collections::HashMap<Word, u32> = std::collections::HashMap::new();
    let mut class_sizes: Vec<f64> = Vec::new();
    for i in 0..rdim {
        for j in 0..rdim {
            // The row monomial is self-adjoint (its M and N parts commute),
            // so the entry's word is row followed by column.
            let m = factors[i]
                .0
                .iter()
                .chain(factors[j].0.iter())
                .copied()
                .collect::<Vec<_>>();
            let n = factors[i]
                .1
                .iter()
                .chain(factors[j].1.iter())
                .copied()
                .collect::<Vec<_>>();
            let cell = i * rdim + j;
            match canonical_word(m, n) {
                None => class_of[cell] = ZERO_CELL,
                Some(w) if w.m.is_empty() && w.n.is_empty() => class_of[cell] = UNIT_CELL,
                Some(w) => {
                    let next = class_sizes.len() as u32;
                    let id = *class_ids.entry(w).or_insert(next);
                    if id == next {
                        class_sizes.push(0.0);
                    }
                    class_sizes[id as usize] += 1.0;
                    class_of[cell] = id;
                }
            }
        }
    }

    // Objective on the reduced block: expand each winning term
    // P(x,a,b) <M_x(a) N_x(b)> through the elimination of the last outcome.
    let mut objective = vec![0.0f64; rdim * rdim];
    let mut add = |i: usize, j: usize, c: f64| {
        objective[i * rdim + j] += 0.5 * c;
        objective[j * rdim + i] += 0.5 * c;
    };
    let last = x_size - 1;
    for (x, inputs, p) in game.entries() {
        let p = p.to_f64();
        if p == 0.0 {
            continue;
        }
        let (a, b) = (inputs[0], inputs[1]);
        if x < last {
            add(reduced.alice(x, a), reduced.bob(x, b), p);
        } else {
            // <M_last N_last> = 1 - sum_x <M_x> - sum_y <N_y> + sum_xy <M_x N_y>.
            add(0, 0, p);
            for x2 in 0..last {
                add(0, reduced.alice(x2, a), -p);
                add(0, reduced.bob(x2, b), -p);
            }
            for x2 in 0..last {
                for y2 in 0..last {
                    add(reduced.alice(x2, a), reduced.bob(y2, b), p);
                }
            }
        }
    }
    let objective_norm = objective.iter().map(|h| h * h).sum::<f64>().sqrt();

    Ok(MomentSdp {
        monomials,
        reduced,
        class_of,
        class_count: class_sizes.len(),
        class_sizes,
        objective,
        objective_norm,
    })
}

/// Outcome of a solve: the certified bound and the solver diagnostics.
#[derive(Debug, Clone)]
pub struct SdpBound {
    /// `objective + margin`: an upper bound on the quantum value up to the
    /// reported residuals.
    pub upper_bound: f64,
    /// Raw objective `<H, G>` at the affine-feasible iterate.
    pub objective: f64,
    /// Residual-based safety margin added to the objective.
    pub margin: f64,
    /// Max-norm violation of `F = Z` at termination, scaled.
    pub primal_residual: f64,
    /// Scaled change of the PSD iterate at termination.
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximize `<H, G>` over the relaxation by two-block operator splitting
/// with fixed step: alternate the affine projection (entry classes, zeros
/// and the unit corner) with the PSD projection (warm-started cyclic
/// Jacobi), with a scaled dual update.
pub fn solve_sdp(sdp: &MomentSdp, tol: f64) -> Result<SdpBound> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    const MAX_ITERATIONS: usize = 100_000;
    let n = sdp.reduced.dimension();
    let cells = n * n;
    let step = 1.0 / sdp.objective_norm.max(1e-12);

    let mut affine = vec![0.0f64; cells]; // F: affine-feasible iterate
    let mut psd = vec![0.0f64; cells]; // Z: PSD iterate
    let mut dual = vec![0.0f64; cells]; // U: scaled dual
    let mut eigen = JacobiWorkspace::new(n);
    let mut scratch = vec![0.0f64; cells];
    let mut class_acc = vec![0.0f64; sdp.class_count];

    // Start from the affine projection of the zero matrix.
    project_affine(sdp, &mut affine, &mut class_acc);

    let mut primal_res = f64::INFINITY;
    let mut dual_res = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;

        // Z-update: project F + U onto the PSD cone.
        scratch.copy_from_slice(&affine);
        for (s, u) in scratch.iter_mut().zip(&dual) {
            *s += u;
        }
        let prev_psd = std::mem::replace(&mut psd, scratch.clone());
        eigen.project_psd(&mut psd);

        // F-update: project Z - U + step * H onto the affine set.
        for i in 0..cells {
            affine[i] = psd[i] - dual[i] + step * sdp.objective[i];
        }
        project_affine(sdp, &mut affine, &mut class_acc);

        // Dual update and residuals.
        let mut gap = 0.0f64;
        for i in 0..cells {
            let d = affine[i] - psd[i];
            dual[i] += d;
            gap += d * d;
        }
        let mut change = 0.0f64;
        for i in 0..cells {
            let d = psd[i] - prev_psd[i];
            change += d * d;
        }
        let scale = 1.0 + frobenius(&affine);
        primal_res = gap.sqrt() / scale;
        dual_res = change.sqrt() / scale;
        if primal_res.max(dual_res) < tol {
            converged = true;
            break;
        }
    }

    let objective: f64 = affine.iter().zip(&sdp.objective).map(|(f, h)| f * h).sum();
    let residual = primal_res.max(dual_res);
    let margin = 20.0 * residual * (1.0 + sdp.objective_norm) * (n as f64).sqrt();
    Ok(SdpBound {
        upper_bound: objective + margin,
        objective,
        margin,
        primal_residual: primal_res,
        dual_residual: dual_res,
        iterations,
        converged,
    })
}

/// Orthogonal projection onto the affine constraint set: average entries
/// within each class, pin zero cells and the unit corner.
fn project_affine(sdp: &MomentSdp, w: &mut [f64], class_acc: &mut [f64]) {
    class_acc.fill(0.0);
    for (cell, &class) in sdp.class_of.iter().enumerate() {
        if class < UNIT_CELL {
            class_acc[class as usize] += w[cell];
        }
    }
    for (acc, size) in class_acc.iter_mut().zip(&sdp.class_sizes) {
        *acc /= size;
    }
    for (cell, &class) in sdp.class_of.iter().enumerate() {
        w[cell] = match class {
            ZERO_CELL => 0.0,
            UNIT_CELL => 1.0,
            c => class_acc[c as usize],
        };
    }
}

fn frobenius(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cyclic Jacobi eigendecomposition with eigenvector warm starting between
/// consecutive projections.
struct JacobiWorkspace {
    n: usize,
    vectors: Vec<f64>,
    warm: bool,
    b: Vec<f64>,
    tmp: Vec<f64>,
}

impl JacobiWorkspace {
    fn new(n: usize) -> Self {
        JacobiWorkspace {
            n,
            vectors: identity(n),
            warm: false,
            b: vec![0.0; n * n],
            tmp: vec![0.0; n * n],
        }
    }

    /// Replace `w` (symmetric, row-major) by its projection onto the PSD
    /// cone.
    fn project_psd(&mut self, w: &mut [f64]) {
        let n = self.n;
        if self.warm {
            // B = V' W V is nearly diagonal when W changed little since the
            // previous call, so the sweeps below terminate quickly.
            matmul_at_b(&self.vectors, w, &mut self.tmp, n);
            matmul(&self.tmp, &self.vectors, &mut self.b, n);
        } else {
            self.b.copy_from_slice(w);
            self.vectors = identity(n);
        }
        jacobi_sweep_loop(&mut self.b, &mut self.vectors, n);
        self.warm = true;

        // W <- V max(diag, 0) V': scale columns of V by the clamped
        // eigenvalues, then multiply by V'.
        for i in 0..n {
            for j in 0..n {
                let lambda = self.b[j * n + j].max(0.0);
                self.tmp[i * n + j] = self.vectors[i * n + j] * lambda;
            }
        }
        matmul_b_at(&self.tmp, &self.vectors, w, n);
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi; returns
/// (eigenvalues, row-major eigenvector matrix with eigenvectors as columns).
/// The reconstruction `V diag(l) V'` matches the input to around `1e-12`
/// times its norm.
pub fn jacobi_eigendecomposition(matrix: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(matrix.len(), n * n);
    let mut b = matrix.to_vec();
    let mut v = identity(n);
    jacobi_sweep_loop(&mut b, &mut v, n);
    ((0..n).map(|i| b[i * n + i]).collect(), v)
}

fn identity(n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    v
}

fn jacobi_sweep_loop(b: &mut [f64], v: &mut [f64], n: usize) {
    const MAX_SWEEPS: usize = 42;
    let scale: f64 = (0..n)
        .map(|i| b[i * n + i].abs())
        .fold(f64::MIN_POSITIVE, f64::max)
        .max(frobenius(b) / n as f64);
    let threshold = 1e-15 * scale;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = b[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                rotated = true;
                let app = b[p * n + p];
                let aqq = b[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rows/columns p and q of B.
                for k in 0..n {
                    let bkp = b[k * n + p];
                    let bkq = b[k * n + q];
                    b[k * n + p] = c * bkp - s * bkq;
                    b[k * n + q] = s * bkp + c * bkq;
                }
                for k in 0..n {
                    let bpk = b[p * n + k];
                    let bqk = b[q * n + k];
                    b[p * n + k] = c * bpk - s * bqk;
                    b[q * n + k] = s * bpk + c * bqk;
                }
                // Accumulate the rotation into V (columns p, q).
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Symmetrize the numerically off-diagonal residue away.
    for p in 0..n {
        for q in 0..n {
            if p != q {
                b[p * n + q] = 0.0;
            }
        }
    }
}

/// `out = a' b` for row-major square matrices.
fn matmul_at_b(a: &[f64], b: &[f64], out: &mut [f64], n: usize) {
    out.fill(0.0);
    for k in 0..n {
        for i in 0..n {
            let aki = a[k * n + i];
            if aki == 0.0 {
                continue;
            }
            let (brow, orow) = (&b[k * n..k * n + n], &mut out[i * n..i * n + n]);
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += aki * bv;
            }
        }
    }
}

/// `out = a b` for row-major square matrices.
fn matmul(a: &[f64], b: &[f64], out: &mut [f64], n: usize) {
    out.fill(0.0);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let (brow, orow) = (&b[k * n..k * n + n], &mut out[i * n..i * n + n]);
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

/// `out = a b'` for row-major square matrices.
fn matmul_b_at(a: &[f64], b: &[f64], out: &mut [f64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            let arow = &a[i * n..i * n + n];
            let brow = &b[j * n..j * n + n];
            for (av, bv) in arow.iter().zip(brow) {
                acc += av * bv;
            }
            out[i * n + j] = acc;
        }
    }
}

/// The rank-one reduced moment matrix of a deterministic strategy, for
/// feasibility tests: entry `(u, v)` is the product of the indicator values
/// of the two monomials under the strategy.
pub fn deterministic_moment_matrix(sdp: &MomentSdp, alice: &[usize], bob: &[usize]) -> Vec<f64> {
    let reduced = sdp.reduced;
    let rdim = reduced.dimension();
    let mut value = vec![0.0f64; rdim];
    value[0] = 1.0;
    for x in 0..reduced.x_size {
        for a in 0..reduced.a_size {
            value[reduced.alice(x, a)] = if alice[a] == x { 1.0 } else { 0.0 };
        }
        for b in 0..reduced.b_size {
            value[reduced.bob(x, b)] = if bob[b] == x { 1.0 } else { 0.0 };
        }
    }
    for x in 0..reduced.x_size {
        for a in 0..reduced.a_size {
            for y in 0..reduced.x_size {
                for b in 0..reduced.b_size {
                    value[reduced.joint(x, a, y, b)] =
                        value[reduced.alice(x, a)] * value[reduced.bob(y, b)];
                }
            }
        }
    }
    let mut f = vec![0.0f64; rdim * rdim];
    for i in 0..rdim {
        for j in 0..rdim {
            f[i * rdim + j] = value[i] * value[j];
        }
    }
    f
}

/// Violation of the entry-class constraints by a candidate reduced matrix:
/// max over classes of the in-class spread, and of the zero/unit pins.
pub fn constraint_violation(sdp: &MomentSdp, f: &[f64]) -> f64 {
    let mut lo = vec![f64::INFINITY; sdp.class_count];
    let mut hi = vec![f64::NEG_INFINITY; sdp.class_count];
    let mut worst = 0.0f64;
    for (cell, &class) in sdp.class_of.iter().enumerate() {
        match class {
            ZERO_CELL => worst = worst.max(f[cell].abs()),
            UNIT_CELL => worst = worst.max((f[cell] - 1.0).abs()),
            c => {
                lo[c as usize] = lo[c as usize].min(f[cell]);
                hi[c as usize] = hi[c as usize].max(f[cell]);
            }
        }
    }
    for (l, h) in lo.iter().zip(&hi) {
        if *h > *l {
            worst = worst.max(h - l);
        }
    }
    worst
}

/// `<H, F>` on the reduced block.
pub fn reduced_objective_value(sdp: &MomentSdp, f: &[f64]) -> f64 {
    f.iter().zip(&sdp.objective).map(|(x, h)| x * h).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::bsc_game;
    use crate::scalar::Rational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn dimensions() {
        let g = bsc_game(rat(1, 5), 2, 1).unwrap();
        let sdp = build_1mn(&g).unwrap();
        assert_eq!(sdp.dimension(), 25);
        assert_eq!(sdp.reduced_dimension(), 9);

        let g = bsc_game(rat(3, 10), 2, 2).unwrap();
        let sdp = build_1mn(&g).unwrap();
        assert_eq!(sdp.dimension(), 289);
        assert_eq!(sdp.reduced_dimension(), 169);

        let g3 = bsc_game(rat(1, 4), 3, 1).unwrap();
        assert!(build_1mn(&g3).is_err());

        // Ternary hidden value: 1 + |X||A| + |X||B| + |X|^2|A||B|.
        let ch = crate::game::Channel::new(
            3,
            3,
            vec![
                rat(1, 2),
                rat(1, 4),
                rat(1, 4),
                rat(1, 4),
                rat(1, 2),
                rat(1, 4),
                rat(1, 4),
                rat(1, 4),
                rat(1, 2),
            ],
        )
        .unwrap();
        let g = crate::game::channel_game(&ch, 2).unwrap();
        let sdp = build_1mn(&g).unwrap();
        assert_eq!(sdp.dimension(), 1 + 9 + 9 + 81);
        assert_eq!(sdp.reduced_dimension(), 1 + 6 + 6 + 36);
    }

    #[test]
    fn unit_and_zero_cells_present() {
        let g = bsc_game(rat(3, 10), 2, 2).unwrap();
        let sdp = build_1mn(&g).unwrap();
        assert!(sdp.is_unit_cell(0, 0));
        // Orthogonality zeros for distinct outcomes at equal inputs: with
        // the last outcome eliminated they appear between joint monomials
        // sharing one side's input.
        let r = sdp.reduced;
        assert!(sdp.is_zero_cell(r.joint(0, 1, 1, 2), r.joint(2, 1, 1, 2)));
        assert!(sdp.zero_cell_count() > 0);
        // Diagonal idempotence: <M M> = <M> ties the diagonal cell to the
        // first row.
        assert_eq!(
            sdp.class_at(r.alice(1, 2), r.alice(1, 2)),
            sdp.class_at(0, r.alice(1, 2))
        );
    }

    #[test]
    fn deterministic_strategies_are_feasible_points() {
        let g = bsc_game(rat(3, 10), 2, 2).unwrap();
        let sdp = build_1mn(&g).unwrap();
        // The two-fold "00 if the input contains a zero" strategy.
        let f = deterministic_moment_matrix(&sdp, &[0, 0, 0, 3], &[0, 0, 0, 3]);
        assert_eq!(constraint_violation(&sdp, &f), 0.0);
        let value = reduced_objective_value(&sdp, &f);
        let expect = crate::classical::eval_deterministic(
            &g,
            &crate::classical::DeterministicStrategy::symmetric(vec![0, 0, 0, 3], 2),
        )
        .unwrap();
        assert!((value - expect.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn jacobi_reconstructs_random_matrices() {
        let mut rng = StdRng::seed_from_u64(5);
        for &n in &[40usize, 289] {
            let mut m = vec![0.0f64; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    m[i * n + j] = v;
                    m[j * n + i] = v;
                }
            }
            let (lambda, v) = jacobi_eigendecomposition(&m, n);
            // Reconstruct V diag(lambda) V' and compare entrywise.
            let mut scaled = vec![0.0f64; n * n];
            for i in 0..n {
                for j in 0..n {
                    scaled[i * n + j] = v[i * n + j] * lambda[j];
                }
            }
            let mut recon = vec![0.0f64; n * n];
            matmul_b_at(&scaled, &v, &mut recon, n);
            let worst = m
                .iter()
                .zip(&recon)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-10, "n={n}: reconstruction error {worst}");
        }
    }

    #[test]
    fn single_bsc_bound_matches_known_value() {
        // alpha = 0.2: classical = quantum = NS = 0.64.
        let g = bsc_game(rat(1, 5), 2, 1).unwrap();
        let sdp = build_1mn(&g).unwrap();
        let bound = solve_sdp(&sdp, 1e-9).unwrap();
        assert!(bound.converged);
        assert!(bound.primal_residual < 1e-6 && bound.dual_residual < 1e-6);
        assert!(
            bound.upper_bound >= 0.64 - 1e-9 && bound.upper_bound <= 0.64 + 1e-4,
            "bound {}",
            bound.upper_bound
        );
    }

    #[test]
    fn tolerance_must_be_positive() {
        let g = bsc_game(rat(1, 5), 2, 1).unwrap();
        let sdp = build_1mn(&g).unwrap();
        assert!(solve_sdp(&sdp, 0.0).is_err());
    }
}
