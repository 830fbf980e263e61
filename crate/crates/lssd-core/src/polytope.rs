//! Exact vertex enumeration of no-signalling polytopes (double description
//! method) and the three-party binary gap analysis.
//!
//! The enumeration reduces the equality system to an affine parametrization,
//! homogenizes the remaining inequalities to a pointed cone over the
//! integers, and runs Motzkin's double description: constraints are inserted
//! in their given order and extreme rays are maintained as primitive integer
//! vectors. Every returned vertex is re-verified against the original
//! constraint system by exact substitution.

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::GameTable;
use crate::linalg;
use crate::lp::{self, LinearProgram, LpStatus, Sense};
use crate::nosig::{ns_constraints, Behavior, BehaviorShape};
use crate::scalar::Rational;

/// Half-space representation: inequality rows `a x <= d` and equality rows
/// `a x = d`.
#[derive(Debug, Clone, Default)]
pub struct HRep {
    pub dim: usize,
    pub ineq: Vec<(Vec<Rational>, Rational)>,
    pub eq: Vec<(Vec<Rational>, Rational)>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep {
            dim,
            ineq: Vec::new(),
            eq: Vec::new(),
        }
    }

    pub fn push_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.dim);
        self.ineq.push((coeffs, rhs));
    }

    pub fn push_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.dim);
        self.eq.push((coeffs, rhs));
    }

    /// Exact satisfaction check of all rows at `point`.
    pub fn contains(&self, point: &[Rational]) -> bool {
        let dot = |row: &[Rational]| -> Rational {
            row.iter()
                .zip(point)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, x)| c.clone() * x)
                .sum()
        };
        self.ineq.iter().all(|(row, d)| dot(row) <= *d)
            && self.eq.iter().all(|(row, d)| dot(row) == *d)
    }
}

/// Vertex representation: the polytope's extreme points. No rays; the
/// enumeration rejects unbounded inputs.
#[derive(Debug, Clone, Default)]
pub struct VRep {
    pub vertices: Vec<Vec<Rational>>,
}

/// How candidate ray pairs are certified adjacent during double description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyTest {
    /// Rank of the shared tight constraint set, computed exactly (integer
    /// fraction-free elimination).
    Rank,
    /// Combinatorial witness search: a pair is adjacent unless some third
    /// ray is tight on the pair's shared constraint set.
    Combinatorial,
}

/// Enumerate all vertices with the rank-based adjacency test.
pub fn enumerate_vertices(h: &HRep) -> Result<VRep> {
    enumerate_vertices_with(h, AdjacencyTest::Rank)
}

pub fn enumerate_vertices_with(h: &HRep, adjacency: AdjacencyTest) -> Result<VRep> {
    // Affine reduction of the equality rows.
    let (origin, basis) = if h.eq.is_empty() {
        let mut basis = Vec::new();
        for i in 0..h.dim {
            let mut e = vec![Rational::zero(); h.dim];
            e[i] = Rational::one();
            basis.push(e);
        }
        (vec![Rational::zero(); h.dim], basis)
    } else {
        let rows: Vec<Vec<Rational>> = h.eq.iter().map(|(r, _)| r.clone()).collect();
        let rhs: Vec<Rational> = h.eq.iter().map(|(_, d)| d.clone()).collect();
        match linalg::affine_solution_and_nullspace(&rows, &rhs) {
            Some(sol) => sol,
            None => return Ok(VRep::default()), // inconsistent equalities: empty
        }
    };
    let t_dim = basis.len();

    if t_dim == 0 {
        // Unique candidate point.
        if h.contains(&origin) {
            return Ok(VRep {
                vertices: vec![origin],
            });
        }
        return Ok(VRep::default());
    }

    // Inequalities in t-coordinates: (a N) t <= d - a q0, made integral.
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(h.ineq.len() + 1);
    for (a, d) in &h.ineq {
        let mut row: Vec<Rational> = (0..t_dim)
            .map(|j| {
                a.iter()
                    .zip(&basis[j])
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, n)| c.clone() * n)
                    .sum()
            })
            .collect();
        let shifted: Rational = d.clone()
            - a.iter()
                .zip(&origin)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, x)| c.clone() * x)
                .sum::<Rational>();
        // Homogenized row (a N | -rhs), scaled to integers.
        row.push(-shifted);
        rows.push(integerize(&row)?);
    }
    // s >= 0.
    let mut s_row = vec![0i128; t_dim + 1];
    s_row[t_dim] = -1;
    rows.push(s_row);

    let cone = DoubleDescription::run(&rows, t_dim + 1, adjacency)?;

    // Back to polytope coordinates.
    let mut vertices = Vec::with_capacity(cone.len());
    for ray in cone {
        let s = ray[t_dim];
        if s <= 0 {
            return Err(Error::Unbounded(
                "extreme ray with zero scale: the polyhedron has a recession direction".into(),
            ));
        }
        let s = Rational::from_integer(s.into());
        let mut point = origin.clone();
        for (j, &tj) in ray[..t_dim].iter().enumerate() {
            if tj == 0 {
                continue;
            }
            let t = Rational::from_integer(tj.into()) / &s;
            for (p, n) in point.iter_mut().zip(&basis[j]) {
                if !n.is_zero() {
                    *p += t.clone() * n;
                }
            }
        }
        debug_assert!(h.contains(&point));
        vertices.push(point);
    }

    // Re-verify against the original system and sort canonically.
    for v in &vertices {
        if !h.contains(v) {
            return Err(Error::Unbounded(
                "enumerated point violates the input system".into(),
            ));
        }
    }
    vertices.sort();
    vertices.dedup();
    Ok(VRep { vertices })
}

/// Scale a rational row to a primitive integer vector.
fn integerize(row: &[Rational]) -> Result<Vec<i128>> {
    let mut scale = num_bigint::BigInt::one();
    for c in row {
        scale = scale.lcm(c.denom());
    }
    let mut out = Vec::with_capacity(row.len());
    let mut gcd = num_bigint::BigInt::zero();
    let mut ints = Vec::with_capacity(row.len());
    for c in row {
        let v = (c.clone() * Rational::from_integer(scale.clone())).to_integer();
        gcd = gcd.gcd(&v);
        ints.push(v);
    }
    if gcd.is_zero() {
        gcd = num_bigint::BigInt::one();
    }
    for v in ints {
        let reduced = v / &gcd;
        out.push(i128::try_from(&reduced).map_err(|_| {
            Error::Domain("constraint coefficients exceed 128-bit integers".into())
        })?);
    }
    Ok(out)
}

/// Bitset over constraint indices (capacity 256).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Mask([u64; 4]);

impl Mask {
    const CAPACITY: usize = 256;

    fn empty() -> Self {
        Mask([0; 4])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Mask) -> Mask {
        Mask([
            self.0[0] & other.0[0],
            self.0[1] & other.0[1],
            self.0[2] & other.0[2],
            self.0[3] & other.0[3],
        ])
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn bits(&self, limit: usize) -> impl Iterator<Item = usize> + '_ {
        (0..limit).filter(move |&i| self.0[i / 64] >> (i % 64) & 1 == 1)
    }
}

struct Ray {
    coords: Vec<i128>,
    tight: Mask,
}

struct DoubleDescription;

impl DoubleDescription {
    /// Extreme rays of `{ y : M y <= 0 }` for an integer matrix `M` of full
    /// column rank (pointed cone). Constraints are inserted in row order.
    fn run(rows: &[Vec<i128>], dim: usize, adjacency: AdjacencyTest) -> Result<Vec<Vec<i128>>> {
        if rows.len() > Mask::CAPACITY {
            return Err(Error::Domain(format!(
                "{} constraints exceed the {}-constraint capacity",
                rows.len(),
                Mask::CAPACITY
            )));
        }

        // Initial simplicial cone from `dim` independent rows.
        let rational_rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| Rational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        let init = linalg::independent_rows(&rational_rows);
        if init.len() < dim {
            return Err(Error::Unbounded(
                "constraint matrix is rank deficient: the cone is not pointed".into(),
            ));
        }
        let init = &init[..dim];
        let square: Vec<Vec<Rational>> = init.iter().map(|&i| rational_rows[i].clone()).collect();
        let inverse = linalg::invert(&square).expect("rows were chosen independent");

        let mut rays: Vec<Ray> = (0..dim)
            .map(|j| {
                let col: Vec<Rational> = inverse.iter().map(|row| -row[j].clone()).collect();
                let coords = integerize(&col).expect("inverse entries are finite");
                Ray {
                    coords,
                    tight: Mask::empty(),
                }
            })
            .collect();

        let mut processed: Vec<usize> = init.to_vec();
        for ray in rays.iter_mut() {
            ray.tight = tight_mask(&ray.coords, rows, &processed)?;
        }

        let remaining: Vec<usize> = (0..rows.len()).filter(|i| !init.contains(i)).collect();
        for &row_idx in &remaining {
            let row = &rows[row_idx];
            let mut values = Vec::with_capacity(rays.len());
            for ray in &rays {
                values.push(dot(row, &ray.coords)?);
            }

            let mut kept: Vec<Ray> = Vec::new();
            let mut plus: Vec<(Ray, i128)> = Vec::new(); // violating side (m y > 0)
            let mut minus: Vec<(Ray, i128)> = Vec::new();
            for (ray, &v) in rays.into_iter().zip(&values) {
                match v.cmp(&0) {
                    std::cmp::Ordering::Greater => plus.push((ray, v)),
                    std::cmp::Ordering::Less => minus.push((ray, v)),
                    std::cmp::Ordering::Equal => {
                        let mut r = ray;
                        r.tight.set(row_idx);
                        kept.push(r);
                    }
                }
            }

            // New rays from adjacent (plus, minus) pairs.
            let c_dim = dim as u32;
            let survivors: Vec<&Ray> = kept
                .iter()
                .chain(plus.iter().map(|(r, _)| r))
                .chain(minus.iter().map(|(r, _)| r))
                .collect();
            let mut fresh: Vec<Vec<i128>> = Vec::new();
            for (p, vp) in &plus {
                for (m, vm) in &minus {
                    let shared = p.tight.and(&m.tight);
                    if shared.count() + 2 < c_dim {
                        continue;
                    }
                    let adjacent = match adjacency {
                        AdjacencyTest::Rank => {
                            let idx: Vec<usize> =
                                shared.bits(Mask::CAPACITY.min(rows.len())).collect();
                            integer_rank(rows, &idx, dim) == dim - 2
                        }
                        AdjacencyTest::Combinatorial => !survivors.iter().any(|r| {
                            !std::ptr::eq(*r, p as &Ray)
                                && !std::ptr::eq(*r, m as &Ray)
                                && r.tight.contains_all(&shared)
                        }),
                    };
                    if adjacent {
                        fresh.push(combine(&p.coords, *vp, &m.coords, *vm)?);
                    }
                }
            }

            processed.push(row_idx);
            let mut next: Vec<Ray> = kept;
            // Strictly satisfied rays keep their tight set unchanged.
            next.extend(minus.into_iter().map(|(r, _)| r));
            for coords in fresh {
                let tight = tight_mask(&coords, rows, &processed)?;
                next.push(Ray { coords, tight });
            }
            rays = next;
        }

        Ok(rays.into_iter().map(|r| r.coords).collect())
    }
}

fn dot(row: &[i128], coords: &[i128]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (&a, &b) in row.iter().zip(coords) {
        if a == 0 || b == 0 {
            continue;
        }
        let p = a
            .checked_mul(b)
            .ok_or_else(|| Error::Domain("ray coordinate overflow".into()))?;
        acc = acc
            .checked_add(p)
            .ok_or_else(|| Error::Domain("ray coordinate overflow".into()))?;
    }
    Ok(acc)
}

/// `(m.p) q - (m.q) p`, reduced to a primitive vector. Both coefficients are
/// positive, so the result stays in the cone.
fn combine(p: &[i128], vp: i128, q: &[i128], vq: i128) -> Result<Vec<i128>> {
    let mut out = Vec::with_capacity(p.len());
    let mut gcd: i128 = 0;
    for (&pi, &qi) in p.iter().zip(q) {
        let a = vp
            .checked_mul(qi)
            .ok_or_else(|| Error::Domain("ray coordinate overflow".into()))?;
        let b = vq
            .checked_mul(pi)
            .ok_or_else(|| Error::Domain("ray coordinate overflow".into()))?;
        let v = a
            .checked_sub(b)
            .ok_or_else(|| Error::Domain("ray coordinate overflow".into()))?;
        gcd = gcd.gcd(&v);
        out.push(v);
    }
    if gcd > 1 {
        for v in out.iter_mut() {
            *v /= gcd;
        }
    }
    Ok(out)
}

fn tight_mask(coords: &[i128], rows: &[Vec<i128>], processed: &[usize]) -> Result<Mask> {
    let mut mask = Mask::empty();
    for &i in processed {
        if dot(&rows[i], coords)? == 0 {
            mask.set(i);
        }
    }
    Ok(mask)
}

/// Rank of the selected rows (first `dim` columns) by fraction-free Gaussian
/// elimination in 128-bit integers.
fn integer_rank(rows: &[Vec<i128>], selected: &[usize], dim: usize) -> usize {
    let mut m: Vec<Vec<i128>> = selected.iter().map(|&i| rows[i][..dim].to_vec()).collect();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..dim {
        let Some(pivot) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_val = m[rank][col];
        for r in rank + 1..nrows {
            for c in col + 1..dim {
                // Bareiss update keeps entries equal to minors of the
                // original matrix, so the division is exact.
                m[r][c] = (m[r][c] * pivot_val - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = pivot_val;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// H-representation of the no-signalling polytope for a behavior shape:
/// nonnegativity inequalities plus normalization and singleton
/// no-signalling equalities.
pub fn ns_polytope_hrep(shape: &BehaviorShape) -> HRep {
    let ns = ns_constraints(shape);
    let dim = ns.lp.num_vars();
    let mut h = HRep::new(dim);
    for i in 0..dim {
        let mut row = vec![Rational::zero(); dim];
        row[i] = -Rational::one();
        h.push_le(row, Rational::zero());
    }
    for ((row, sense), rhs) in ns.lp.rows.iter().zip(&ns.lp.senses).zip(&ns.lp.rhs) {
        debug_assert!(matches!(sense, Sense::Eq));
        h.push_eq(row.clone(), rhs.clone());
    }
    h
}

/// Enumerated no-signalling vertices as behaviors.
pub fn ns_polytope_vertices(
    shape: &BehaviorShape,
    adjacency: AdjacencyTest,
) -> Result<Vec<Behavior<Rational>>> {
    let h = ns_polytope_hrep(shape);
    let v = enumerate_vertices_with(&h, adjacency)?;
    v.vertices
        .into_iter()
        .map(|q| Behavior::new(shape.clone(), q))
        .collect()
}

/// Keep the vertices that could beat every classical strategy: some diagonal
/// entry `Q(x,..,x|a..)` must exceed `1/|X|`. Any vertex failing this test
/// wins with probability at most the trivial guess-the-likeliest strategy on
/// every game, so it can never open a gap.
///
/// Deterministic vertices pass whenever their players can agree, but their
/// gap LPs certify exactly zero, so keeping them is sound (and matches the
/// candidate count of 174 for the three-party binary polytope).
pub fn filter_vertices(vertices: &[Behavior<Rational>]) -> Vec<Behavior<Rational>> {
    vertices
        .iter()
        .filter(|b| has_large_diagonal(b))
        .cloned()
        .collect()
}

fn has_large_diagonal(b: &Behavior<Rational>) -> bool {
    let shape = b.shape();
    let m = shape.num_parties();
    let threshold = Rational::new(1.into(), (shape.x_size as i64).into());
    (0..shape.joint_inputs()).any(|i| {
        let ins = decode_inputs_of(&shape, i);
        (0..shape.x_size).any(|x| *b.prob(&vec![x; m], &ins) > threshold)
    })
}

/// The Corollary-6.5 filter with deterministic vertices additionally
/// removed; those are covered by the classical side of the gap analysis.
pub fn filter_vertices_nondeterministic(
    vertices: &[Behavior<Rational>],
) -> Vec<Behavior<Rational>> {
    vertices
        .iter()
        .filter(|b| !b.cond().iter().all(|q| q.is_zero() || q.is_one()) && has_large_diagonal(b))
        .cloned()
        .collect()
}

fn decode_inputs_of(shape: &BehaviorShape, mut idx: usize) -> Vec<usize> {
    let m = shape.num_parties();
    let mut ins = vec![0usize; m];
    for k in (0..m).rev() {
        ins[k] = idx % shape.input_sizes[k];
        idx /= shape.input_sizes[k];
    }
    ins
}

/// Result of the three-party binary gap analysis.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub vertex_count: usize,
    pub filtered_count: usize,
    /// LP optimum (max of `c_ns - c_d`) for every filtered vertex.
    pub per_vertex_gaps: Vec<Rational>,
    /// `sup_P (w_ns(P) - w_c(P))`: zero is attained by deterministic play,
    /// so this is `max(0, per-vertex gaps)`.
    pub max_gap: Rational,
    /// A distribution attaining `max_gap`.
    pub worst_game: GameTable<Rational>,
}

/// Certify the maximum no-signalling advantage over all three-party binary
/// games. For each non-classical candidate vertex `Q`, the LP maximizes
/// `c_ns - c_d` over game distributions `P` with `c_ns` pinned to the value
/// of `Q` on `P` and `c_d` at least every reduced deterministic value; the
/// certified gap is the maximum over vertices (and zero, which deterministic
/// vertices attain).
pub fn max_gap_3party_binary() -> Result<GapReport> {
    let shape = BehaviorShape {
        x_size: 2,
        input_sizes: vec![2, 2, 2],
    };
    let vertices = ns_polytope_vertices(&shape, AdjacencyTest::Rank)?;
    gap_report_for(&shape, &vertices)
}

pub fn gap_report_for(shape: &BehaviorShape, vertices: &[Behavior<Rational>]) -> Result<GapReport> {
    let filtered = filter_vertices(vertices);
    let per_vertex: Vec<(Rational, Vec<Rational>)> = filtered
        .par_iter()
        .map(|q| gap_lp_for_vertex(shape, q))
        .collect::<Result<_>>()?;

    let mut max_gap = Rational::zero();
    // Point mass on x = 0: classical and no-signalling values are both one,
    // so the zero gap is attained there.
    let mut worst_probs = vec![Rational::zero(); shape.x_size * shape.joint_inputs()];
    worst_probs[0] = Rational::one();
    for (gap, probs) in &per_vertex {
        if *gap > max_gap {
            max_gap = gap.clone();
            worst_probs = probs.clone();
        }
    }
    let worst_game = GameTable::new(shape.x_size, shape.input_sizes.clone(), worst_probs)?;
    Ok(GapReport {
        vertex_count: vertices.len(),
        filtered_count: filtered.len(),
        per_vertex_gaps: per_vertex.into_iter().map(|(g, _)| g).collect(),
        max_gap,
        worst_game,
    })
}

/// The per-vertex linear program of the gap analysis. Variables: the game
/// probabilities (flat order), then `c_d`, then `c_ns`.
fn gap_lp_for_vertex(
    shape: &BehaviorShape,
    vertex: &Behavior<Rational>,
) -> Result<(Rational, Vec<Rational>)> {
    let m = shape.num_parties();
    let num_probs = shape.x_size * shape.joint_inputs();
    let c_d = num_probs;
    let c_ns = num_probs + 1;
    let mut lp = LinearProgram::new(num_probs + 2);
    lp.objective[c_ns] = Rational::one();
    lp.objective[c_d] = -Rational::one();

    // Normalization of P.
    let mut row = vec![Rational::zero(); lp.num_vars()];
    for item in row.iter_mut().take(num_probs) {
        *item = Rational::one();
    }
    lp.push_row(row, Sense::Eq, Rational::one());

    // c_d >= value of each reduced deterministic strategy.
    for strategy in reduced_strategies(shape) {
        let mut row = vec![Rational::zero(); lp.num_vars()];
        for (flat, coeff) in strategy {
            row[flat] = coeff;
        }
        row[c_d] -= Rational::one();
        lp.push_row(row, Sense::Le, Rational::zero());
    }

    // c_ns pinned to the value of this vertex.
    let mut row = vec![Rational::zero(); lp.num_vars()];
    for i in 0..shape.joint_inputs() {
        let ins = decode_inputs_of(shape, i);
        for x in 0..shape.x_size {
            let q = vertex.prob(&vec![x; m], &ins);
            if !q.is_zero() {
                row[x * shape.joint_inputs() + i] = q.clone();
            }
        }
    }
    row[c_ns] = -Rational::one();
    lp.push_row(row, Sense::Eq, Rational::zero());

    let sol = lp::solve_max(&lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "gap LP is bounded and feasible"
    );
    Ok((sol.optimal_value, sol.point[..num_probs].to_vec()))
}

/// Winning-probability coefficient vectors of the deterministic strategies
/// that can be optimal for binary inputs: the constants, and the four
/// aligned input-pattern families over ordered pairs of distinct outputs
/// (10 strategies for |X| = 2 and three parties).
fn reduced_strategies(shape: &BehaviorShape) -> Vec<Vec<(usize, Rational)>> {
    let m = shape.num_parties();
    let d = shape.x_size;
    let joint_in = shape.joint_inputs();
    assert!(shape.input_sizes.iter().all(|&s| s == 2));
    let mut out = Vec::new();
    for s in 0..d {
        // Constant strategy: wins whenever x = s.
        out.push(
            (0..joint_in)
                .map(|i| (s * joint_in + i, Rational::one()))
                .collect(),
        );
    }
    // Patterns: the all-zeros input tuple and each single-one tuple; the
    // complement tuple goes to the other output. For m = 3 these are (000),
    // (100), (010), (001), giving 2 + 4 * 2 = 10 strategies when d = 2.
    let patterns: Vec<usize> = std::iter::once(0)
        .chain((0..m).map(|j| 1usize << (m - 1 - j)))
        .collect();
    for s in 0..d {
        for t in 0..d {
            if s == t {
                continue;
            }
            for &pat in &patterns {
                let co = (joint_in - 1) ^ pat;
                out.push(vec![
                    (s * joint_in + pat, Rational::one()),
                    (t * joint_in + co, Rational::one()),
                ]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn unit_square() {
        let mut h = HRep::new(2);
        h.push_le(vec![rat(1, 1), rat(0, 1)], rat(1, 1));
        h.push_le(vec![rat(-1, 1), rat(0, 1)], rat(0, 1));
        h.push_le(vec![rat(0, 1), rat(1, 1)], rat(1, 1));
        h.push_le(vec![rat(0, 1), rat(-1, 1)], rat(0, 1));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        assert!(v.vertices.contains(&vec![rat(0, 1), rat(0, 1)]));
        assert!(v.vertices.contains(&vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn simplex_with_equality() {
        let mut h = HRep::new(3);
        for i in 0..3 {
            let mut row = vec![rat(0, 1); 3];
            row[i] = rat(-1, 1);
            h.push_le(row, rat(0, 1));
        }
        h.push_eq(vec![rat(1, 1); 3], rat(1, 1));
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 3);
    }

    #[test]
    fn unbounded_is_an_error() {
        let mut h = HRep::new(2);
        h.push_le(vec![rat(-1, 1), rat(0, 1)], rat(0, 1));
        h.push_le(vec![rat(0, 1), rat(-1, 1)], rat(0, 1));
        assert!(matches!(enumerate_vertices(&h), Err(Error::Unbounded(_))));
    }

    #[test]
    fn infeasible_is_empty() {
        let mut h = HRep::new(1);
        h.push_eq(vec![rat(1, 1)], rat(1, 1));
        h.push_eq(vec![rat(1, 1)], rat(2, 1));
        assert!(enumerate_vertices(&h).unwrap().vertices.is_empty());
    }

    /// Brute-force oracle: all dim-subsets of tight constraints.
    fn brute_force_vertices(h: &HRep) -> Vec<Vec<Rational>> {
        let dim = h.dim;
        let mut rows: Vec<(Vec<Rational>, Rational)> = h.ineq.clone();
        rows.extend(h.eq.clone());
        let n = rows.len();
        let mut found: Vec<Vec<Rational>> = Vec::new();
        let mut subset: Vec<usize> = (0..dim).collect();
        loop {
            let mat: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].0.clone()).collect();
            let rhs: Vec<Rational> = subset.iter().map(|&i| rows[i].1.clone()).collect();
            if let Some((point, basis)) = linalg::affine_solution_and_nullspace(&mat, &rhs) {
                if basis.is_empty() && h.contains(&point) && !found.contains(&point) {
                    found.push(point);
                }
            }
            // next combination
            let mut i = dim;
            loop {
                if i == 0 {
                    found.sort();
                    return found;
                }
                i -= 1;
                if subset[i] != i + n - dim {
                    subset[i] += 1;
                    for j in i + 1..dim {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_oracle() {
        // A lopsided 3-d polytope.
        let mut h = HRep::new(3);
        let rows: Vec<(Vec<i64>, i64)> = vec![
            (vec![1, 0, 0], 2),
            (vec![-1, 0, 0], 0),
            (vec![0, 1, 0], 1),
            (vec![0, -1, 0], 0),
            (vec![0, 0, 1], 3),
            (vec![0, 0, -1], 0),
            (vec![1, 1, 1], 4),
            (vec![2, -1, 1], 3),
        ];
        for (row, d) in rows {
            h.push_le(row.into_iter().map(|v| rat(v, 1)).collect(), rat(d, 1));
        }
        let dd = enumerate_vertices(&h).unwrap();
        let brute = brute_force_vertices(&h);
        assert_eq!(dd.vertices, brute);

        let combinatorial = enumerate_vertices_with(&h, AdjacencyTest::Combinatorial).unwrap();
        assert_eq!(combinatorial.vertices, dd.vertices);
    }

    #[test]
    fn bipartite_binary_ns_polytope() {
        let shape = BehaviorShape {
            x_size: 2,
            input_sizes: vec![2, 2],
        };
        let vertices = ns_polytope_vertices(&shape, AdjacencyTest::Rank).unwrap();
        assert_eq!(vertices.len(), 24);
        let deterministic = vertices
            .iter()
            .filter(|b| b.cond().iter().all(|q| q.is_zero() || q.is_one()))
            .count();
        assert_eq!(deterministic, 16);
        // The 8 nonlocal boxes have all entries in {0, 1/2}.
        let boxes = vertices
            .iter()
            .filter(|b| b.cond().iter().all(|q| q.is_zero() || *q == rat(1, 2)))
            .count();
        assert_eq!(boxes, 8);
        // No nonlocal box has a diagonal entry above 1/2, so only the
        // deterministic vertices with agreeing players pass the filter.
        assert!(filter_vertices_nondeterministic(&vertices).is_empty());
        assert_eq!(filter_vertices(&vertices).len(), 14);

        // Same vertex set with the combinatorial adjacency test.
        let comb = ns_polytope_vertices(&shape, AdjacencyTest::Combinatorial).unwrap();
        assert_eq!(comb.len(), 24);
    }

    #[test]
    fn bipartite_gap_is_zero() {
        let shape = BehaviorShape {
            x_size: 2,
            input_sizes: vec![2, 2],
        };
        let vertices = ns_polytope_vertices(&shape, AdjacencyTest::Rank).unwrap();
        let report = gap_report_for(&shape, &vertices).unwrap();
        // Only deterministic vertices survive the filter here, and each of
        // their gap LPs certifies exactly zero.
        assert_eq!(report.filtered_count, 14);
        assert!(report.per_vertex_gaps.iter().all(|g| g.is_zero()));
        assert!(report.max_gap.is_zero());
    }

    #[test]
    fn vertex_symmetry_orbits() {
        let shape = BehaviorShape {
            x_size: 2,
            input_sizes: vec![2, 2],
        };
        let vertices = ns_polytope_vertices(&shape, AdjacencyTest::Rank).unwrap();
        let set: std::collections::HashSet<Vec<Rational>> =
            vertices.iter().map(|b| b.cond().to_vec()).collect();
        // Global output flip and party swap map vertices to vertices.
        for b in &vertices {
            let mut flipped = vec![Rational::zero(); 16];
            let mut swapped = vec![Rational::zero(); 16];
            for x in 0..2usize {
                for y in 0..2usize {
                    for a in 0..2usize {
                        for bb in 0..2usize {
                            let q = b.prob(&[x, y], &[a, bb]).clone();
                            flipped[shape.index(&[1 - x, 1 - y], &[a, bb])] = q.clone();
                            swapped[shape.index(&[y, x], &[bb, a])] = q;
                        }
                    }
                }
            }
            assert!(set.contains(&flipped));
            assert!(set.contains(&swapped));
        }
    }

    #[test]
    fn reduced_strategy_rows_count() {
        let shape = BehaviorShape {
            x_size: 2,
            input_sizes: vec![2, 2, 2],
        };
        assert_eq!(reduced_strategies(&shape).len(), 10);
        assert_eq!(classical::reduced_strategy_count(2), 10);
    }

    #[test]
    fn gap_lp_on_handmade_vertices() {
        // The maximally mixed behavior fails the diagonal test; a constant
        // deterministic behavior passes it and its gap LP certifies exactly
        // zero advantage.
        let shape = BehaviorShape {
            x_size: 2,
            input_sizes: vec![2, 2, 2],
        };
        let det = Behavior::<Rational>::from_deterministic(
            shape.clone(),
            &classical::DeterministicStrategy::constant(0, 2, 3),
        );
        let uniform = Behavior::new(shape.clone(), vec![rat(1, 8); shape.table_len()]).unwrap();
        let report = gap_report_for(&shape, &[det, uniform]).unwrap();
        assert_eq!(report.filtered_count, 1);
        assert_eq!(report.per_vertex_gaps, vec![rat(0, 1)]);
        assert!(report.max_gap.is_zero());
        // The zero-gap witness is a game both sides win with certainty.
        let (wc, _) = classical::optimal_classical_exhaustive(&report.worst_game).unwrap();
        let (wns, _) = crate::nosig::optimal_ns(&report.worst_game).unwrap();
        assert_eq!(wc, wns);
    }
}
