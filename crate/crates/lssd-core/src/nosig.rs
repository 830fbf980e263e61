//! No-signalling behaviors and the linear program for the optimal
//! no-signalling value.
//!
//! A behavior is a conditional distribution `Q(x_1..x_m | a_1..a_m)` of one
//! guess per party given one input per party. No-signalling requires every
//! marginal over a subset of parties to be independent of the remaining
//! parties' inputs; it suffices to impose this for singleton complements
//! (each party alone cannot signal to the rest), which is what the LP uses.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use num_traits::{One, Zero};

use crate::classical::DeterministicStrategy;
use crate::error::{Error, Result};
use crate::game::GameTable;
use crate::lp::{self, LinearProgram, LpStatus, Sense};
use crate::scalar::{Rational, Scalar};

/// Conditional probability table `Q(x_1..x_m | a_1..a_m)`.
///
/// Flat order: outputs slowest (party 1 outermost), inputs fastest (party
/// `m`'s input innermost). Construction validates nonnegativity, per-input
/// normalization and the singleton no-signalling equalities.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior<S> {
    num_parties: usize,
    x_size: usize,
    input_sizes: Vec<usize>,
    cond: Vec<S>,
}

/// Output/input shape of a behavior, without the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorShape {
    pub x_size: usize,
    pub input_sizes: Vec<usize>,
}

impl BehaviorShape {
    pub fn of_game<S: Scalar>(game: &GameTable<S>) -> Self {
        BehaviorShape {
            x_size: game.x_size(),
            input_sizes: game.input_sizes().to_vec(),
        }
    }

    pub fn num_parties(&self) -> usize {
        self.input_sizes.len()
    }

    pub fn joint_outputs(&self) -> usize {
        self.x_size.pow(self.num_parties() as u32)
    }

    pub fn joint_inputs(&self) -> usize {
        self.input_sizes.iter().product()
    }

    pub fn table_len(&self) -> usize {
        self.joint_outputs() * self.joint_inputs()
    }

    /// Flat index of `(outputs, inputs)`.
    pub fn index(&self, outputs: &[usize], inputs: &[usize]) -> usize {
        debug_assert_eq!(outputs.len(), self.num_parties());
        debug_assert_eq!(inputs.len(), self.num_parties());
        let mut o = 0usize;
        for &x in outputs {
            debug_assert!(x < self.x_size);
            o = o * self.x_size + x;
        }
        let mut i = 0usize;
        for (a, s) in inputs.iter().zip(&self.input_sizes) {
            debug_assert!(*a < *s);
            i = i * s + a;
        }
        o * self.joint_inputs() + i
    }

    fn decode_outputs(&self, mut o: usize) -> Vec<usize> {
        let m = self.num_parties();
        let mut outs = vec![0usize; m];
        for k in (0..m).rev() {
            outs[k] = o % self.x_size;
            o /= self.x_size;
        }
        outs
    }

    fn decode_inputs(&self, mut i: usize) -> Vec<usize> {
        let m = self.num_parties();
        let mut ins = vec![0usize; m];
        for k in (0..m).rev() {
            ins[k] = i % self.input_sizes[k];
            i /= self.input_sizes[k];
        }
        ins
    }
}

impl<S: Scalar> Behavior<S> {
    pub fn new(shape: BehaviorShape, cond: Vec<S>) -> Result<Self> {
        let b = Self::new_unvalidated(shape, cond)?;
        b.validate()?;
        Ok(b)
    }

    fn new_unvalidated(shape: BehaviorShape, cond: Vec<S>) -> Result<Self> {
        if shape.x_size < 1 || shape.input_sizes.contains(&0) {
            return Err(Error::Shape("empty behavior alphabet".into()));
        }
        if cond.len() != shape.table_len() {
            return Err(Error::Shape(format!(
                "behavior table has {} entries, expected {}",
                cond.len(),
                shape.table_len()
            )));
        }
        Ok(Behavior {
            num_parties: shape.num_parties(),
            x_size: shape.x_size,
            input_sizes: shape.input_sizes,
            cond,
        })
    }

    fn validate(&self) -> Result<()> {
        for (i, q) in self.cond.iter().enumerate() {
            if *q < S::zero() {
                return Err(Error::Domain(format!("behavior entry {i} is negative")));
            }
        }
        let shape = self.shape();
        let joint_in = shape.joint_inputs();
        let joint_out = shape.joint_outputs();
        for i in 0..joint_in {
            let total: S = (0..joint_out)
                .map(|o| self.cond[o * joint_in + i].clone())
                .sum();
            if !total.close_to(&S::one()) {
                return Err(Error::Normalization(format!(
                    "outputs for input tuple {i} sum to {total}"
                )));
            }
        }
        if let Some(msg) = self.signalling_violation(false) {
            return Err(Error::Domain(msg));
        }
        Ok(())
    }

    pub fn shape(&self) -> BehaviorShape {
        BehaviorShape {
            x_size: self.x_size,
            input_sizes: self.input_sizes.clone(),
        }
    }

    pub fn num_parties(&self) -> usize {
        self.num_parties
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn cond(&self) -> &[S] {
        &self.cond
    }

    pub fn prob(&self, outputs: &[usize], inputs: &[usize]) -> &S {
        &self.cond[self.shape().index(outputs, inputs)]
    }

    /// First violated no-signalling marginal, if any. With `all_subsets` the
    /// condition is checked for every non-empty subset of signalling
    /// parties; otherwise only for singletons.
    fn signalling_violation(&self, all_subsets: bool) -> Option<String> {
        let shape = self.shape();
        let m = self.num_parties;
        let subsets: Vec<Vec<usize>> = if all_subsets {
            (1u32..(1 << m))
                .map(|mask| (0..m).filter(|&j| mask >> j & 1 == 1).collect())
                .collect()
        } else {
            (0..m).map(|j| vec![j]).collect()
        };
        let joint_in = shape.joint_inputs();
        let joint_out = shape.joint_outputs();
        for signalling in &subsets {
            // Marginal over the signalling parties' outputs must not depend
            // on their inputs.
            let keep: Vec<usize> = (0..m).filter(|j| !signalling.contains(j)).collect();
            let mut marg: HashMap<(Vec<usize>, Vec<usize>), S> = HashMap::new();
            for o in 0..joint_out {
                let outs = shape.decode_outputs(o);
                let kept_outs: Vec<usize> = keep.iter().map(|&j| outs[j]).collect();
                for i in 0..joint_in {
                    // All-zero marginals must participate in the comparison,
                    // so zero entries still create their map key.
                    let q = &self.cond[o * joint_in + i];
                    let ins = shape.decode_inputs(i);
                    *marg.entry((kept_outs.clone(), ins)).or_insert_with(S::zero) += q;
                }
            }
            let mut seen: HashMap<(Vec<usize>, Vec<usize>), S> = HashMap::new();
            for ((kept_outs, ins), value) in marg {
                let kept_ins: Vec<usize> = keep.iter().map(|&j| ins[j]).collect();
                match seen.entry((kept_outs.clone(), kept_ins)) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(value);
                    }
                    std::collections::hash_map::Entry::Occupied(e) => {
                        if !e.get().close_to(&value) {
                            return Some(format!(
                                "parties {signalling:?} signal: marginal for outputs \
                                 {kept_outs:?} depends on their inputs"
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    /// Full multi-party no-signalling condition, for every non-empty subset
    /// of signalling parties (not just the singletons used by construction).
    pub fn is_no_signalling_full(&self) -> bool {
        self.signalling_violation(true).is_none()
    }

    /// A deterministic strategy as a (trivially no-signalling) behavior.
    pub fn from_deterministic(shape: BehaviorShape, strategy: &DeterministicStrategy) -> Self {
        let joint_in = shape.joint_inputs();
        let mut cond = vec![S::zero(); shape.table_len()];
        for i in 0..joint_in {
            let ins = shape.decode_inputs(i);
            let outs: Vec<usize> = strategy
                .tables
                .iter()
                .zip(&ins)
                .map(|(t, &a)| t[a])
                .collect();
            cond[shape.index(&outs, &ins)] = S::one();
        }
        Behavior::new_unvalidated(shape, cond).expect("shape is consistent")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Behavior<T> {
        Behavior {
            num_parties: self.num_parties,
            x_size: self.x_size,
            input_sizes: self.input_sizes.clone(),
            cond: self.cond.iter().map(f).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "parties": self.num_parties,
            "x_size": self.x_size,
            "input_sizes": self.input_sizes,
            "scalar": S::BACKEND_NAME,
            "cond_probs": self.cond.iter().map(Scalar::encode_json).collect::<Vec<_>>(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }
}

/// Winning probability `sum P(x, a..) Q(x,..,x | a..)` of a behavior.
pub fn eval_behavior<S: Scalar>(game: &GameTable<S>, behavior: &Behavior<S>) -> Result<S> {
    let shape = BehaviorShape::of_game(game);
    if behavior.shape() != shape {
        return Err(Error::Shape(format!(
            "behavior shape {}@{:?} does not match game {}@{:?}",
            behavior.x_size,
            behavior.input_sizes,
            game.x_size(),
            game.input_sizes()
        )));
    }
    behavior.validate()?;
    let mut total = S::zero();
    let m = game.num_players();
    for (x, inputs, p) in game.entries() {
        if p.is_zero() {
            continue;
        }
        let diag = vec![x; m];
        let q = behavior.prob(&diag, &inputs);
        if !q.is_zero() {
            total += &(q.clone() * p);
        }
    }
    Ok(total)
}

/// The no-signalling constraint system of a behavior shape, as an LP
/// skeleton: nonnegative variables, one normalization equality per input
/// tuple, and the singleton no-signalling equalities.
pub struct NsLp {
    pub lp: LinearProgram,
    pub shape: BehaviorShape,
    pub num_normalization_rows: usize,
    pub num_singleton_rows: usize,
}

pub fn ns_constraints(shape: &BehaviorShape) -> NsLp {
    let num_vars = shape.table_len();
    let joint_in = shape.joint_inputs();
    let joint_out = shape.joint_outputs();
    let m = shape.num_parties();
    let mut lp = LinearProgram::new(num_vars);

    for i in 0..joint_in {
        let mut row = vec![Rational::zero(); num_vars];
        for o in 0..joint_out {
            row[o * joint_in + i] = Rational::one();
        }
        lp.push_row(row, Sense::Eq, Rational::one());
    }
    let num_normalization_rows = joint_in;

    // Singleton no-signalling: for each party j, the marginal over x_j must
    // agree between a_j = 0 and a_j = k for every fixing of the rest.
    let mut num_singleton_rows = 0;
    for j in 0..m {
        let out_rest_sizes = rest_sizes(&vec![shape.x_size; m], j);
        let in_rest_sizes = rest_sizes(&shape.input_sizes, j);
        for other_out in 0..joint_out / shape.x_size {
            let outs_rest = decode_mixed(other_out, &out_rest_sizes);
            for other_in in 0..joint_in / shape.input_sizes[j] {
                let ins_rest = decode_mixed(other_in, &in_rest_sizes);
                for k in 1..shape.input_sizes[j] {
                    let mut row = vec![Rational::zero(); num_vars];
                    for xj in 0..shape.x_size {
                        let outs = insert_at(&outs_rest, j, xj);
                        let ins0 = insert_at(&ins_rest, j, 0);
                        let insk = insert_at(&ins_rest, j, k);
                        row[shape.index(&outs, &ins0)] += Rational::one();
                        row[shape.index(&outs, &insk)] -= Rational::one();
                    }
                    lp.push_row(row, Sense::Eq, Rational::zero());
                    num_singleton_rows += 1;
                }
            }
        }
    }

    NsLp {
        lp,
        shape: shape.clone(),
        num_normalization_rows,
        num_singleton_rows,
    }
}

fn rest_sizes(sizes: &[usize], skip: usize) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &s)| s)
        .collect()
}

fn decode_mixed(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = idx % sizes[k];
        idx /= sizes[k];
    }
    out
}

fn insert_at(rest: &[usize], pos: usize, value: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.extend_from_slice(&rest[..pos]);
    v.push(value);
    v.extend_from_slice(&rest[pos..]);
    v
}

/// Optimal no-signalling value of a game, by the exact LP over the full
/// behavior table. The returned behavior is a vertex of the no-signalling
/// polytope and is re-validated, including the full multi-party
/// no-signalling condition.
pub fn optimal_ns<S: Scalar>(game: &GameTable<S>) -> Result<(S, Behavior<S>)> {
    let shape = BehaviorShape::of_game(game);
    let mut ns = ns_constraints(&shape);
    set_ns_objective(&mut ns.lp, game, &shape, None);
    solve_ns_lp(&ns.lp, &shape, game)
}

fn set_ns_objective<S: Scalar>(
    lp: &mut LinearProgram,
    game: &GameTable<S>,
    shape: &BehaviorShape,
    orbit_of: Option<&[usize]>,
) {
    let m = game.num_players();
    for (x, inputs, p) in game.entries() {
        if p.is_zero() {
            continue;
        }
        let diag = vec![x; m];
        let var = shape.index(&diag, &inputs);
        let var = orbit_of.map_or(var, |o| o[var]);
        lp.objective[var] += p.to_lp_rational();
    }
}

fn solve_ns_lp<S: Scalar>(
    lp: &LinearProgram,
    shape: &BehaviorShape,
    game: &GameTable<S>,
) -> Result<(S, Behavior<S>)> {
    let sol = lp::solve_max(lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "the no-signalling polytope is non-empty and bounded"
    );
    let behavior: Behavior<S> = Behavior::new(
        shape.clone(),
        sol.point.iter().map(S::from_rational).collect(),
    )?;
    assert!(
        behavior.is_no_signalling_full(),
        "singleton constraints must imply the full no-signalling condition"
    );
    let value = if S::EXACT {
        S::from_rational(&sol.optimal_value)
    } else {
        // Float games are snapped to rationals for the LP; report the value
        // of the returned vertex on the original float table.
        eval_behavior(game, &behavior)?
    };
    Ok((value, behavior))
}

/// Optimal no-signalling value of the `copies`-fold parallel repetition of
/// `base`, solved on a symmetry-reduced LP.
///
/// Averaging an optimal behavior over any group of exact symmetries of the
/// game table preserves the no-signalling constraints and the winning
/// probability, so restricting the LP to the invariant subspace is lossless.
/// The group used here is generated by simultaneous slot permutations of the
/// repetition, by party swaps under which the table is invariant, and by
/// per-symbol relabelings of the base alphabets that fix the base table
/// (for the BSC game: the global bit flip). The three-fold binary game
/// shrinks from 4096 variables to well under a thousand.
pub fn optimal_ns_repeated<S: Scalar>(
    base: &GameTable<S>,
    copies: usize,
) -> Result<(S, Behavior<S>)> {
    if copies == 0 {
        return Err(Error::Domain("repetition count must be positive".into()));
    }
    let game = base.parallel_repetition(copies)?;
    if copies == 1 {
        return optimal_ns(&game);
    }
    let shape = BehaviorShape::of_game(&game);
    let orbits = BehaviorOrbits::for_repeated_game(base, copies);

    let mut lp = LinearProgram::new(orbits.num_orbits);
    let full = ns_constraints(&shape);
    let mut seen_rows: HashMap<Vec<(usize, Rational)>, ()> = HashMap::new();
    for (row, rhs) in full.lp.rows.iter().zip(&full.lp.rhs) {
        let mut folded: HashMap<usize, Rational> = HashMap::new();
        for (var, c) in row.iter().enumerate() {
            if !c.is_zero() {
                *folded
                    .entry(orbits.orbit_of[var])
                    .or_insert_with(Rational::zero) += c;
            }
        }
        let mut key: Vec<(usize, Rational)> =
            folded.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        key.sort_by_key(|&(v, _)| v);
        if key.is_empty() {
            continue;
        }
        if seen_rows.insert(key.clone(), ()).is_none() {
            let mut dense = vec![Rational::zero(); orbits.num_orbits];
            for (v, c) in key {
                dense[v] = c;
            }
            lp.push_row(dense, Sense::Eq, rhs.clone());
        }
    }
    drop_redundant_equalities(&mut lp);
    set_ns_objective(&mut lp, &game, &shape, Some(&orbits.orbit_of));

    let sol = lp::solve_max(&lp);
    assert_eq!(sol.status, LpStatus::Optimal, "NS polytope is non-empty");
    let cond: Vec<S> = orbits
        .orbit_of
        .iter()
        .map(|&o| S::from_rational(&sol.point[o]))
        .collect();
    let behavior = Behavior::new(shape, cond)?;
    assert!(behavior.is_no_signalling_full());
    let value = if S::EXACT {
        S::from_rational(&sol.optimal_value)
    } else {
        eval_behavior(&game, &behavior)?
    };
    Ok((value, behavior))
}

/// Remove linearly dependent equality rows by rational Gaussian elimination
/// (on rows augmented with their right-hand sides).
fn drop_redundant_equalities(lp: &mut LinearProgram) {
    let augmented: Vec<Vec<Rational>> = lp
        .rows
        .iter()
        .zip(&lp.rhs)
        .map(|(row, d)| {
            let mut r = row.clone();
            r.push(d.clone());
            r
        })
        .collect();
    let keep: std::collections::HashSet<usize> = crate::linalg::independent_rows(&augmented)
        .into_iter()
        .collect();
    if keep.len() == lp.rows.len() {
        return;
    }
    let filter_in_place = |v: &mut Vec<Vec<Rational>>| {
        let mut i = 0;
        v.retain(|_| {
            let k = i;
            i += 1;
            keep.contains(&k)
        });
    };
    filter_in_place(&mut lp.rows);
    let mut i = 0;
    lp.senses.retain(|_| {
        let k = i;
        i += 1;
        keep.contains(&k)
    });
    let mut i = 0;
    lp.rhs.retain(|_| {
        let k = i;
        i += 1;
        keep.contains(&k)
    });
}

/// Orbits of behavior-table indices under a group of game symmetries, given
/// by generator permutations of the index set. Orbits are found by breadth-
/// first closure, so the group itself is never enumerated.
struct BehaviorOrbits {
    orbit_of: Vec<usize>,
    num_orbits: usize,
}

impl BehaviorOrbits {
    fn new(table_len: usize, generators: &[Vec<usize>]) -> Self {
        let mut orbit_of = vec![usize::MAX; table_len];
        let mut num_orbits = 0;
        let mut stack = Vec::new();
        for start in 0..table_len {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let orbit_id = num_orbits;
            num_orbits += 1;
            orbit_of[start] = orbit_id;
            stack.push(start);
            while let Some(idx) = stack.pop() {
                for g in generators {
                    let image = g[idx];
                    if orbit_of[image] == usize::MAX {
                        orbit_of[image] = orbit_id;
                        stack.push(image);
                    }
                }
            }
        }
        BehaviorOrbits {
            orbit_of,
            num_orbits,
        }
    }

    /// Generators for the `copies`-fold repetition of `base`: adjacent slot
    /// transpositions, invariant party swaps, and invariant base-alphabet
    /// relabelings lifted to every slot.
    fn for_repeated_game<S: Scalar>(base: &GameTable<S>, copies: usize) -> Self {
        let base_x = base.x_size();
        let base_inputs = base.input_sizes().to_vec();
        let m = base.num_players();
        let shape = BehaviorShape {
            x_size: base_x.pow(copies as u32),
            input_sizes: base_inputs.iter().map(|s| s.pow(copies as u32)).collect(),
        };
        let len = shape.table_len();
        let joint_in = shape.joint_inputs();

        // Each generator maps (outputs, inputs) to (outputs', inputs').
        type SymbolMap<'a> = Box<dyn Fn(&mut [usize], &mut [usize]) + 'a>;
        let mut symbol_maps: Vec<SymbolMap> = Vec::new();

        for k in 0..copies.saturating_sub(1) {
            let base_inputs = base_inputs.clone();
            symbol_maps.push(Box::new(move |outs: &mut [usize], ins: &mut [usize]| {
                for x in outs.iter_mut() {
                    *x = swap_adjacent_digits(*x, base_x, k);
                }
                for (party, a) in ins.iter_mut().enumerate() {
                    *a = swap_adjacent_digits(*a, base_inputs[party], k);
                }
            }));
        }

        for (i, j) in invariant_party_swaps(base) {
            symbol_maps.push(Box::new(move |outs: &mut [usize], ins: &mut [usize]| {
                outs.swap(i, j);
                ins.swap(i, j);
            }));
        }

        for sym in invariant_relabelings(base) {
            let x_perm = sym.x_perm;
            let input_perms = sym.input_perms;
            let base_inputs = base_inputs.clone();
            symbol_maps.push(Box::new(move |outs: &mut [usize], ins: &mut [usize]| {
                for x in outs.iter_mut() {
                    *x = relabel_digits(*x, base_x, copies, &x_perm);
                }
                for (party, a) in ins.iter_mut().enumerate() {
                    *a = relabel_digits(*a, base_inputs[party], copies, &input_perms[party]);
                }
            }));
        }

        let generators: Vec<Vec<usize>> = symbol_maps
            .iter()
            .map(|map| {
                (0..len)
                    .map(|idx| {
                        let mut outs = shape.decode_outputs(idx / joint_in);
                        let mut ins = shape.decode_inputs(idx % joint_in);
                        map(&mut outs, &mut ins);
                        shape.index(&outs, &ins)
                    })
                    .collect()
            })
            .collect();
        let _ = m;
        Self::new(len, &generators)
    }
}

/// Swap digits `k` and `k+1` of a little-endian base-`radix` index.
fn swap_adjacent_digits(value: usize, radix: usize, k: usize) -> usize {
    let low_block = radix.pow(k as u32);
    let rest = value / low_block;
    let tail = value % low_block;
    let d0 = rest % radix;
    let d1 = (rest / radix) % radix;
    let head = rest / (radix * radix);
    ((head * radix + d0) * radix + d1) * low_block + tail
}

/// Apply a symbol permutation to every digit of a little-endian index.
fn relabel_digits(value: usize, radix: usize, n: usize, perm: &[usize]) -> usize {
    let mut digits = vec![0usize; n];
    let mut rest = value;
    for d in digits.iter_mut() {
        *d = perm[rest % radix];
        rest /= radix;
    }
    let mut out = 0usize;
    for k in (0..n).rev() {
        out = out * radix + digits[k];
    }
    out
}

/// Pairs of players whose inputs can be exchanged without changing the table.
fn invariant_party_swaps<S: Scalar>(game: &GameTable<S>) -> Vec<(usize, usize)> {
    let m = game.num_players();
    let mut swaps = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if game.input_sizes()[i] != game.input_sizes()[j] {
                continue;
            }
            let invariant = game.entries().all(|(x, mut inputs, p)| {
                inputs.swap(i, j);
                *game.prob(x, &inputs) == *p
            });
            if invariant {
                swaps.push((i, j));
            }
        }
    }
    swaps
}

/// A simultaneous relabeling of the hidden-value alphabet and each player's
/// input alphabet that leaves the game table unchanged.
struct Relabeling {
    x_perm: Vec<usize>,
    input_perms: Vec<Vec<usize>>,
}

/// Exhaustively detect invariant relabelings for small alphabets. The search
/// is skipped for alphabets where it would be expensive; symmetry reduction
/// is an optimization, never a requirement.
fn invariant_relabelings<S: Scalar>(game: &GameTable<S>) -> Vec<Relabeling> {
    const MAX_COMBOS: usize = 50_000;
    let sizes: Vec<usize> = std::iter::once(game.x_size())
        .chain(game.input_sizes().iter().copied())
        .collect();
    if sizes.iter().any(|&s| s > 4) {
        return Vec::new();
    }
    let perms_per_alphabet: Vec<Vec<Vec<usize>>> =
        sizes.iter().map(|&s| all_permutations(s)).collect();
    let combos: usize = perms_per_alphabet.iter().map(Vec::len).product();
    if combos > MAX_COMBOS {
        return Vec::new();
    }

    let mut found = Vec::new();
    let mut choice = vec![0usize; sizes.len()];
    'outer: loop {
        let x_perm = &perms_per_alphabet[0][choice[0]];
        let input_perms: Vec<&Vec<usize>> = (1..sizes.len())
            .map(|k| &perms_per_alphabet[k][choice[k]])
            .collect();
        let is_identity = x_perm.iter().enumerate().all(|(i, &v)| i == v)
            && input_perms
                .iter()
                .all(|p| p.iter().enumerate().all(|(i, &v)| i == v));
        if !is_identity {
            let invariant = game.entries().all(|(x, inputs, p)| {
                let mapped: Vec<usize> = inputs
                    .iter()
                    .zip(&input_perms)
                    .map(|(&a, perm)| perm[a])
                    .collect();
                *game.prob(x_perm[x], &mapped) == *p
            });
            if invariant {
                found.push(Relabeling {
                    x_perm: x_perm.clone(),
                    input_perms: input_perms.into_iter().cloned().collect(),
                });
            }
        }
        // Advance the mixed-radix choice counter.
        for k in 0..sizes.len() {
            choice[k] += 1;
            if choice[k] < perms_per_alphabet[k].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    found
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), 0, &mut out);
    out
}

/// The Hamming-ball no-signalling strategy `Q_n^d` for the `n`-fold binary
/// game: each party's output set is the radius-`d` ball around its input;
/// shared elements are paired with themselves, the remainders are matched in
/// lexicographic order, and one pair is output uniformly.
pub fn hamming_ball_behavior<S: Scalar>(copies: usize, radius: usize) -> Result<Behavior<S>> {
    if radius > copies {
        return Err(Error::Domain(format!(
            "radius {radius} exceeds block length {copies}"
        )));
    }
    let n = copies;
    let size = 1usize << n;
    let shape = BehaviorShape {
        x_size: size,
        input_sizes: vec![size, size],
    };
    let ball_volume: usize = (0..=radius).map(|i| binomial(n, i)).sum();
    let weight = S::from_ratio(1, ball_volume as i64);

    let in_ball = |x: usize, center: usize| ((x ^ center) as u32).count_ones() as usize <= radius;

    let mut cond = vec![S::zero(); shape.table_len()];
    for a in 0..size {
        for b in 0..size {
            let mut only_a = Vec::new();
            let mut only_b = Vec::new();
            for x in 0..size {
                match (in_ball(x, a), in_ball(x, b)) {
                    (true, true) => cond[shape.index(&[x, x], &[a, b])] = weight.clone(),
                    (true, false) => only_a.push(x),
                    (false, true) => only_b.push(x),
                    (false, false) => {}
                }
            }
            debug_assert_eq!(only_a.len(), only_b.len());
            for (&x, &y) in only_a.iter().zip(&only_b) {
                cond[shape.index(&[x, y], &[a, b])] = weight.clone();
            }
        }
    }
    Behavior::new(shape, cond)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1usize;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// Closed-form winning probability of `Q_n^d` on the `n`-fold BSC game:
/// `(sum_{i<=d} C(n,i) a^i (1-a)^{n-i})^2 / sum_{i<=d} C(n,i)`.
pub fn qnd_win_prob<S: Scalar>(copies: usize, radius: usize, alpha: &S) -> Result<S> {
    if radius > copies {
        return Err(Error::Domain(format!(
            "radius {radius} exceeds block length {copies}"
        )));
    }
    if *alpha < S::zero() || *alpha > S::from_ratio(1, 2) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
    }
    let n = copies;
    let one_minus = S::one() - alpha.clone();
    let mut tail = S::zero();
    let mut volume = 0i64;
    for i in 0..=radius {
        let c = binomial(n, i) as i64;
        volume += c;
        let mut term = S::from_ratio(c, 1);
        for _ in 0..i {
            term *= alpha;
        }
        for _ in 0..(n - i) {
            term *= &one_minus;
        }
        tail += &term;
    }
    Ok(tail.clone() * tail / S::from_ratio(volume, 1))
}
