//! Optimal classical (deterministic) strategies.
//!
//! Players act through local guessing functions `f_i: A_i -> X`; shared or
//! local randomness cannot improve the winning probability, so deterministic
//! strategies are exhaustive. For games with a uniform hidden value, product
//! conditionals and identical channels there is an optimal strategy that is
//! symmetric (all players use the same function), which shrinks the search
//! from `prod_i |X|^|A_i|` to `|X|^|A|` candidates.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{Channel, GameTable};
use crate::scalar::Scalar;

/// Default cap on the number of enumerated strategy candidates.
pub const DEFAULT_ENUM_BUDGET: u128 = 100_000_000;

/// One guessing function table per player (`tables[i][a] = f_i(a)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub tables: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    /// The same function for every player.
    pub fn symmetric(table: Vec<usize>, num_players: usize) -> Self {
        DeterministicStrategy {
            tables: vec![table; num_players],
        }
    }

    /// Every player outputs their input unchanged.
    pub fn identity(x_size: usize, num_players: usize) -> Self {
        Self::symmetric((0..x_size).collect(), num_players)
    }

    /// Every player outputs the fixed value `x`.
    pub fn constant(x: usize, input_size: usize, num_players: usize) -> Self {
        Self::symmetric(vec![x; input_size], num_players)
    }

    fn check_shape<S: Scalar>(&self, game: &GameTable<S>) -> Result<()> {
        if self.tables.len() != game.num_players() {
            return Err(Error::Shape(format!(
                "strategy has {} players, game has {}",
                self.tables.len(),
                game.num_players()
            )));
        }
        for (i, (table, &size)) in self.tables.iter().zip(game.input_sizes()).enumerate() {
            if table.len() != size {
                return Err(Error::Shape(format!(
                    "player {i}: table length {} for input alphabet {size}",
                    table.len()
                )));
            }
            if table.iter().any(|&x| x >= game.x_size()) {
                return Err(Error::Shape(format!(
                    "player {i}: output outside [0, {})",
                    game.x_size()
                )));
            }
        }
        Ok(())
    }
}

/// Winning probability of a deterministic strategy:
/// `sum_{x,a} P(x, a) [f_i(a_i) = x for all i]`.
pub fn eval_deterministic<S: Scalar>(
    game: &GameTable<S>,
    strategy: &DeterministicStrategy,
) -> Result<S> {
    strategy.check_shape(game)?;
    let mut total = S::zero();
    for (x, inputs, p) in game.entries() {
        if p.is_zero() {
            continue;
        }
        let win = strategy
            .tables
            .iter()
            .zip(&inputs)
            .all(|(table, &a)| table[a] == x);
        if win {
            total += p;
        }
    }
    Ok(total)
}

/// Check the symmetric-optimum hypotheses (uniform hidden value, product
/// conditionals, identical per-player channels) and return the common
/// channel `P(a|x)`. Exact in rational mode, `1e-12` in float mode.
pub fn symmetric_hypotheses<S: Scalar>(game: &GameTable<S>) -> Result<Channel<S>> {
    let x_size = game.x_size();
    let m = game.num_players();
    let a_size = game.input_sizes()[0];
    if game.input_sizes().iter().any(|&s| s != a_size) {
        return Err(Error::Hypothesis(
            "players have different input alphabets".into(),
        ));
    }

    let uniform = S::from_ratio(1, x_size as i64);
    for (x, p) in game.x_marginal().iter().enumerate() {
        if !p.close_to(&uniform) {
            return Err(Error::Hypothesis(format!(
                "P_X({x}) = {p}, expected uniform {uniform}"
            )));
        }
    }

    // Per-player conditional marginals W_i(a|x).
    let mut marginals = vec![vec![S::zero(); x_size * a_size]; m];
    for (x, inputs, p) in game.entries() {
        if p.is_zero() {
            continue;
        }
        for (i, &a) in inputs.iter().enumerate() {
            marginals[i][x * a_size + a] += p;
        }
    }
    for w in marginals.iter_mut().flat_map(|w| w.iter_mut()) {
        *w = w.clone() / &uniform;
    }

    for (i, w) in marginals.iter().enumerate().skip(1) {
        for (idx, (wi, w0)) in w.iter().zip(&marginals[0]).enumerate() {
            if !wi.close_to(w0) {
                return Err(Error::Hypothesis(format!(
                    "player {i} channel differs from player 0 at entry {idx}"
                )));
            }
        }
    }

    // Conditional independence: P(x, a) = P_X(x) prod_i W(a_i | x).
    for (x, inputs, p) in game.entries() {
        let mut expected = uniform.clone();
        for &a in &inputs {
            expected *= &marginals[0][x * a_size + a];
        }
        if !p.close_to(&expected) {
            return Err(Error::Hypothesis(format!(
                "P({x}, {inputs:?}) = {p} is not the product of its marginals"
            )));
        }
    }

    Channel::new(x_size, a_size, marginals.swap_remove(0))
}

/// Winning probability of the symmetric strategy `f` on the channel game of
/// `ch` with `m` players, in inner-product form: `(1/|X|) sum_x q_f(x)^m`
/// with `q_f(x) = P(f^{-1}(x) | x)`.
pub fn symmetric_strategy_value<S: Scalar>(ch: &Channel<S>, m: usize, f: &[usize]) -> S {
    let x_size = ch.x_size();
    let mut q = vec![S::zero(); x_size];
    for (a, &fx) in f.iter().enumerate() {
        q[fx] += ch.prob(a, fx);
    }
    let mut total = S::zero();
    for qx in q {
        let mut power = qx.clone();
        for _ in 1..m {
            power *= &qx;
        }
        total += &power;
    }
    total * S::from_ratio(1, x_size as i64)
}

fn decode_function(candidate: u128, a_size: usize, x_size: usize) -> Vec<usize> {
    // Digit for a = 0 is the most significant, so candidate order is
    // lexicographic order of the table (f(0), f(1), ...).
    let mut f = vec![0usize; a_size];
    let mut rest = candidate;
    for a in (0..a_size).rev() {
        f[a] = (rest % x_size as u128) as usize;
        rest /= x_size as u128;
    }
    f
}

/// Best symmetric deterministic strategy of a game satisfying the
/// [`symmetric_hypotheses`]. Ties broken towards the lexicographically least
/// function table.
pub fn optimal_classical_symmetric<S: Scalar>(
    game: &GameTable<S>,
) -> Result<(S, DeterministicStrategy)> {
    optimal_classical_symmetric_with_budget(game, DEFAULT_ENUM_BUDGET)
}

pub fn optimal_classical_symmetric_with_budget<S: Scalar>(
    game: &GameTable<S>,
    budget: u128,
) -> Result<(S, DeterministicStrategy)> {
    let ch = symmetric_hypotheses(game)?;
    let m = game.num_players();
    let x_size = game.x_size();
    let a_size = ch.a_size();
    let count = (x_size as u128)
        .checked_pow(a_size as u32)
        .unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::EnumerationBudget {
            required: count,
            budget,
        });
    }

    let chunk: u128 = 1 << 14;
    let num_chunks = count.div_ceil(chunk);
    let best = (0..num_chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = (lo + chunk).min(count);
            let mut best: Option<(S, u128)> = None;
            for cand in lo..hi {
                let f = decode_function(cand, a_size, x_size);
                let v = symmetric_strategy_value(&ch, m, &f);
                let improves = match &best {
                    None => true,
                    Some((bv, _)) => v > *bv,
                };
                if improves {
                    best = Some((v, cand));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, b) => b,
                (a, None) => a,
                (Some((va, ia)), Some((vb, ib))) => {
                    // Larger value wins; on ties, the smaller candidate index
                    // (lexicographically least table).
                    if vb > va || (vb == va && ib < ia) {
                        Some((vb, ib))
                    } else {
                        Some((va, ia))
                    }
                }
            },
        )
        .expect("at least one candidate");

    let f = decode_function(best.1, a_size, x_size);
    Ok((best.0, DeterministicStrategy::symmetric(f, m)))
}

/// Global maximum over all tuples of deterministic strategies, by direct
/// enumeration. `prod_i |X|^|A_i|` must stay within the budget.
pub fn optimal_classical_exhaustive<S: Scalar>(
    game: &GameTable<S>,
) -> Result<(S, DeterministicStrategy)> {
    optimal_classical_exhaustive_with_budget(game, DEFAULT_ENUM_BUDGET)
}

pub fn optimal_classical_exhaustive_with_budget<S: Scalar>(
    game: &GameTable<S>,
    budget: u128,
) -> Result<(S, DeterministicStrategy)> {
    let x_size = game.x_size();
    let mut count: u128 = 1;
    for &s in game.input_sizes() {
        count = count.saturating_mul((x_size as u128).checked_pow(s as u32).unwrap_or(u128::MAX));
    }
    if count > budget {
        return Err(Error::EnumerationBudget {
            required: count,
            budget,
        });
    }

    let decode = |candidate: u128| -> DeterministicStrategy {
        // Player 0's table is the most significant digit block.
        let mut tables = Vec::with_capacity(game.num_players());
        let mut rest = candidate;
        for &a_size in game.input_sizes().iter().rev() {
            let block = (x_size as u128).pow(a_size as u32);
            tables.push(decode_function(rest % block, a_size, x_size));
            rest /= block;
        }
        tables.reverse();
        DeterministicStrategy { tables }
    };

    let chunk: u128 = 1 << 10;
    let num_chunks = count.div_ceil(chunk);
    let best = (0..num_chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = (lo + chunk).min(count);
            let mut best: Option<(S, u128)> = None;
            for cand in lo..hi {
                let s = decode(cand);
                let v = eval_deterministic(game, &s).expect("decoded strategy fits the game");
                let improves = match &best {
                    None => true,
                    Some((bv, _)) => v > *bv,
                };
                if improves {
                    best = Some((v, cand));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, b) => b,
                (a, None) => a,
                (Some((va, ia)), Some((vb, ib))) => {
                    if vb > va || (vb == va && ib < ia) {
                        Some((vb, ib))
                    } else {
                        Some((va, ia))
                    }
                }
            },
        )
        .expect("at least one candidate");

    Ok((best.0.clone(), decode(best.1)))
}

/// Number of deterministic strategies that can attain the three-party binary
/// optimum after the output-set reduction: `d` constants plus four
/// input-pattern families over ordered pairs `s != t`.
pub fn reduced_strategy_count(x_size: usize) -> usize {
    x_size + 4 * x_size * (x_size - 1)
}

/// Optimal classical value of a three-party game with binary inputs, via the
/// reduction to constants and the four aligned input-pattern families.
pub fn optimal_classical_3party_binary<S: Scalar>(game: &GameTable<S>) -> Result<S> {
    if game.num_players() != 3 || game.input_sizes() != [2, 2, 2] {
        return Err(Error::Shape(
            "reduction needs 3 players with binary inputs".into(),
        ));
    }
    let d = game.x_size();
    let mut best = game
        .x_marginal()
        .into_iter()
        .max_by(|a, b| a.partial_cmp(b).expect("probabilities are ordered"))
        .expect("|X| >= 2");
    // Input patterns (a,b,c) mapped to s, with the complement mapped to t.
    const PATTERNS: [[usize; 3]; 4] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for s in 0..d {
        for t in 0..d {
            if s == t {
                continue;
            }
            for pat in PATTERNS {
                let co = [1 - pat[0], 1 - pat[1], 1 - pat[2]];
                let v = game.prob(s, &pat).clone() + game.prob(t, &co);
                if v > best {
                    best = v;
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{bsc_channel, bsc_game, channel_game};
    use crate::scalar::Rational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn identity_and_constant_on_single_bsc() {
        let g = bsc_game(rat(1, 4), 2, 1).unwrap();
        let id = DeterministicStrategy::identity(2, 2);
        assert_eq!(eval_deterministic(&g, &id).unwrap(), rat(9, 16));
        let c0 = DeterministicStrategy::constant(0, 2, 2);
        assert_eq!(eval_deterministic(&g, &c0).unwrap(), rat(1, 2));
        // Constant value is alpha-independent.
        let g = bsc_game(rat(2, 5), 2, 1).unwrap();
        assert_eq!(eval_deterministic(&g, &c0).unwrap(), rat(1, 2));
    }

    #[test]
    fn two_fold_majority_style_strategy() {
        let g = bsc_game(rat(3, 10), 2, 2).unwrap();
        // "00 if the input contains a 0, else 11".
        let f = vec![0, 0, 0, 3];
        let s = DeterministicStrategy::symmetric(f.clone(), 2);
        let v = eval_deterministic(&g, &s).unwrap();
        let alpha = rat(3, 10);
        let one = rat(1, 1);
        let expect = (one.clone() - alpha.clone() * &alpha).pow(2) / rat(4, 1)
            + (one - alpha).pow(4) / rat(4, 1);
        assert_eq!(v, expect);

        // Inner-product form agrees with the direct table evaluation.
        let ch = symmetric_hypotheses(&g).unwrap();
        assert_eq!(symmetric_strategy_value(&ch, 2, &f), v);
    }

    #[test]
    fn hypothesis_check_rejects_asymmetric_games() {
        // Non-uniform P_X.
        let g = GameTable::new(
            2,
            vec![2, 2],
            vec![
                rat(3, 10),
                rat(3, 10),
                rat(0, 1),
                rat(0, 1),
                rat(1, 10),
                rat(1, 10),
                rat(1, 10),
                rat(1, 10),
            ],
        )
        .unwrap();
        assert!(matches!(
            symmetric_hypotheses(&g),
            Err(Error::Hypothesis(_))
        ));

        // Correlated conditionals (P(a,b|x) concentrated on a == b).
        let g = GameTable::new(
            2,
            vec![2, 2],
            vec![
                rat(1, 4),
                rat(0, 1),
                rat(0, 1),
                rat(1, 4),
                rat(1, 4),
                rat(0, 1),
                rat(0, 1),
                rat(1, 4),
            ],
        )
        .unwrap();
        assert!(matches!(
            symmetric_hypotheses(&g),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn symmetric_search_on_single_bsc() {
        // alpha = 0.2 < 1 - 1/sqrt(2): identity is optimal, value 0.64.
        let g = bsc_game(rat(1, 5), 2, 1).unwrap();
        let (v, s) = optimal_classical_symmetric(&g).unwrap();
        assert_eq!(v, rat(16, 25));
        assert_eq!(s, DeterministicStrategy::identity(2, 2));

        // alpha = 0.4 > 1 - 1/sqrt(2): constants win, value 1/2.
        let g = bsc_game(rat(2, 5), 2, 1).unwrap();
        let (v, s) = optimal_classical_symmetric(&g).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(s, DeterministicStrategy::constant(0, 2, 2));

        let (ve, _) = optimal_classical_exhaustive(&g).unwrap();
        assert_eq!(ve, rat(1, 2));
    }

    #[test]
    fn tie_break_is_lexicographic_at_half() {
        let g = bsc_game(rat(1, 2), 2, 1).unwrap();
        let (v, s) = optimal_classical_symmetric(&g).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(s, DeterministicStrategy::constant(0, 2, 2));
    }

    #[test]
    fn two_fold_symmetric_matches_piecewise_formula() {
        // alpha = 0.35 lies above the I_2/I_3 breakpoint: value 1/4.
        let g = bsc_game(rat(7, 20), 2, 2).unwrap();
        let (v, _) = optimal_classical_symmetric(&g).unwrap();
        assert_eq!(v, rat(1, 4));
        // alpha = 0.31 lies in I_2.
        let alpha = rat(31, 100);
        let g = bsc_game(alpha.clone(), 2, 2).unwrap();
        let (v, _) = optimal_classical_symmetric(&g).unwrap();
        let one = rat(1, 1);
        let expect =
            ((one.clone() - alpha.clone() * &alpha).pow(2) + (one - alpha).pow(4)) / rat(4, 1);
        assert_eq!(v, expect);
    }

    #[test]
    fn enumeration_budget_errors() {
        let g = bsc_game(rat(1, 4), 2, 2).unwrap();
        assert!(matches!(
            optimal_classical_symmetric_with_budget(&g, 10),
            Err(Error::EnumerationBudget { .. })
        ));
        assert!(matches!(
            optimal_classical_exhaustive_with_budget(&g, 1000),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    fn random_game(rng: &mut StdRng, x_size: usize, input_sizes: &[usize]) -> GameTable<Rational> {
        let len = x_size * input_sizes.iter().product::<usize>();
        let mut weights: Vec<i64> = (0..len).map(|_| rng.gen_range(0..20)).collect();
        if weights.iter().all(|&w| w == 0) {
            weights[0] = 1;
        }
        let total: i64 = weights.iter().sum();
        GameTable::new(
            x_size,
            input_sizes.to_vec(),
            weights.into_iter().map(|w| rat(w, total)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn three_party_reduction_matches_exhaustive() {
        assert_eq!(reduced_strategy_count(2), 10);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_game(&mut rng, 2, &[2, 2, 2]);
            let reduced = optimal_classical_3party_binary(&g).unwrap();
            let (exhaustive, _) = optimal_classical_exhaustive(&g).unwrap();
            assert_eq!(reduced, exhaustive);
        }
    }

    #[test]
    fn three_party_reduction_point_mass() {
        let mut probs = vec![rat(0, 1); 16];
        probs[0] = rat(1, 1); // concentrated on x = 0, inputs (0,0,0)
        let g = GameTable::new(2, vec![2, 2, 2], probs).unwrap();
        assert_eq!(optimal_classical_3party_binary(&g).unwrap(), rat(1, 1));
    }

    #[test]
    fn relabeling_invariance() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_game(&mut rng, 3, &[2, 3]);
            let perm = [2usize, 0, 1]; // relabel X by a fixed permutation
            let mut probs = vec![rat(0, 1); g.probs().len()];
            for (x, inputs, p) in g.entries() {
                probs[g.flat_index(perm[x], &inputs)] = p.clone();
            }
            let relabeled = GameTable::new(3, vec![2, 3], probs).unwrap();

            let s = DeterministicStrategy {
                tables: vec![
                    vec![rng.gen_range(0..3), rng.gen_range(0..3)],
                    vec![
                        rng.gen_range(0..3),
                        rng.gen_range(0..3),
                        rng.gen_range(0..3),
                    ],
                ],
            };
            let s_perm = DeterministicStrategy {
                tables: s
                    .tables
                    .iter()
                    .map(|t| t.iter().map(|&x| perm[x]).collect())
                    .collect(),
            };
            assert_eq!(
                eval_deterministic(&g, &s).unwrap(),
                eval_deterministic(&relabeled, &s_perm).unwrap()
            );
        }
    }

    #[test]
    fn symmetric_equals_exhaustive_on_random_symmetric_games() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..25 {
            let x_size = rng.gen_range(2..=3);
            let a_size = rng.gen_range(2..=3);
            // Random common channel, uniform X, product conditionals.
            let mut rows = Vec::new();
            for _ in 0..x_size {
                let mut w: Vec<i64> = (0..a_size).map(|_| rng.gen_range(0..9)).collect();
                if w.iter().all(|&x| x == 0) {
                    w[0] = 1;
                }
                let t: i64 = w.iter().sum();
                rows.extend(w.into_iter().map(|x| rat(x, t)));
            }
            let ch = Channel::new(x_size, a_size, rows).unwrap();
            let g = channel_game(&ch, 2).unwrap();
            let (vs, _) = optimal_classical_symmetric(&g).unwrap();
            let (ve, _) = optimal_classical_exhaustive(&g).unwrap();
            assert_eq!(vs, ve);
        }
        // Identity channel sanity: winning probability 1.
        let ch = bsc_channel(rat(0, 1)).unwrap();
        let g = channel_game(&ch, 2).unwrap();
        let (v, _) = optimal_classical_symmetric(&g).unwrap();
        assert_eq!(v, rat(1, 1));
    }
}
