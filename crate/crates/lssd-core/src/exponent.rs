//! Asymptotic exponent of the winning probability for channel games.
//!
//! For n-fold repetition of a channel game, `log(w)/n` converges to
//! `max_Q I(X;A)_Q - 2 D(Q_{A|X} || P_{A|X} | Q_X) - log|X|` over joint
//! distributions `Q` on `X x A`. This module evaluates that objective,
//! maximizes it numerically, and tabulates the finite-n exponents achieved
//! by the Hamming-ball strategy family. Binary logarithms throughout;
//! everything here is `f64`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::Channel;
use crate::nosig::binomial;

/// Probabilities below this are treated as exact zeros by the entropy and
/// divergence helpers, so simplex-boundary iterates produce infinities
/// instead of NaNs.
const PROB_FLOOR: f64 = 1e-300;

/// Shannon entropy in bits, with the `0 log 0 = 0` convention.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > PROB_FLOOR)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Relative entropy `D(P || Q)` in bits; `+inf` when `P` puts mass outside
/// the support of `Q`.
pub fn rel_entropy(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut d = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= PROB_FLOOR {
            continue;
        }
        if qi <= PROB_FLOOR {
            return f64::INFINITY;
        }
        d += pi * (pi / qi).log2();
    }
    d
}

/// A joint distribution `Q(x, a)` on `X x A`, stored row-major by `x`.
#[derive(Debug, Clone)]
pub struct JointDist {
    pub x_size: usize,
    pub a_size: usize,
    pub probs: Vec<f64>,
}

impl JointDist {
    pub fn new(x_size: usize, a_size: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != x_size * a_size {
            return Err(Error::Shape(format!(
                "joint table has {} entries, expected {}",
                probs.len(),
                x_size * a_size
            )));
        }
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::Domain("negative joint probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization(format!("joint sums to {total}")));
        }
        Ok(JointDist {
            x_size,
            a_size,
            probs,
        })
    }

    pub fn x_marginal(&self) -> Vec<f64> {
        (0..self.x_size)
            .map(|x| {
                self.probs[x * self.a_size..(x + 1) * self.a_size]
                    .iter()
                    .sum()
            })
            .collect()
    }

    pub fn a_marginal(&self) -> Vec<f64> {
        (0..self.a_size)
            .map(|a| {
                (0..self.x_size)
                    .map(|x| self.probs[x * self.a_size + a])
                    .sum()
            })
            .collect()
    }

    /// The channel whose rows are `Q(a | x)`; rows of a zero-mass `x` are
    /// left uniform.
    pub fn conditional(&self) -> Vec<f64> {
        let mut cond = vec![1.0 / self.a_size as f64; self.probs.len()];
        for (x, &px) in self.x_marginal().iter().enumerate() {
            if px > PROB_FLOOR {
                for a in 0..self.a_size {
                    cond[x * self.a_size + a] = self.probs[x * self.a_size + a] / px;
                }
            }
        }
        cond
    }
}

/// Mutual information `I(X;A) = H(X) + H(A) - H(X,A)` in bits.
pub fn mutual_info(q: &JointDist) -> f64 {
    entropy(&q.x_marginal()) + entropy(&q.a_marginal()) - entropy(&q.probs)
}

/// Conditional entropy `H(A|X) = H(X,A) - H(X)` in bits.
pub fn cond_entropy(q: &JointDist) -> f64 {
    entropy(&q.probs) - entropy(&q.x_marginal())
}

/// Conditional relative entropy `D(P1_{A|X} || P2_{A|X} | Q_X)`: rows are
/// conditional tables (row `x` is a distribution over `A`), weighted by the
/// marginal `marg`.
pub fn cond_rel_entropy(p1: &[f64], p2: &[f64], marg: &[f64], a_size: usize) -> f64 {
    let mut d = 0.0;
    for (x, &w) in marg.iter().enumerate() {
        if w <= PROB_FLOOR {
            continue;
        }
        let row = rel_entropy(
            &p1[x * a_size..(x + 1) * a_size],
            &p2[x * a_size..(x + 1) * a_size],
        );
        if row.is_infinite() {
            return f64::INFINITY;
        }
        d += w * row;
    }
    d
}

/// The exponent objective `I(X;A)_Q - 2 D(Q_{A|X} || P_{A|X} | Q_X) - log|X|`
/// at the joint distribution `q`; `-inf` if `q` leaves the channel support.
pub fn exponent_objective(q: &JointDist, ch: &Channel<f64>) -> Result<f64> {
    if q.x_size != ch.x_size() || q.a_size != ch.a_size() {
        return Err(Error::Shape(format!(
            "joint {}x{} does not match channel {}x{}",
            q.x_size,
            q.a_size,
            ch.x_size(),
            ch.a_size()
        )));
    }
    let channel_rows: Vec<f64> = (0..q.x_size)
        .flat_map(|x| (0..q.a_size).map(move |a| *ch.prob(a, x)))
        .collect();
    let divergence = cond_rel_entropy(&q.conditional(), &channel_rows, &q.x_marginal(), q.a_size);
    if divergence.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(mutual_info(q) - 2.0 * divergence - (q.x_size as f64).log2())
}

/// Closed form of the BSC exponent limit: `log2(1 - 2 a (1 - a))`.
pub fn bsc_exponent_closed_form(alpha: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
    }
    Ok((1.0 - 2.0 * alpha * (1.0 - alpha)).log2())
}

/// Maximize the exponent objective over joint distributions.
///
/// Multi-start projected coordinate ascent (golden-section line search on
/// mass transfers between pairs of entries), seeded from Dirichlet-like
/// random points plus the channel joint itself. For 2x2 channels the
/// symmetric one-parameter family `Q(0,0)=Q(1,1)=c`, `Q(0,1)=Q(1,0)=1/2-c`
/// is also searched directly and the better result returned.
pub fn optimize_exponent(ch: &Channel<f64>, seed: u64) -> Result<(f64, JointDist)> {
    let x_size = ch.x_size();
    let a_size = ch.a_size();
    let len = x_size * a_size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let eval = |probs: &[f64]| -> f64 {
        let q = JointDist {
            x_size,
            a_size,
            probs: probs.to_vec(),
        };
        exponent_objective(&q, ch).expect("shape fixed")
    };

    // Start from the channel joint with uniform input.
    let channel_joint: Vec<f64> = (0..x_size)
        .flat_map(|x| (0..a_size).map(move |a| ch.prob(a, x) / x_size as f64))
        .collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    const STARTS: usize = 32;
    for start in 0..STARTS {
        let mut probs = if start == 0 {
            channel_joint.clone()
        } else {
            let mut w: Vec<f64> = (0..len).map(|_| -rng.gen::<f64>().ln()).collect();
            let t: f64 = w.iter().sum();
            for v in w.iter_mut() {
                *v /= t;
            }
            w
        };
        let value = coordinate_ascent(&mut probs, &eval);
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, probs));
        }
    }
    let (mut best_value, mut best_probs) = best.expect("at least one start");

    if x_size == 2 && a_size == 2 {
        // Symmetric reduction: single parameter c in [0, 1/2].
        let f = |c: f64| eval(&[c, 0.5 - c, 0.5 - c, c]);
        let c = golden_section_max(&f, 0.0, 0.5, 1e-14);
        let v = f(c);
        if v > best_value {
            best_value = v;
            best_probs = vec![c, 0.5 - c, 0.5 - c, c];
        }
    }

    Ok((
        best_value,
        JointDist {
            x_size,
            a_size,
            probs: best_probs,
        },
    ))
}

/// Sweeps of pairwise mass transfers until no sweep improves the objective.
fn coordinate_ascent(probs: &mut [f64], eval: &impl Fn(&[f64]) -> f64) -> f64 {
    let len = probs.len();
    let mut value = eval(probs);
    for _ in 0..200 {
        let before = value;
        for i in 0..len {
            for j in 0..len {
                if i == j {
                    continue;
                }
                // Move t of mass from j to i, t in [0, probs[j]].
                let pi = probs[i];
                let pj = probs[j];
                if pj <= 0.0 {
                    continue;
                }
                let f = |t: f64| {
                    let mut w = probs.to_vec();
                    w[i] = pi + t;
                    w[j] = pj - t;
                    eval(&w)
                };
                let t = golden_section_max(&f, 0.0, pj, 1e-13);
                let v = f(t);
                if v > value {
                    probs[i] = pi + t;
                    probs[j] = pj - t;
                    value = v;
                }
            }
        }
        if value - before < 1e-13 {
            break;
        }
    }
    value
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// One row of the finite-n exponent table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentRow {
    pub n: usize,
    pub alpha: f64,
    pub best_d: usize,
    pub log_w_over_n: f64,
    pub limit: f64,
}

/// `max_d log2(qnd(n, d, alpha)) / n` for each requested block length and
/// noise level, together with the asymptotic limit.
pub fn finite_n_exponent_table(n_list: &[usize], alpha_grid: &[f64]) -> Result<Vec<ExponentRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        if n == 0 || n > 64 {
            return Err(Error::Domain(format!(
                "block length {n} outside the supported range 1..=64"
            )));
        }
        for &alpha in alpha_grid {
            if !(0.0..=0.5).contains(&alpha) {
                return Err(Error::Domain(format!("alpha {alpha} outside [0, 1/2]")));
            }
            let (best_d, best_log) = (0..=n)
                .map(|d| (d, log2_qnd(n, d, alpha)))
                .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite logs"))
                .expect("at least d = 0");
            rows.push(ExponentRow {
                n,
                alpha,
                best_d,
                log_w_over_n: best_log / n as f64,
                limit: bsc_exponent_closed_form(alpha)?,
            });
        }
    }
    Ok(rows)
}

fn log2_qnd(n: usize, d: usize, alpha: f64) -> f64 {
    let mut volume = 0.0f64;
    let mut tail = 0.0f64;
    for i in 0..=d {
        let c = binomial_f64(n, i);
        volume += c;
        tail += c * alpha.powi(i as i32) * (1.0 - alpha).powi((n - i) as i32);
    }
    2.0 * tail.log2() - volume.log2()
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    if n <= 28 {
        return binomial(n, k) as f64;
    }
    let k = k.min(n - k);
    let mut r = 1.0f64;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}
