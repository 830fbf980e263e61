//! Error-correcting codes and list-decoding schemes as strategy generators
//! for n-fold channel games.
//!
//! A plain code gives both players the estimation function `Enc . Dec`
//! (decode, then re-encode): they win when the hidden string is a codeword
//! and both decodings succeed. A list-decoding scheme generalizes this to a
//! no-signalling strategy in which each party outputs one element of the
//! encoded candidate list, paired up between the parties; the Hamming-ball
//! family `Q_n^d` is the special case of list-decoding with balls around the
//! received word.

use std::fs;
use std::path::Path;

use crate::classical::DeterministicStrategy;
use crate::error::{Error, Result};
use crate::game::{Channel, DEFAULT_TABLE_BUDGET};
use crate::nosig::{binomial, Behavior, BehaviorShape};
use crate::scalar::Scalar;

/// A block code with explicit encoder and (list) decoder tables.
///
/// Strings over the alphabets are flat little-endian indices: symbol `k` of
/// a string is digit `k` (least significant first) in base `x_size` resp.
/// `a_size`. `dec[a]` is the sorted candidate-message list for the received
/// string `a`; plain codes have `list_size == 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    x_size: usize,
    a_size: usize,
    enc: Vec<usize>,
    dec: Vec<Vec<usize>>,
    list_size: usize,
}

impl Code {
    pub fn new(
        n: usize,
        x_size: usize,
        a_size: usize,
        enc: Vec<usize>,
        dec: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::Domain(format!(
                "block length {n} outside the supported range 1..=16"
            )));
        }
        let messages = enc.len();
        if messages == 0 {
            return Err(Error::Domain("empty message set".into()));
        }
        let x_space = (x_size as u128).pow(n as u32);
        if enc.iter().any(|&c| (c as u128) >= x_space) {
            return Err(Error::Domain("encoder entry outside X^n".into()));
        }
        if dec.len() as u128 != (a_size as u128).pow(n as u32) {
            return Err(Error::Shape(format!(
                "decoder table has {} entries, expected {}^{n}",
                dec.len(),
                a_size
            )));
        }
        let list_size = dec.first().map_or(0, Vec::len);
        if list_size == 0 {
            return Err(Error::Domain("empty decode list".into()));
        }
        for (a, list) in dec.iter().enumerate() {
            if list.len() != list_size {
                return Err(Error::Domain(format!(
                    "decode list for {a} has {} entries, expected {list_size}",
                    list.len()
                )));
            }
            if list.iter().any(|&m| m >= messages) {
                return Err(Error::Domain(format!(
                    "decode list for {a} names an unknown message"
                )));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(format!(
                    "decode list for {a} is not sorted and distinct"
                )));
            }
        }
        Ok(Code {
            n,
            x_size,
            a_size,
            enc,
            dec,
            list_size,
        })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.enc.len()
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn encode(&self, message: usize) -> usize {
        self.enc[message]
    }

    pub fn decode(&self, received: usize) -> &[usize] {
        &self.dec[received]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "messages": self.enc.len(),
            "list_size": self.list_size,
            "x_size": self.x_size,
            "a_size": self.a_size,
            "enc": self.enc,
            "dec": self.dec,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let get_usize = |field: &str, default: Option<usize>| -> Result<usize> {
            match value.get(field) {
                None => default.ok_or_else(|| Error::parse(field, "missing field")),
                Some(v) => v
                    .as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::parse(field, "expected an integer")),
            }
        };
        let n = get_usize("n", None)?;
        let messages = get_usize("messages", None)?;
        let list_size = get_usize("list_size", Some(1))?;
        let x_size = get_usize("x_size", Some(2))?;
        let a_size = get_usize("a_size", Some(2))?;
        let enc: Vec<usize> = value
            .get("enc")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::parse("enc", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::parse(format!("enc[{i}]"), "expected an integer"))
            })
            .collect::<Result<_>>()?;
        if enc.len() != messages {
            return Err(Error::parse(
                "enc",
                format!("{} entries for {} messages", enc.len(), messages),
            ));
        }
        let dec: Vec<Vec<usize>> = value
            .get("dec")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::parse("dec", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, list)| {
                list.as_array()
                    .ok_or_else(|| Error::parse(format!("dec[{i}]"), "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        v.as_u64().map(|x| x as usize).ok_or_else(|| {
                            Error::parse(format!("dec[{i}][{k}]"), "expected an integer")
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        let code = Code::new(n, x_size, a_size, enc, dec)?;
        if code.list_size != list_size {
            return Err(Error::parse(
                "list_size",
                format!("declared {list_size}, actual {}", code.list_size),
            ));
        }
        Ok(code)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}

/// The length-`n` binary repetition code with majority decoding. `n` must be
/// odd so that the majority is always defined.
pub fn repetition_code(n: usize) -> Result<Code> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "repetition code needs odd length, got {n}"
        )));
    }
    let all_ones = (1usize << n) - 1;
    let dec = (0..1usize << n)
        .map(|a| {
            if (a as u32).count_ones() as usize > n / 2 {
                vec![1]
            } else {
                vec![0]
            }
        })
        .collect();
    Code::new(n, 2, 2, vec![0, all_ones], dec)
}

/// The identity code: every string is a codeword and decodes to itself.
pub fn identity_code(n: usize) -> Result<Code> {
    let size = 1usize << n;
    Code::new(
        n,
        2,
        2,
        (0..size).collect(),
        (0..size).map(|a| vec![a]).collect(),
    )
}

/// The (7,4) Hamming code. Bit `i` of a codeword index is position `i+1` of
/// the string `d1 d2 d3 d4 p1 p2 p3`, with parities `p1 = d1^d2^d4`,
/// `p2 = d1^d3^d4`, `p3 = d2^d3^d4`. The decoder corrects exactly zero or
/// one flipped bit.
pub fn hamming_7_4() -> Code {
    let encode = |m: usize| -> usize {
        let d1 = m & 1;
        let d2 = (m >> 1) & 1;
        let d3 = (m >> 2) & 1;
        let d4 = (m >> 3) & 1;
        let p1 = d1 ^ d2 ^ d4;
        let p2 = d1 ^ d3 ^ d4;
        let p3 = d2 ^ d3 ^ d4;
        m | (p1 << 4) | (p2 << 5) | (p3 << 6)
    };
    let enc: Vec<usize> = (0..16).map(encode).collect();

    let mut dec = Vec::with_capacity(128);
    for a in 0..128usize {
        let expected = encode(a & 0b1111);
        let syndrome = ((a ^ expected) >> 4) & 0b111; // wrong-parity pattern (p1, p2, p3)
        let flip = match syndrome {
            0b000 => 0usize,
            0b011 => 1 << 0, // p1 and p2 wrong: d1
            0b101 => 1 << 1, // p1 and p3 wrong: d2
            0b110 => 1 << 2, // p2 and p3 wrong: d3
            0b111 => 1 << 3, // all wrong: d4
            0b001 => 1 << 4, // only p1
            0b010 => 1 << 5, // only p2
            _ => 1 << 6,     // only p3
        };
        dec.push(vec![(a ^ flip) & 0b1111]);
    }
    Code::new(7, 2, 2, enc, dec).expect("hamming tables are consistent")
}

/// The radius-`d` Hamming-ball list code: every string is a codeword and the
/// decode list of `a` is the ball of radius `d` around it.
pub fn ball_list_code(n: usize, radius: usize) -> Result<Code> {
    if radius > n {
        return Err(Error::Domain(format!(
            "radius {radius} exceeds block length {n}"
        )));
    }
    let size = 1usize << n;
    let dec = (0..size)
        .map(|a| {
            (0..size)
                .filter(|&x| ((x ^ a) as u32).count_ones() as usize <= radius)
                .collect()
        })
        .collect();
    Code::new(n, 2, 2, (0..size).collect(), dec)
}

/// Both players decode and re-encode: the deterministic strategy
/// `f = Enc . Dec` on the `n`-fold channel game. Requires a plain code.
pub fn strategy_from_code(code: &Code) -> Result<DeterministicStrategy> {
    if code.list_size != 1 {
        return Err(Error::Domain(format!(
            "list size {} > 1: use list_behavior for list codes",
            code.list_size
        )));
    }
    let table: Vec<usize> = code.dec.iter().map(|list| code.enc[list[0]]).collect();
    Ok(DeterministicStrategy::symmetric(table, 2))
}

/// Winning probability of the `Enc . Dec` strategy on the two-player
/// `n`-fold game of `ch`, in the inner-product form
/// `(1/|X|^n) sum_x P(f^{-1}(x) | x)^2`.
pub fn code_strategy_win_prob<S: Scalar>(code: &Code, ch: &Channel<S>) -> Result<S> {
    if code.list_size != 1 {
        return Err(Error::Domain(
            "list codes have no deterministic value".into(),
        ));
    }
    check_channel_shape(code, ch)?;
    let x_space = code.x_size.pow(code.n as u32);
    let mut q = vec![S::zero(); x_space];
    for (a, list) in code.dec.iter().enumerate() {
        let x = code.enc[list[0]];
        q[x] += &ch.n_fold_prob(code.n, x, a);
    }
    let mut total = S::zero();
    for qx in q {
        if !qx.is_zero() {
            total += &(qx.clone() * &qx);
        }
    }
    Ok(total / S::from_ratio(x_space as i64, 1))
}

fn check_channel_shape<S: Scalar>(code: &Code, ch: &Channel<S>) -> Result<()> {
    if ch.x_size() != code.x_size || ch.a_size() != code.a_size {
        return Err(Error::Shape(format!(
            "code alphabets {}x{} do not match channel {}x{}",
            code.x_size,
            code.a_size,
            ch.x_size(),
            ch.a_size()
        )));
    }
    Ok(())
}

/// Minimum over messages of the probability that the decode list contains
/// the sent message, by exact summation over `A^n`.
pub fn code_min_success<S: Scalar>(code: &Code, ch: &Channel<S>) -> Result<S> {
    code_min_success_with_budget(code, ch, DEFAULT_TABLE_BUDGET)
}

pub fn code_min_success_with_budget<S: Scalar>(
    code: &Code,
    ch: &Channel<S>,
    budget: u128,
) -> Result<S> {
    check_channel_shape(code, ch)?;
    let a_space = (code.a_size as u128).pow(code.n as u32);
    let required = a_space * code.list_size as u128;
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let mut success = vec![S::zero(); code.enc.len()];
    for (a, list) in code.dec.iter().enumerate() {
        for &m in list {
            success[m] += &ch.n_fold_prob(code.n, code.enc[m], a);
        }
    }
    Ok(success
        .into_iter()
        .min_by(|a, b| a.partial_cmp(b).expect("probabilities are ordered"))
        .expect("at least one message"))
}

/// Monte Carlo estimate of [`code_min_success`] for when the exact sum is
/// over budget. Deterministic for a fixed seed.
pub fn code_min_success_mc(
    code: &Code,
    ch: &Channel<f64>,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    use rand::Rng;
    use rand::SeedableRng;
    check_channel_shape(code, ch)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for (m, &codeword) in code.enc.iter().enumerate() {
        let mut hits = 0usize;
        for _ in 0..samples {
            let mut received = 0usize;
            let mut x = codeword;
            for k in 0..code.n {
                let sym = x % code.x_size;
                x /= code.x_size;
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut out = code.a_size - 1;
                for a in 0..code.a_size {
                    acc += ch.prob(a, sym);
                    if u < acc {
                        out = a;
                        break;
                    }
                }
                received += out * code.a_size.pow(k as u32);
            }
            if code.dec[received].binary_search(&m).is_ok() {
                hits += 1;
            }
        }
        worst = worst.min(hits as f64 / samples as f64);
    }
    Ok(worst)
}

/// The list-decoding no-signalling strategy of a code: each party outputs an
/// element of the encoded candidate list of its received word, with shared
/// elements self-paired and the remainders matched in lexicographic order.
pub fn list_behavior<S: Scalar>(code: &Code) -> Result<Behavior<S>> {
    let x_space = code.x_size.pow(code.n as u32);
    let a_space = code.a_size.pow(code.n as u32);
    let shape = BehaviorShape {
        x_size: x_space,
        input_sizes: vec![a_space, a_space],
    };
    // Candidate codeword sets; the pairing needs them sorted and duplicate
    // free, so the encoder must be injective on every decode list.
    let mut supports: Vec<Vec<usize>> = Vec::with_capacity(a_space);
    for list in &code.dec {
        let mut s: Vec<usize> = list.iter().map(|&m| code.enc[m]).collect();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(
                "encoder is not injective on a decode list".into(),
            ));
        }
        supports.push(s);
    }
    let weight = S::from_ratio(1, code.list_size as i64);
    let mut cond = vec![S::zero(); shape.table_len()];
    for a in 0..a_space {
        for b in 0..a_space {
            let sa = &supports[a];
            let sb = &supports[b];
            let mut only_a = Vec::new();
            let mut only_b = Vec::new();
            for &x in sa {
                if sb.binary_search(&x).is_ok() {
                    cond[shape.index(&[x, x], &[a, b])] = weight.clone();
                } else {
                    only_a.push(x);
                }
            }
            for &y in sb {
                if sa.binary_search(&y).is_err() {
                    only_b.push(y);
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

/// Winning probability of the list-decoding strategy of `code` on the
/// two-player `n`-fold game of `ch`: `(1/(L |X|^n)) sum_x q(x)^2` with
/// `q(x)` the probability that `x` appears on the candidate list. Matches
/// [`list_behavior`] evaluated on the game table.
pub fn list_strategy_win_prob<S: Scalar>(code: &Code, ch: &Channel<S>) -> Result<S> {
    check_channel_shape(code, ch)?;
    let x_space = code.x_size.pow(code.n as u32);
    let mut q = vec![S::zero(); x_space];
    for (a, list) in code.dec.iter().enumerate() {
        for &m in list {
            let x = code.enc[m];
            q[x] += &ch.n_fold_prob(code.n, x, a);
        }
    }
    let mut total = S::zero();
    for qx in q {
        if !qx.is_zero() {
            total += &(qx.clone() * &qx);
        }
    }
    Ok(total / S::from_ratio((code.list_size * x_space) as i64, 1))
}

/// Winning probability of the majority strategy on `n` (odd) copies of the
/// BSC: `(1/2^{n-1}) (sum_{i<=(n-1)/2} C(n,i) a^i (1-a)^{n-i})^2`.
pub fn majority_win_prob<S: Scalar>(n: usize, alpha: &S) -> Result<S> {
    if n.is_multiple_of(2) {
        return Err(Error::Domain("majority needs an odd block length".into()));
    }
    let mut tail = S::zero();
    let one_minus = S::one() - alpha.clone();
    for i in 0..=(n - 1) / 2 {
        let mut term = S::from_ratio(binomial(n, i) as i64, 1);
        for _ in 0..i {
            term *= alpha;
        }
        for _ in 0..(n - i) {
            term *= &one_minus;
        }
        tail += &term;
    }
    Ok(tail.clone() * tail / S::from_ratio(1 << (n - 1), 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::eval_deterministic;
    use crate::game::{bsc_channel, bsc_game};
    use crate::nosig::{eval_behavior, hamming_ball_behavior, qnd_win_prob};
    use crate::scalar::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn repetition_decodes_by_majority() {
        let code = repetition_code(3).unwrap();
        assert_eq!(code.decode(0b001), &[0]);
        assert_eq!(code.decode(0b110), &[1]);
        assert_eq!(code.decode(0b101), &[1]);
        assert!(repetition_code(4).is_err());
    }

    #[test]
    fn repetition_strategy_is_the_majority_strategy() {
        let alpha = rat(3, 10);
        let ch = bsc_channel(alpha.clone()).unwrap();
        let code = repetition_code(3).unwrap();
        let v = code_strategy_win_prob(&code, &ch).unwrap();
        assert_eq!(v, majority_win_prob(3, &alpha).unwrap());
        assert_eq!(v, rat(153664, 1000000)); // 0.153664

        // And it matches the direct table evaluation on the 3-fold game.
        let g = bsc_game(alpha, 2, 3).unwrap();
        let s = strategy_from_code(&code).unwrap();
        assert_eq!(eval_deterministic(&g, &s).unwrap(), v);
    }

    #[test]
    fn repetition_length_one_is_identity() {
        let code = repetition_code(1).unwrap();
        let s = strategy_from_code(&code).unwrap();
        assert_eq!(s.tables[0], vec![0, 1]);
    }

    #[test]
    fn hamming_corrects_single_flips() {
        let code = hamming_7_4();
        assert_eq!(code.encode(0), 0);
        for m in 0..16usize {
            let c = code.encode(m);
            assert_eq!(code.decode(c), &[m]);
            for bit in 0..7 {
                assert_eq!(code.decode(c ^ (1 << bit)), &[m], "m={m} bit={bit}");
            }
        }
    }

    #[test]
    fn hamming_decoder_is_total_and_balanced() {
        // Perfect code: every string decodes to the message whose codeword
        // lies within distance one, so each message owns exactly 8 strings.
        let code = hamming_7_4();
        let mut counts = [0usize; 16];
        for a in 0..128 {
            counts[code.decode(a)[0]] += 1;
        }
        assert!(counts.iter().all(|&c| c == 8));
    }

    #[test]
    fn hamming_success_and_strategy_value() {
        let alpha = rat(1, 10);
        let ch = bsc_channel(alpha.clone()).unwrap();
        let code = hamming_7_4();
        let min_success = code_min_success(&code, &ch).unwrap();
        // (1-a)^7 + 7 a (1-a)^6 at a = 1/10.
        let om = rat(9, 10);
        let expect = om.clone().pow(7) + rat(7, 10) * om.pow(6);
        assert_eq!(min_success, expect);

        let v = code_strategy_win_prob(&code, &ch).unwrap();
        assert_eq!(v, rat(16, 128) * min_success.clone() * &min_success);
    }

    #[test]
    fn min_success_examples() {
        let alpha = rat(3, 10);
        let ch = bsc_channel(alpha).unwrap();
        let rep = repetition_code(3).unwrap();
        // sum_{i<=1} C(3,i) a^i (1-a)^{3-i} = 0.784.
        assert_eq!(code_min_success(&rep, &ch).unwrap(), rat(784, 1000));
        let id = identity_code(3).unwrap();
        assert_eq!(code_min_success(&id, &ch).unwrap(), rat(343, 1000));
        let err = code_min_success_with_budget(&rep, &ch, 4).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn monte_carlo_tracks_exact_value() {
        let ch = bsc_channel(0.3f64).unwrap();
        let rep = repetition_code(3).unwrap();
        let exact = code_min_success(&rep, &ch).unwrap();
        let mc = code_min_success_mc(&rep, &ch, 40_000, 0).unwrap();
        assert!((mc - exact).abs() < 0.01, "mc={mc} exact={exact}");
        // Same seed, same estimate.
        assert_eq!(mc, code_min_success_mc(&rep, &ch, 40_000, 0).unwrap());
    }

    #[test]
    fn strategy_lower_bound_from_min_success() {
        // value >= (M / |X|^n) * min_success^2 for every plain code.
        let alpha = rat(1, 5);
        let ch = bsc_channel(alpha).unwrap();
        for code in [
            repetition_code(3).unwrap(),
            hamming_7_4(),
            identity_code(2).unwrap(),
        ] {
            let v = code_strategy_win_prob(&code, &ch).unwrap();
            let s = code_min_success(&code, &ch).unwrap();
            let m = rat(
                code.message_count() as i64,
                code.x_size().pow(code.block_length() as u32) as i64,
            );
            assert!(v >= m * s.clone() * s);
        }
    }

    #[test]
    fn ball_list_code_reproduces_hamming_ball_behavior() {
        for n in 1..=4usize {
            for d in 0..=n {
                let code = ball_list_code(n, d).unwrap();
                let b: Behavior<Rational> = list_behavior(&code).unwrap();
                let reference: Behavior<Rational> = hamming_ball_behavior(n, d).unwrap();
                assert_eq!(b, reference, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn plain_code_list_behavior_is_the_deterministic_embedding() {
        let code = repetition_code(3).unwrap();
        let b: Behavior<Rational> = list_behavior(&code).unwrap();
        let s = strategy_from_code(&code).unwrap();
        let shape = BehaviorShape {
            x_size: 8,
            input_sizes: vec![8, 8],
        };
        assert_eq!(b, Behavior::from_deterministic(shape, &s));
        assert!(strategy_from_code(&ball_list_code(2, 1).unwrap()).is_err());
    }

    #[test]
    fn list_behavior_value_matches_quadratic_form() {
        // value = (1/L) (1/|X|^n) sum_x q(x)^2 with q(x) the list-hit mass.
        let alpha = rat(3, 10);
        let ch = bsc_channel(alpha.clone()).unwrap();
        for (n, d) in [(2usize, 1usize), (3, 1), (3, 2)] {
            let code = ball_list_code(n, d).unwrap();
            let g = bsc_game(alpha.clone(), 2, n).unwrap();
            let b: Behavior<Rational> = list_behavior(&code).unwrap();
            let direct = eval_behavior(&g, &b).unwrap();

            let x_space = 1usize << n;
            let mut q = vec![rat(0, 1); x_space];
            for (a, list) in code.dec.iter().enumerate() {
                for &m in list {
                    let x = code.enc[m];
                    q[x] += ch.n_fold_prob(n, x, a);
                }
            }
            let quad: Rational = q.into_iter().map(|v| v.clone() * v).sum();
            let expect = quad / rat((code.list_size * x_space) as i64, 1);
            assert_eq!(direct, expect, "n={n} d={d}");
            assert_eq!(direct, qnd_win_prob(n, d, &alpha).unwrap());
        }
    }

    #[test]
    fn hamming_advantage_window() {
        // The Hamming-7 strategy beats the identity only for roughly
        // alpha > 0.207: (1+6a)^2/8 > (1-a)^2 there. At low noise the
        // identity strategy dominates everything.
        let value = |alpha: f64| {
            let ch = bsc_channel(alpha).unwrap();
            code_strategy_win_prob(&hamming_7_4(), &ch).unwrap()
        };
        let alpha = 0.25f64;
        let hamming = value(alpha);
        assert!(hamming > (1.0 - alpha).powi(14));
        assert!(hamming > 1.0 / 128.0);
        assert!(hamming > majority_win_prob(7, &alpha).unwrap());

        let alpha = 0.1f64;
        let hamming = value(alpha);
        assert!(
            hamming < (1.0 - alpha).powi(14),
            "identity wins at low noise"
        );
        assert!(hamming > 1.0 / 128.0);
        assert!(hamming > majority_win_prob(7, &alpha).unwrap());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let code = hamming_7_4();
        let path = std::env::temp_dir().join("lssd_code_roundtrip.json");
        code.save(&path).unwrap();
        assert_eq!(Code::load(&path).unwrap(), code);
        std::fs::remove_file(&path).ok();

        let bad = serde_json::json!({
            "n": 2, "messages": 2, "list_size": 1,
            "enc": [0, 3],
            "dec": [[0], [0], [1]],
        });
        assert!(Code::from_json(&bad).is_err());
        let unsorted = serde_json::json!({
            "n": 1, "messages": 2, "list_size": 2,
            "enc": [0, 1],
            "dec": [[1, 0], [0, 1]],
        });
        assert!(Code::from_json(&unsorted).is_err());
    }
}
