//! LSSD games with classical inputs: joint probability tables, channel games,
//! parallel repetition and the JSON file format.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on dense table sizes (number of elements).
pub const DEFAULT_TABLE_BUDGET: u128 = 1 << 26;

/// A memoryless channel `P(a|x)`, stored row-major (one row per input `x`).
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<S> {
    x_size: usize,
    a_size: usize,
    cond_probs: Vec<S>,
}

impl<S: Scalar> Channel<S> {
    /// Build a channel from its conditional table; every row must be a
    /// probability distribution.
    pub fn new(x_size: usize, a_size: usize, cond_probs: Vec<S>) -> Result<Self> {
        if x_size == 0 || a_size == 0 {
            return Err(Error::Shape("channel alphabets must be non-empty".into()));
        }
        if cond_probs.len() != x_size * a_size {
            return Err(Error::Shape(format!(
                "channel table has {} entries, expected {}",
                cond_probs.len(),
                x_size * a_size
            )));
        }
        for (i, p) in cond_probs.iter().enumerate() {
            if *p < S::zero() {
                return Err(Error::Domain(format!("channel entry {i} is negative")));
            }
        }
        for x in 0..x_size {
            let row_sum: S = cond_probs[x * a_size..(x + 1) * a_size]
                .iter()
                .cloned()
                .sum();
            if !row_sum.close_to(&S::one()) {
                return Err(Error::Normalization(format!(
                    "channel row {x} sums to {row_sum}"
                )));
            }
        }
        Ok(Channel {
            x_size,
            a_size,
            cond_probs,
        })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn a_size(&self) -> usize {
        self.a_size
    }

    pub fn prob(&self, a: usize, x: usize) -> &S {
        &self.cond_probs[x * self.a_size + a]
    }

    /// `P^{x n}(a^n | x^n)` for flat little-endian string indices: slot `k` is
    /// digit `k` (least significant first) in base `|A|` resp. `|X|`.
    pub fn n_fold_prob(&self, n: usize, x_index: usize, a_index: usize) -> S {
        let mut x = x_index;
        let mut a = a_index;
        let mut p = S::one();
        for _ in 0..n {
            p *= self.prob(a % self.a_size, x % self.x_size);
            x /= self.x_size;
            a /= self.a_size;
        }
        p
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Channel<T> {
        Channel {
            x_size: self.x_size,
            a_size: self.a_size,
            cond_probs: self.cond_probs.iter().map(f).collect(),
        }
    }
}

/// Binary symmetric channel with flip probability `alpha` in `[0, 1/2]`.
pub fn bsc_channel<S: Scalar>(alpha: S) -> Result<Channel<S>> {
    if alpha < S::zero() || alpha > S::from_ratio(1, 2) {
        return Err(Error::Domain(format!(
            "BSC flip probability {alpha} outside [0, 1/2]"
        )));
    }
    let keep = S::one() - alpha.clone();
    Channel::new(2, 2, vec![keep.clone(), alpha.clone(), alpha, keep])
}

/// Dense joint probability table `P(x, a_1, ..., a_m)` of an `m`-party LSSD
/// game.
///
/// Flat index order: `x` varies slowest, then `a_1`, ..., with `a_m` fastest.
/// Tables are immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTable<S> {
    num_players: usize,
    x_size: usize,
    input_sizes: Vec<usize>,
    probs: Vec<S>,
}

impl<S: Scalar> GameTable<S> {
    /// Validate and build a game table. Entries must be nonnegative and sum
    /// to one (exactly in rational mode, within `1e-12` in float mode).
    pub fn new(x_size: usize, input_sizes: Vec<usize>, probs: Vec<S>) -> Result<Self> {
        if x_size < 2 {
            return Err(Error::Shape("|X| must be at least 2".into()));
        }
        if input_sizes.is_empty() {
            return Err(Error::Shape("need at least one player".into()));
        }
        if input_sizes.contains(&0) {
            return Err(Error::Shape("input alphabets must be non-empty".into()));
        }
        let expected: usize = x_size * input_sizes.iter().product::<usize>();
        if probs.len() != expected {
            return Err(Error::Shape(format!(
                "table has {} entries, expected {}",
                probs.len(),
                expected
            )));
        }
        for (i, p) in probs.iter().enumerate() {
            if *p < S::zero() {
                return Err(Error::Domain(format!("table entry {i} is negative")));
            }
        }
        let total: S = probs.iter().cloned().sum();
        if !total.close_to(&S::one()) {
            return Err(Error::Normalization(format!("table sums to {total}")));
        }
        Ok(GameTable {
            num_players: input_sizes.len(),
            x_size,
            input_sizes,
            probs,
        })
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn input_sizes(&self) -> &[usize] {
        &self.input_sizes
    }

    /// Product of all input alphabet sizes.
    pub fn joint_input_size(&self) -> usize {
        self.input_sizes.iter().product()
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    /// Flat index of `(x, a_1, ..., a_m)`.
    pub fn flat_index(&self, x: usize, inputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.num_players);
        let mut idx = x;
        for (a, size) in inputs.iter().zip(&self.input_sizes) {
            debug_assert!(a < size);
            idx = idx * size + a;
        }
        idx
    }

    pub fn prob(&self, x: usize, inputs: &[usize]) -> &S {
        &self.probs[self.flat_index(x, inputs)]
    }

    /// Iterate `(x, inputs, p)` over all table entries in flat order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Vec<usize>, &S)> + '_ {
        let m = self.num_players;
        self.probs.iter().enumerate().map(move |(idx, p)| {
            let mut rest = idx;
            let mut inputs = vec![0usize; m];
            for i in (0..m).rev() {
                inputs[i] = rest % self.input_sizes[i];
                rest /= self.input_sizes[i];
            }
            (rest, inputs, p)
        })
    }

    /// Marginal distribution of the hidden value.
    pub fn x_marginal(&self) -> Vec<S> {
        let block: usize = self.joint_input_size();
        (0..self.x_size)
            .map(|x| self.probs[x * block..(x + 1) * block].iter().cloned().sum())
            .collect()
    }

    /// `n`-fold parallel repetition. Strings are indexed little-endian in the
    /// repetition slot: slot `k` of a composite symbol is digit `k`, least
    /// significant first.
    pub fn parallel_repetition(&self, n: usize) -> Result<Self> {
        self.parallel_repetition_with_budget(n, DEFAULT_TABLE_BUDGET)
    }

    pub fn parallel_repetition_with_budget(&self, n: usize, budget: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("repetition count must be positive".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let mut required: u128 = (self.x_size as u128).pow(n as u32);
        for &s in &self.input_sizes {
            required = required.saturating_mul((s as u128).pow(n as u32));
        }
        if required > budget {
            return Err(Error::Budget { required, budget });
        }

        let x_size = self.x_size.pow(n as u32);
        let input_sizes: Vec<usize> = self.input_sizes.iter().map(|s| s.pow(n as u32)).collect();
        let total = required as usize;
        let m = self.num_players;

        let mut probs = Vec::with_capacity(total);
        let mut symbols = vec![0usize; 1 + m]; // composite (x, a_1, ..., a_m)
        let mut slot = vec![0usize; 1 + m];
        for idx in 0..total {
            // Decode the composite flat index (x slowest, a_m fastest).
            let mut rest = idx;
            for i in (1..=m).rev() {
                symbols[i] = rest % input_sizes[i - 1];
                rest /= input_sizes[i - 1];
            }
            symbols[0] = rest;

            let mut p = S::one();
            let mut x = symbols[0];
            for (i, s) in slot.iter_mut().enumerate().skip(1) {
                *s = symbols[i];
            }
            for _ in 0..n {
                let xk = x % self.x_size;
                x /= self.x_size;
                let mut flat = xk;
                for i in 0..m {
                    let ak = slot[1 + i] % self.input_sizes[i];
                    slot[1 + i] /= self.input_sizes[i];
                    flat = flat * self.input_sizes[i] + ak;
                }
                p *= &self.probs[flat];
            }
            probs.push(p);
        }
        GameTable::new(x_size, input_sizes, probs)
    }

    /// Convert the table to a different scalar backend.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<GameTable<T>> {
        GameTable::new(
            self.x_size,
            self.input_sizes.clone(),
            self.probs.iter().map(f).collect(),
        )
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "players": self.num_players,
            "x_size": self.x_size,
            "input_sizes": self.input_sizes,
            "scalar": S::BACKEND_NAME,
            "probs": self.probs.iter().map(Scalar::encode_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let scalar = json_str(value, "scalar")?;
        if scalar != S::BACKEND_NAME {
            return Err(Error::parse(
                "scalar",
                format!("file is {scalar:?}, expected {:?}", S::BACKEND_NAME),
            ));
        }
        let players = json_usize(value, "players")?;
        let x_size = json_usize(value, "x_size")?;
        let input_sizes = value
            .get("input_sizes")
            .ok_or_else(|| Error::parse("input_sizes", "missing field"))?
            .as_array()
            .ok_or_else(|| Error::parse("input_sizes", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::parse(format!("input_sizes[{i}]"), "expected an integer"))
            })
            .collect::<Result<Vec<_>>>()?;
        if input_sizes.len() != players {
            return Err(Error::parse(
                "input_sizes",
                format!("{} entries for {} players", input_sizes.len(), players),
            ));
        }
        let probs = value
            .get("probs")
            .ok_or_else(|| Error::parse("probs", "missing field"))?
            .as_array()
            .ok_or_else(|| Error::parse("probs", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, v)| S::decode_json(v).map_err(|msg| Error::parse(format!("probs[{i}]"), msg)))
            .collect::<Result<Vec<_>>>()?;
        GameTable::new(x_size, input_sizes, probs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}

fn json_str<'v>(value: &'v serde_json::Value, field: &str) -> Result<&'v str> {
    value
        .get(field)
        .ok_or_else(|| Error::parse(field, "missing field"))?
        .as_str()
        .ok_or_else(|| Error::parse(field, "expected a string"))
}

fn json_usize(value: &serde_json::Value, field: &str) -> Result<usize> {
    value
        .get(field)
        .ok_or_else(|| Error::parse(field, "missing field"))?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(field, "expected an integer"))
}

/// The channel LSSD game: a uniform hidden value is sent to each of the `m`
/// players through independent copies of `ch`.
pub fn channel_game<S: Scalar>(ch: &Channel<S>, num_players: usize) -> Result<GameTable<S>> {
    if num_players < 2 {
        return Err(Error::Domain("a game needs at least two players".into()));
    }
    let x_size = ch.x_size();
    let a_size = ch.a_size();
    let total = x_size * a_size.pow(num_players as u32);
    let uniform = S::from_ratio(1, x_size as i64);
    let mut probs = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut inputs = vec![0usize; num_players];
        for a in inputs.iter_mut().rev() {
            *a = rest % a_size;
            rest /= a_size;
        }
        let x = rest;
        let mut p = uniform.clone();
        for &a in &inputs {
            p *= ch.prob(a, x);
        }
        probs.push(p);
    }
    GameTable::new(x_size, vec![a_size; num_players], probs)
}

/// The `n`-fold BSC game (`num_players` players, flip probability `alpha`).
pub fn bsc_game<S: Scalar>(alpha: S, num_players: usize, copies: usize) -> Result<GameTable<S>> {
    channel_game(&bsc_channel(alpha)?, num_players)?.parallel_repetition(copies)
}

/// Games as loaded from disk, preserving the file's scalar backend.
pub enum AnyGame {
    Rational(GameTable<crate::scalar::Rational>),
    Float(GameTable<f64>),
}

impl AnyGame {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        match json_str(&value, "scalar")? {
            "rational" => Ok(AnyGame::Rational(GameTable::from_json(&value)?)),
            "float" => Ok(AnyGame::Float(GameTable::from_json(&value)?)),
            other => Err(Error::parse(
                "scalar",
                format!("unknown backend {other:?} (use \"rational\" or \"float\")"),
            )),
        }
    }
}
