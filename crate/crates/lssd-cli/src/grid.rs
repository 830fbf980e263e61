//! Noise-level grids. Parsed from `start:stop:steps`; bounds may be written
//! as decimals or fractions and are kept exact so that rational sweeps hit
//! exactly the requested points.

use lssd_core::scalar::{parse_rational, Rational, Scalar};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct AlphaGrid {
    pub start: Rational,
    pub stop: Rational,
    pub steps: usize,
}

impl AlphaGrid {
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:steps, got {text:?}"));
        }
        let start = parse_decimal_or_fraction(parts[0])?;
        let stop = parse_decimal_or_fraction(parts[1])?;
        let steps: usize = parts[2]
            .parse()
            .map_err(|e| format!("bad step count {:?}: {e}", parts[2]))?;
        if steps < 1 {
            return Err("steps must be at least 1".into());
        }
        let half = Rational::new(1.into(), 2.into());
        if start < Rational::zero() || stop > half || start > stop {
            return Err(format!("grid [{start}, {stop}] must lie within [0, 1/2]"));
        }
        Ok(AlphaGrid { start, stop, steps })
    }

    pub fn values(&self) -> Vec<Rational> {
        if self.steps == 1 {
            return vec![self.start.clone()];
        }
        let span = self.stop.clone() - &self.start;
        (0..self.steps)
            .map(|i| {
                self.start.clone()
                    + span.clone()
                        * Rational::new((i as i64).into(), ((self.steps - 1) as i64).into())
            })
            .collect()
    }

    pub fn float_values(&self) -> Vec<f64> {
        self.values().iter().map(Scalar::to_f64).collect()
    }
}

/// `"0.325"` or `"13/40"` to an exact rational.
pub fn parse_decimal_or_fraction(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if text.contains('/') {
        return parse_rational(text);
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    let negative = int_part.starts_with('-');
    let digits: String = int_part
        .trim_start_matches(['-', '+'])
        .chars()
        .chain(frac_part.chars())
        .collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad number {text:?}"));
    }
    let numer: num_bigint::BigInt = digits.parse().map_err(|e| format!("{e}"))?;
    let denom = num_bigint::BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}
