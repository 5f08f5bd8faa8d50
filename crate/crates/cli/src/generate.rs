//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stripack::geom::{Instance, Item};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Widths in `[1, W]`, heights in `[1, W]`.
    Uniform,
    /// Two rows of equal-height items, each row exactly `W` wide: the
    /// optimum is twice the common height, but finding it means splitting
    /// the widths into two halves of equal sum.
    Partition,
    /// Mostly narrow items taller than half the maximum height, plus a few
    /// small ones.
    TallHeavy,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Uniform => "uniform",
            Kind::Partition => "partition",
            Kind::TallHeavy => "tall-heavy",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Kind::Uniform),
            "partition" => Ok(Kind::Partition),
            "tall-heavy" => Ok(Kind::TallHeavy),
            _ => Err(format!("unknown kind `{s}` (uniform, partition, tall-heavy)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("strip width must be positive, got {0}")]
    Width(i64),
    #[error("a partition instance with {n} items needs W >= {need}, got {width}")]
    Partition { n: usize, width: i64, need: usize },
}

/// Cuts `total` into `parts` positive integers.
fn split<R: Rng>(rng: &mut R, total: i64, parts: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = rand::seq::index::sample(rng, (total - 1) as usize, parts - 1)
        .into_iter()
        .map(|c| c as i64 + 1)
        .collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let w = c - prev;
            prev = c;
            w
        })
        .collect()
}

pub fn generate(kind: Kind, n: usize, width: i64, seed: u64) -> Result<Instance, GenError> {
    if width < 1 {
        return Err(GenError::Width(width));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(n);
    match kind {
        Kind::Uniform => {
            for i in 0..n {
                items.push(Item::new(i as u32, rng.gen_range(1..=width), rng.gen_range(1..=width)));
            }
        }
        Kind::Partition => {
            let a = n.div_ceil(2);
            if a as i64 > width {
                return Err(GenError::Partition { n, width, need: a });
            }
            let h = rng.gen_range(1..=width.clamp(1, 4));
            let mut widths = Vec::new();
            if n > 0 {
                widths.extend(split(&mut rng, width, a));
            }
            if n > 1 {
                widths.extend(split(&mut rng, width, n - a));
            }
            // hide the rows
            for i in (1..widths.len()).rev() {
                widths.swap(i, rng.gen_range(0..=i));
            }
            for (i, w) in widths.into_iter().enumerate() {
                items.push(Item::new(i as u32, w, h));
            }
        }
        Kind::TallHeavy => {
            let hmax = width.max(2);
            let narrow = (width / 4).max(1);
            for i in 0..n {
                let (w, h) = if rng.gen_bool(0.7) {
                    (rng.gen_range(1..=narrow), rng.gen_range(hmax / 2 + 1..=hmax))
                } else {
                    (rng.gen_range(1..=width), rng.gen_range(1..=(hmax / 4).max(1)))
                };
                items.push(Item::new(i as u32, w, h));
            }
        }
    }
    Ok(Instance::new(width, items).expect("generated items fit the strip"))
}
