//! Exact assignment of items to capacity-bounded bins by a memoized search
//! over fill levels, and its use for tall items in height-pure boxes.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::geom::ItemId;
use crate::rational::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("state space of {0} exceeds the guard {1}")]
    TooLarge(u128, u128),
}

/// Bin index for every item such that no bin overflows, or `None`.
pub fn assign_bins(bins: &[i64], items: &[i64]) -> Result<Option<Vec<usize>>, DpError> {
    assign_bins_with_guard(bins, items, 50_000_000)
}

pub fn assign_bins_with_guard(bins: &[i64], items: &[i64], guard: u128) -> Result<Option<Vec<usize>>, DpError> {
    let n = items.len();
    let states = bins.iter().fold(n as u128 + 1, |acc, &c| acc.saturating_mul(c.max(0) as u128 + 1));
    if states > guard {
        return Err(DpError::TooLarge(states, guard));
    }
    if items.iter().any(|&a| a < 1) {
        return Ok(None);
    }
    let total: i64 = bins.iter().map(|&c| c.max(0)).sum();
    if items.iter().sum::<i64>() > total {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| items[b].cmp(&items[a]).then(a.cmp(&b)));
    let mut s = Dp { bins, items, order, fill: vec![0; bins.len()], pick: vec![0; n], dead: HashSet::new() };
    Ok(if s.run(0) { Some(s.pick) } else { None })
}

struct Dp<'a> {
    bins: &'a [i64],
    items: &'a [i64],
    order: Vec<usize>,
    fill: Vec<i64>,
    pick: Vec<usize>,
    dead: HashSet<(usize, Vec<i64>)>,
}

impl Dp<'_> {
    // bins of equal capacity are interchangeable: sort their levels
    fn key(&self, k: usize) -> (usize, Vec<i64>) {
        let mut by_cap: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (b, &c) in self.bins.iter().enumerate() {
            by_cap.entry(c).or_default().push(self.fill[b]);
        }
        let mut v = Vec::with_capacity(self.bins.len() + by_cap.len());
        for (c, mut levels) in by_cap {
            levels.sort_unstable();
            v.push(-c - 1);
            v.extend(levels);
        }
        (k, v)
    }

    fn run(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let key = self.key(k);
        if self.dead.contains(&key) {
            return false;
        }
        let it = self.order[k];
        let a = self.items[it];
        for b in 0..self.bins.len() {
            if self.fill[b] + a > self.bins[b] {
                continue;
            }
            let twin = (0..b).any(|c| self.bins[c] == self.bins[b] && self.fill[c] == self.fill[b]);
            if twin {
                continue;
            }
            self.fill[b] += a;
            self.pick[it] = b;
            if self.run(k + 1) {
                return true;
            }
            self.fill[b] -= a;
        }
        self.dead.insert(key);
        false
    }
}

/// A box reserved for tall items of exactly height `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallBox {
    pub x: i64,
    pub y: Q,
    pub w: i64,
    pub h: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallItem {
    pub id: ItemId,
    pub w: i64,
    /// Rounded height; must equal the height of the receiving box.
    pub h: Q,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TallError {
    #[error("no assignment of tall items of height {0} into their boxes")]
    Infeasible(Q),
    #[error(transparent)]
    Dp(#[from] DpError),
}

/// Positions `(id, x, y)` for every tall item, laid out left to right in the
/// box chosen for it.
pub fn assign_tall(items: &[TallItem], boxes: &[TallBox]) -> Result<Vec<(ItemId, i64, Q)>, TallError> {
    let mut classes: BTreeMap<&Q, Vec<&TallItem>> = BTreeMap::new();
    for it in items {
        classes.entry(&it.h).or_default().push(it);
    }
    let mut out = Vec::with_capacity(items.len());
    for (h, its) in classes {
        let bx: Vec<&TallBox> = boxes.iter().filter(|b| &b.h == h).collect();
        let caps: Vec<i64> = bx.iter().map(|b| b.w).collect();
        let sizes: Vec<i64> = its.iter().map(|i| i.w).collect();
        let pick = assign_bins(&caps, &sizes)?.ok_or_else(|| TallError::Infeasible(h.clone()))?;
        let mut cursor: Vec<i64> = bx.iter().map(|b| b.x).collect();
        for (k, it) in its.iter().enumerate() {
            let b = pick[k];
            out.push((it.id, cursor[b], bx[b].y.clone()));
            cursor[b] += it.w;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn loads(bins: &[i64], items: &[i64], pick: &[usize]) -> bool {
        let mut f = vec![0; bins.len()];
        for (i, &b) in pick.iter().enumerate() {
            f[b] += items[i];
        }
        f.iter().zip(bins).all(|(a, c)| a <= c)
    }

    #[test]
    fn small_cases() {
        let p = assign_bins(&[3, 2], &[2, 2, 1]).unwrap().unwrap();
        assert!(loads(&[3, 2], &[2, 2, 1], &p));
        assert_eq!(p, vec![0, 1, 0]);
        assert_eq!(assign_bins(&[2], &[3]).unwrap(), None);
        assert_eq!(assign_bins(&[], &[]).unwrap(), Some(vec![]));
    }

    #[test]
    fn guard() {
        assert!(matches!(assign_bins_with_guard(&[100, 100], &[1], 10), Err(DpError::TooLarge(..))));
    }

    #[test]
    fn tall_cross_assignment() {
        let items = [TallItem { id: ItemId(0), w: 2, h: q(5) }, TallItem { id: ItemId(1), w: 3, h: q(5) }];
        let boxes = [
            TallBox { x: 0, y: q(0), w: 3, h: q(5) },
            TallBox { x: 4, y: q(1), w: 2, h: q(5) },
        ];
        let out = assign_tall(&items, &boxes).unwrap();
        assert_eq!(out, vec![(ItemId(0), 4, q(1)), (ItemId(1), 0, q(0))]);
        let lone = [TallItem { id: ItemId(0), w: 1, h: q(4) }];
        assert_eq!(assign_tall(&lone, &boxes), Err(TallError::Infeasible(q(4))));
    }
}
