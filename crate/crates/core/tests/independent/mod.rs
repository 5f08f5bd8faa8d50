//! Slow, simple reference implementations that share no code with the
//! library: cell painting for feasibility, placement search over normal
//! patterns, Fourier–Motzkin elimination and brute-force bin assignment.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use stripack::geom::{Instance, ItemId, Packing};
use stripack::rational::{q, Q};

/// Every item placed once, inside the strip and on pairwise disjoint cells.
pub fn painted_valid(instance: &Instance, packing: &Packing) -> bool {
    let mut seen = BTreeSet::new();
    for p in &packing.placements {
        if instance.item(p.id).is_none() || !seen.insert(p.id) {
            return false;
        }
    }
    if seen.len() != instance.len() {
        return false;
    }
    let mut cells = HashSet::new();
    for p in &packing.placements {
        let it = instance.item(p.id).unwrap();
        if p.x < 0 || p.y < 0 || p.x + it.w > instance.width() {
            return false;
        }
        for x in p.x..p.x + it.w {
            for y in p.y..p.y + it.h {
                if !cells.insert((x, y)) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn painted_height(instance: &Instance, packing: &Packing) -> i64 {
    packing
        .placements
        .iter()
        .map(|p| p.y + instance.item(p.id).map_or(0, |i| i.h))
        .max()
        .unwrap_or(0)
}

/// Sums of subsets of `vals`, each at most `limit`.
fn subset_sums(vals: &[i64], limit: i64) -> Vec<i64> {
    let mut s = BTreeSet::from([0]);
    for &v in vals {
        let next: Vec<i64> = s.iter().map(|a| a + v).filter(|&a| a <= limit).collect();
        s.extend(next);
    }
    s.into_iter().collect()
}

/// Whether `items` (width, height) pack into `width × height`. Every packing
/// can be pushed down and left until each coordinate is a sum of sides of
/// other items, so only those positions are tried.
pub fn fits_normal_patterns(width: i64, items: &[(i64, i64)], height: i64) -> bool {
    let area: i64 = items.iter().map(|(w, h)| w * h).sum();
    if area > width * height || items.iter().any(|&(w, h)| w > width || h > height) {
        return false;
    }
    assert!(width <= 64);
    let mut items = items.to_vec();
    items.sort_by(|a, b| (b.0 * b.1, b.1, b.0).cmp(&(a.0 * a.1, a.1, a.0)));
    let positions: Vec<Vec<(i64, i64)>> = (0..items.len())
        .map(|i| {
            let others: Vec<&(i64, i64)> = items.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, d)| d).collect();
            let xs = subset_sums(&others.iter().map(|d| d.0).collect::<Vec<_>>(), width - items[i].0);
            let ys = subset_sums(&others.iter().map(|d| d.1).collect::<Vec<_>>(), height - items[i].1);
            ys.iter().flat_map(|&y| xs.iter().map(move |&x| (y, x))).collect()
        })
        .collect();
    let mut rows = vec![0u64; height as usize];
    let mut dead = HashSet::new();
    place(&items, &positions, 0, None, &mut rows, &mut dead)
}

fn place(
    items: &[(i64, i64)],
    positions: &[Vec<(i64, i64)>],
    k: usize,
    prev: Option<(i64, i64)>,
    rows: &mut Vec<u64>,
    dead: &mut HashSet<(usize, Option<(i64, i64)>, Vec<u64>)>,
) -> bool {
    if k == items.len() {
        return true;
    }
    let key = (k, prev, rows.clone());
    if dead.contains(&key) {
        return false;
    }
    let (w, h) = items[k];
    let twin = k > 0 && items[k - 1] == items[k];
    let mask = (1u64 << w) - 1;
    for &(y, x) in &positions[k] {
        if twin && prev.is_some_and(|p| (y, x) <= p) {
            continue;
        }
        let m = mask << x;
        if (y..y + h).any(|r| rows[r as usize] & m != 0) {
            continue;
        }
        for r in y..y + h {
            rows[r as usize] |= m;
        }
        let ok = place(items, positions, k + 1, Some((y, x)), rows, dead);
        for r in y..y + h {
            rows[r as usize] &= !m;
        }
        if ok {
            return true;
        }
    }
    dead.insert(key);
    false
}

/// Optimal height by trying heights upwards from the trivial bound.
pub fn normal_pattern_opt(width: i64, items: &[(i64, i64)]) -> i64 {
    if items.is_empty() {
        return 0;
    }
    let area: i64 = items.iter().map(|(w, h)| w * h).sum();
    let hmax = items.iter().map(|d| d.1).max().unwrap();
    let lb = hmax.max((area + width - 1) / width);
    (lb..).find(|&h| fits_normal_patterns(width, items, h)).unwrap()
}

/// `a·x <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ineq {
    pub a: Vec<Q>,
    pub b: Q,
}

fn normalize(r: Ineq) -> Ineq {
    match r.a.iter().find(|v| **v != q(0)) {
        Some(lead) => {
            let s = if *lead > q(0) { lead.clone() } else { -lead.clone() };
            Ineq { a: r.a.iter().map(|v| v / &s).collect(), b: &r.b / &s }
        }
        None => r,
    }
}

/// Feasibility of `{x : A x <= b}` by eliminating one variable at a time.
pub fn fourier_motzkin(rows: &[Ineq], vars: usize) -> bool {
    let mut rows: BTreeSet<Ineq> = rows.iter().cloned().map(normalize).collect();
    for v in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.a[v] > q(0) {
                pos.push(r);
            } else if r.a[v] < q(0) {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        let mut next: BTreeSet<Ineq> = rest.into_iter().collect();
        for p in &pos {
            for n in &neg {
                // scale so the coefficients of v cancel
                let (cp, cn) = (-n.a[v].clone(), p.a[v].clone());
                let a: Vec<Q> = p.a.iter().zip(&n.a).map(|(x, y)| x * &cp + y * &cn).collect();
                next.insert(normalize(Ineq { a, b: &p.b * &cp + &n.b * &cn }));
            }
        }
        rows = next;
    }
    rows.iter().all(|r| r.b >= q(0))
}

/// Can `items` be split among bins of capacities `bins`? Tries all `k^n`
/// assignments.
pub fn bins_brute(bins: &[i64], items: &[i64]) -> bool {
    let k = bins.len();
    let n = items.len();
    if k == 0 {
        return n == 0;
    }
    let total = (k as u64).pow(n as u32);
    let mut load = vec![0i64; k];
    'next: for code in 0..total {
        load.iter_mut().for_each(|l| *l = 0);
        let mut c = code;
        for &a in items {
            let b = (c % k as u64) as usize;
            c /= k as u64;
            load[b] += a;
            if load[b] > bins[b] {
                continue 'next;
            }
        }
        return true;
    }
    false
}

pub fn ids(packing: &Packing) -> Vec<ItemId> {
    packing.placements.iter().map(|p| p.id).collect()
}

/// Like [`painted_valid`] but by comparing every pair of rectangles, for
/// packings too tall to paint.
pub fn pairwise_valid(instance: &Instance, packing: &Packing) -> bool {
    let mut seen = BTreeSet::new();
    let mut rects = Vec::new();
    for p in &packing.placements {
        let Some(it) = instance.item(p.id) else { return false };
        if !seen.insert(p.id) || p.x < 0 || p.y < 0 || p.x + it.w > instance.width() {
            return false;
        }
        rects.push((p.x, p.y, p.x + it.w, p.y + it.h));
    }
    seen.len() == instance.len()
        && (0..rects.len()).all(|i| {
            (i + 1..rects.len()).all(|j| {
                let (a, b) = (rects[i], rects[j]);
                a.2 <= b.0 || b.2 <= a.0 || a.3 <= b.1 || b.3 <= a.1
            })
        })
}
