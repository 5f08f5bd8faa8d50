//! Cutting the stretched packing into boxes for large items, for horizontal
//! items and for tall and vertical items.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use thiserror::Error;

use crate::classify::{Class, Classification, Params};
use crate::geom::ItemId;
use crate::layout::{RLayout, RRect, Rect};
use crate::rational::{ceil_int, floor_int, is_multiple, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("item {0} does not start and end on the strip grid")]
    OffGrid(ItemId),
    #[error("packing reaches {0}, above the partitioned height {1}")]
    TooHigh(Q, Q),
    #[error("partitioned height {0} is not a multiple of the strip height")]
    BadHeight(Q),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub width: i64,
    pub height: Q,
    /// Strip height `εδ·opt`.
    pub unit: Q,
    pub large: Vec<(ItemId, Rect)>,
    pub horizontal: Vec<Rect>,
    pub tv: Vec<Rect>,
}

fn is_blocker(c: Class) -> bool {
    matches!(c, Class::Large | Class::Tall | Class::Vertical)
}

/// Boxes of one strip that hold horizontal items. Scanning left to right, a
/// line is drawn at the left edge of every item whose set (horizontal or
/// blocking) differs from the previous one.
fn strip_boxes(blockers: &[&RRect], horizontal: &[&RRect], width: i64) -> Vec<(i64, i64)> {
    let mut ev: Vec<(i64, bool)> = blockers.iter().map(|r| (r.x, false)).collect();
    ev.extend(horizontal.iter().map(|r| (r.x, true)));
    ev.sort();
    let mut lines: Vec<(i64, bool)> = Vec::new();
    for (x, h) in ev {
        match lines.last() {
            None => lines.push((0, h)),
            Some(&(_, cur)) if cur != h => lines.push((x, h)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    for (k, &(x, h)) in lines.iter().enumerate() {
        let end = lines.get(k + 1).map(|l| l.0).unwrap_or(width);
        if h && end > x {
            out.push((x, end - x));
        }
    }
    out
}

/// Partition of `[0, W) × [0, height)`. Items of classes other
/// than large, tall, vertical and horizontal are ignored.
pub fn partition_boxes(
    layout: &RLayout,
    classes: &Classification,
    p: &Params,
    height: &Q,
) -> Result<Partition, PartitionError> {
    let unit = &p.eps * &p.delta * q(p.opt);
    if !is_multiple(height, &unit) {
        return Err(PartitionError::BadHeight(height.clone()));
    }
    let class = |r: &RRect| classes.of(r.id).unwrap_or(Class::Small);
    let mut blockers = Vec::new();
    let mut horizontal = Vec::new();
    for r in &layout.rects {
        if r.top() > *height {
            return Err(PartitionError::TooHigh(r.top(), height.clone()));
        }
        let c = class(r);
        if is_blocker(c) {
            if !is_multiple(&r.y, &unit) || !is_multiple(&r.top(), &unit) {
                return Err(PartitionError::OffGrid(r.id));
            }
            blockers.push(r);
        } else if c == Class::Horizontal {
            horizontal.push(r);
        }
    }
    let large: Vec<(ItemId, Rect)> = blockers
        .iter()
        .filter(|r| class(r) == Class::Large)
        .map(|r| (r.id, Rect::new(r.x, r.w, r.y.clone(), r.h.clone())))
        .collect();

    // only strips touched by a horizontal item can hold a horizontal box
    let mut strips: BTreeSet<BigInt> = BTreeSet::new();
    for r in &horizontal {
        let a = floor_int(&(&r.y / &unit));
        let b = ceil_int(&(r.top() / &unit));
        let mut k = a;
        while k < b {
            strips.insert(k.clone());
            k += 1;
        }
    }
    let mut hboxes = Vec::new();
    for k in strips {
        let ys = Q::from_integer(k) * &unit;
        let ye = &ys + &unit;
        let hit = |r: &&&RRect| r.y < ye && r.top() > ys;
        let bl: Vec<&RRect> = blockers.iter().filter(hit).copied().collect();
        let hz: Vec<&RRect> = horizontal.iter().filter(hit).copied().collect();
        for (x, w) in strip_boxes(&bl, &hz, layout.width) {
            hboxes.push(Rect::new(x, w, ys.clone(), unit.clone()));
        }
    }

    let mut obstacles: Vec<Rect> = large.iter().map(|(_, r)| r.clone()).collect();
    obstacles.extend(hboxes.iter().cloned());
    let tv = free_boxes(&obstacles, layout.width, height);
    Ok(Partition { width: layout.width, height: height.clone(), unit, large, horizontal: hboxes, tv })
}

/// Splits the area outside `obstacles` into rectangles by extending every
/// vertical obstacle side up and down until it meets another obstacle.
pub fn free_boxes(obstacles: &[Rect], width: i64, height: &Q) -> Vec<Rect> {
    let mut xs: BTreeSet<i64> = [0, width].into_iter().collect();
    for o in obstacles {
        xs.insert(o.x);
        xs.insert(o.x + o.w);
    }
    let xs: Vec<i64> = xs.into_iter().filter(|&x| (0..=width).contains(&x)).collect();
    // key: (y0, y1, obstacle below, obstacle above)
    type Key = (Q, Q, Option<usize>, Option<usize>);
    let mut open: BTreeMap<Key, i64> = BTreeMap::new();
    let mut out = Vec::new();
    for win in xs.windows(2) {
        let (a, b) = (win[0], win[1]);
        let mut cover: Vec<(Q, Q, usize)> = obstacles
            .iter()
            .enumerate()
            .filter(|(_, o)| o.x <= a && o.x + o.w >= b)
            .map(|(i, o)| (o.y.clone(), o.top(), i))
            .collect();
        cover.sort();
        let mut keys = Vec::new();
        let mut y = q(0);
        let mut below = None;
        for (y0, y1, i) in cover {
            if y0 > y {
                keys.push((y.clone(), y0.clone(), below, Some(i)));
            }
            if y1 > y {
                y = y1;
                below = Some(i);
            }
        }
        if *height > y {
            keys.push((y, height.clone(), below, None));
        }
        let keys: BTreeSet<Key> = keys.into_iter().collect();
        let closing: Vec<Key> = open.keys().filter(|k| !keys.contains(*k)).cloned().collect();
        for k in closing {
            let x0 = open.remove(&k).unwrap();
            out.push(Rect::new(x0, a - x0, k.0.clone(), &k.1 - &k.0));
        }
        for k in keys {
            open.entry(k).or_insert(a);
        }
    }
    for (k, x0) in open {
        out.push(Rect::new(x0, width - x0, k.0.clone(), &k.1 - &k.0));
    }
    out.sort();
    out
}

/// Result of checking the partition against its defining properties.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionCheck {
    pub large_exact: bool,
    pub horizontal_count: usize,
    pub horizontal_bound: Q,
    pub tv_count: usize,
    pub tv_bound: Q,
    /// Every horizontal item lies horizontally inside a horizontal box of each strip it meets.
    pub horizontal_inside: bool,
    /// No tall or vertical item is cut by a horizontal box border.
    pub no_horizontal_cut: bool,
    /// Boxes are pairwise disjoint and cover the whole area.
    pub tiles: bool,
}

impl PartitionCheck {
    pub fn holds(&self) -> bool {
        self.large_exact
            && q(self.horizontal_count as i64) <= self.horizontal_bound
            && q(self.tv_count as i64) <= self.tv_bound
            && self.horizontal_inside
            && self.no_horizontal_cut
            && self.tiles
    }
}

pub fn check_partition(part: &Partition, layout: &RLayout, classes: &Classification, p: &Params) -> PartitionCheck {
    let class = |r: &RRect| classes.of(r.id).unwrap_or(Class::Small);
    let strips_factor = &part.height / q(p.opt);
    let ed2 = &p.eps * &p.delta * &p.delta;
    let n_large = q(part.large.len() as i64);
    let mut c = PartitionCheck {
        horizontal_count: part.horizontal.len(),
        horizontal_bound: &strips_factor / &ed2 - &n_large / &p.delta,
        tv_count: part.tv.len(),
        tv_bound: q(3) * &strips_factor / &ed2,
        ..PartitionCheck::default()
    };
    c.large_exact = part.large.iter().all(|(id, b)| {
        layout.get(*id).is_some_and(|r| r.x == b.x && r.w == b.w && r.y == b.y && r.h == b.h)
    });
    let all: Vec<&Rect> =
        part.large.iter().map(|(_, r)| r).chain(&part.horizontal).chain(&part.tv).collect();
    c.horizontal_inside = layout.rects.iter().filter(|r| class(r) == Class::Horizontal).all(|r| {
        part.horizontal.iter().any(|b| b.x <= r.x && r.x + r.w <= b.x + b.w && b.y < r.top() && r.y < b.top())
            && {
                // every strip met by the item has such a box
                let a = floor_int(&(&r.y / &part.unit));
                let e = ceil_int(&(r.top() / &part.unit));
                let mut k = a;
                let mut ok = true;
                while k < e {
                    let ys = Q::from_integer(k.clone()) * &part.unit;
                    ok &= part.horizontal.iter().any(|b| b.y == ys && b.x <= r.x && r.x + r.w <= b.x + b.w);
                    k += 1;
                }
                ok
            }
    });
    c.no_horizontal_cut = layout.rects.iter().filter(|r| matches!(class(r), Class::Tall | Class::Vertical)).all(|r| {
        all.iter().all(|b| {
            let xo = b.x < r.x + r.w && r.x < b.x + b.w;
            !(xo && ((b.y > r.y && b.y < r.top()) || (b.top() > r.y && b.top() < r.top())))
        })
    });
    let area: Q = all.iter().map(|b| b.area()).sum();
    let disjoint = (0..all.len()).all(|i| (i + 1..all.len()).all(|j| !all[i].overlaps(all[j])));
    c.tiles = disjoint && area == q(part.width) * &part.height;
    c
}
