//! Integral strip-packing geometry: items, instances, packings and their
//! feasibility check.
//!
//! Rectangles are half-open: an item placed at `(x, y)` occupies the cells
//! `[x, x + w) × [y, y + h)`, so items that only share an edge never overlap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Item {
    pub id: ItemId,
    pub w: i64,
    pub h: i64,
}

impl Item {
    pub fn new(id: u32, w: i64, h: i64) -> Self {
        Item { id: ItemId(id), w, h }
    }

    pub fn area(&self) -> i64 {
        self.w * self.h
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("strip width must be positive, got {0}")]
    BadWidth(i64),
    #[error("item {0} has non-positive dimension")]
    BadItem(ItemId),
    #[error("item {id} of width {w} does not fit into strip of width {strip}")]
    TooWide { id: ItemId, w: i64, strip: i64 },
    #[error("duplicate item id {0}")]
    DuplicateId(ItemId),
}

/// A strip of width `width` and the items to pack into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    width: i64,
    items: Vec<Item>,
}

impl Instance {
    pub fn new(width: i64, items: Vec<Item>) -> Result<Self, InstanceError> {
        if width < 1 {
            return Err(InstanceError::BadWidth(width));
        }
        let mut seen = BTreeSet::new();
        for it in &items {
            if it.w < 1 || it.h < 1 {
                return Err(InstanceError::BadItem(it.id));
            }
            if it.w > width {
                return Err(InstanceError::TooWide { id: it.id, w: it.w, strip: width });
            }
            if !seen.insert(it.id) {
                return Err(InstanceError::DuplicateId(it.id));
            }
        }
        Ok(Instance { width, items })
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, id: ItemId) -> Option<&Item> {
        self.items.iter().find(|it| it.id == id)
    }

    pub fn max_height(&self) -> i64 {
        self.items.iter().map(|it| it.h).max().unwrap_or(0)
    }

    pub fn total_height(&self) -> i64 {
        self.items.iter().map(|it| it.h).sum()
    }

    /// `max(h_max, ⌈A/W⌉)`, the trivial lower bound on the optimum.
    pub fn lower_bound(&self) -> i64 {
        let area = total_area(&self.items);
        let by_area = (area + self.width - 1) / self.width;
        by_area.max(self.max_height())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub id: ItemId,
    pub x: i64,
    pub y: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub placements: Vec<Placement>,
}

impl Packing {
    pub fn new(placements: Vec<Placement>) -> Self {
        Packing { placements }
    }

    pub fn position(&self, id: ItemId) -> Option<(i64, i64)> {
        self.placements.iter().find(|p| p.id == id).map(|p| (p.x, p.y))
    }

    /// Shifts every placement by `(dx, dy)`.
    pub fn translated(&self, dx: i64, dy: i64) -> Packing {
        Packing {
            placements: self
                .placements
                .iter()
                .map(|p| Placement { id: p.id, x: p.x + dx, y: p.y + dy })
                .collect(),
        }
    }
}

/// Height of a packing: `max(y + h)`, 0 when nothing is placed.
///
/// Placements whose id is not part of `instance` are ignored.
pub fn packing_height(instance: &Instance, packing: &Packing) -> i64 {
    let dims: BTreeMap<ItemId, &Item> = instance.items.iter().map(|it| (it.id, it)).collect();
    packing
        .placements
        .iter()
        .filter_map(|p| dims.get(&p.id).map(|it| p.y + it.h))
        .max()
        .unwrap_or(0)
}

pub fn total_area(items: &[Item]) -> i64 {
    items.iter().map(Item::area).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    Duplicate(ItemId),
    Missing(ItemId),
    Unknown(ItemId),
    OutOfBounds(ItemId),
    Overlap(ItemId, ItemId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate(id) => write!(f, "item {id} placed more than once"),
            Violation::Missing(id) => write!(f, "item {id} not placed"),
            Violation::Unknown(id) => write!(f, "placement for unknown item {id}"),
            Violation::OutOfBounds(id) => write!(f, "item {id} out of strip bounds"),
            Violation::Overlap(a, b) => write!(f, "items {a} and {b} overlap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Half-open rectangles `[x0, x1) × [y0, y1)` intersect.
pub fn rects_overlap(a: (i64, i64, i64, i64), b: (i64, i64, i64, i64)) -> bool {
    let (ax, ay, aw, ah) = a;
    let (bx, by, bw, bh) = b;
    ax < bx + bw && bx < ax + aw && ay < by + bh && by < ay + ah
}

/// Checks that every item is placed exactly once, inside the strip, and
/// that no two placed items overlap.
pub fn validate(instance: &Instance, packing: &Packing) -> ValidationReport {
    let dims: BTreeMap<ItemId, &Item> = instance.items.iter().map(|it| (it.id, it)).collect();
    let mut violations = Vec::new();
    let mut counts: BTreeMap<ItemId, usize> = BTreeMap::new();
    let mut rects = Vec::new();

    for p in &packing.placements {
        let Some(it) = dims.get(&p.id) else {
            violations.push(Violation::Unknown(p.id));
            continue;
        };
        let c = counts.entry(p.id).or_insert(0);
        *c += 1;
        if *c == 2 {
            violations.push(Violation::Duplicate(p.id));
        }
        if p.x < 0 || p.y < 0 || p.x + it.w > instance.width {
            violations.push(Violation::OutOfBounds(p.id));
        }
        rects.push((p.id, (p.x, p.y, it.w, it.h)));
    }
    for it in &instance.items {
        if !counts.contains_key(&it.id) {
            violations.push(Violation::Missing(it.id));
        }
    }
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            if rects_overlap(rects[i].1, rects[j].1) {
                let (a, b) = (rects[i].0, rects[j].0);
                violations.push(Violation::Overlap(a.min(b), a.max(b)));
            }
        }
    }
    ValidationReport { violations }
}
