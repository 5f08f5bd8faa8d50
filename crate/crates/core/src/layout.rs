//! Packings with rational y-coordinates, as produced by the stretching and
//! shifting steps, and their conversion back to integral packings.

use std::collections::BTreeMap;

use crate::geom::{Instance, ItemId, Packing, Placement};
use crate::rational::{ceil_int, q, to_i64, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RRect {
    pub id: ItemId,
    pub x: i64,
    pub w: i64,
    pub y: Q,
    pub h: Q,
}

impl RRect {
    pub fn top(&self) -> Q {
        &self.y + &self.h
    }

    pub fn overlaps(&self, o: &RRect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.top() && o.y < self.top()
    }
}

/// Axis-parallel box with integral x-extent and rational y-extent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rect {
    pub x: i64,
    pub w: i64,
    pub y: Q,
    pub h: Q,
}

impl Rect {
    pub fn new(x: i64, w: i64, y: Q, h: Q) -> Self {
        Rect { x, w, y, h }
    }

    pub fn area(&self) -> Q {
        q(self.w) * &self.h
    }

    pub fn top(&self) -> Q {
        &self.y + &self.h
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x < o.x + o.w && o.x < self.x + self.w && self.y < o.top() && o.y < self.top()
    }

    pub fn contains(&self, r: &RRect) -> bool {
        self.x <= r.x && r.x + r.w <= self.x + self.w && self.y <= r.y && r.top() <= self.top()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RLayout {
    pub width: i64,
    pub rects: Vec<RRect>,
}

impl RLayout {
    pub fn new(width: i64) -> Self {
        RLayout { width, rects: Vec::new() }
    }

    pub fn from_packing(instance: &Instance, packing: &Packing) -> Self {
        let dims: BTreeMap<ItemId, (i64, i64)> = instance.items().iter().map(|i| (i.id, (i.w, i.h))).collect();
        let rects = packing
            .placements
            .iter()
            .filter_map(|p| {
                dims.get(&p.id).map(|&(w, h)| RRect { id: p.id, x: p.x, w, y: q(p.y), h: q(h) })
            })
            .collect();
        RLayout { width: instance.width(), rects }
    }

    pub fn height(&self) -> Q {
        self.rects.iter().map(RRect::top).max().unwrap_or_else(|| q(0))
    }

    pub fn get(&self, id: ItemId) -> Option<&RRect> {
        self.rects.iter().find(|r| r.id == id)
    }

    /// Overlapping pairs and rectangles outside the strip (reported as `(id, id)`).
    pub fn conflicts(&self) -> Vec<(ItemId, ItemId)> {
        let mut out = Vec::new();
        for (i, a) in self.rects.iter().enumerate() {
            if a.x < 0 || a.x + a.w > self.width || a.y < q(0) {
                out.push((a.id, a.id));
            }
            for b in &self.rects[i + 1..] {
                if a.overlaps(b) {
                    out.push((a.id.min(b.id), a.id.max(b.id)));
                }
            }
        }
        out
    }

    pub fn is_feasible(&self) -> bool {
        self.conflicts().is_empty()
    }

    /// Integral packing of `instance` obtained by letting every item fall as
    /// far as it can, in order of increasing rational y. Each item ends at or
    /// below its rational position, so the height never grows. Rectangles
    /// must be at least as high as the items they stand for.
    pub fn compact(&self, instance: &Instance) -> Packing {
        let mut order: Vec<&RRect> = self.rects.iter().collect();
        order.sort_by(|a, b| a.y.cmp(&b.y).then(a.x.cmp(&b.x)).then(a.id.cmp(&b.id)));
        let mut placed: Vec<(i64, i64, i64, i64)> = Vec::new();
        let mut out = Vec::with_capacity(order.len());
        for r in order {
            let h = instance.item(r.id).map(|i| i.h).unwrap_or_else(|| to_i64(&ceil_int(&r.h)).unwrap_or(0));
            let y = placed
                .iter()
                .filter(|p| p.0 < r.x + r.w && r.x < p.0 + p.1)
                .map(|p| p.2 + p.3)
                .max()
                .unwrap_or(0);
            placed.push((r.x, r.w, y, h));
            out.push(Placement { id: r.id, x: r.x, y });
        }
        Packing::new(out)
    }
}
