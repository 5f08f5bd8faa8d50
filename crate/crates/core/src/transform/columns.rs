//! Contents of a box for tall and vertical items as unit-width columns.
//! Vertical items are cut into slices of width one, so they can be moved
//! column by column; tall items stay whole.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::classify::{Class, Classification};
use crate::geom::ItemId;
use crate::layout::{RLayout, Rect};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColumnError {
    #[error("item {0} is cut by a horizontal border of the box")]
    Cut(ItemId),
    #[error("tall items of column {0} cannot all reach a border")]
    Stacked(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fill {
    Tall(ItemId),
    Vertical(ItemId),
}

/// A piece of one column, `y` relative to the box bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seg {
    pub y: Q,
    pub h: Q,
    pub fill: Fill,
}

impl Seg {
    pub fn top(&self) -> Q {
        &self.y + &self.h
    }
}

/// A tall item meeting the box; `x` is global, `y` relative to the box bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallRef {
    pub id: ItemId,
    pub x: i64,
    pub w: i64,
    pub y: Q,
    pub h: Q,
    /// Lies completely inside the box.
    pub movable: bool,
}

impl TallRef {
    pub fn top(&self) -> Q {
        &self.y + &self.h
    }
}

/// Slice record: a piece of width `w` cut out of item `parent` at offset `dx`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub parent: ItemId,
    pub dx: i64,
    pub w: i64,
    pub y: Q,
    pub h: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnBox {
    pub rect: Rect,
    pub cols: Vec<Vec<Seg>>,
    pub tall: Vec<TallRef>,
    /// Left edge of every vertical item with a slice in the box.
    pub origin: BTreeMap<ItemId, i64>,
}

impl ColumnBox {
    pub fn empty(rect: Rect) -> Self {
        let n = rect.w.max(0) as usize;
        ColumnBox { rect, cols: vec![Vec::new(); n], tall: Vec::new(), origin: BTreeMap::new() }
    }

    /// Collects the tall and vertical items of `layout` meeting `rect`.
    pub fn from_layout(rect: &Rect, layout: &RLayout, classes: &Classification) -> Result<Self, ColumnError> {
        let mut b = ColumnBox::empty(rect.clone());
        for r in &layout.rects {
            let c = classes.of(r.id);
            let tall = c == Some(Class::Tall);
            if !tall && c != Some(Class::Vertical) {
                continue;
            }
            let x0 = r.x.max(rect.x);
            let x1 = (r.x + r.w).min(rect.x + rect.w);
            if x0 >= x1 || r.top() <= rect.y || r.y >= rect.top() {
                continue;
            }
            if r.y < rect.y || r.top() > rect.top() {
                return Err(ColumnError::Cut(r.id));
            }
            let y = &r.y - &rect.y;
            let fill = if tall { Fill::Tall(r.id) } else { Fill::Vertical(r.id) };
            for x in x0..x1 {
                b.cols[(x - rect.x) as usize].push(Seg { y: y.clone(), h: r.h.clone(), fill });
            }
            if tall {
                let movable = r.x >= rect.x && r.x + r.w <= rect.x + rect.w;
                b.tall.push(TallRef { id: r.id, x: r.x, w: r.w, y, h: r.h.clone(), movable });
            } else {
                b.origin.insert(r.id, r.x);
            }
        }
        for col in &mut b.cols {
            col.sort_by(|a, c| a.y.cmp(&c.y));
        }
        Ok(b)
    }

    pub fn width(&self) -> i64 {
        self.rect.w
    }

    pub fn height(&self) -> &Q {
        &self.rect.h
    }

    pub fn vertical_area(&self) -> Q {
        self.cols.iter().flatten().filter(|s| matches!(s.fill, Fill::Vertical(_))).map(|s| s.h.clone()).sum()
    }

    pub fn tall_area(&self) -> Q {
        self.cols.iter().flatten().filter(|s| matches!(s.fill, Fill::Tall(_))).map(|s| s.h.clone()).sum()
    }

    pub fn tall_ref(&self, id: ItemId) -> Option<&TallRef> {
        self.tall.iter().find(|t| t.id == id)
    }

    /// Column range of a tall item inside the box, relative to the box.
    pub fn span(&self, t: &TallRef) -> (i64, i64) {
        ((t.x - self.rect.x).max(0), (t.x + t.w - self.rect.x).min(self.rect.w))
    }

    pub fn slices(&self) -> Vec<Slice> {
        let mut out = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            for s in col {
                if let Fill::Vertical(id) = s.fill {
                    let dx = self.rect.x + c as i64 - self.origin[&id];
                    out.push(Slice { parent: id, dx, w: 1, y: s.y.clone(), h: s.h.clone() });
                }
            }
        }
        out
    }

    /// Two tall items share a column.
    pub fn stacked_tall(&self) -> bool {
        self.cols.iter().any(|col| col.iter().filter(|s| matches!(s.fill, Fill::Tall(_))).count() > 1)
    }

    /// Segments fit the box without overlap and every tall item sits at
    /// the same height in all of its columns.
    pub fn is_feasible(&self) -> bool {
        for col in &self.cols {
            let mut y = q(0);
            for s in col {
                if s.y < y || s.h <= q(0) {
                    return false;
                }
                y = s.top();
            }
            if y > self.rect.h {
                return false;
            }
        }
        self.tall.iter().all(|t| {
            let (a, b) = self.span(t);
            (a..b).all(|c| {
                self.cols[c as usize].iter().any(|s| s.fill == Fill::Tall(t.id) && s.y == t.y && s.h == t.h)
            })
        })
    }

    /// Whether tall item `t` touches the bottom or the top of the box.
    pub fn touches(&self, t: &TallRef) -> (bool, bool) {
        (t.y == q(0), t.top() == self.rect.h)
    }
}

/// Moves every movable tall item to the bottom or the top of the box.
/// An item with another tall item above it goes down, one with a tall item
/// below it goes up, any other goes down. Vertical slices in each column are
/// stacked again in their old order in the space left between.
pub fn normalize_tall(b: &ColumnBox) -> Result<ColumnBox, ColumnError> {
    let h = b.rect.h.clone();
    let mut down: BTreeMap<ItemId, bool> = BTreeMap::new();
    for t in b.tall.iter().filter(|t| t.movable) {
        let (a, e) = b.span(t);
        let mut above = false;
        let mut below = false;
        for c in a..e {
            for s in &b.cols[c as usize] {
                if let Fill::Tall(o) = s.fill {
                    if o != t.id {
                        above |= s.y >= t.top();
                        below |= s.top() <= t.y;
                    }
                }
            }
        }
        down.insert(t.id, above || !below);
    }
    let mut out = b.clone();
    for t in out.tall.iter_mut().filter(|t| t.movable) {
        t.y = if down[&t.id] { q(0) } else { &h - &t.h };
    }
    for (c, col) in b.cols.iter().enumerate() {
        let mut fixed: Vec<&Seg> = col
            .iter()
            .filter(|s| matches!(s.fill, Fill::Tall(id) if !down.contains_key(&id)))
            .collect();
        fixed.sort_by(|a, e| a.y.cmp(&e.y));
        let mut bounds = vec![q(0)];
        for s in &fixed {
            bounds.push(s.y.clone());
            bounds.push(s.top());
        }
        bounds.push(h.clone());
        let mut new: Vec<Seg> = fixed.iter().map(|s| (*s).clone()).collect();
        for k in 0..bounds.len() / 2 {
            let (lo, hi) = (&bounds[2 * k], &bounds[2 * k + 1]);
            let inside: Vec<&Seg> =
                col.iter().filter(|s| !fixed.contains(s) && &s.y >= lo && &s.top() <= hi).collect();
            let mut cursor = lo.clone();
            let mut ceiling = hi.clone();
            for s in &inside {
                if let Fill::Tall(id) = s.fill {
                    if down[&id] {
                        if *lo != q(0) {
                            return Err(ColumnError::Stacked(b.rect.x + c as i64));
                        }
                        new.push(Seg { y: q(0), h: s.h.clone(), fill: s.fill });
                        cursor = s.h.clone();
                    } else {
                        if *hi != h {
                            return Err(ColumnError::Stacked(b.rect.x + c as i64));
                        }
                        ceiling = &h - &s.h;
                        new.push(Seg { y: ceiling.clone(), h: s.h.clone(), fill: s.fill });
                    }
                }
            }
            for s in inside.iter().filter(|s| matches!(s.fill, Fill::Vertical(_))) {
                new.push(Seg { y: cursor.clone(), h: s.h.clone(), fill: s.fill });
                cursor += &s.h;
            }
            if cursor > ceiling {
                return Err(ColumnError::Stacked(b.rect.x + c as i64));
            }
        }
        new.sort_by(|a, e| a.y.cmp(&e.y));
        out.cols[c] = new;
    }
    Ok(out)
}
