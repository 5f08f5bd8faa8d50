//! Next-fit and first-fit decreasing-height shelf packing.

use thiserror::Error;

use crate::geom::{Item, ItemId, Packing, Placement};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShelfError {
    #[error("item {0} of width {1} is wider than the strip ({2})")]
    TooWide(ItemId, i64, i64),
}

/// A shelf: base y, height set by its first item, and the width used so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shelf {
    pub y: Q,
    pub height: Q,
    pub used: Q,
}

/// Rectangle to pack: `along` runs in shelf direction, `across` is the shelf height.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub id: ItemId,
    pub along: i64,
    pub across: i64,
}

/// Decreasing height, then decreasing width, then id.
pub fn shelf_order(pieces: &mut [Piece]) {
    pieces.sort_by(|a, b| b.across.cmp(&a.across).then(b.along.cmp(&a.along)).then(a.id.cmp(&b.id)));
}

/// Packs a prefix of `pieces` (already in shelf order) into the region
/// `[a0, a0 + alen) × [s0, s0 + slen)`; `slen == None` means unbounded.
/// Returns `(id, along, across)` positions, the number of pieces taken and
/// the shelves opened.
pub fn fill_region(
    pieces: &[Piece],
    a0: &Q,
    alen: &Q,
    s0: &Q,
    slen: Option<&Q>,
    first_fit: bool,
) -> (Vec<(ItemId, Q, Q)>, usize, Vec<Shelf>) {
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut out = Vec::new();
    let mut taken = 0;
    for p in pieces {
        let along = q(p.along);
        let across = q(p.across);
        if along > *alen {
            break;
        }
        let candidates: Vec<usize> =
            if first_fit { (0..shelves.len()).collect() } else { shelves.len().checked_sub(1).into_iter().collect() };
        let fit = candidates.into_iter().find(|&k| &shelves[k].used + &along <= *alen && across <= shelves[k].height);
        let k = match fit {
            Some(k) => k,
            None => {
                let y = shelves.last().map(|s| &s.y + &s.height).unwrap_or_else(|| s0.clone());
                if let Some(l) = slen {
                    if &y + &across > s0 + l {
                        break;
                    }
                }
                shelves.push(Shelf { y, height: across.clone(), used: q(0) });
                shelves.len() - 1
            }
        };
        let s = &mut shelves[k];
        out.push((p.id, a0 + &s.used, s.y.clone()));
        s.used += along;
        taken += 1;
    }
    (out, taken, shelves)
}

fn strip(items: &[Item], width: i64, first_fit: bool) -> Result<Packing, ShelfError> {
    if let Some(it) = items.iter().find(|it| it.w > width) {
        return Err(ShelfError::TooWide(it.id, it.w, width));
    }
    let mut pieces: Vec<Piece> = items.iter().map(|it| Piece { id: it.id, along: it.w, across: it.h }).collect();
    shelf_order(&mut pieces);
    let (pos, _, _) = fill_region(&pieces, &q(0), &q(width), &q(0), None, first_fit);
    Ok(Packing::new(
        pos.into_iter()
            .map(|(id, x, y)| Placement {
                id,
                x: x.to_integer().try_into().expect("integral shelf position"),
                y: y.to_integer().try_into().expect("integral shelf position"),
            })
            .collect(),
    ))
}

/// Next-fit decreasing height into a strip of width `width`.
pub fn nfdh(items: &[Item], width: i64) -> Result<Packing, ShelfError> {
    strip(items, width, false)
}

/// First-fit decreasing height into a strip of width `width`.
pub fn ffdh(items: &[Item], width: i64) -> Result<Packing, ShelfError> {
    strip(items, width, true)
}
