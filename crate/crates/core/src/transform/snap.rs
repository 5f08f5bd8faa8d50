//! Making tall heights and the heights of high boxes multiples of `ε·opt` by
//! opening gaps of height `ε·opt` at fixed lines.

use thiserror::Error;

use super::columns::ColumnBox;
use super::partition::Partition;
use crate::classify::{Class, Classification, Params};
use crate::geom::ItemId;
use crate::layout::RLayout;
use crate::rational::{ceil_to, frac, is_multiple, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnapError {
    #[error("items {0} and {1} overlap after shifting")]
    Overlap(ItemId, ItemId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapReport {
    pub stretched: usize,
    pub height_before: Q,
    pub height_after: Q,
}

fn shift_from(layout: &mut RLayout, line: &Q, by: &Q) {
    for r in &mut layout.rects {
        if r.y >= *line {
            r.y += by;
        }
    }
}

/// Two passes: everything starting at or above `(2/3 + 4ε/3)·opt` moves up
/// by `ε·opt` and the tall items reaching that line are stretched to a
/// multiple of `ε·opt`; then the same with the line `(1/3 + ε)·opt` for the
/// remaining tall items. The packing grows by at most `2ε·opt`.
pub fn snap_to_eps(layout: &RLayout, classes: &Classification, p: &Params) -> Result<(RLayout, SnapReport), SnapError> {
    let e = p.eps_opt();
    let opt = p.opt_q();
    let is_tall = |id: ItemId| classes.of(id) == Some(Class::Tall);
    let mut out = layout.clone();
    let mut stretched = 0;

    let l1 = (frac(2, 3) + frac(4, 3) * &p.eps) * &opt;
    shift_from(&mut out, &l1, &e);
    for r in &mut out.rects {
        if is_tall(r.id) && r.top() >= l1 && !is_multiple(&r.h, &e) {
            r.h = ceil_to(&r.h, &e);
            stretched += 1;
        }
    }
    let l2 = p.tall_threshold();
    shift_from(&mut out, &l2, &e);
    for r in &mut out.rects {
        if is_tall(r.id) && !is_multiple(&r.h, &e) {
            r.h = ceil_to(&r.h, &e);
            stretched += 1;
        }
    }
    if let Some((a, b)) = out.conflicts().first() {
        return Err(SnapError::Overlap(*a, *b));
    }
    let report = SnapReport { stretched, height_before: layout.height(), height_after: out.height() };
    Ok((out, report))
}

/// Shifts every box starting at or above `(2/3 + 4ε)·opt` up by `ε·opt`,
/// then enlarges the boxes flagged in `high` to a multiple of `ε·opt` where
/// there is room. Returns the number of enlarged and of skipped boxes.
pub fn snap_box_heights(
    part: &mut Partition,
    boxes: &mut [ColumnBox],
    high: &[bool],
    p: &Params,
) -> (usize, usize) {
    let e = p.eps_opt();
    let line = (frac(2, 3) + q(4) * &p.eps) * p.opt_q();
    for (_, r) in &mut part.large {
        if r.y >= line {
            r.y += &e;
        }
    }
    for r in part.horizontal.iter_mut().chain(part.tv.iter_mut()) {
        if r.y >= line {
            r.y += &e;
        }
    }
    for b in boxes.iter_mut() {
        if b.rect.y >= line {
            b.rect.y += &e;
        }
    }
    part.height += &e;
    let mut enlarged = 0;
    let mut skipped = 0;
    for (k, b) in boxes.iter_mut().enumerate() {
        if !high[k] || is_multiple(&b.rect.h, &e) {
            continue;
        }
        let mut grown = b.rect.clone();
        grown.h = ceil_to(&grown.h, &e);
        let clash = part
            .large
            .iter()
            .map(|(_, r)| r)
            .chain(&part.horizontal)
            .chain(part.tv.iter().filter(|r| **r != b.rect))
            .any(|r| r.overlaps(&grown));
        if clash || grown.top() > part.height {
            skipped += 1;
            continue;
        }
        if let Some(r) = part.tv.iter_mut().find(|r| **r == b.rect) {
            *r = grown.clone();
        }
        b.rect = grown;
        enlarged += 1;
    }
    (enlarged, skipped)
}
