//! Placement of the item classes into their boxes.

pub mod shelf;

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::classify::Params;
use crate::geom::{Item, ItemId};
use crate::layout::{RRect, Rect};
use crate::lpconfig::{enumerate_configurations, solve_config_lp, ConfigLp, Configuration, Lp, LpError, Mode, Rel};
use crate::rational::{ceil_int, floor_int, frac, q, to_i64, Q};

pub use shelf::{ffdh, fill_region, nfdh, shelf_order, Piece, Shelf, ShelfError};

/// Box with rational extents, used for free space handed to small items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBox {
    pub x: Q,
    pub y: Q,
    pub w: Q,
    pub h: Q,
}

impl RBox {
    pub fn from_rect(r: &Rect) -> Self {
        RBox { x: q(r.x), y: r.y.clone(), w: q(r.w), h: r.h.clone() }
    }

    pub fn area(&self) -> Q {
        &self.w * &self.h
    }

    /// Integral x-range inside the box: `(start, width)`.
    fn int_x(&self) -> (i64, i64) {
        let a = to_i64(&ceil_int(&self.x)).unwrap_or(0);
        let b = to_i64(&floor_int(&(&self.x + &self.w))).unwrap_or(0);
        (a, (b - a).max(0))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaceError {
    #[error("configuration LP: {0}")]
    Lp(#[from] LpError),
    #[error("configurations of total width {0} do not fit the boxes")]
    BoxFit(Q),
}

fn rect(id: ItemId, x: i64, w: i64, y: Q, h: i64) -> RRect {
    RRect { id, x, w, y, h: q(h) }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MediumPacking {
    /// `M_H` inside `[0, W) × [0, mh_height)`.
    pub mh: Vec<RRect>,
    pub mh_height: Q,
    /// `M_V` inside `[0, mv_width) × [0, (1/3+ε)·opt)`.
    pub mv: Vec<RRect>,
    pub mv_width: i64,
    pub mh_within: bool,
    pub mv_within: bool,
}

/// `M_H` by NFDH into the full width; `M_V` rotated by a quarter turn and
/// packed by NFDH into a strip as wide as `(1/3+ε)·opt`.
pub fn pack_medium(mh: &[Item], mv: &[Item], width: i64, p: &Params) -> Result<MediumPacking, ShelfError> {
    let mut out = MediumPacking::default();
    let pk = nfdh(mh, width)?;
    for pl in &pk.placements {
        let it = mh.iter().find(|i| i.id == pl.id).expect("placed item");
        out.mh.push(rect(it.id, pl.x, it.w, q(pl.y), it.h));
    }
    out.mh_height = out.mh.iter().map(RRect::top).max().unwrap_or_else(|| q(0));
    out.mh_within = out.mh_height <= p.eps_opt();

    let strip = p.tall_threshold();
    let mut pieces: Vec<Piece> = mv.iter().map(|i| Piece { id: i.id, along: i.h, across: i.w }).collect();
    if let Some(pc) = pieces.iter().find(|pc| q(pc.along) > strip) {
        return Err(ShelfError::TooWide(pc.id, pc.along, to_i64(&floor_int(&strip)).unwrap_or(0)));
    }
    shelf_order(&mut pieces);
    let (pos, _, _) = fill_region(&pieces, &q(0), &strip, &q(0), None, false);
    for (id, y, x) in pos {
        let it = mv.iter().find(|i| i.id == id).expect("placed item");
        let x = x.to_integer().try_into().expect("integral");
        out.mv.push(rect(id, x, it.w, y, it.h));
    }
    out.mv_width = out.mv.iter().map(|r| r.x + r.w).max().unwrap_or(0);
    out.mv_within = q(out.mv_width) <= frac(3, 2) * &p.eps * q(width);
    Ok(out)
}

/// A linear group of the width-sorted stack of horizontal items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub width: i64,
    pub height: Q,
    pub members: Vec<ItemId>,
}

/// Stacks items by ascending width and cuts the stack every `unit`, measured
/// from the top. Group 0 is the widest. Each item joins the group holding its
/// top edge, and a group's width is the widest item reaching into it.
pub fn linear_grouping(items: &[Item], unit: &Q) -> Vec<Group> {
    let mut sorted: Vec<&Item> = items.iter().collect();
    sorted.sort_by(|a, b| a.w.cmp(&b.w).then(a.id.cmp(&b.id)));
    let total: i64 = sorted.iter().map(|i| i.h).sum();
    if total == 0 {
        return Vec::new();
    }
    let s = q(total);
    let count = to_i64(&ceil_int(&(&s / unit))).unwrap_or(1).max(1) as usize;
    let mut groups: Vec<Group> = (0..count)
        .map(|g| {
            let hi = &s - unit * q(g as i64);
            let lo = &s - unit * q(g as i64 + 1);
            let lo = if lo < q(0) { q(0) } else { lo };
            Group { width: 0, height: hi - lo, members: Vec::new() }
        })
        .collect();
    let mut c = 0i64;
    for it in sorted {
        let (b, t) = (q(c), q(c + it.h));
        for (g, gr) in groups.iter_mut().enumerate() {
            let hi = &s - unit * q(g as i64);
            let lo = &s - unit * q(g as i64 + 1);
            if b < hi && t > lo {
                gr.width = gr.width.max(it.w);
            }
        }
        let g = to_i64(&floor_int(&((&s - &t) / unit))).unwrap_or(0) as usize;
        groups[g.min(count - 1)].members.push(it.id);
        c += it.h;
    }
    groups
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HorizontalPacking {
    /// Items placed inside the boxes, global coordinates.
    pub placed: Vec<RRect>,
    /// Items for the extra box, coordinates relative to its lower left corner.
    pub extra: Vec<RRect>,
    pub extra_height: Q,
    pub small_boxes: Vec<RBox>,
    pub groups: usize,
    /// Items removed from each used configuration (one entry per LP column used).
    pub removed: Vec<Vec<ItemId>>,
    pub lp_rows: usize,
    pub support: usize,
    /// Area of the boxes covered by configurations.
    pub config_area: Q,
}

/// Linear grouping, a configuration LP over the boxes and a greedy fill.
/// Everything that does not fit goes into the extra box of width `width`.
pub fn pack_horizontal(
    items: &[Item],
    boxes: &[Rect],
    width: i64,
    p: &Params,
    cap: usize,
) -> Result<HorizontalPacking, PlaceError> {
    let mut out = HorizontalPacking::default();
    let groups = linear_grouping(items, &p.eps_opt());
    out.groups = groups.len();
    let by_id: BTreeMap<ItemId, &Item> = items.iter().map(|i| (i.id, i)).collect();
    let mut extra_stack: Vec<ItemId> = groups.first().map(|g| g.members.clone()).unwrap_or_default();

    // merge the remaining groups by rounded width
    let mut classes: BTreeMap<i64, (Q, Vec<ItemId>)> = BTreeMap::new();
    for g in groups.iter().skip(1) {
        let e = classes.entry(g.width).or_insert_with(|| (q(0), Vec::new()));
        e.0 += &g.height;
        e.1.extend(g.members.iter().copied());
    }
    let widths: Vec<i64> = classes.keys().copied().collect();
    let mut queues: Vec<VecDeque<ItemId>> = classes.values().map(|c| c.1.iter().copied().collect()).collect();
    let mut leftover: Vec<ItemId> = Vec::new();

    let mut used_box = vec![false; boxes.len()];
    if !widths.is_empty() {
        let sizes: Vec<Q> = widths.iter().map(|&w| q(w)).collect();
        let mut clp = ConfigLp::default();
        for (b, bx) in boxes.iter().enumerate() {
            for c in enumerate_configurations(&sizes, &q(bx.w), Mode::Horizontal, cap)? {
                if c.is_empty() {
                    continue;
                }
                let k = clp.configs.len();
                clp.configs.push(c);
                clp.columns.push((k, Some(b)));
            }
        }
        let n = clp.columns.len();
        let mut lp = Lp::new(n);
        for (ci, (_, (demand, _))) in classes.iter().enumerate() {
            let row = clp.columns.iter().map(|&(k, _)| q(clp.configs[k].count(ci) as i64)).collect();
            lp.push(row, Rel::Eq, demand.clone());
        }
        for (b, bx) in boxes.iter().enumerate() {
            let row = clp.columns.iter().map(|&(_, bb)| if bb == Some(b) { q(1) } else { q(0) }).collect();
            lp.push(row, Rel::Le, bx.h.clone());
        }
        out.lp_rows = lp.rows.len();
        clp.lp = lp;
        let sol = solve_config_lp(&clp)?;
        out.support = sol.support.len();

        let mut cursor: Vec<Q> = boxes.iter().map(|b| b.y.clone()).collect();
        for (col, x) in &sol.support {
            let (k, b) = clp.columns[*col];
            let b = b.expect("box column");
            used_box[b] = true;
            let bx = &boxes[b];
            let conf: &Configuration = &clp.configs[k];
            let y0 = cursor[b].clone();
            let mut slot_x = bx.x;
            let mut removed = Vec::new();
            for (ci, &w) in widths.iter().enumerate() {
                for _ in 0..conf.count(ci) {
                    let mut fill = q(0);
                    let mut last: Option<usize> = None;
                    while &fill < x {
                        let Some(id) = queues[ci].pop_front() else { break };
                        let it = by_id[&id];
                        out.placed.push(rect(id, slot_x, it.w, &y0 + &fill, it.h));
                        last = Some(out.placed.len() - 1);
                        fill += q(it.h);
                    }
                    if &fill > x {
                        let r = out.placed.remove(last.expect("overflowing item"));
                        removed.push(r.id);
                    }
                    slot_x += w;
                }
            }
            out.config_area += q(slot_x - bx.x) * x;
            if slot_x < bx.x + bx.w {
                out.small_boxes.push(RBox { x: q(slot_x), y: y0.clone(), w: q(bx.x + bx.w - slot_x), h: x.clone() });
            }
            cursor[b] = &y0 + x;
            out.removed.push(removed);
        }
        for (b, bx) in boxes.iter().enumerate() {
            if cursor[b] < bx.top() {
                out.small_boxes.push(RBox { x: q(bx.x), y: cursor[b].clone(), w: q(bx.w), h: bx.top() - &cursor[b] });
            }
        }
        for qu in &mut queues {
            leftover.extend(qu.drain(..));
        }
    } else {
        for (b, bx) in boxes.iter().enumerate() {
            if !used_box[b] {
                out.small_boxes.push(RBox::from_rect(bx));
            }
        }
    }

    // extra box: widest group stacked, one row per configuration of removed items, then NFDH
    let mut y = q(0);
    extra_stack.sort();
    for id in &extra_stack {
        let it = by_id[id];
        out.extra.push(rect(*id, 0, it.w, y.clone(), it.h));
        y += q(it.h);
    }
    for row in &out.removed {
        let mut x = 0;
        let mut hmax = 0;
        for id in row {
            let it = by_id[id];
            out.extra.push(rect(*id, x, it.w, y.clone(), it.h));
            x += it.w;
            hmax = hmax.max(it.h);
        }
        y += q(hmax);
    }
    if !leftover.is_empty() {
        let rest: Vec<Item> = leftover.iter().map(|id| *by_id[id]).collect();
        let pk = nfdh(&rest, width).expect("horizontal items fit the strip");
        for pl in pk.placements {
            let it = by_id[&pl.id];
            out.extra.push(rect(pl.id, pl.x, it.w, &y + q(pl.y), it.h));
        }
    }
    out.extra_height = out.extra.iter().map(RRect::top).max().unwrap_or_else(|| q(0));
    Ok(out)
}

/// A vertical item with its rounded height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VItem {
    pub item: Item,
    pub rounded: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerticalPacking {
    pub placed: Vec<RRect>,
    /// Items that found no room; they go to the extra strip.
    pub leftover: Vec<ItemId>,
    pub small_boxes: Vec<RBox>,
    pub lp_rows: usize,
    pub support: usize,
    /// Largest number of split items of one size in one configuration, in
    /// the fractional fill of the configurations.
    pub max_splits: usize,
    /// Area of the boxes covered by configurations.
    pub config_area: Q,
}

/// Configuration LP over stacked heights with nested capacity rows, then
/// configurations go smallest first into the smallest box that is high
/// enough. Items are placed whole; what does not fit is left over.
pub fn pack_vertical(items: &[VItem], boxes: &[Rect], cap: usize) -> Result<VerticalPacking, PlaceError> {
    let mut out = VerticalPacking::default();
    if items.is_empty() {
        out.small_boxes = boxes.iter().map(RBox::from_rect).collect();
        return Ok(out);
    }
    let mut classes: BTreeMap<Q, Vec<&VItem>> = BTreeMap::new();
    for v in items {
        classes.entry(v.rounded.clone()).or_default().push(v);
    }
    let heights: Vec<Q> = classes.keys().cloned().collect();
    let demand: Vec<Q> = classes.values().map(|vs| q(vs.iter().map(|v| v.item.w).sum::<i64>())).collect();
    let mut box_heights: Vec<Q> = boxes.iter().map(|b| b.h.clone()).collect();
    box_heights.sort();
    box_heights.dedup();
    let top = box_heights.last().cloned().unwrap_or_else(|| q(0));
    let configs: Vec<Configuration> = enumerate_configurations(&heights, &top, Mode::Vertical, cap)?
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let hc: Vec<Q> = configs.iter().map(|c| c.total(&heights)).collect();
    let mut lp = Lp::new(configs.len());
    for (ci, d) in demand.iter().enumerate() {
        lp.push(configs.iter().map(|c| q(c.count(ci) as i64)).collect(), Rel::Eq, d.clone());
    }
    for (k, hb) in box_heights.iter().enumerate() {
        // configurations that need a box of height at least hb
        let below = if k == 0 { q(0) } else { box_heights[k - 1].clone() };
        let row = hc.iter().map(|h| if *h > below { q(1) } else { q(0) }).collect();
        let capw: i64 = boxes.iter().filter(|b| &b.h >= hb).map(|b| b.w).sum();
        lp.push(row, Rel::Le, q(capw));
    }
    out.lp_rows = lp.rows.len();
    let clp = ConfigLp { columns: (0..configs.len()).map(|k| (k, None)).collect(), configs, lp };
    let sol = solve_config_lp(&clp)?;
    out.support = sol.support.len();

    // fractional fill, only to count split items
    let mut order: Vec<(usize, Q)> = sol.support.clone();
    order.sort_by(|a, b| hc[a.0].cmp(&hc[b.0]).then(a.0.cmp(&b.0)));
    for (ci, vs) in classes.values().enumerate() {
        let mut edges = Vec::new();
        let mut acc = q(0);
        for v in vs {
            acc += q(v.item.w);
            edges.push(acc.clone());
        }
        let mut start = q(0);
        for (k, x) in &order {
            let len = x * q(clp.configs[*k].count(ci) as i64);
            if len == q(0) {
                continue;
            }
            let end = &start + &len;
            let mut splits = 0;
            let mut lo = q(0);
            for e in &edges {
                let crosses = |p: &Q| lo < *p && p < e;
                if crosses(&start) || crosses(&end) {
                    splits += 1;
                }
                lo = e.clone();
            }
            out.max_splits = out.max_splits.max(splits);
            start = end;
        }
    }

    // assign configurations to boxes
    let mut bidx: Vec<usize> = (0..boxes.len()).collect();
    bidx.sort_by(|&a, &b| boxes[a].h.cmp(&boxes[b].h).then(boxes[a].x.cmp(&boxes[b].x)).then(boxes[a].y.cmp(&boxes[b].y)));
    let mut used: Vec<Q> = vec![q(0); boxes.len()];
    let mut queues: Vec<VecDeque<&VItem>> = classes
        .values()
        .map(|vs| {
            let mut v = vs.clone();
            v.sort_by(|a, b| b.item.w.cmp(&a.item.w).then(a.item.id.cmp(&b.item.id)));
            v.into_iter().collect()
        })
        .collect();
    for (k, x) in &order {
        let conf = &clp.configs[*k];
        let mut need = x.clone();
        for &b in &bidx {
            if need == q(0) {
                break;
            }
            let bx = &boxes[b];
            if bx.h < hc[*k] {
                continue;
            }
            let free = q(bx.w) - &used[b];
            if free <= q(0) {
                continue;
            }
            let take = if free < need { free } else { need.clone() };
            let a = q(bx.x) + &used[b];
            // rows bottom up, highest class first
            let mut y = bx.y.clone();
            for ci in (0..heights.len()).rev() {
                for _ in 0..conf.count(ci) {
                    let mut xi = to_i64(&ceil_int(&a)).unwrap_or(0);
                    while let Some(v) = queues[ci].front() {
                        if q(xi + v.item.w) > &a + &take {
                            break;
                        }
                        let v = queues[ci].pop_front().unwrap();
                        out.placed.push(rect(v.item.id, xi, v.item.w, y.clone(), v.item.h));
                        xi += v.item.w;
                    }
                    y += &heights[ci];
                }
            }
            out.config_area += &take * &hc[*k];
            if y < bx.top() {
                out.small_boxes.push(RBox { x: a.clone(), y: y.clone(), w: take.clone(), h: bx.top() - &y });
            }
            used[b] += &take;
            need -= take;
        }
        if need > q(0) {
            return Err(PlaceError::BoxFit(need));
        }
    }
    for (b, bx) in boxes.iter().enumerate() {
        if used[b] < q(bx.w) {
            out.small_boxes.push(RBox { x: q(bx.x) + &used[b], y: bx.y.clone(), w: q(bx.w) - &used[b], h: bx.h.clone() });
        }
    }
    for qu in queues {
        out.leftover.extend(qu.into_iter().map(|v| v.item.id));
    }
    Ok(out)
}

/// Vertical leftovers turned by a quarter turn and packed by FFDH into a
/// strip as wide as `height`; returns positions relative to the strip origin
/// and the width used.
pub fn pack_leftover_vertical(items: &[Item], height: &Q) -> (Vec<RRect>, Vec<ItemId>, i64) {
    let mut pieces: Vec<Piece> = items.iter().map(|i| Piece { id: i.id, along: i.h, across: i.w }).collect();
    shelf_order(&mut pieces);
    let fits: Vec<Piece> = pieces.iter().copied().filter(|p| q(p.along) <= *height).collect();
    let rest: Vec<ItemId> = pieces.iter().filter(|p| q(p.along) > *height).map(|p| p.id).collect();
    let (pos, _, _) = fill_region(&fits, &q(0), height, &q(0), None, true);
    let mut out = Vec::new();
    for (id, y, x) in pos {
        let it = items.iter().find(|i| i.id == id).expect("placed item");
        out.push(rect(id, x.to_integer().try_into().expect("integral"), it.w, y, it.h));
    }
    let used = out.iter().map(|r| r.x + r.w).max().unwrap_or(0);
    (out, rest, used)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmallPacking {
    pub placed: Vec<RRect>,
    pub unplaced: Vec<ItemId>,
    pub discarded: usize,
}

/// NFDH into the boxes left by vertical items, then NFDH turned by a quarter
/// turn into the boxes left by horizontal items. Boxes thinner than `μW` or
/// lower than `μ·opt` are skipped.
pub fn pack_small(items: &[Item], sv: &[RBox], sh: &[RBox], width: i64, p: &Params) -> SmallPacking {
    let mut out = SmallPacking::default();
    let mw = &p.mu * q(width);
    let mh = &p.mu * q(p.opt);
    let keep = |b: &&RBox| b.w >= mw && b.h >= mh;
    out.discarded = sv.iter().chain(sh).filter(|b| !keep(b)).count();
    let by_id: BTreeMap<ItemId, &Item> = items.iter().map(|i| (i.id, i)).collect();

    let mut pieces: Vec<Piece> = items.iter().map(|i| Piece { id: i.id, along: i.w, across: i.h }).collect();
    shelf_order(&mut pieces);
    for b in sv.iter().filter(keep) {
        if pieces.is_empty() {
            break;
        }
        let (x0, w) = b.int_x();
        let (pos, taken, _) = fill_region(&pieces, &q(x0), &q(w), &b.y, Some(&b.h), false);
        for (id, x, y) in pos {
            let it = by_id[&id];
            out.placed.push(rect(id, x.to_integer().try_into().expect("integral"), it.w, y, it.h));
        }
        pieces.drain(..taken);
    }
    let mut turned: Vec<Piece> = pieces.iter().map(|pc| Piece { id: pc.id, along: pc.across, across: pc.along }).collect();
    shelf_order(&mut turned);
    for b in sh.iter().filter(keep) {
        if turned.is_empty() {
            break;
        }
        let (x0, w) = b.int_x();
        let (pos, taken, _) = fill_region(&turned, &b.y, &b.h, &q(x0), Some(&q(w)), false);
        for (id, y, x) in pos {
            let it = by_id[&id];
            out.placed.push(rect(id, x.to_integer().try_into().expect("integral"), it.w, y, it.h));
        }
        turned.drain(..taken);
    }
    out.unplaced = turned.iter().map(|pc| pc.id).collect();
    out
}
