//! Turning the contents of a tall/vertical box into subboxes: boxes for
//! tall items of one height and boxes for vertical items.

use std::collections::BTreeSet;

use thiserror::Error;

use super::bars::{Arrangement, Bar, BarKind};
use super::columns::{ColumnBox, Fill, TallRef};
use super::containers::{alpha_bound, build_containers, container_fit};
use super::partition::free_boxes;
use super::reorder::{reorder_box, ReorderError};
use crate::classify::Params;
use crate::geom::ItemId;
use crate::layout::Rect;
use crate::rational::{frac, min, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubboxError {
    #[error(transparent)]
    Reorder(#[from] ReorderError),
    #[error("bars built for the box at x = {0} overlap")]
    Bars(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoxStats {
    pub high: bool,
    /// 1 or 2 for reordered segments, 0 when nothing was reordered.
    pub case: u8,
    pub tall_subboxes: usize,
    pub vertical_subboxes: usize,
    pub within_bound: bool,
    pub alpha: Q,
    pub alpha_bound: Q,
    /// Smallest positive difference of two bar heights (or of a bar and the box).
    pub beta: Option<Q>,
    pub fit_ok: bool,
    /// Vertical area in containers that the reordering does not guarantee.
    pub overflow_area: Q,
    pub overflow_height: Q,
    /// Highest container before reordering.
    pub container_max: Q,
    /// Columns cut out around items crossing the box border.
    pub cut_columns: i64,
}

/// Subboxes of one box in global coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoxPlan {
    pub tall: Vec<Rect>,
    pub vertical: Vec<Rect>,
    /// Tall items crossing the box border; they keep their own position.
    pub unmovable: Vec<ItemId>,
    pub stats: BoxStats,
}

/// Columns spanned by unmovable tall items, closed under adding the full
/// span of every tall item meeting them.
fn cut_columns(b: &ColumnBox) -> Vec<bool> {
    let mut cut = vec![false; b.width() as usize];
    for t in b.tall.iter().filter(|t| !t.movable) {
        let (a, e) = b.span(t);
        (a..e).for_each(|c| cut[c as usize] = true);
    }
    loop {
        let mut changed = false;
        for t in &b.tall {
            let (a, e) = b.span(t);
            if (a..e).any(|c| cut[c as usize]) && !(a..e).all(|c| cut[c as usize]) {
                (a..e).for_each(|c| cut[c as usize] = true);
                changed = true;
            }
        }
        if !changed {
            return cut;
        }
    }
}

/// Maximal column ranges with equal flag.
fn ranges(flags: &[bool]) -> Vec<(i64, i64, bool)> {
    let mut out: Vec<(i64, i64, bool)> = Vec::new();
    for (c, &f) in flags.iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.2 == f => last.1 = c as i64 + 1,
            _ => out.push((c as i64, c as i64 + 1, f)),
        }
    }
    out
}

fn inside(b: &ColumnBox, t: &TallRef, lo: i64, hi: i64) -> bool {
    let (a, e) = b.span(t);
    lo <= a && e <= hi
}

/// Tall items keep their place in a cut range; everything else in it becomes
/// vertical boxes around them.
fn plan_cut(b: &ColumnBox, lo: i64, hi: i64, plan: &mut BoxPlan) {
    let x0 = b.rect.x + lo;
    let mut obstacles = Vec::new();
    for t in &b.tall {
        let (a, e) = b.span(t);
        if e <= lo || a >= hi {
            continue;
        }
        let (a, e) = (a.max(lo), e.min(hi));
        obstacles.push(Rect::new(a - lo, e - a, t.y.clone(), t.h.clone()));
        if t.movable {
            plan.tall.push(Rect::new(t.x, t.w, &b.rect.y + &t.y, t.h.clone()));
        } else if !plan.unmovable.contains(&t.id) {
            plan.unmovable.push(t.id);
        }
    }
    for r in free_boxes(&obstacles, hi - lo, &b.rect.h) {
        plan.vertical.push(Rect::new(x0 + r.x, r.w, &b.rect.y + &r.y, r.h));
    }
    plan.stats.cut_columns += hi - lo;
}

/// Tall edges inside `[lo, hi)`, both ends included.
fn edges(b: &ColumnBox, lo: i64, hi: i64) -> Vec<i64> {
    let mut e: BTreeSet<i64> = [lo, hi].into_iter().collect();
    for t in b.tall.iter().filter(|t| inside(b, t, lo, hi)) {
        let (a, z) = b.span(t);
        e.insert(a);
        e.insert(z);
    }
    e.into_iter().collect()
}

/// Bottom and top tall heights of column `c`.
fn column_tall(b: &ColumnBox, c: i64) -> (Q, Q) {
    let h = b.height();
    let mut bottom = q(0);
    let mut top = q(0);
    for s in &b.cols[c as usize] {
        if let Fill::Tall(_) = s.fill {
            if s.y == q(0) {
                bottom = s.h.clone();
            } else if s.top() == *h {
                top = s.h.clone();
            }
        }
    }
    (bottom, top)
}

fn vertical_in(b: &ColumnBox, c: i64) -> Q {
    b.cols[c as usize].iter().filter(|s| matches!(s.fill, Fill::Vertical(_))).map(|s| s.h.clone()).sum()
}

/// Bars of a segment without unmovable items: tall items, pseudo items over
/// the parts of the columns not taken by tall items, and merged bars for
/// tall items leaving no room for another one.
fn segment_bars(b: &ColumnBox, lo: i64, hi: i64, p: &Params) -> Vec<(i64, Bar)> {
    let h = b.height().clone();
    let very = &h - p.tall_threshold();
    let mut placed = Vec::new();
    let mut merged: Vec<(i64, i64)> = Vec::new();
    for t in b.tall.iter().filter(|t| inside(b, t, lo, hi)) {
        let (a, e) = b.span(t);
        if t.h > very && t.h < h {
            let mut bar = Bar::new(e - a, h.clone(), false);
            bar.kind = BarKind::Merged;
            bar.inner = Some(t.h.clone());
            placed.push((a - lo, bar));
            merged.push((a, e));
            continue;
        }
        let top = t.y > q(0) && t.h < h;
        placed.push((a - lo, Bar::new(e - a, t.h.clone(), top)));
    }
    let ed = edges(b, lo, hi);
    for w in ed.windows(2) {
        let (a, e) = (w[0], w[1]);
        if merged.iter().any(|&(ma, me)| ma <= a && e <= me) {
            continue;
        }
        let (bt, tp) = column_tall(b, a);
        let pseudo = match (bt > q(0), tp > q(0)) {
            (false, false) => Some(Bar::pseudo(e - a, h.clone(), false)),
            (true, false) => Some(Bar::pseudo(e - a, &h - &bt, true)),
            (false, true) => Some(Bar::pseudo(e - a, &h - &tp, false)),
            (true, true) => None,
        };
        if let Some(bar) = pseudo.filter(|bar| bar.h > q(0)) {
            placed.push((a - lo, bar));
        }
    }
    placed
}

/// Maximal runs of adjacent bars of one class on the same side: `(x, w, bar)`.
fn runs(arr: &Arrangement) -> Vec<(i64, i64, usize)> {
    let mut out = Vec::new();
    for side in 0..3 {
        let mut idx: Vec<usize> = (0..arr.bars.len())
            .filter(|&i| {
                let b = &arr.bars[i];
                let s = if b.is_full(&arr.height) { 2 } else if b.top { 1 } else { 0 };
                s == side
            })
            .collect();
        idx.sort_by_key(|&i| arr.xs[i]);
        let mut cur: Option<(i64, i64, usize)> = None;
        for &i in &idx {
            let b = &arr.bars[i];
            match cur.as_mut() {
                Some(r) if r.0 + r.1 == arr.xs[i] && arr.bars[r.2].same_class(b) => r.1 += b.w,
                _ => {
                    out.extend(cur.take());
                    cur = Some((arr.xs[i], b.w, i));
                }
            }
        }
        out.extend(cur);
    }
    out
}

fn beta_of(arr: &Arrangement) -> Option<Q> {
    let mut hs: Vec<&Q> = arr.bars.iter().map(|b| &b.h).chain(std::iter::once(&arr.height)).collect();
    hs.sort();
    hs.dedup();
    hs.windows(2).map(|w| w[1] - w[0]).min()
}

fn plan_segment(b: &ColumnBox, lo: i64, hi: i64, p: &Params, plan: &mut BoxPlan) -> Result<(), SubboxError> {
    let h = b.height().clone();
    let arr = Arrangement::new(hi - lo, h.clone(), segment_bars(b, lo, hi, p));
    if arr.conflict().is_some() {
        return Err(SubboxError::Bars(b.rect.x + lo));
    }
    let before = build_containers(&arr);
    let out = reorder_box(&arr)?;
    let new = &out.arrangement;
    let after = build_containers(new);
    let cmax = before.iter().max().cloned().unwrap_or_else(|| q(0));
    let beta = beta_of(&arr);
    // with containers no higher than `cmax`, β/(β + cmax) is admissible as well
    let bound = match &beta {
        Some(b) if cmax > q(0) => crate::rational::max(&alpha_bound(&arr), &(b / (b + &cmax))),
        _ => alpha_bound(&arr),
    };
    let alpha = min(&(q(2) * &p.eps), &bound);
    let st = &mut plan.stats;
    if cmax > st.container_max {
        st.container_max = cmax;
    }
    st.case = st.case.max(out.case);
    st.within_bound &= out.within_bound();
    st.alpha = alpha.clone();
    st.alpha_bound = min(&st.alpha_bound, &bound);
    if let Some(beta) = beta {
        st.beta = Some(st.beta.as_ref().map_or(beta.clone(), |x| min(x, &beta)));
    }
    match container_fit(&before, &after, &alpha) {
        Ok(pairs) => {
            let kept: BTreeSet<usize> = pairs.iter().map(|&(o, _)| o).collect();
            for (c, hgt) in before.iter().enumerate() {
                if *hgt > q(0) && !kept.contains(&c) {
                    st.overflow_area += vertical_in(b, lo + c as i64);
                    if *hgt > st.overflow_height {
                        st.overflow_height = hgt.clone();
                    }
                }
            }
        }
        Err(_) => st.fit_ok = false,
    }

    let gx = b.rect.x + lo;
    let y = &b.rect.y;
    for (x, w, i) in runs(new) {
        let bar = &new.bars[i];
        let y0 = y + bar.y0(&h);
        match bar.kind {
            BarKind::Tall => plan.tall.push(Rect::new(gx + x, w, y0, bar.h.clone())),
            BarKind::Pseudo => plan.vertical.push(Rect::new(gx + x, w, y0, bar.h.clone())),
            BarKind::Merged => {
                let inner = bar.inner.clone().unwrap_or_else(|| q(0));
                plan.tall.push(Rect::new(gx + x, w, y.clone(), inner.clone()));
                plan.vertical.push(Rect::new(gx + x, w, y + &inner, &h - &inner));
            }
        }
    }
    // gaps between the top and bottom bars of every column
    let (top, bottom) = new.column_cover();
    let mut gap: Option<(i64, i64, Q, Q)> = None;
    for c in 0..=new.width {
        let cur = (c < new.width)
            .then(|| (bottom[c as usize].clone(), &h - &top[c as usize]))
            .filter(|(a, z)| a < z);
        let same = matches!((&gap, &cur), (Some(g), Some(k)) if g.2 == k.0 && g.3 == k.1);
        if same {
            gap.as_mut().unwrap().1 += 1;
            continue;
        }
        if let Some((x, w, a, z)) = gap.take() {
            plan.vertical.push(Rect::new(gx + x, w, y + &a, &z - &a));
        }
        gap = cur.map(|(a, z)| (c, 1, a, z));
    }
    Ok(())
}

fn new_plan(high: bool) -> BoxPlan {
    let stats = BoxStats { high, within_bound: true, fit_ok: true, alpha_bound: q(1), ..BoxStats::default() };
    BoxPlan { stats, ..BoxPlan::default() }
}

/// Subboxes of a box of height at least `(2/3 + 4ε)·opt` or with two tall
/// items in one column. Expects movable tall items at the top or bottom.
pub fn plan_high_box(b: &ColumnBox, p: &Params) -> Result<BoxPlan, SubboxError> {
    let mut plan = new_plan(true);
    for (lo, hi, cut) in ranges(&cut_columns(b)) {
        if cut {
            plan_cut(b, lo, hi, &mut plan);
        } else {
            plan_segment(b, lo, hi, p, &mut plan)?;
        }
    }
    plan.stats.tall_subboxes = plan.tall.len();
    plan.stats.vertical_subboxes = plan.vertical.len();
    Ok(plan)
}

/// Subboxes of a low box with at most one tall item per column. Movable
/// tall items are expected at the bottom; the slides between tall edges are
/// sorted by decreasing tall height so equal heights become neighbours.
pub fn rearrange_short_box(b: &ColumnBox) -> BoxPlan {
    let mut plan = new_plan(false);
    let h = b.height().clone();
    for (lo, hi, cut) in ranges(&cut_columns(b)) {
        if cut {
            plan_cut(b, lo, hi, &mut plan);
            continue;
        }
        let ed = edges(b, lo, hi);
        let mut slides: Vec<(Q, i64)> = ed.windows(2).map(|w| (column_tall(b, w[0]).0, w[1] - w[0])).collect();
        slides.sort_by(|a, z| z.0.cmp(&a.0));
        let mut x = b.rect.x + lo;
        let mut k = 0;
        while k < slides.len() {
            let t = slides[k].0.clone();
            let mut w = 0;
            while k < slides.len() && slides[k].0 == t {
                w += slides[k].1;
                k += 1;
            }
            if t > q(0) {
                plan.tall.push(Rect::new(x, w, b.rect.y.clone(), t.clone()));
            }
            if t < h {
                plan.vertical.push(Rect::new(x, w, &b.rect.y + &t, &h - &t));
            }
            x += w;
        }
    }
    plan.stats.tall_subboxes = plan.tall.len();
    plan.stats.vertical_subboxes = plan.vertical.len();
    plan
}

/// Whether a box is handled by [`plan_high_box`].
pub fn is_high(b: &ColumnBox, p: &Params) -> bool {
    b.rect.h >= (frac(2, 3) + q(4) * &p.eps) * p.opt_q() || b.stacked_tall()
}
