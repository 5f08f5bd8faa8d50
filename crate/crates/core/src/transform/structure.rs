//! From a packing of height at most `opt` to a box structure: fixed large
//! items, boxes for horizontal items, boxes for tall items of one height and
//! boxes for vertical items, all inside `[0, W) × [0, (1 + 5ε)·opt)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::columns::{normalize_tall, ColumnBox, ColumnError};
use super::partition::{check_partition, partition_boxes, PartitionCheck, PartitionError};
use super::snap::{snap_box_heights, snap_to_eps, SnapError, SnapReport};
use super::subbox::{is_high, plan_high_box, rearrange_short_box, BoxStats, SubboxError};
use crate::classify::{classify, round_heights, Class, Classification, Params, RoundError, RoundedInstance};
use crate::geom::{Instance, ItemId, Packing};
use crate::layout::Rect;
use crate::rational::{floor_int, frac, min, q, to_i64, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("rounding: {0}")]
    Round(#[from] RoundError),
    #[error("snapping: {0}")]
    Snap(#[from] SnapError),
    #[error("partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("box contents: {0}")]
    Column(#[from] ColumnError),
    #[error("subboxes: {0}")]
    Subbox(#[from] SubboxError),
}

/// Checks on a structure; see [`StructureCertificate::holds`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureCertificate {
    pub partition: PartitionCheck,
    pub main_height: Q,
    pub main_bound: Q,
    pub high_boxes: usize,
    pub short_boxes: usize,
    pub skipped_enlargements: usize,
    pub beta: Option<Q>,
    pub beta_ok: bool,
    pub alpha: Q,
    pub alpha_bound: Q,
    pub alpha_ok: bool,
    pub subboxes_ok: bool,
    pub fit_ok: bool,
    pub tall_boxes: usize,
    pub vertical_boxes: usize,
    pub overflow_area: Q,
    pub overflow_height: Q,
    pub container_max: Q,
    pub v0_width: i64,
    pub v0_height: Q,
    pub overflow_area_ok: bool,
    pub overflow_height_ok: bool,
    /// Free area of the horizontal and vertical boxes and of `V0`.
    pub free_area: Q,
    pub small_area: Q,
    /// `A(S) + (1 - 2ε)(1/3 + ε)·opt·W`.
    pub free_required: Q,
    pub free_ok: bool,
    pub tiles: bool,
}

impl StructureCertificate {
    /// Everything except the height of the overflow, which may exceed the
    /// height of the box taking it.
    pub fn holds(&self) -> bool {
        self.partition.holds()
            && self.main_height <= self.main_bound
            && self.beta_ok
            && self.alpha_ok
            && self.subboxes_ok
            && self.fit_ok
            && self.overflow_area_ok
            && self.free_ok
            && self.tiles
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let ok = |b: bool| if b { "ok" } else { "FAIL" };
        let p = &self.partition;
        let _ = writeln!(s, "partition tiles the main area: {}", ok(p.tiles));
        let _ = writeln!(s, "large items unchanged: {}", ok(p.large_exact));
        let _ = writeln!(s, "horizontal boxes {} <= {}", p.horizontal_count, p.horizontal_bound);
        let _ = writeln!(s, "tall/vertical boxes {} <= {}", p.tv_count, p.tv_bound);
        let _ = writeln!(s, "horizontal items inside their boxes: {}", ok(p.horizontal_inside));
        let _ = writeln!(s, "no tall or vertical item cut: {}", ok(p.no_horizontal_cut));
        let _ = writeln!(s, "main height {} <= {}: {}", self.main_height, self.main_bound, ok(self.main_height <= self.main_bound));
        let _ = writeln!(
            s,
            "boxes: {} high, {} low, {} not enlarged",
            self.high_boxes, self.short_boxes, self.skipped_enlargements
        );
        let beta = self.beta.as_ref().map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(s, "beta {}: {}", beta, ok(self.beta_ok));
        let _ = writeln!(s, "alpha {} <= {}: {}", self.alpha, self.alpha_bound, ok(self.alpha_ok));
        let _ = writeln!(s, "subbox counts within bound: {}", ok(self.subboxes_ok));
        let _ = writeln!(s, "small containers fit after reordering: {}", ok(self.fit_ok));
        let _ = writeln!(s, "subboxes: {} tall, {} vertical", self.tall_boxes, self.vertical_boxes);
        let _ = writeln!(
            s,
            "overflow area {} <= {}: {}",
            self.overflow_area,
            q(self.v0_width) * &self.v0_height,
            ok(self.overflow_area_ok)
        );
        let _ = writeln!(
            s,
            "overflow height {} (highest container {}) <= {}: {}",
            self.overflow_height,
            self.container_max,
            self.v0_height,
            ok(self.overflow_height_ok)
        );
        let _ = writeln!(
            s,
            "free area {} >= {} (small area {} plus V0): {}",
            self.free_area,
            self.free_required,
            self.small_area,
            ok(self.free_ok)
        );
        let _ = writeln!(s, "subboxes tile the tall/vertical boxes: {}", ok(self.tiles));
        let _ = writeln!(s, "certificate: {}", ok(self.holds()));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub params: Params,
    pub classes: Classification,
    pub rounded: RoundedInstance,
    pub main_height: Q,
    pub large: Vec<(ItemId, Rect)>,
    pub horizontal: Vec<Rect>,
    pub tall: Vec<Rect>,
    pub vertical: Vec<Rect>,
    /// Height every tall item is stretched to.
    pub tall_heights: BTreeMap<ItemId, Q>,
    pub boxes: Vec<BoxStats>,
    pub snap: SnapReport,
    pub certificate: StructureCertificate,
}

/// Height of a tall item once rounded and stretched to a multiple of `ε·opt`.
pub fn snapped_tall_height(rounded: &Q, p: &Params) -> Q {
    crate::rational::ceil_to(rounded, &p.eps_opt())
}

pub fn v0_width(width: i64, p: &Params) -> i64 {
    to_i64(&floor_int(&((q(1) - q(2) * &p.eps) * q(width)))).unwrap_or(0)
}

/// Builds the structure of `packing`, which must have height at most `p.opt`.
pub fn build_structure(instance: &Instance, packing: &Packing, p: &Params) -> Result<Structure, StructureError> {
    let classes = classify(instance, p);
    let (rounded, mut layout) = round_heights(instance, packing, &classes, p)?;
    layout.rects.retain(|r| {
        matches!(classes.of(r.id), Some(Class::Large | Class::Tall | Class::Vertical | Class::Horizontal))
    });
    let (layout, snap) = snap_to_eps(&layout, &classes, p)?;
    let e = p.eps_opt();
    let top = (q(1) + q(4) * &p.eps) * p.opt_q();
    let mut part = partition_boxes(&layout, &classes, p, &top)?;
    let pcheck = check_partition(&part, &layout, &classes, p);

    let mut cboxes = Vec::with_capacity(part.tv.len());
    for r in &part.tv {
        cboxes.push(ColumnBox::from_layout(r, &layout, &classes)?);
    }
    let high: Vec<bool> = cboxes.iter().map(|b| is_high(b, p)).collect();
    let (_, skipped) = snap_box_heights(&mut part, &mut cboxes, &high, p);

    let mut tall = Vec::new();
    let mut vertical = Vec::new();
    let mut unmovable = Vec::new();
    let mut stats = Vec::new();
    for (k, b) in cboxes.iter().enumerate() {
        let n = normalize_tall(b)?;
        let plan = if high[k] { plan_high_box(&n, p)? } else { rearrange_short_box(&n) };
        tall.extend(plan.tall);
        vertical.extend(plan.vertical);
        for id in plan.unmovable {
            if !unmovable.contains(&id) {
                unmovable.push(id);
            }
        }
        stats.push(plan.stats);
    }
    for id in &unmovable {
        let r = layout.get(*id).expect("unmovable item in layout");
        tall.push(Rect::new(r.x, r.w, r.y.clone(), r.h.clone()));
    }
    let tall_heights: BTreeMap<ItemId, Q> = layout
        .rects
        .iter()
        .filter(|r| classes.of(r.id) == Some(Class::Tall))
        .map(|r| (r.id, r.h.clone()))
        .collect();

    // certificate
    let mut c = StructureCertificate {
        partition: pcheck,
        main_height: part.height.clone(),
        main_bound: (q(1) + q(5) * &p.eps) * p.opt_q(),
        high_boxes: high.iter().filter(|&&h| h).count(),
        short_boxes: high.iter().filter(|&&h| !h).count(),
        skipped_enlargements: skipped,
        alpha: q(2) * &p.eps,
        alpha_bound: q(1),
        subboxes_ok: true,
        fit_ok: true,
        tall_boxes: tall.len(),
        vertical_boxes: vertical.len(),
        v0_width: v0_width(instance.width(), p),
        v0_height: p.tall_threshold(),
        ..StructureCertificate::default()
    };
    for s in stats.iter().filter(|s| s.high) {
        if let Some(b) = &s.beta {
            c.beta = Some(c.beta.as_ref().map_or(b.clone(), |x| min(x, b)));
        }
        c.alpha_bound = min(&c.alpha_bound, &s.alpha_bound);
        c.subboxes_ok &= s.within_bound;
        c.fit_ok &= s.fit_ok;
        c.overflow_area += &s.overflow_area;
        if s.overflow_height > c.overflow_height {
            c.overflow_height = s.overflow_height.clone();
        }
        if s.container_max > c.container_max {
            c.container_max = s.container_max.clone();
        }
    }
    c.beta_ok = skipped == 0 && c.beta.as_ref().is_none_or(|b| *b >= e);
    c.alpha_ok = c.alpha <= c.alpha_bound;
    c.overflow_area_ok = c.overflow_area <= q(c.v0_width) * &c.v0_height;
    c.overflow_height_ok = c.overflow_height <= c.v0_height;

    let area = |rs: &[Rect]| rs.iter().map(Rect::area).sum::<Q>();
    let class_area = |cl: Class, rounded_h: bool| -> Q {
        instance
            .items()
            .iter()
            .filter(|i| classes.of(i.id) == Some(cl))
            .map(|i| if rounded_h { q(i.w) * rounded.height(i.id) } else { q(i.area()) })
            .sum()
    };
    // V0 taken at its exact width (1 - 2ε)W here
    let v0_area = (q(1) - q(2) * &p.eps) * q(instance.width()) * &c.v0_height;
    c.free_area = area(&part.horizontal) - class_area(Class::Horizontal, false) + area(&vertical) + &v0_area
        - class_area(Class::Vertical, true);
    c.small_area = class_area(Class::Small, false);
    c.free_required = &c.small_area + &v0_area;
    c.free_ok = c.free_area >= c.free_required;

    let tv_area = area(&part.tv);
    let mut sub: Vec<&Rect> = tall.iter().chain(&vertical).collect();
    sub.sort();
    sub.dedup();
    let sub_area: Q = sub.iter().map(|r| r.area()).sum();
    let fixed: Vec<&Rect> = part.large.iter().map(|(_, r)| r).chain(&part.horizontal).collect();
    let disjoint = (0..sub.len()).all(|i| (i + 1..sub.len()).all(|j| !sub[i].overlaps(sub[j])))
        && sub.iter().all(|r| fixed.iter().all(|f| !r.overlaps(f)));
    let inside = sub.iter().all(|r| r.x >= 0 && r.x + r.w <= part.width && r.y >= q(0) && r.top() <= part.height);
    c.tiles = disjoint && inside && sub_area == tv_area;

    Ok(Structure {
        params: p.clone(),
        classes,
        rounded,
        main_height: part.height.clone(),
        large: part.large,
        horizontal: part.horizontal,
        tall,
        vertical,
        tall_heights,
        boxes: stats,
        snap,
        certificate: c,
    })
}

/// `(1/3 + ε)·opt`, the height of the top row of the final layout.
pub fn top_row_height(p: &Params) -> Q {
    p.tall_threshold()
}

/// Upper bound `(4/3 + 9ε)·opt` on the height of the assembled layout.
pub fn final_bound(p: &Params) -> Q {
    (frac(4, 3) + q(9) * &p.eps) * p.opt_q()
}
