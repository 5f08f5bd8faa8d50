//! End-to-end solver: binary search on the optimum, box structures taken
//! from a witness packing or enumerated, placement of every class into its
//! boxes, and an NFDH fallback.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::classify::{classify, round_item, select_params, Class, Classification, Params};
use crate::geom::{packing_height, validate, Instance, Item, ItemId, Packing, Violation};
use crate::layout::{RLayout, RRect, Rect};
use crate::place::{nfdh, pack_horizontal, pack_leftover_vertical, pack_medium, pack_small, pack_vertical, RBox, VItem};
use crate::rational::{ceil_to, frac, is_pos, min, q, Q};
use crate::talldp::{assign_tall, TallBox, TallItem};
use crate::transform::structure::{final_bound, snapped_tall_height, top_row_height, v0_width};
use crate::transform::{build_structure, free_boxes, Structure, StructureCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Constants from the σ sequence with ε' = min(ε/9, 1/24).
    Faithful,
    /// ε as given and δ = ε^k_delta, μ = ε^k_mu.
    Practical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Faithful => "faithful",
            Mode::Practical => "practical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureSource {
    Enumerate,
    Witness(Packing),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Placements of the large items per guess of the optimum.
    pub positions: usize,
    /// Layouts of the tall boxes per placement of the large items.
    pub splits: usize,
    /// Configurations per configuration LP.
    pub configurations: usize,
    /// Search nodes spent on placing large items.
    pub nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { positions: 4, splits: 2, configurations: 100_000, nodes: 20_000 }
    }
}

impl Caps {
    pub fn zero() -> Self {
        Caps { positions: 0, splits: 0, configurations: 0, nodes: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveConfig {
    pub eps: Q,
    pub mode: Mode,
    pub source: StructureSource,
    pub caps: Caps,
    /// Return the better of the structured result and NFDH.
    pub fallback: bool,
    pub k_delta: u32,
    pub k_mu: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("eps must be 1/k for an integer k >= 2, got {0}")]
    Eps(Q),
    #[error("faithful mode needs eps <= 1/24, got {0}")]
    FaithfulEps(Q),
    #[error("need 0 < k_delta < k_mu, got {0} and {1}")]
    Exponents(u32, u32),
    #[error("witness packing is invalid: {0}")]
    Witness(String),
}

impl SolveConfig {
    pub fn practical(eps: Q) -> Self {
        SolveConfig {
            eps,
            mode: Mode::Practical,
            source: StructureSource::Enumerate,
            caps: Caps::default(),
            fallback: true,
            k_delta: 1,
            k_mu: 2,
        }
    }

    pub fn faithful(eps: Q) -> Self {
        SolveConfig { mode: Mode::Faithful, ..SolveConfig::practical(eps) }
    }

    pub fn with_witness(mut self, witness: Packing) -> Self {
        self.source = StructureSource::Witness(witness);
        self
    }

    /// The ε the algorithm runs with.
    pub fn working_eps(&self) -> Q {
        match self.mode {
            Mode::Faithful => min(&(&self.eps / q(9)), &frac(1, 24)),
            Mode::Practical => self.eps.clone(),
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let e = &self.eps;
        if !is_pos(e) || !e.recip().is_integer() || e.recip() < q(2) {
            return Err(ConfigError::Eps(e.clone()));
        }
        match self.mode {
            Mode::Faithful if *e > frac(1, 24) => Err(ConfigError::FaithfulEps(e.clone())),
            Mode::Practical if self.k_delta == 0 || self.k_mu <= self.k_delta => {
                Err(ConfigError::Exponents(self.k_delta, self.k_mu))
            }
            _ => Ok(()),
        }
    }

    /// Parameters for the guess `opt`; `None` when the constants cannot be chosen.
    pub fn params(&self, instance: &Instance, opt: i64) -> Option<Params> {
        match self.mode {
            Mode::Faithful => select_params(instance, &self.working_eps(), opt).ok(),
            Mode::Practical => Params::with_exponents(self.eps.clone(), opt, self.k_delta, self.k_mu).ok(),
        }
    }
}

/// Boxes of the main area `[0, W) × [0, main_height)`. The bands above it
/// (extra horizontal box, medium items, top row) are laid out by [`assemble`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutPlan {
    pub width: i64,
    pub main_height: Q,
    pub large: Vec<(ItemId, Rect)>,
    pub horizontal: Vec<Rect>,
    pub tall: Vec<Rect>,
    pub vertical: Vec<Rect>,
}

impl LayoutPlan {
    pub fn from_structure(s: &Structure, width: i64) -> Self {
        LayoutPlan {
            width,
            main_height: s.main_height.clone(),
            large: s.large.clone(),
            horizontal: s.horizontal.clone(),
            tall: s.tall.clone(),
            vertical: s.vertical.clone(),
        }
    }

    /// Boxes of the main area pairwise disjoint and inside it.
    pub fn is_consistent(&self) -> bool {
        let all: Vec<&Rect> =
            self.large.iter().map(|(_, r)| r).chain(&self.horizontal).chain(&self.tall).chain(&self.vertical).collect();
        let inside = all
            .iter()
            .all(|r| r.x >= 0 && r.x + r.w <= self.width && r.y >= q(0) && r.top() <= self.main_height);
        inside && (0..all.len()).all(|i| (i + 1..all.len()).all(|j| !all[i].overlaps(all[j])))
    }
}

/// Vertical positions of the bands above the main area.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bands {
    pub main: Q,
    pub extra: Q,
    pub medium: Q,
    pub top_row: Q,
    pub mv_width: i64,
    pub v0_width: i64,
    pub leftover_width: i64,
    pub overflow_y: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub layout: RLayout,
    pub packing: Packing,
    pub height: i64,
    pub rational_height: Q,
    /// Items that found no box and went to the overflow band.
    pub overflow: Vec<ItemId>,
    pub bands: Bands,
    pub notes: Vec<String>,
}

impl Assembly {
    pub fn complete(&self) -> bool {
        self.overflow.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("assembled packing is invalid: {0:?}")]
    Invalid(Vec<Violation>),
}

fn moved(r: &RRect, dx: i64, dy: &Q) -> RRect {
    RRect { id: r.id, x: r.x + dx, w: r.w, y: &r.y + dy, h: r.h.clone() }
}

/// Places every item of `instance` into the boxes of `plan` and the bands
/// above the main area, then lets the items drop to integral positions.
pub fn assemble(instance: &Instance, plan: &LayoutPlan, p: &Params, caps: &Caps) -> Result<Assembly, AssemblyError> {
    let width = instance.width();
    let classes = classify(instance, p);
    let of = |c: Class| -> Vec<Item> { classes.items(instance, c).into_iter().copied().collect() };
    let mut layout = RLayout::new(width);
    let mut overflow: Vec<ItemId> = Vec::new();
    let mut notes = Vec::new();

    // large items at their positions
    let positions: BTreeMap<ItemId, &Rect> = plan.large.iter().map(|(id, r)| (*id, r)).collect();
    for it in of(Class::Large) {
        match positions.get(&it.id) {
            Some(r) => layout.rects.push(RRect { id: it.id, x: r.x, w: it.w, y: r.y.clone(), h: r.h.clone() }),
            None => overflow.push(it.id),
        }
    }

    // tall items, one height class at a time
    let mut by_height: BTreeMap<Q, Vec<TallItem>> = BTreeMap::new();
    for it in of(Class::Tall) {
        let h = snapped_tall_height(&round_item(it.h, p).height, p);
        by_height.entry(h.clone()).or_default().push(TallItem { id: it.id, w: it.w, h });
    }
    for (h, items) in &by_height {
        let boxes: Vec<TallBox> = plan
            .tall
            .iter()
            .filter(|b| &b.h == h)
            .map(|b| TallBox { x: b.x, y: b.y.clone(), w: b.w, h: b.h.clone() })
            .collect();
        match assign_tall(items, &boxes) {
            Ok(pos) => {
                for (id, x, y) in pos {
                    let w = items.iter().find(|t| t.id == id).map(|t| t.w).unwrap_or(0);
                    layout.rects.push(RRect { id, x, w, y, h: h.clone() });
                }
            }
            Err(e) => {
                notes.push(format!("tall items of height {h}: {e}"));
                overflow.extend(items.iter().map(|t| t.id));
            }
        }
    }

    let mut bands = Bands { main: plan.main_height.clone(), ..Bands::default() };

    // horizontal items
    let hs = of(Class::Horizontal);
    let (h_in, h_extra, h_small) = match pack_horizontal(&hs, &plan.horizontal, width, p, caps.configurations) {
        Ok(hp) => (hp.placed, hp.extra, hp.small_boxes),
        Err(e) => {
            notes.push(format!("horizontal LP: {e}"));
            let pk = nfdh(&hs, width).expect("items fit the strip");
            let rl = RLayout::from_packing(instance, &pk);
            (Vec::new(), rl.rects, plan.horizontal.iter().map(RBox::from_rect).collect())
        }
    };
    layout.rects.extend(h_in);
    let extra_h = h_extra.iter().map(RRect::top).max().unwrap_or_else(|| q(0));
    layout.rects.extend(h_extra.iter().map(|r| moved(r, 0, &bands.main)));
    bands.extra = &bands.main + &extra_h;

    // medium items
    let ht = top_row_height(p);
    let (mh, mv) = (of(Class::MediumHorizontal), of(Class::MediumVertical));
    let (mh_height, mv_width) = match pack_medium(&mh, &mv, width, p) {
        Ok(m) => {
            layout.rects.extend(m.mh.iter().map(|r| moved(r, 0, &bands.extra)));
            (m.mh_height, m.mv_width)
        }
        Err(e) => {
            notes.push(format!("medium items: {e}"));
            overflow.extend(mh.iter().chain(&mv).map(|i| i.id));
            (q(0), 0)
        }
    };
    bands.medium = &bands.extra + &mh_height;
    if mv_width > 0 {
        let m = pack_medium(&[], &mv, width, p).expect("packed before");
        layout.rects.extend(m.mv.iter().map(|r| moved(r, 0, &bands.medium)));
    }
    let mv_width = mv_width.min(width);
    bands.mv_width = mv_width;

    // vertical items into their boxes and the extra vertical box
    let v0w = v0_width(width, p).min(width - mv_width).max(0);
    bands.v0_width = v0w;
    let vs: Vec<VItem> = of(Class::Vertical).into_iter().map(|it| VItem { item: it, rounded: round_item(it.h, p).height }).collect();
    let mut vboxes = plan.vertical.clone();
    if v0w > 0 {
        vboxes.push(Rect::new(mv_width, v0w, bands.medium.clone(), ht.clone()));
    }
    let (v_small, v_left) = match pack_vertical(&vs, &vboxes, caps.configurations) {
        Ok(vp) => {
            layout.rects.extend(vp.placed);
            (vp.small_boxes, vp.leftover)
        }
        Err(e) => {
            notes.push(format!("vertical LP: {e}"));
            (vboxes.iter().map(RBox::from_rect).collect(), vs.iter().map(|v| v.item.id).collect())
        }
    };
    let left_items: Vec<Item> = v_left.iter().filter_map(|id| instance.item(*id).copied()).collect();
    let x0 = mv_width + v0w;
    let (rs, too_high, used) = pack_leftover_vertical(&left_items, &ht);
    overflow.extend(too_high);
    for r in rs {
        if x0 + r.x + r.w <= width {
            layout.rects.push(moved(&r, x0, &bands.medium));
        } else {
            overflow.push(r.id);
        }
    }
    bands.leftover_width = used;
    let row_used = mv_width > 0 || layout.rects.iter().any(|r| r.y >= bands.medium);
    bands.top_row = if row_used { &bands.medium + &ht } else { bands.medium.clone() };

    // small items into the free parts of the boxes
    let sp = pack_small(&of(Class::Small), &v_small, &h_small, width, p);
    layout.rects.extend(sp.placed);
    overflow.extend(sp.unplaced);

    // whatever is left goes on top
    bands.overflow_y = bands.top_row.clone();
    if !overflow.is_empty() {
        let items: Vec<Item> = overflow.iter().filter_map(|id| instance.item(*id).copied()).collect();
        let pk = nfdh(&items, width).expect("items fit the strip");
        let rl = RLayout::from_packing(instance, &pk);
        layout.rects.extend(rl.rects.iter().map(|r| moved(r, 0, &bands.overflow_y)));
    }
    if !layout.is_feasible() {
        notes.push(format!("rational layout has {} conflicts", layout.conflicts().len()));
    }
    let rational_height = layout.height();
    let packing = layout.compact(instance);
    let report = validate(instance, &packing);
    if !report.is_ok() {
        return Err(AssemblyError::Invalid(report.violations));
    }
    let height = packing_height(instance, &packing);
    overflow.sort();
    Ok(Assembly { layout, packing, height, rational_height, overflow, bands, notes })
}

/// Grid positions `(x, y)` at which a `w × h` item fits into `[0, W) × [0, height)`.
pub fn grid_positions(w: i64, h: &Q, width: i64, height: &Q, unit: &Q) -> Vec<(i64, Q)> {
    let mut out = Vec::new();
    let mut y = q(0);
    while &y + h <= *height {
        for x in 0..=(width - w) {
            out.push((x, y.clone()));
        }
        y += unit;
    }
    out
}

/// Placements of the large items (rounded heights) without overlap, each item
/// at a position whose left side touches the strip or another item and whose
/// bottom touches the floor or another item. Depth first, lowest positions
/// first. Returns the placements and whether a cap stopped the search.
pub fn large_placements(
    items: &[(ItemId, i64, Q)],
    width: i64,
    height: &Q,
    cap: usize,
    nodes: usize,
) -> (Vec<Vec<(ItemId, Rect)>>, bool) {
    struct Search<'a> {
        items: &'a [(ItemId, i64, Q)],
        width: i64,
        height: &'a Q,
        cap: usize,
        nodes: usize,
        out: Vec<Vec<(ItemId, Rect)>>,
        seen: BTreeSet<Vec<Rect>>,
        stopped: bool,
    }
    impl Search<'_> {
        fn go(&mut self, placed: &mut Vec<(ItemId, Rect)>, used: &mut Vec<bool>) {
            if self.out.len() >= self.cap || self.nodes == 0 {
                self.stopped = true;
                return;
            }
            self.nodes -= 1;
            if placed.len() == self.items.len() {
                let mut key: Vec<Rect> = placed.iter().map(|(_, r)| r.clone()).collect();
                key.sort();
                if self.seen.insert(key) {
                    self.out.push(placed.clone());
                }
                return;
            }
            // items of equal size are interchangeable: try only the first unused one
            let mut tried: BTreeSet<(i64, Q)> = BTreeSet::new();
            for k in 0..self.items.len() {
                let (id, w, h) = &self.items[k];
                if used[k] || !tried.insert((*w, h.clone())) {
                    continue;
                }
                let mut xs: BTreeSet<i64> = [0].into_iter().collect();
                let mut ys: BTreeSet<Q> = [q(0)].into_iter().collect();
                for (_, r) in placed.iter() {
                    xs.insert(r.x + r.w);
                    ys.insert(r.top());
                }
                let mut cands: Vec<(Q, i64)> = Vec::new();
                for y in &ys {
                    for &x in &xs {
                        if x + w <= self.width && y + h <= *self.height {
                            let r = Rect::new(x, *w, y.clone(), h.clone());
                            if placed.iter().all(|(_, o)| !o.overlaps(&r)) {
                                cands.push((y.clone(), x));
                            }
                        }
                    }
                }
                cands.sort();
                for (y, x) in cands {
                    placed.push((*id, Rect::new(x, *w, y, h.clone())));
                    used[k] = true;
                    self.go(placed, used);
                    used[k] = false;
                    placed.pop();
                    if self.stopped {
                        return;
                    }
                }
            }
        }
    }
    let mut s = Search {
        items,
        width,
        height,
        cap,
        nodes,
        out: Vec::new(),
        seen: BTreeSet::new(),
        stopped: false,
    };
    if cap == 0 {
        return (Vec::new(), true);
    }
    s.go(&mut Vec::new(), &mut vec![false; items.len()]);
    let stopped = s.stopped;
    (s.out, stopped)
}

/// Main-area boxes around a fixed placement of the large items. Tall boxes
/// are cut from the bottom of free rectangles, one height class after the
/// other starting with class `rotate` of the decreasing order; horizontal
/// boxes take the widest remaining rectangles up to the horizontal area plus
/// an `ε` fraction; everything else holds vertical items.
fn split_plan(
    instance: &Instance,
    classes: &Classification,
    p: &Params,
    large: &[(ItemId, Rect)],
    main: &Q,
    rotate: usize,
) -> LayoutPlan {
    let width = instance.width();
    let mut tall_classes: BTreeMap<Q, Vec<i64>> = BTreeMap::new();
    for it in classes.items(instance, Class::Tall) {
        let h = snapped_tall_height(&round_item(it.h, p).height, p);
        tall_classes.entry(h).or_default().push(it.w);
    }
    let mut order: Vec<(Q, Vec<i64>)> = tall_classes.into_iter().rev().collect();
    if !order.is_empty() {
        let k = rotate % order.len();
        order.rotate_left(k);
    }
    for (_, ws) in &mut order {
        ws.sort_by(|a, b| b.cmp(a));
    }
    let obstacles: Vec<Rect> = large.iter().map(|(_, r)| r.clone()).collect();
    let mut free = free_boxes(&obstacles, width, main);
    free.sort_by(|a, b| a.y.cmp(&b.y).then(a.x.cmp(&b.x)));
    let mut tall = Vec::new();
    for (h, ws) in &mut order {
        let mut k = 0;
        while k < free.len() && !ws.is_empty() {
            let r = free[k].clone();
            if r.h < *h {
                k += 1;
                continue;
            }
            let mut used = 0;
            let mut rest = Vec::new();
            for &w in ws.iter() {
                if used + w <= r.w {
                    used += w;
                } else {
                    rest.push(w);
                }
            }
            if used == 0 {
                k += 1;
                continue;
            }
            *ws = rest;
            tall.push(Rect::new(r.x, used, r.y.clone(), h.clone()));
            free.remove(k);
            if used < r.w {
                free.insert(k, Rect::new(r.x + used, r.w - used, r.y.clone(), r.h.clone()));
            }
            if r.h > *h {
                free.push(Rect::new(r.x, used, &r.y + &*h, &r.h - &*h));
            }
        }
    }

    let hs = classes.items(instance, Class::Horizontal);
    let narrowest = hs.iter().map(|i| i.w).min().unwrap_or(0);
    let mut need: Q = (q(1) + &p.eps) * q(hs.iter().map(|i| i.area()).sum::<i64>());
    let unit = &p.eps * &p.delta * p.opt_q();
    let mut horizontal = Vec::new();
    let mut idx: Vec<usize> = (0..free.len()).collect();
    idx.sort_by(|&a, &b| free[b].w.cmp(&free[a].w).then(a.cmp(&b)));
    let mut vertical = Vec::new();
    let mut taken = vec![false; free.len()];
    for &i in &idx {
        let r = &free[i];
        if !is_pos(&need) || r.w < narrowest {
            continue;
        }
        let hh = min(&ceil_to(&(&need / q(r.w)), &unit), &r.h);
        need -= q(r.w) * &hh;
        horizontal.push(Rect::new(r.x, r.w, r.y.clone(), hh.clone()));
        if hh < r.h {
            vertical.push(Rect::new(r.x, r.w, &r.y + &hh, &r.h - &hh));
        }
        taken[i] = true;
    }
    vertical.extend(free.iter().enumerate().filter(|(i, _)| !taken[*i]).map(|(_, r)| r.clone()));
    LayoutPlan { width, main_height: main.clone(), large: large.to_vec(), horizontal, tall, vertical }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enumeration {
    pub plans: Vec<LayoutPlan>,
    pub large_placements: usize,
    pub exhausted: bool,
}

/// Candidate structures for the guess `p.opt`: placements of the large items
/// on the `εδ·opt` grid, each with `caps.splits` layouts of the tall boxes.
pub fn enumerate_structures(instance: &Instance, p: &Params, caps: &Caps) -> Enumeration {
    let mut out = Enumeration::default();
    if caps.positions == 0 || caps.splits == 0 {
        out.exhausted = true;
        return out;
    }
    let classes = classify(instance, p);
    let main = (q(1) + q(5) * &p.eps) * p.opt_q();
    let mut ls: Vec<(ItemId, i64, Q)> = classes
        .items(instance, Class::Large)
        .iter()
        .map(|it| (it.id, it.w, round_item(it.h, p).height))
        .collect();
    ls.sort_by(|a, b| b.2.cmp(&a.2).then(b.1.cmp(&a.1)).then(a.0.cmp(&b.0)));
    let (placements, stopped) = large_placements(&ls, instance.width(), &main, caps.positions, caps.nodes);
    out.large_placements = placements.len();
    out.exhausted = stopped;
    let tall_classes: BTreeSet<Q> = classes
        .items(instance, Class::Tall)
        .iter()
        .map(|it| snapped_tall_height(&round_item(it.h, p).height, p))
        .collect();
    let splits = caps.splits.min(tall_classes.len().max(1));
    for pl in &placements {
        for v in 0..splits {
            let plan = split_plan(instance, &classes, p, pl, &main, v);
            if !out.plans.contains(&plan) {
                out.plans.push(plan);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub mode: Mode,
    pub eps: Q,
    pub lower_bound: i64,
    /// Guesses of the optimum and whether the placement succeeded.
    pub guesses: Vec<(i64, bool)>,
    pub opt_estimate: Option<i64>,
    pub structures_tried: usize,
    pub cap_exhausted: bool,
    pub structured_height: Option<i64>,
    pub structured_bound: Option<Q>,
    pub overflow: usize,
    pub fallback_height: Option<i64>,
    pub used_fallback: bool,
    pub certificate: Option<StructureCertificate>,
    pub notes: Vec<String>,
}

impl SolveReport {
    fn new(mode: Mode, eps: Q, lower_bound: i64) -> Self {
        SolveReport {
            mode,
            eps,
            lower_bound,
            guesses: Vec::new(),
            opt_estimate: None,
            structures_tried: 0,
            cap_exhausted: false,
            structured_height: None,
            structured_bound: None,
            overflow: 0,
            fallback_height: None,
            used_fallback: false,
            certificate: None,
            notes: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: &Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(s, "mode {} eps {}", self.mode, self.eps);
        let _ = writeln!(s, "lower bound {}", self.lower_bound);
        if !self.guesses.is_empty() {
            let g: Vec<String> =
                self.guesses.iter().map(|(h, ok)| format!("{h}:{}", if *ok { "ok" } else { "no" })).collect();
            let _ = writeln!(s, "guesses {}", g.join(" "));
        }
        let _ = writeln!(s, "opt estimate {}", opt(&self.opt_estimate));
        let _ = writeln!(s, "structures tried {}{}", self.structures_tried, if self.cap_exhausted { " (cap reached)" } else { "" });
        let bound = self.structured_bound.as_ref().map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(s, "structured height {} (bound {}), overflow items {}", opt(&self.structured_height), bound, self.overflow);
        let _ = writeln!(s, "fallback height {}", opt(&self.fallback_height));
        let _ = writeln!(s, "result from {}", if self.used_fallback { "fallback" } else { "structure" });
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        if let Some(c) = &self.certificate {
            s.push_str(&c.to_text());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub packing: Packing,
    pub height: i64,
    pub report: SolveReport,
}

fn fallback(instance: &Instance) -> (Packing, i64) {
    let pk = nfdh(instance.items(), instance.width()).expect("instance items fit the strip");
    let h = packing_height(instance, &pk);
    (pk, h)
}

/// Best complete assembly over the candidate structures of one guess.
/// Returns whether the guess succeeded and the lowest assembly seen.
fn try_guess(
    instance: &Instance,
    cfg: &SolveConfig,
    opt: i64,
    report: &mut SolveReport,
) -> (bool, Option<Assembly>) {
    let Some(p) = cfg.params(instance, opt) else {
        report.notes.push(format!("no parameters for opt {opt}"));
        return (false, None);
    };
    let en = enumerate_structures(instance, &p, &cfg.caps);
    report.cap_exhausted |= en.exhausted;
    let bound = final_bound(&p);
    let mut best: Option<Assembly> = None;
    for plan in &en.plans {
        report.structures_tried += 1;
        match assemble(instance, plan, &p, &cfg.caps) {
            Ok(a) => {
                let ok = a.complete() && q(a.height) <= bound;
                if best.as_ref().is_none_or(|b| a.height < b.height) {
                    best = Some(a);
                }
                if ok {
                    return (true, best);
                }
            }
            Err(e) => report.notes.push(format!("opt {opt}: {e}")),
        }
    }
    (false, best)
}

/// Smallest guess in `[lower bound, Σh]` for which some candidate structure
/// yields a complete packing within `(4/3 + 9ε)·opt`, by bisection.
pub fn binary_search_opt(instance: &Instance, cfg: &SolveConfig) -> (Option<i64>, Option<Assembly>, SolveReport) {
    let mut report = SolveReport::new(cfg.mode, cfg.working_eps(), instance.lower_bound());
    let mut best: Option<Assembly> = None;
    let keep = |a: Option<Assembly>, best: &mut Option<Assembly>| {
        if let Some(a) = a {
            if best.as_ref().is_none_or(|b| a.height < b.height) {
                *best = Some(a);
            }
        }
    };
    let mut lo = instance.lower_bound();
    let mut hi = instance.total_height();
    let (ok, a) = try_guess(instance, cfg, lo, &mut report);
    report.guesses.push((lo, ok));
    keep(a, &mut best);
    if ok {
        return (Some(lo), best, report);
    }
    let (ok, a) = try_guess(instance, cfg, hi, &mut report);
    report.guesses.push((hi, ok));
    keep(a, &mut best);
    if !ok {
        return (None, best, report);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let (ok, a) = try_guess(instance, cfg, mid, &mut report);
        report.guesses.push((mid, ok));
        keep(a, &mut best);
        if ok {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (Some(hi), best, report)
}

fn solve_witness(instance: &Instance, cfg: &SolveConfig, witness: &Packing, report: &mut SolveReport) -> Option<Assembly> {
    let opt = packing_height(instance, witness);
    report.opt_estimate = Some(opt);
    let Some(p) = cfg.params(instance, opt) else {
        report.notes.push(format!("no parameters for opt {opt}"));
        return None;
    };
    report.structured_bound = Some(final_bound(&p));
    let s = match build_structure(instance, witness, &p) {
        Ok(s) => s,
        Err(e) => {
            report.notes.push(format!("structure: {e}"));
            return None;
        }
    };
    report.certificate = Some(s.certificate.clone());
    report.structures_tried = 1;
    let plan = LayoutPlan::from_structure(&s, instance.width());
    match assemble(instance, &plan, &p, &cfg.caps) {
        Ok(a) => Some(a),
        Err(e) => {
            report.notes.push(e.to_string());
            None
        }
    }
}

/// Runs the configured pipeline and returns a valid packing.
pub fn solve(instance: &Instance, cfg: &SolveConfig) -> Result<Solution, ConfigError> {
    cfg.check()?;
    if let StructureSource::Witness(w) = &cfg.source {
        let v = validate(instance, w);
        if !v.is_ok() {
            let msg: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
            return Err(ConfigError::Witness(msg.join("; ")));
        }
    }
    if instance.is_empty() {
        let report = SolveReport::new(cfg.mode, cfg.working_eps(), 0);
        return Ok(Solution { packing: Packing::new(Vec::new()), height: 0, report });
    }
    let (assembly, mut report) = match &cfg.source {
        StructureSource::Witness(w) => {
            let mut report = SolveReport::new(cfg.mode, cfg.working_eps(), instance.lower_bound());
            let a = solve_witness(instance, cfg, w, &mut report);
            (a, report)
        }
        StructureSource::Enumerate => {
            let (opt, a, mut report) = binary_search_opt(instance, cfg);
            report.opt_estimate = opt;
            if let Some(o) = opt {
                report.structured_bound = cfg.params(instance, o).map(|p| final_bound(&p));
            }
            (a, report)
        }
    };
    if let Some(a) = &assembly {
        report.structured_height = Some(a.height);
        report.overflow = a.overflow.len();
        report.notes.extend(a.notes.iter().cloned());
    }
    let (fb, fh) = fallback(instance);
    report.fallback_height = Some(fh);
    let use_fallback = match &assembly {
        None => true,
        Some(a) => cfg.fallback && fh < a.height,
    };
    report.used_fallback = use_fallback;
    let (packing, height) = match assembly {
        Some(a) if !use_fallback => (a.packing, a.height),
        _ => (fb, fh),
    };
    Ok(Solution { packing, height, report })
}
