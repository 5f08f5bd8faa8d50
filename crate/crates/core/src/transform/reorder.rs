//! Horizontal reordering of the tall and pseudo bars of a box so that bars
//! of equal height and kind end up next to each other.

use std::cmp::Ordering;

use thiserror::Error;

use super::bars::{Arrangement, Bar, BarKind};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReorderError {
    #[error("input arrangement is infeasible (bars {0} and {1})")]
    Input(usize, usize),
    #[error("reordering produced overlapping bars {0} and {1}")]
    Output(usize, usize),
    #[error("bars do not fit the free columns of a region")]
    Span,
    #[error("reordering did not terminate")]
    Depth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReorderOutcome {
    pub arrangement: Arrangement,
    /// 1 when no bar was fixed, 2 otherwise.
    pub case: u8,
    pub tall_subboxes: usize,
    pub pseudo_subboxes: usize,
    pub s_tall: usize,
    pub s_pseudo: usize,
    pub s_all: usize,
}

impl ReorderOutcome {
    /// The subbox bound for the case that was run.
    pub fn within_bound(&self) -> bool {
        let (t, p) = (self.tall_subboxes, self.pseudo_subboxes);
        if self.case == 1 {
            t + p <= 2 * (self.s_pseudo + self.s_tall)
        } else {
            t <= 4 * self.s_all * self.s_tall && p <= 4 * self.s_all * self.s_pseudo
        }
    }
}

fn rank(k: BarKind) -> u8 {
    match k {
        BarKind::Pseudo => 0,
        BarKind::Merged => 1,
        BarKind::Tall => 2,
    }
}

// at equal height pseudo bars go left of tall ones, whatever the direction
fn tie(a: &Bar, b: &Bar) -> Ordering {
    rank(a.kind).cmp(&rank(b.kind)).then_with(|| a.inner.cmp(&b.inner))
}

fn sorted(bars: &[Bar], mut idx: Vec<usize>, ascending: bool) -> Vec<usize> {
    idx.sort_by(|&a, &b| {
        let by_h = if ascending { bars[a].h.cmp(&bars[b].h) } else { bars[b].h.cmp(&bars[a].h) };
        by_h.then_with(|| tie(&bars[a], &bars[b])).then(a.cmp(&b))
    });
    idx
}

struct Work {
    width: i64,
    height: Q,
    bars: Vec<Bar>,
    xs: Vec<i64>,
    fixed: Vec<bool>,
    depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Top,
    Bottom,
}

impl Work {
    fn end(&self, i: usize) -> i64 {
        self.xs[i] + self.bars[i].w
    }

    fn full(&self, i: usize) -> bool {
        self.bars[i].is_full(&self.height)
    }

    fn on(&self, i: usize, s: Side) -> bool {
        match s {
            Side::Top => self.bars[i].covers_top(&self.height),
            Side::Bottom => self.bars[i].covers_bottom(&self.height),
        }
    }

    fn movable_in(&self, i: usize, lo: i64, hi: i64) -> bool {
        !self.fixed[i] && self.xs[i] >= lo && self.end(i) <= hi
    }

    fn touching(&self, lo: i64, hi: i64) -> Vec<usize> {
        (0..self.bars.len()).filter(|&i| self.xs[i] < hi && lo < self.end(i)).collect()
    }

    /// Lays `order` out left to right over the columns of `[lo, hi)` that are
    /// not taken on side `s` by bars outside `order`.
    fn lay(&mut self, order: &[usize], s: Side, lo: i64, hi: i64) -> Result<(), ReorderError> {
        let mut taken = vec![false; (hi - lo).max(0) as usize];
        for i in self.touching(lo, hi) {
            if self.on(i, s) && !order.contains(&i) {
                for c in self.xs[i].max(lo)..self.end(i).min(hi) {
                    taken[(c - lo) as usize] = true;
                }
            }
        }
        let mut c = 0usize;
        for &i in order {
            let w = self.bars[i].w as usize;
            loop {
                if c + w > taken.len() {
                    return Err(ReorderError::Span);
                }
                if taken[c..c + w].iter().all(|t| !t) {
                    break;
                }
                c += 1;
            }
            self.xs[i] = lo + c as i64;
            c += w;
        }
        Ok(())
    }

    /// Full-height bars as one block, then tops descending and bottoms ascending.
    fn simple(&mut self, lo: i64, hi: i64, block_left: bool) -> Result<(), ReorderError> {
        let movable: Vec<usize> = (0..self.bars.len()).filter(|&i| self.movable_in(i, lo, hi)).collect();
        let mut full: Vec<usize> = movable.iter().copied().filter(|&i| self.full(i)).collect();
        full.sort_by(|&a, &b| tie(&self.bars[a], &self.bars[b]).then(a.cmp(&b)));
        let wf: i64 = full.iter().map(|&i| self.bars[i].w).sum();
        let tops = sorted(&self.bars, movable.iter().copied().filter(|&i| !self.full(i) && self.bars[i].top).collect(), false);
        let bottoms = sorted(&self.bars, movable.iter().copied().filter(|&i| !self.full(i) && !self.bars[i].top).collect(), true);
        let (flo, fhi) = if block_left { (lo + wf, hi) } else { (lo, hi - wf) };
        let mut x = if block_left { lo } else { hi - wf };
        for &i in &full {
            self.xs[i] = x;
            x += self.bars[i].w;
        }
        // park everything being moved outside the region so `lay` sees only obstacles
        for &i in tops.iter().chain(&bottoms) {
            self.xs[i] = -1 - self.width;
        }
        self.lay(&tops, Side::Top, flo, fhi)?;
        self.lay(&bottoms, Side::Bottom, flo, fhi)
    }

    fn region(&mut self, lo: i64, hi: i64) -> Result<(), ReorderError> {
        self.depth += 1;
        if self.depth > 4 * self.bars.len() + 8 {
            return Err(ReorderError::Depth);
        }
        let movable: Vec<usize> = (0..self.bars.len()).filter(|&i| self.movable_in(i, lo, hi)).collect();
        if movable.is_empty() || lo >= hi {
            return Ok(());
        }
        let full: Vec<usize> = movable.iter().copied().filter(|&i| self.full(i)).collect();
        if !full.is_empty() {
            let l = full.iter().map(|&i| self.xs[i]).min().unwrap();
            let r = full.iter().map(|&i| self.end(i)).max().unwrap();
            self.simple(l, r, true)?;
            self.region(lo, l)?;
            return self.region(r, hi);
        }
        let near = self.touching(lo, hi);
        let tallest = |w: &Work, s: Side| {
            near.iter().copied().filter(|&i| w.on(i, s)).map(|i| w.bars[i].h.clone()).max().unwrap_or_else(|| q(0))
        };
        let (ht, hb) = (tallest(self, Side::Top), tallest(self, Side::Bottom));
        if &ht + &hb <= self.height {
            let tops = sorted(&self.bars, movable.iter().copied().filter(|&i| self.bars[i].top).collect(), true);
            let bottoms = sorted(&self.bars, movable.iter().copied().filter(|&i| !self.bars[i].top).collect(), true);
            for &i in tops.iter().chain(&bottoms) {
                self.xs[i] = -1 - self.width;
            }
            self.lay(&tops, Side::Top, lo, hi)?;
            return self.lay(&bottoms, Side::Bottom, lo, hi);
        }
        let extreme = |w: &Work, s: Side, h: &Q, leftmost: bool| {
            let c = near.iter().copied().filter(|&i| w.on(i, s) && w.bars[i].h == *h);
            if leftmost {
                c.min_by_key(|&i| (w.xs[i], i))
            } else {
                c.max_by_key(|&i| (w.end(i), usize::MAX - i))
            }
        };
        let bl = extreme(self, Side::Bottom, &hb, true).expect("bottom bar of max height");
        let tl = extreme(self, Side::Top, &ht, true).expect("top bar of max height");
        // ties prefer the bottom bar as the left pivot
        let left_side = if self.xs[bl] <= self.xs[tl] { Side::Bottom } else { Side::Top };
        let right_side = if left_side == Side::Bottom { Side::Top } else { Side::Bottom };
        let il = if left_side == Side::Bottom { bl } else { tl };
        let ir_h = if right_side == Side::Top { &ht } else { &hb };
        let ir = extreme(self, right_side, ir_h, false).expect("right pivot");
        let l = self.xs[il].max(lo);
        let r = self.end(ir).min(hi);
        if l >= r {
            return Err(ReorderError::Span);
        }
        let inner: Vec<usize> = movable.iter().copied().filter(|&i| self.movable_in(i, l, r)).collect();
        let occupant = |w: &Work, s: Side, col: i64| {
            (0..w.bars.len()).find(|&i| w.on(i, s) && w.xs[i] <= col && col < w.end(i) && !inner.contains(&i))
        };
        let cl = occupant(self, right_side, l).map(|i| self.bars[i].h.clone());
        let cr = occupant(self, left_side, r - 1).map(|i| self.bars[i].h.clone());

        let desc_side: Vec<usize> = inner.iter().copied().filter(|&i| self.on(i, left_side)).collect();
        let asc_side: Vec<usize> = inner.iter().copied().filter(|&i| self.on(i, right_side)).collect();
        let mut desc = sorted(&self.bars, desc_side, false);
        if let Some(h) = &cr {
            // bars as high as the cut bar on the right move next to it
            let (eq, rest): (Vec<usize>, Vec<usize>) = desc.iter().partition(|&&i| self.bars[i].h == *h);
            let (gt, lt): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&i| self.bars[i].h > *h);
            desc = gt.into_iter().chain(lt).chain(eq).collect();
        }
        let mut asc = sorted(&self.bars, asc_side, true);
        if let Some(h) = &cl {
            let (eq, rest): (Vec<usize>, Vec<usize>) = asc.iter().partition(|&&i| self.bars[i].h == *h);
            let (lt, gt): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&i| self.bars[i].h < *h);
            asc = eq.into_iter().chain(lt).chain(gt).collect();
        }
        for &i in desc.iter().chain(&asc) {
            self.xs[i] = -1 - self.width;
        }
        self.lay(&desc, left_side, l, r)?;
        self.lay(&asc, right_side, l, r)?;
        self.region(lo, l)?;
        self.region(r, hi)
    }
}

/// Fills columns not covered on a side with zero-height placeholders so that
/// both sides tile the box. Returns the extended arrangement and the number
/// of original bars.
fn pad(arr: &Arrangement) -> Arrangement {
    let mut out = arr.clone();
    let (w, h) = (arr.width, &arr.height);
    for top in [true, false] {
        let mut covered = vec![false; w as usize];
        for (b, &x) in arr.bars.iter().zip(&arr.xs) {
            if if top { b.covers_top(h) } else { b.covers_bottom(h) } {
                for c in x.max(0)..(x + b.w).min(w) {
                    covered[c as usize] = true;
                }
            }
        }
        let mut c = 0;
        while c < w {
            if covered[c as usize] {
                c += 1;
                continue;
            }
            let s = c;
            while c < w && !covered[c as usize] {
                c += 1;
            }
            out.bars.push(Bar::pseudo(c - s, q(0), top));
            out.xs.push(s);
            out.fixed.push(false);
        }
    }
    out
}

/// Reorders the bars of a box. Without fixed bars the tops are sorted by
/// descending and the bottoms by ascending height; otherwise the box is split
/// around the highest bars and each part sorted recursively.
pub fn reorder_box(arr: &Arrangement) -> Result<ReorderOutcome, ReorderError> {
    if let Some((i, j)) = arr.conflict() {
        return Err(ReorderError::Input(i, j));
    }
    let n = arr.bars.len();
    let padded = pad(arr);
    let mut w = Work {
        width: padded.width,
        height: padded.height.clone(),
        bars: padded.bars,
        xs: padded.xs,
        fixed: padded.fixed,
        depth: 0,
    };
    let case = if arr.fixed.iter().any(|&f| f) { 2 } else { 1 };
    if case == 1 {
        w.simple(0, arr.width, false)?;
    } else {
        w.region(0, arr.width)?;
    }
    let out = Arrangement {
        width: arr.width,
        height: arr.height.clone(),
        bars: arr.bars.clone(),
        xs: w.xs[..n].to_vec(),
        fixed: arr.fixed.clone(),
    };
    if let Some((i, j)) = out.conflict() {
        return Err(ReorderError::Output(i, j));
    }
    let (tall_subboxes, pseudo_subboxes) = out.subbox_counts();
    let (s_tall, s_pseudo, s_all) = out.distinct_heights();
    Ok(ReorderOutcome { arrangement: out, case, tall_subboxes, pseudo_subboxes, s_tall, s_pseudo, s_all })
}
