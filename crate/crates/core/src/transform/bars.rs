//! Tall and pseudo items inside one box, reduced to what reordering needs:
//! a width, a height and whether the bar hangs from the
//! top or stands on the bottom of the box.

use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BarKind {
    /// A (movable or unmovable) tall item.
    Tall,
    /// A region of vertical slices.
    Pseudo,
    /// A very tall item glued to the pseudo items above and below it.
    Merged,
}

/// Region of a bar, relative to the bar's own origin (left edge, box bottom).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub dx: i64,
    pub w: i64,
    pub y: Q,
    pub h: Q,
    pub tall: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bar {
    pub w: i64,
    pub h: Q,
    /// Touches the top of the box. Full-height bars are stored with `top == false`.
    pub top: bool,
    pub kind: BarKind,
    /// Height of the tall item inside a merged bar; ties runs of merged bars.
    pub inner: Option<Q>,
    pub parts: Vec<Part>,
}

impl Bar {
    pub fn new(w: i64, h: Q, top: bool) -> Self {
        Bar { w, h, top, kind: BarKind::Tall, inner: None, parts: Vec::new() }
    }

    pub fn pseudo(w: i64, h: Q, top: bool) -> Self {
        Bar { kind: BarKind::Pseudo, ..Bar::new(w, h, top) }
    }

    pub fn is_full(&self, box_h: &Q) -> bool {
        &self.h >= box_h
    }

    pub fn covers_top(&self, box_h: &Q) -> bool {
        self.top || self.is_full(box_h)
    }

    pub fn covers_bottom(&self, box_h: &Q) -> bool {
        !self.top || self.is_full(box_h)
    }

    /// Same geometry and kind, so swapping the two changes nothing.
    pub fn same_shape(&self, o: &Bar) -> bool {
        self.w == o.w && self.h == o.h && self.top == o.top && self.kind == o.kind && self.inner == o.inner
    }

    /// Same height, side and kind; adjacent bars of one class form one subbox.
    pub fn same_class(&self, o: &Bar) -> bool {
        self.h == o.h && self.top == o.top && self.kind == o.kind && self.inner == o.inner
    }

    /// Whether the two bars would intersect if their x-ranges overlapped.
    pub fn vertical_overlap(&self, o: &Bar, box_h: &Q) -> bool {
        if self.is_full(box_h) || o.is_full(box_h) || self.top == o.top {
            return true;
        }
        &self.h + &o.h > *box_h
    }

    /// Bottom y of the bar inside a box of height `box_h`.
    pub fn y0(&self, box_h: &Q) -> Q {
        if self.top && !self.is_full(box_h) {
            box_h - &self.h
        } else {
            Q::from_integer(0.into())
        }
    }
}

/// Bars at x positions inside a box `[0, width) × [0, height)`. Fixed bars
/// never move during reordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub width: i64,
    pub height: Q,
    pub bars: Vec<Bar>,
    pub xs: Vec<i64>,
    pub fixed: Vec<bool>,
}

impl Arrangement {
    pub fn new(width: i64, height: Q, placed: Vec<(i64, Bar)>) -> Self {
        let n = placed.len();
        let (xs, bars) = placed.into_iter().unzip();
        Arrangement { width, height, bars, xs, fixed: vec![false; n] }
    }

    pub fn end(&self, i: usize) -> i64 {
        self.xs[i] + self.bars[i].w
    }

    /// First pair of bars that intersect or a bar sticking out of the box.
    pub fn conflict(&self) -> Option<(usize, usize)> {
        let n = self.bars.len();
        for i in 0..n {
            if self.xs[i] < 0 || self.end(i) > self.width || self.bars[i].h > self.height {
                return Some((i, i));
            }
            for j in i + 1..n {
                if self.xs[i] < self.end(j)
                    && self.xs[j] < self.end(i)
                    && self.bars[i].vertical_overlap(&self.bars[j], &self.height)
                {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_feasible(&self) -> bool {
        self.conflict().is_none()
    }

    /// Heights occupied from the top and from the bottom in every unit column.
    pub fn column_cover(&self) -> (Vec<Q>, Vec<Q>) {
        let z = Q::from_integer(0.into());
        let mut top = vec![z.clone(); self.width as usize];
        let mut bottom = vec![z; self.width as usize];
        for (b, &x) in self.bars.iter().zip(&self.xs) {
            for c in x.max(0)..(x + b.w).min(self.width) {
                let c = c as usize;
                if b.is_full(&self.height) {
                    bottom[c] = self.height.clone();
                } else if b.top {
                    if b.h > top[c] {
                        top[c] = b.h.clone();
                    }
                } else if b.h > bottom[c] {
                    bottom[c] = b.h.clone();
                }
            }
        }
        (top, bottom)
    }

    /// Maximal runs of adjacent bars on the same side with equal kind and
    /// height. Returns `(tall runs, pseudo runs)`; merged runs count for both.
    pub fn subbox_counts(&self) -> (usize, usize) {
        let mut tall = 0;
        let mut pseudo = 0;
        for side in 0..3 {
            let mut idx: Vec<usize> = (0..self.bars.len())
                .filter(|&i| {
                    let b = &self.bars[i];
                    let s = if b.is_full(&self.height) { 2 } else if b.top { 1 } else { 0 };
                    s == side
                })
                .collect();
            idx.sort_by_key(|&i| self.xs[i]);
            let mut prev: Option<usize> = None;
            for &i in &idx {
                let b = &self.bars[i];
                let joins = prev.is_some_and(|p| self.end(p) == self.xs[i] && self.bars[p].same_class(b));
                if !joins {
                    match b.kind {
                        BarKind::Tall => tall += 1,
                        BarKind::Pseudo => pseudo += 1,
                        BarKind::Merged => {
                            tall += 1;
                            pseudo += 1;
                        }
                    }
                }
                prev = Some(i);
            }
        }
        (tall, pseudo)
    }

    /// Distinct heights among tall bars, pseudo bars and all bars.
    pub fn distinct_heights(&self) -> (usize, usize, usize) {
        let mut t: Vec<&Q> = Vec::new();
        let mut p: Vec<&Q> = Vec::new();
        for b in &self.bars {
            match b.kind {
                BarKind::Tall => t.push(&b.h),
                BarKind::Pseudo => p.push(&b.h),
                BarKind::Merged => {
                    p.push(&b.h);
                    if let Some(h) = &b.inner {
                        t.push(h);
                    }
                }
            }
        }
        let mut all: Vec<&Q> = t.iter().chain(p.iter()).copied().collect();
        for v in [&mut t, &mut p, &mut all] {
            v.sort();
            v.dedup();
        }
        (t.len(), p.len(), all.len())
    }
}
