//! Exact solver for micro instances and an exhaustive enumerator of
//! horizontal reorderings. Both refuse inputs beyond their budget instead of
//! returning a degraded answer.

use std::collections::HashSet;

use thiserror::Error;

use crate::geom::{packing_height, Instance, Item, Packing, Placement};
use crate::rational::Q;
use crate::transform::Bar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_items: usize,
    pub max_width: i64,
    pub max_total_height: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 20_000_000, max_items: 12, max_width: 32, max_total_height: 256 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BudgetError {
    #[error("instance has {0} items, budget allows {1}")]
    TooManyItems(usize, usize),
    #[error("strip width {0} exceeds budget {1}")]
    TooWide(i64, i64),
    #[error("total item height {0} exceeds budget {1}")]
    TooTall(i64, i64),
    #[error("search node budget of {0} exhausted")]
    Nodes(u64),
}

struct Grid {
    width: i64,
    rows: Vec<u64>,
}

impl Grid {
    fn new(width: i64, height: i64) -> Self {
        Grid { width, rows: vec![0; height as usize] }
    }

    fn mask(x: i64, w: i64) -> u64 {
        (if w == 64 { u64::MAX } else { (1u64 << w) - 1 }) << x
    }

    fn fits(&self, x: i64, y: i64, w: i64, h: i64) -> bool {
        if x + w > self.width || (y + h) as usize > self.rows.len() {
            return false;
        }
        let m = Self::mask(x, w);
        self.rows[y as usize..(y + h) as usize].iter().all(|r| r & m == 0)
    }

    fn toggle(&mut self, x: i64, y: i64, w: i64, h: i64) {
        let m = Self::mask(x, w);
        for r in &mut self.rows[y as usize..(y + h) as usize] {
            *r ^= m;
        }
    }

    fn first_empty(&self, from: usize) -> Option<(i64, i64)> {
        let full = Self::mask(0, self.width);
        for (y, r) in self.rows.iter().enumerate().skip(from) {
            if r & full != full {
                let x = (!r & full).trailing_zeros() as i64;
                return Some((x, y as i64));
            }
        }
        None
    }

    /// Whether a `w × h` rectangle fits at some free position at or after
    /// `(x, y)` in row-major order.
    fn has_room(&self, x: i64, y: i64, w: i64, h: i64) -> bool {
        if w > self.width {
            return false;
        }
        let last = self.rows.len() as i64 - h;
        for y0 in y..=last {
            let used = self.rows[y0 as usize..(y0 + h) as usize].iter().fold(0u64, |a, r| a | r);
            let from = if y0 == y { x } else { 0 };
            let m = Self::mask(0, w);
            if (from..=self.width - w).any(|x0| used & (m << x0) == 0) {
                return true;
            }
        }
        false
    }
}

struct Search<'a> {
    types: Vec<(i64, i64, Vec<&'a Item>)>,
    left: Vec<usize>,
    grid: Grid,
    slack: i64,
    nodes: u64,
    max_nodes: u64,
    placed: Vec<Placement>,
    /// Occupancy from the first open row upward plus remaining counts, for
    /// states already shown to fail.
    dead: HashSet<(Vec<u64>, Vec<usize>)>,
}

const DEAD_LIMIT: usize = 1 << 21;

impl Search<'_> {
    fn run(&mut self, row: usize) -> Result<bool, BudgetError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(BudgetError::Nodes(self.max_nodes));
        }
        if self.left.iter().all(|&c| c == 0) {
            return Ok(true);
        }
        let Some((x, y)) = self.grid.first_empty(row) else {
            return Ok(false);
        };
        let key = (self.grid.rows[y as usize..].to_vec(), self.left.clone());
        if self.dead.contains(&key) {
            return Ok(false);
        }
        // every remaining item still needs a place after the current cell
        let stuck = (0..self.types.len())
            .any(|t| self.left[t] > 0 && !self.grid.has_room(x, y, self.types[t].0, self.types[t].1));
        if stuck {
            if self.dead.len() < DEAD_LIMIT {
                self.dead.insert(key);
            }
            return Ok(false);
        }
        let found = self.branch(x, y)?;
        if !found && self.dead.len() < DEAD_LIMIT {
            self.dead.insert(key);
        }
        Ok(found)
    }

    fn branch(&mut self, x: i64, y: i64) -> Result<bool, BudgetError> {
        // width of the empty run starting at (x, y)
        let r = self.grid.rows[y as usize];
        let mut gap = 0;
        while x + gap < self.grid.width && r & (1u64 << (x + gap)) == 0 {
            gap += 1;
        }
        let narrowest = (0..self.types.len()).filter(|&t| self.left[t] > 0).map(|t| self.types[t].0).min();
        if narrowest.is_none_or(|w| w > gap) {
            // nothing starts here: the whole run is waste
            if self.slack < gap {
                return Ok(false);
            }
            self.slack -= gap;
            self.grid.toggle(x, y, gap, 1);
            let found = self.run(y as usize)?;
            if !found {
                self.grid.toggle(x, y, gap, 1);
                self.slack += gap;
            }
            return Ok(found);
        }
        for t in 0..self.types.len() {
            if self.left[t] == 0 {
                continue;
            }
            let (w, h) = (self.types[t].0, self.types[t].1);
            if !self.grid.fits(x, y, w, h) {
                continue;
            }
            self.left[t] -= 1;
            let item = self.types[t].2[self.left[t]];
            self.grid.toggle(x, y, w, h);
            self.placed.push(Placement { id: item.id, x, y });
            if self.run(y as usize)? {
                return Ok(true);
            }
            self.placed.pop();
            self.grid.toggle(x, y, w, h);
            self.left[t] += 1;
        }
        if self.slack > 0 {
            self.slack -= 1;
            self.grid.toggle(x, y, 1, 1);
            let found = self.run(y as usize)?;
            if found {
                return Ok(true);
            }
            self.grid.toggle(x, y, 1, 1);
            self.slack += 1;
        }
        Ok(false)
    }
}

/// Largest total of `long` over sets of items in which every two have
/// `short` sides summing to more than `room`: such items can never sit side
/// by side, so their `long` sides add up.
fn stacked_bound(items: &[Item], room: i64, short: impl Fn(&Item) -> i64, long: impl Fn(&Item) -> i64) -> i64 {
    let n = items.len();
    let mut best = 0;
    for set in 1u32..(1 << n) {
        let members: Vec<&Item> = (0..n).filter(|&i| set >> i & 1 == 1).map(|i| &items[i]).collect();
        let clash = members.iter().enumerate().all(|(k, a)| members[k + 1..].iter().all(|b| short(a) + short(b) > room));
        if clash {
            best = best.max(members.iter().map(|i| long(i)).sum());
        }
    }
    best
}

fn check_budget(instance: &Instance, budget: &SearchBudget) -> Result<(), BudgetError> {
    if instance.len() > budget.max_items {
        return Err(BudgetError::TooManyItems(instance.len(), budget.max_items));
    }
    if instance.width() > budget.max_width.min(64) {
        return Err(BudgetError::TooWide(instance.width(), budget.max_width.min(64)));
    }
    if instance.total_height() > budget.max_total_height {
        return Err(BudgetError::TooTall(instance.total_height(), budget.max_total_height));
    }
    Ok(())
}

/// Exact decision: is there a feasible packing of height at most `height`?
/// Returns a witness when there is one.
pub fn exact_feasible(
    instance: &Instance,
    height: i64,
    budget: &SearchBudget,
) -> Result<Option<Packing>, BudgetError> {
    check_budget(instance, budget)?;
    let mut nodes = 0;
    feasible_with(instance, height, budget.max_nodes, &mut nodes)
}

fn feasible_with(
    instance: &Instance,
    height: i64,
    max_nodes: u64,
    nodes: &mut u64,
) -> Result<Option<Packing>, BudgetError> {
    let area: i64 = instance.items().iter().map(Item::area).sum();
    let cells = instance.width() * height;
    if area > cells || instance.max_height() > height {
        return Ok(None);
    }
    if stacked_bound(instance.items(), height, |i| i.h, |i| i.w) > instance.width() {
        return Ok(None);
    }
    let mut types: Vec<(i64, i64, Vec<&Item>)> = Vec::new();
    for it in instance.items() {
        match types.iter_mut().find(|t| t.0 == it.w && t.1 == it.h) {
            Some(t) => t.2.push(it),
            None => types.push((it.w, it.h, vec![it])),
        }
    }
    // big items first: they fail fastest
    types.sort_by(|a, b| (b.0 * b.1, b.1, b.0).cmp(&(a.0 * a.1, a.1, a.0)));
    let left = types.iter().map(|t| t.2.len()).collect();
    let mut s = Search {
        types,
        left,
        grid: Grid::new(instance.width(), height),
        slack: cells - area,
        nodes: *nodes,
        max_nodes,
        placed: Vec::new(),
        dead: HashSet::new(),
    };
    let found = s.run(0);
    *nodes = s.nodes;
    Ok(if found? { Some(Packing::new(s.placed)) } else { None })
}

/// Optimal height and a witness packing, by bisection on the height with the
/// exact feasibility test above.
pub fn exact_opt(instance: &Instance, budget: &SearchBudget) -> Result<(i64, Packing), BudgetError> {
    check_budget(instance, budget)?;
    if instance.is_empty() {
        return Ok((0, Packing::default()));
    }
    let mut nodes = 0;
    let mut hi_packing = stack_packing(instance);
    let mut hi = packing_height(instance, &hi_packing);
    let mut lo = instance.lower_bound().max(stacked_bound(instance.items(), instance.width(), |i| i.w, |i| i.h));
    // invariant: infeasible below lo, feasible at hi
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match feasible_with(instance, mid, budget.max_nodes, &mut nodes)? {
            Some(p) => {
                hi = packing_height(instance, &p);
                hi_packing = p;
            }
            None => lo = mid + 1,
        }
    }
    Ok((hi, hi_packing))
}

fn stack_packing(instance: &Instance) -> Packing {
    let mut y = 0;
    let mut placements = Vec::new();
    for it in instance.items() {
        placements.push(Placement { id: it.id, x: 0, y });
        y += it.h;
    }
    Packing::new(placements)
}

/// Calls `visit` with the x-coordinates (in input order) of every feasible
/// horizontal rearrangement of `bars` inside a box of width `width` and height
/// `height`. Bars keep their vertical position (touching the top or the
/// bottom). Rearrangements that differ only by swapping identical bars are
/// reported once.
pub fn enumerate_reorderings(
    bars: &[Bar],
    width: i64,
    height: &Q,
    max_outcomes: u64,
    mut visit: impl FnMut(&[i64]),
) -> Result<u64, BudgetError> {
    let n = bars.len();
    let mut xs = vec![0i64; n];
    let mut count = 0u64;
    fn rec(
        k: usize,
        bars: &[Bar],
        width: i64,
        height: &Q,
        xs: &mut Vec<i64>,
        count: &mut u64,
        max: u64,
        visit: &mut dyn FnMut(&[i64]),
    ) -> Result<(), BudgetError> {
        if k == bars.len() {
            *count += 1;
            if *count > max {
                return Err(BudgetError::Nodes(max));
            }
            visit(xs);
            return Ok(());
        }
        let b = &bars[k];
        // identical bars appear in increasing x to avoid duplicates
        let start = (0..k)
            .rev()
            .find(|&j| bars[j].same_shape(b))
            .map(|j| xs[j] + 1)
            .unwrap_or(0);
        for x in start..=width - b.w {
            let clash = (0..k).any(|j| {
                let o = &bars[j];
                x < xs[j] + o.w && xs[j] < x + b.w && b.vertical_overlap(o, height)
            });
            if !clash {
                xs[k] = x;
                rec(k + 1, bars, width, height, xs, count, max, visit)?;
            }
        }
        Ok(())
    }
    rec(0, bars, width, height, &mut xs, &mut count, max_outcomes, &mut visit)?;
    Ok(count)
}
