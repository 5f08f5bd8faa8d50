//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Tolerances, sample sizes, seeds and time limits are the constants
//! below.

mod common;
mod independent;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stripack::classify::{classify, round_heights, Class, Params};
use stripack::driver::{solve, SolveConfig};
use stripack::geom::{packing_height, validate, Instance, Item, ItemId, Packing, Placement};
use stripack::layout::Rect;
use stripack::lpconfig::{enumerate_configurations, solve_config_lp, solve_lp, ConfigLp, Lp, Mode, Rel};
use stripack::oracle::{exact_opt, SearchBudget};
use stripack::place::shelf::nfdh;
use stripack::rational::{floor_int, frac, pow, q, to_i64, Q};
use stripack::talldp::assign_bins;
use stripack::transform::build_structure;
use stripack::transform::{alpha_bound, container_fit, reorder_box, Arrangement, Bar};

use independent::{fourier_motzkin, normal_pattern_opt, painted_height, painted_valid, pairwise_valid, Ineq};

const MUTATIONS: usize = 1000;
const MUTATION_SOURCES: usize = 300;
const NFDH_SAMPLES: usize = 10_000;
const ROUNDING_WITNESSES: usize = 1000;
const MICRO_RUNS: usize = 200;
const MICRO_N: usize = 6;
const MICRO_W: i64 = 10;
const MICRO_H: i64 = 12;
const LP_SAMPLES: usize = 3000;
const CONFIG_LP_SAMPLES: usize = 1000;

const LIMIT_1: Duration = Duration::from_secs(10);
const LIMIT_2: Duration = Duration::from_secs(300);
const LIMIT_3: Duration = Duration::from_secs(30);
const LIMIT_4: Duration = Duration::from_secs(600);
const LIMIT_5: Duration = Duration::from_secs(600);
const LIMIT_6: Duration = Duration::from_secs(300);
const LIMIT_7: Duration = Duration::from_secs(600);
const LIMIT_8: Duration = Duration::from_secs(300);
const LIMIT_9: Duration = Duration::from_secs(600);
const LIMIT_10: Duration = Duration::from_secs(900);

/// Final ratio allowed at ε = 1/24, and the practical fallback factor.
fn end_to_end_bound() -> Q {
    frac(4, 3) + frac(1, 24)
}
const FALLBACK_FACTOR: i64 = 3;

#[derive(Default)]
struct Tally {
    checked: u64,
    failed: u64,
    examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }
}

fn criterion(n: u32, title: &str, limit: Duration, f: impl FnOnce(&mut Tally) -> String) -> bool {
    let start = Instant::now();
    let mut t = Tally::default();
    let note = f(&mut t);
    let took = start.elapsed();
    let pass = t.failed == 0 && t.checked > 0 && took <= limit;
    println!(
        "criterion {n:>2} {}  {title}: {} checked, {} failed{}{}, {:.1} s (limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        t.checked,
        t.failed,
        if note.is_empty() { "" } else { "; " },
        note,
        took.as_secs_f64(),
        limit.as_secs()
    );
    for e in &t.examples {
        println!("    {e}");
    }
    pass
}

fn witness(inst: &Instance) -> (i64, Packing) {
    exact_opt(inst, &SearchBudget::default()).expect("micro instance within the oracle budget")
}

fn micro_corpus(seed: u64, count: usize) -> Vec<(Instance, i64, Packing)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let inst = common::micro(&mut rng, MICRO_N, MICRO_W, MICRO_H);
            let (opt, pk) = witness(&inst);
            (inst, opt, pk)
        })
        .collect()
}

fn dims(inst: &Instance) -> Vec<(i64, i64)> {
    inst.items().iter().map(|i| (i.w, i.h)).collect()
}

// ---------------------------------------------------------------- 1

fn mutate(rng: &mut ChaCha8Rng, inst: &Instance, pk: &Packing) -> (usize, Packing) {
    let mut ps = pk.placements.clone();
    let n = ps.len();
    let top = painted_height(inst, pk);
    let fresh = ItemId(inst.items().iter().map(|i| i.id.0).max().unwrap_or(0) + 1);
    let width = inst.width();
    let w_of = |id: ItemId| inst.item(id).map_or(1, |i| i.w);
    let mut kind = rng.gen_range(0..8);
    if kind == 0 && n < 2 {
        kind = 1;
    }
    let i = rng.gen_range(0..n);
    match kind {
        0 => {
            let j = (i + rng.gen_range(1..n)) % n;
            ps[i].x = ps[j].x.min(width - w_of(ps[i].id));
            ps[i].y = ps[j].y;
        }
        1 => ps[i].x = width - w_of(ps[i].id) + rng.gen_range(1..=3),
        2 => {
            if rng.gen_bool(0.5) {
                ps[i].x = -rng.gen_range(1..=3);
            } else {
                ps[i].y = -rng.gen_range(1..=3);
            }
        }
        3 => {
            ps.remove(i);
        }
        4 => {
            let p = Placement { id: ps[i].id, x: 0, y: top + 1 };
            ps.push(p);
        }
        5 => ps.push(Placement { id: fresh, x: 0, y: top + 1 }),
        6 => ps[i].id = fresh,
        _ => {
            ps[i].x += rng.gen_range(-2..=2);
            ps[i].y += rng.gen_range(-2..=2);
        }
    }
    (kind, Packing::new(ps))
}

fn c1(t: &mut Tally) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sources = Vec::new();
    let mut witnesses = 0;
    while sources.len() < MUTATION_SOURCES {
        let inst = common::micro(&mut rng, MICRO_N, MICRO_W, MICRO_H);
        let (opt, pk) = witness(&inst);
        t.check(validate(&inst, &pk).is_ok() && painted_valid(&inst, &pk) && painted_height(&inst, &pk) == opt, || {
            format!("witness rejected on {:?}", dims(&inst))
        });
        witnesses += 1;
        let shelf = nfdh(inst.items(), inst.width()).unwrap();
        sources.push((inst.clone(), pk));
        sources.push((inst, shelf));
    }
    let mut corrupted = 0;
    let mut benign = 0;
    let mut kinds = [0usize; 8];
    while corrupted < MUTATIONS {
        let (inst, pk) = &sources[rng.gen_range(0..sources.len())];
        let (kind, m) = mutate(&mut rng, inst, pk);
        let really_valid = painted_valid(inst, &m);
        if really_valid {
            // a move that happened to keep the packing valid
            benign += 1;
            t.check(validate(inst, &m).is_ok(), || format!("valid mutation rejected: {m:?}"));
            continue;
        }
        corrupted += 1;
        kinds[kind] += 1;
        t.check(!validate(inst, &m).is_ok(), || format!("corrupted packing accepted ({kind}): {m:?}"));
    }
    format!("{witnesses} witnesses, {corrupted} corrupted, {benign} benign mutations, by kind {kinds:?}")
}

// ---------------------------------------------------------------- 2

fn multisets(types: &[(i64, i64)], max: usize, from: usize, cur: &mut Vec<(i64, i64)>, out: &mut dyn FnMut(&[(i64, i64)])) {
    out(cur);
    if cur.len() == max {
        return;
    }
    for k in from..types.len() {
        cur.push(types[k]);
        multisets(types, max, k, cur, out);
        cur.pop();
    }
}

fn c2(t: &mut Tally) -> String {
    for width in 1..=6 {
        let types: Vec<(i64, i64)> = (1..=width).flat_map(|w| (1..=4).map(move |h| (w, h))).collect();
        multisets(&types, 5, 0, &mut Vec::new(), &mut |items| {
            let inst = Instance::new(
                width,
                items.iter().enumerate().map(|(i, &(w, h))| Item::new(i as u32, w, h)).collect(),
            )
            .unwrap();
            let want = normal_pattern_opt(width, items);
            match exact_opt(&inst, &SearchBudget::default()) {
                Ok((opt, pk)) => t.check(
                    opt == want && painted_valid(&inst, &pk) && painted_height(&inst, &pk) == opt,
                    || format!("W={width} {items:?}: oracle {opt}, enumerator {want}"),
                ),
                Err(e) => t.check(false, || format!("W={width} {items:?}: {e}")),
            }
        });
    }
    "n <= 5, W <= 6, h <= 4".into()
}

// ---------------------------------------------------------------- 3

fn c3(t: &mut Tally) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for k in 0..NFDH_SAMPLES {
        let width = rng.gen_range(1..=100);
        let n = rng.gen_range(0..=60);
        let hmax_gen = rng.gen_range(1..=100);
        let items: Vec<Item> = (0..n)
            .map(|id| {
                let (w, h) = match k % 3 {
                    0 => (rng.gen_range(1..=width), rng.gen_range(1..=hmax_gen)),
                    1 => (rng.gen_range(1..=(width / 4).max(1)), rng.gen_range(1..=hmax_gen)),
                    _ => (rng.gen_range((width / 2).max(1)..=width), rng.gen_range(1..=(hmax_gen / 5).max(1))),
                };
                Item::new(id, w, h)
            })
            .collect();
        let inst = Instance::new(width, items).unwrap();
        let pk = nfdh(inst.items(), width).unwrap();
        let area: i64 = inst.items().iter().map(|i| i.w * i.h).sum();
        let hmax = inst.items().iter().map(|i| i.h).max().unwrap_or(0);
        let h = inst.items().iter().map(|i| pk.position(i.id).map_or(0, |p| p.1) + i.h).max().unwrap_or(0);
        if h > 0 {
            worst = worst.max((width * h) as f64 / (2 * area + width * hmax) as f64);
        }
        t.check(pairwise_valid(&inst, &pk) && width * h <= 2 * area + width * hmax, || {
            format!("W={width} height {h}, area {area}, hmax {hmax}")
        });
    }
    format!("worst height/(2A/W + hmax) {worst:.3}")
}

// ---------------------------------------------------------------- 4

const BOX_4: i64 = 8;
const GRID_4: [i64; 4] = [2, 3, 5, 6];

fn tilings4(w: i64) -> Vec<Vec<(i64, i64)>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for a in 1..=w {
        for &h in &GRID_4 {
            for mut rest in tilings4(w - a) {
                rest.insert(0, (a, h));
                out.push(rest);
            }
        }
    }
    out
}

fn multiset_code(t: &[(i64, i64)]) -> u128 {
    let mut c = [0u128; 24];
    for &(w, h) in t {
        c[((w - 1) * 4) as usize + GRID_4.iter().position(|&g| g == h).unwrap()] += 1;
    }
    c.iter().fold(0, |acc, &x| acc * 7 + x)
}

fn columns<T: Copy>(t: &[(i64, i64)], f: impl Fn(i64) -> T) -> Vec<T> {
    t.iter().flat_map(|&(w, h)| std::iter::repeat(f(h)).take(w as usize)).collect()
}

/// β/(β + h) from the bar heights alone.
fn alpha_limit(bottom: &[(i64, i64)], top: &[(i64, i64)]) -> Q {
    let hs: BTreeSet<i64> = bottom.iter().chain(top).map(|b| b.1).collect();
    let hs: Vec<i64> = hs.into_iter().collect();
    let beta = hs.windows(2).map(|p| p[1] - p[0]).min();
    let h = BOX_4 - top.iter().map(|b| b.1).min().unwrap_or(0) - bottom.iter().map(|b| b.1).min().unwrap_or(0);
    match beta {
        Some(b) if h > 0 => frac(b, b + h),
        _ => q(1),
    }
}

fn c4(t: &mut Tally) -> String {
    let (mut groups_n, mut arrangements, mut calls) = (0usize, 0u64, 0u64);
    for w in 1..=6i64 {
        let ts = tilings4(w);
        let cols: Vec<Vec<i64>> = ts.iter().map(|t| columns(t, |h| h)).collect();
        let codes: Vec<u128> = ts.iter().map(|t| multiset_code(t)).collect();
        // every arrangement of the same two multisets is a reordering of the others
        let mut groups: HashMap<(u128, u128), (usize, usize, HashSet<u32>)> = HashMap::new();
        for b in 0..ts.len() {
            for u in 0..ts.len() {
                if (0..w as usize).any(|c| cols[b][c] + cols[u][c] > BOX_4) {
                    continue;
                }
                arrangements += 1;
                let mut cont: Vec<i64> = (0..w as usize).map(|c| BOX_4 - cols[b][c] - cols[u][c]).collect();
                cont.sort();
                let packed = cont.iter().fold(0u32, |a, &x| a * 16 + x as u32);
                groups.entry((codes[b], codes[u])).or_insert_with(|| (b, u, HashSet::new())).2.insert(packed);
            }
        }
        groups_n += groups.len();
        for (_, (b, u, set)) in groups {
            let mut placed = Vec::new();
            let mut x = 0;
            for &(a, h) in &ts[b] {
                placed.push((x, Bar::new(a, q(h), false)));
                x += a;
            }
            let mut x = 0;
            for &(a, h) in &ts[u] {
                placed.push((x, Bar::new(a, q(h), true)));
                x += a;
            }
            let limit = alpha_limit(&ts[b], &ts[u]);
            let arr = Arrangement::new(w, q(BOX_4), placed);
            t.check(alpha_bound(&arr) == limit, || format!("alpha bound {} vs {limit} on {arr:?}", alpha_bound(&arr)));
            let vecs: Vec<Vec<Q>> =
                set.iter().map(|&p| (0..w).rev().map(|i| q(((p >> (4 * i)) & 15) as i64)).collect()).collect();
            for j in 0..=8 {
                let alpha = frac(j, 8);
                if alpha > limit {
                    break;
                }
                for x in &vecs {
                    for y in &vecs {
                        calls += 1;
                        let ok = container_fit(x, y, &alpha).is_ok();
                        t.check(ok, || format!("alpha {alpha}: {x:?} -> {y:?}"));
                    }
                }
            }
        }
    }
    format!("{groups_n} multiset pairs, {arrangements} arrangements, {calls} fits")
}

// ---------------------------------------------------------------- 5

const BOX_5: i64 = 10;
// (width, height, pseudo); height 0 leaves the columns empty
const BOTTOM_5: [(i64, i64, bool); 4] = [(1, 5, false), (1, 3, true), (2, 7, false), (2, 8, true)];
const TOP_5: [(i64, i64, bool); 3] = [(1, 3, false), (1, 0, false), (2, 2, true)];

fn tilings5(w: i64, alphabet: &[(i64, i64, bool)]) -> Vec<Vec<(i64, i64, bool)>> {
    if w == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for &b in alphabet {
        if b.0 <= w {
            for mut rest in tilings5(w - b.0, alphabet) {
                rest.insert(0, b);
                out.push(rest);
            }
        }
    }
    out
}

/// Checks one reordered arrangement against plain integer geometry.
/// `shape[i]` is `(w, h, pseudo, top)` of bar `i`.
fn check_reordered(t: &mut Tally, arr: &Arrangement, shape: &[(i64, i64, bool, bool)]) {
    let out = match reorder_box(arr) {
        Ok(o) => o,
        Err(e) => return t.check(false, || format!("{e} on {arr:?}")),
    };
    let o = &out.arrangement;
    let mut cells = HashSet::new();
    let mut painted = o.bars == arr.bars && o.xs.len() == shape.len();
    for (i, &(w, h, _, top)) in shape.iter().enumerate() {
        if !painted {
            break;
        }
        let x = o.xs[i];
        painted &= x >= 0 && x + w <= arr.width;
        let ys = if top { BOX_5 - h..BOX_5 } else { 0..h };
        for c in x..x + w {
            for y in ys.clone() {
                painted &= cells.insert((c, y));
            }
        }
    }
    let fixed_kept = (0..shape.len()).all(|i| !arr.fixed[i] || o.xs.get(i) == Some(&arr.xs[i]));
    // maximal runs of equal bars side by side
    let mut runs = 0;
    for side in [false, true] {
        let mut idx: Vec<usize> = (0..shape.len()).filter(|&i| shape[i].3 == side).collect();
        idx.sort_by_key(|&i| o.xs[i]);
        for (k, &i) in idx.iter().enumerate() {
            let joins = k > 0 && {
                let p = idx[k - 1];
                o.xs[p] + shape[p].0 == o.xs[i] && shape[p].1 == shape[i].1 && shape[p].2 == shape[i].2
            };
            if !joins {
                runs += 1;
            }
        }
    }
    let distinct = |f: &dyn Fn(&(i64, i64, bool, bool)) -> bool| {
        shape.iter().filter(|s| f(s)).map(|s| s.1).collect::<BTreeSet<_>>().len()
    };
    let (s_t, s_p, s_all) = (distinct(&|s| !s.2), distinct(&|s| s.2), distinct(&|_| true));
    let bound = 4 * s_all * (s_t + s_p);
    t.check(painted && fixed_kept && runs <= bound, || {
        format!("painted {painted}, fixed kept {fixed_kept}, {runs} runs > {bound}? on {arr:?}")
    });
}

fn c5(t: &mut Tally) -> String {
    let mut variants = [0u64; 3];
    for w in 1..=8i64 {
        let bs = tilings5(w, &BOTTOM_5);
        let ts = tilings5(w, &TOP_5);
        let col = |tl: &[(i64, i64, bool)]| -> Vec<i64> {
            tl.iter().flat_map(|&(w, h, _)| std::iter::repeat(h).take(w as usize)).collect()
        };
        let bc: Vec<Vec<i64>> = bs.iter().map(|x| col(x)).collect();
        let tc: Vec<Vec<i64>> = ts.iter().map(|x| col(x)).collect();
        for b in 0..bs.len() {
            for u in 0..ts.len() {
                if (0..w as usize).any(|c| bc[b][c] + tc[u][c] > BOX_5) {
                    continue;
                }
                let mut placed = Vec::new();
                let mut shape = Vec::new();
                for (bars, top) in [(&bs[b], false), (&ts[u], true)] {
                    let mut x = 0;
                    for &(a, h, p) in bars.iter() {
                        if h > 0 {
                            placed.push((x, if p { Bar::pseudo(a, q(h), top) } else { Bar::new(a, q(h), top) }));
                            shape.push((a, h, p, top));
                        }
                        x += a;
                    }
                }
                for (v, count) in variants.iter_mut().enumerate() {
                    let mut arr = Arrangement::new(w, q(BOX_5), placed.clone());
                    if v >= 1 {
                        arr.fixed[0] = true;
                    }
                    if v == 2 {
                        match (0..arr.bars.len()).rev().find(|&i| arr.bars[i].top && arr.end(i) == w) {
                            Some(i) => arr.fixed[i] = true,
                            None => continue,
                        }
                    }
                    *count += 1;
                    check_reordered(t, &arr, &shape);
                }
            }
        }
    }
    format!("arrangements by fixed bars (none, left, left and right) {variants:?}")
}

// ---------------------------------------------------------------- 6

fn rect_overlap(a: (&Q, &Q, i64, i64), b: (&Q, &Q, i64, i64)) -> bool {
    // (y, top, x, end)
    a.2 < b.3 && b.2 < a.3 && a.0 < b.1 && b.0 < a.1
}

fn c6(t: &mut Tally) -> String {
    let settings = [(frac(1, 3), 1u32), (frac(1, 3), 2), (frac(1, 4), 1), (frac(1, 4), 2), (frac(1, 6), 1)];
    let corpus = micro_corpus(6, ROUNDING_WITNESSES);
    let mut rounded_items = 0usize;
    for (k, (inst, opt, pk)) in corpus.iter().enumerate() {
        let (eps, kd) = settings[k % settings.len()].clone();
        let p = Params::with_exponents(eps.clone(), *opt, kd, kd + 1).unwrap();
        let classes = classify(inst, &p);
        let (ri, layout) = match round_heights(inst, pk, &classes, &p) {
            Ok(r) => r,
            Err(e) => return format!("rounding failed: {e}"),
        };
        let opt_q = q(*opt);
        // validity in exact arithmetic
        let mut ids = BTreeSet::new();
        let mut ok = layout.rects.len() == inst.len();
        for r in &layout.rects {
            ok &= ids.insert(r.id) && r.x >= 0 && r.x + r.w <= inst.width() && r.y >= q(0);
        }
        let boxes: Vec<(Q, Q, i64, i64)> =
            layout.rects.iter().map(|r| (r.y.clone(), &r.y + &r.h, r.x, r.x + r.w)).collect();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let (a, b) = (&boxes[i], &boxes[j]);
                ok &= !rect_overlap((&a.0, &a.1, a.2, a.3), (&b.0, &b.1, b.2, b.3));
            }
        }
        let top = boxes.iter().map(|b| b.1.clone()).max().unwrap_or_else(|| q(0));
        ok &= top <= (q(1) + q(2) * &eps) * &opt_q;
        // heights
        let mut heights = BTreeSet::new();
        for it in inst.items() {
            let cl = classes.of(it.id).unwrap();
            let should = matches!(cl, Class::Large | Class::Tall | Class::Vertical);
            let r = layout.rects.iter().find(|r| r.id == it.id).unwrap();
            if !should {
                ok &= !ri.rounded.contains_key(&it.id) && r.h == q(it.h);
                continue;
            }
            rounded_items += 1;
            let h = q(it.h);
            let level = (0..=kd).find(|&l| if l == 0 { h >= opt_q } else { h >= pow(&eps, l) * &opt_q }).unwrap_or(kd + 1);
            let unit = pow(&eps, level + 1) * &opt_q;
            let mult = &r.h / &unit;
            ok &= level <= kd
                && mult.is_integer()
                && mult >= eps.recip()
                && mult <= eps.recip() * eps.recip()
                && r.h >= h
                && r.h <= (q(1) + &eps) * &h
                && (&r.y / &unit).is_integer();
            heights.insert(r.h.clone());
        }
        ok &= q(heights.len() as i64) <= q(kd as i64) / (&eps * &eps);
        t.check(ok, || format!("eps {eps} k {kd} opt {opt} on {:?}", dims(inst)));
    }
    format!("{rounded_items} rounded items")
}

// ---------------------------------------------------------------- 7

fn configs_7() -> Vec<SolveConfig> {
    vec![SolveConfig::faithful(frac(1, 24)), SolveConfig::practical(frac(1, 4)), SolveConfig::practical(frac(1, 6))]
}

fn area(rs: &[Rect]) -> Q {
    rs.iter().map(|r| q(r.w) * &r.h).sum()
}

fn c7(t: &mut Tally, corpus: &[(Instance, i64, Packing)]) -> String {
    let mut nonempty = [0usize; 3];
    for (inst, opt, pk) in corpus {
        for cfg in configs_7() {
            let Some(p) = cfg.params(inst, *opt) else {
                t.check(false, || format!("no parameters for {:?}", dims(inst)));
                continue;
            };
            let s = match build_structure(inst, pk, &p) {
                Ok(s) => s,
                Err(e) => {
                    t.check(false, || format!("{e} on {:?}", dims(inst)));
                    continue;
                }
            };
            let (eps, delta, opt_q, width) = (&p.eps, &p.delta, q(*opt), inst.width());
            let ids = |c: Class| -> Vec<&Item> { inst.items().iter().filter(|i| classes_of(&s, i.id) == c).collect() };
            let large = ids(Class::Large);
            let tall = ids(Class::Tall);
            let vertical = ids(Class::Vertical);
            let horizontal = ids(Class::Horizontal);
            let small = ids(Class::Small);
            nonempty[0] += usize::from(!s.horizontal.is_empty());
            nonempty[1] += usize::from(!s.tall.is_empty());
            nonempty[2] += usize::from(!s.vertical.is_empty());
            let ed2 = eps * delta * delta;
            let e3d2 = eps * eps * eps * delta * delta;
            let mut fails = Vec::new();
            let mut need = |ok: bool, what: &str| {
                if !ok {
                    fails.push(what.to_string());
                }
            };
            need(s.certificate.holds(), "certificate");
            // the top row of height (1/3 + ε)opt sits above the main area
            need(&s.main_height + p.tall_threshold() <= (frac(4, 3) + q(6) * eps) * &opt_q, "total height");
            // large items in their own boxes, nothing small or medium placed
            let lset: BTreeSet<ItemId> = large.iter().map(|i| i.id).collect();
            need(s.large.iter().map(|(id, _)| *id).collect::<BTreeSet<_>>() == lset && s.large.len() == large.len(), "large set");
            need(
                s.large.iter().all(|(id, r)| inst.item(*id).is_some_and(|i| i.w == r.w) && r.h == s.rounded.height(*id)),
                "large dims",
            );
            let th: BTreeSet<ItemId> = s.tall_heights.keys().copied().collect();
            need(th == tall.iter().map(|i| i.id).collect(), "tall set");
            // horizontal
            let bh = q(1) + q(2) * eps;
            need(q(s.horizontal.len() as i64) <= &bh / &ed2 - q(large.len() as i64) / delta, "B_H count");
            need(area(&s.horizontal) >= q(horizontal.iter().map(|i| i.w * i.h).sum()), "B_H area");
            // tall: boxes of one height hold all tall items of that height
            need(q(s.tall.len() as i64) <= q(4) / &e3d2, "B_T count");
            let mut by_height: BTreeMap<Q, (i64, i64)> = BTreeMap::new();
            for i in &tall {
                by_height.entry(s.tall_heights[&i.id].clone()).or_default().0 += i.w;
            }
            for r in &s.tall {
                if let Some(e) = by_height.get_mut(&r.h) {
                    e.1 += r.w;
                }
            }
            need(by_height.values().all(|(need_w, have)| need_w <= have), "B_T widths");
            // vertical
            need(q(s.vertical.len() as i64) <= q(8) / &e3d2, "B_V count");
            let v0_h = (frac(1, 3) + eps) * &opt_q;
            let v0_w = to_i64(&floor_int(&((q(1) - q(2) * eps) * q(width)))).unwrap();
            need(s.certificate.v0_height == v0_h && s.certificate.v0_width == v0_w, "V0 shape");
            let v0_area = (q(1) - q(2) * eps) * q(width) * &v0_h;
            let v_area: Q = vertical.iter().map(|i| q(i.w) * s.rounded.height(i.id)).sum();
            need(area(&s.vertical) + &v0_area >= v_area, "B_V area");
            // free area
            let free = area(&s.horizontal) - q(horizontal.iter().map(|i| i.w * i.h).sum()) + area(&s.vertical) - &v_area
                + &v0_area;
            let required = q(small.iter().map(|i| i.w * i.h).sum()) + &v0_area;
            need(free >= required, "free area");
            // boxes pairwise disjoint inside the main area
            let mut all: Vec<&Rect> = s.large.iter().map(|(_, r)| r).chain(&s.horizontal).chain(&s.tall).chain(&s.vertical).collect();
            all.sort();
            all.dedup();
            let inside = all.iter().all(|r| r.x >= 0 && r.x + r.w <= width && r.y >= q(0) && &r.y + &r.h <= s.main_height);
            let disjoint = (0..all.len()).all(|i| {
                (i + 1..all.len()).all(|j| {
                    let (a, b) = (all[i], all[j]);
                    !rect_overlap((&a.y, &(&a.y + &a.h), a.x, a.x + a.w), (&b.y, &(&b.y + &b.h), b.x, b.x + b.w))
                })
            });
            need(inside && disjoint, "boxes disjoint");
            t.check(fails.is_empty(), || format!("eps {eps} opt {opt}: {fails:?} on {:?}", dims(inst)));
        }
    }
    format!("runs with horizontal/tall/vertical boxes {nonempty:?}")
}

fn classes_of(s: &stripack::transform::Structure, id: ItemId) -> Class {
    s.classes.of(id).unwrap_or(Class::Small)
}

// ---------------------------------------------------------------- 8

fn fm_rows(lp: &Lp) -> Vec<Ineq> {
    let mut rows = Vec::new();
    for r in &lp.rows {
        let neg: Vec<Q> = r.coeffs.iter().map(|a| -a.clone()).collect();
        if matches!(r.rel, Rel::Le | Rel::Eq) {
            rows.push(Ineq { a: r.coeffs.clone(), b: r.rhs.clone() });
        }
        if matches!(r.rel, Rel::Ge | Rel::Eq) {
            rows.push(Ineq { a: neg, b: -r.rhs.clone() });
        }
    }
    for v in 0..lp.vars {
        let mut a = vec![q(0); lp.vars];
        a[v] = q(-1);
        rows.push(Ineq { a, b: q(0) });
    }
    rows
}

fn holds(lp: &Lp, x: &[Q]) -> bool {
    x.len() == lp.vars
        && x.iter().all(|v| *v >= q(0))
        && lp.rows.iter().all(|r| {
            let lhs: Q = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match r.rel {
                Rel::Le => lhs <= r.rhs,
                Rel::Eq => lhs == r.rhs,
                Rel::Ge => lhs >= r.rhs,
            }
        })
}

fn c8(t: &mut Tally) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut feasible = 0;
    for _ in 0..LP_SAMPLES {
        let vars = rng.gen_range(1..=4);
        let mut lp = Lp::new(vars);
        for _ in 0..rng.gen_range(1..=4) {
            let coeffs = (0..vars).map(|_| q(rng.gen_range(-3..=3))).collect();
            let rel = [Rel::Le, Rel::Eq, Rel::Ge][rng.gen_range(0..3)];
            lp.push(coeffs, rel, q(rng.gen_range(-4..=6)));
        }
        let fm = fourier_motzkin(&fm_rows(&lp), vars);
        match solve_lp(&lp) {
            Ok(x) => {
                feasible += 1;
                let support = x.iter().filter(|v| **v != q(0)).count();
                t.check(fm && holds(&lp, &x) && support <= lp.rows.len(), || format!("{lp:?} -> {x:?}, oracle {fm}"));
            }
            Err(_) => t.check(!fm, || format!("{lp:?} declared infeasible")),
        }
    }
    let (mut config_lps, mut config_feasible) = (0, 0);
    while config_lps < CONFIG_LP_SAMPLES {
        let classes = rng.gen_range(1..=2);
        let mut sizes: Vec<i64> = Vec::new();
        while sizes.len() < classes {
            let s = rng.gen_range(1..=6);
            if !sizes.contains(&s) {
                sizes.push(s);
            }
        }
        let sizes: Vec<Q> = sizes.into_iter().map(q).collect();
        let capacity = q(rng.gen_range(1..=9));
        let configs: Vec<_> = enumerate_configurations(&sizes, &capacity, Mode::Horizontal, 1000)
            .unwrap()
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        if configs.is_empty() || configs.len() > 4 {
            continue;
        }
        config_lps += 1;
        let demand: Vec<i64> = (0..classes).map(|_| rng.gen_range(0..=6)).collect();
        let budget = rng.gen_range(0..=6);
        let mut lp = Lp::new(configs.len());
        for (k, d) in demand.iter().enumerate() {
            lp.push(configs.iter().map(|c| q(c.count(k) as i64)).collect(), Rel::Eq, q(*d));
        }
        lp.push(vec![q(1); configs.len()], Rel::Le, q(budget));
        let fm = fourier_motzkin(&fm_rows(&lp), configs.len());
        let c = ConfigLp { columns: (0..configs.len()).map(|k| (k, None)).collect(), configs, lp };
        match solve_config_lp(&c) {
            Ok(sol) => {
                config_feasible += 1;
                let exact = demand.iter().enumerate().all(|(k, d)| {
                    sol.support.iter().map(|(col, v)| q(c.configs[*col].count(k) as i64) * v).sum::<Q>() == q(*d)
                });
                let used: Q = sol.support.iter().map(|(_, v)| v.clone()).sum();
                t.check(fm && exact && used <= q(budget) && sol.support.len() <= c.lp.rows.len(), || {
                    format!("{:?} -> {:?}", c.lp, sol.support)
                });
            }
            Err(_) => t.check(!fm, || format!("{:?} declared infeasible", c.lp)),
        }
    }
    format!("{LP_SAMPLES} LPs ({feasible} feasible), {config_lps} configuration LPs ({config_feasible} feasible)")
}

// ---------------------------------------------------------------- 9

fn item_multisets(max: usize, lo: i64, cur: &mut Vec<i64>, out: &mut dyn FnMut(&[i64])) {
    out(cur);
    if cur.len() == max {
        return;
    }
    for s in lo..=10 {
        cur.push(s);
        item_multisets(max, s, cur, out);
        cur.pop();
    }
}

fn c9(t: &mut Tally) -> String {
    let mut caps: Vec<Vec<i64>> = Vec::new();
    for a in 0..=10 {
        caps.push(vec![a]);
        for b in a..=10 {
            caps.push(vec![a, b]);
            for c in b..=10 {
                caps.push(vec![a, b, c]);
            }
        }
    }
    let mut item_sets = 0;
    item_multisets(8, 1, &mut Vec::new(), &mut |items| {
        item_sets += 1;
        // loads of all 3^n assignments to three labelled bins
        let total = 3u64.pow(items.len() as u32);
        let mut loads = HashSet::new();
        for code in 0..total {
            let mut l = [0i64; 3];
            let mut c = code;
            for &a in items {
                l[(c % 3) as usize] += a;
                c /= 3;
            }
            loads.insert(l);
        }
        for cap in &caps {
            let k = cap.len();
            let brute = loads.iter().any(|l| (0..3).all(|b| if b < k { l[b] <= cap[b] } else { l[b] == 0 }));
            let dp = assign_bins(cap, items);
            let ok = match &dp {
                Ok(Some(a)) => {
                    let mut fill = vec![0; k];
                    let mut fits = a.len() == items.len();
                    for (i, &b) in a.iter().enumerate() {
                        fits &= b < k;
                        if b < k {
                            fill[b] += items[i];
                        }
                    }
                    brute && fits && fill.iter().zip(cap).all(|(f, c)| f <= c)
                }
                Ok(None) => !brute,
                Err(_) => false,
            };
            t.check(ok, || format!("bins {cap:?} items {items:?}: dp {dp:?}, brute force {brute}"));
        }
    });
    format!("{item_sets} item multisets x {} capacity vectors", caps.len())
}

// ---------------------------------------------------------------- 10

fn c10(t: &mut Tally, corpus: &[(Instance, i64, Packing)]) -> String {
    let bound = end_to_end_bound();
    let (mut worst, mut worst_fallback, mut structured) = (q(0), q(0), 0);
    for (inst, opt, pk) in corpus {
        let cfg = SolveConfig::faithful(frac(1, 24)).with_witness(pk.clone());
        match solve(inst, &cfg) {
            Ok(sol) => {
                let ratio = frac(sol.height, *opt);
                structured += usize::from(!sol.report.used_fallback);
                if ratio > worst {
                    worst = ratio.clone();
                }
                t.check(
                    painted_valid(inst, &sol.packing)
                        && painted_height(inst, &sol.packing) == sol.height
                        && ratio <= bound,
                    || format!("faithful height {} opt {opt} on {:?}", sol.height, dims(inst)),
                );
            }
            Err(e) => t.check(false, || format!("faithful: {e}")),
        }
        match solve(inst, &SolveConfig::practical(frac(1, 4))) {
            Ok(sol) => {
                let ratio = frac(sol.height, *opt);
                if ratio > worst_fallback {
                    worst_fallback = ratio;
                }
                t.check(
                    painted_valid(inst, &sol.packing) && sol.height <= FALLBACK_FACTOR * opt,
                    || format!("practical height {} opt {opt} on {:?}", sol.height, dims(inst)),
                );
            }
            Err(e) => t.check(false, || format!("practical: {e}")),
        }
        debug_assert_eq!(packing_height(inst, pk), *opt);
    }
    format!(
        "worst witness ratio {} (bound {bound}), {structured} structured results, worst practical ratio {}",
        worst, worst_fallback
    )
}

fn main() -> ExitCode {
    let mut all = true;
    all &= criterion(1, "validator soundness", LIMIT_1, c1);
    all &= criterion(2, "oracle against normal-pattern enumeration", LIMIT_2, c2);
    all &= criterion(3, "NFDH height bound", LIMIT_3, c3);
    all &= criterion(4, "containers survive reordering", LIMIT_4, c4);
    all &= criterion(5, "reordering stays feasible with few subboxes", LIMIT_5, c5);
    all &= criterion(6, "height rounding", LIMIT_6, c6);
    let start = Instant::now();
    let corpus = micro_corpus(10, MICRO_RUNS);
    let oracle_time = start.elapsed();
    all &= criterion(7, "structure of witness packings", LIMIT_7, |t| c7(t, &corpus));
    all &= criterion(8, "configuration LPs", LIMIT_8, c8);
    all &= criterion(9, "tall-item bin assignment", LIMIT_9, c9);
    all &= criterion(10, "end-to-end ratio", LIMIT_10.saturating_sub(oracle_time), |t| c10(t, &corpus));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
