#![allow(dead_code)]

use rand::Rng;
use stripack::geom::{Instance, Item};
use stripack::rational::{q, Q};
use stripack::transform::{Arrangement, Bar};

/// Splits `w` into random positive parts.
pub fn composition<R: Rng>(rng: &mut R, w: i64, max_part: i64) -> Vec<i64> {
    let mut parts = Vec::new();
    let mut left = w;
    while left > 0 {
        let p = rng.gen_range(1..=left.min(max_part));
        parts.push(p);
        left -= p;
    }
    parts
}

/// A feasible arrangement in which the bottom bars and the top bars each
/// tile the box. Heights come from `grid` (values below `height`) or are
/// full height. Bars touching the box border are fixed with probability
/// `fixed_p`.
pub fn random_arrangement<R: Rng>(rng: &mut R, w: i64, height: i64, grid: &[i64], fixed_p: f64) -> Arrangement {
    let hq = q(height);
    let mut placed: Vec<(i64, Bar)> = Vec::new();
    let mut bottom = vec![0i64; w as usize];
    let mut full = vec![false; w as usize];
    let mut x = 0;
    for p in composition(rng, w, 3) {
        let pseudo = rng.gen_bool(0.4);
        let h = if rng.gen_bool(0.15) { height } else { grid[rng.gen_range(0..grid.len())] };
        let b = if pseudo { Bar::pseudo(p, q(h), false) } else { Bar::new(p, q(h), false) };
        for c in x..x + p {
            bottom[c as usize] = h;
            full[c as usize] = h == height;
        }
        placed.push((x, b));
        x += p;
    }
    // top bars over the non-full stretches
    let mut c = 0;
    while c < w {
        if full[c as usize] {
            c += 1;
            continue;
        }
        let mut e = c;
        while e < w && !full[e as usize] {
            e += 1;
        }
        let mut x = c;
        for p in composition(rng, e - c, 3) {
            let room = height - (x..x + p).map(|k| bottom[k as usize]).max().unwrap();
            let fits: Vec<i64> = grid.iter().copied().filter(|&g| g <= room).collect();
            let h = if fits.is_empty() { 0 } else { fits[rng.gen_range(0..fits.len())] };
            if h > 0 {
                let b = if rng.gen_bool(0.4) { Bar::pseudo(p, q(h), true) } else { Bar::new(p, q(h), true) };
                placed.push((x, b));
            }
            x += p;
        }
        c = e;
    }
    let mut arr = Arrangement::new(w, hq, placed);
    for i in 0..arr.bars.len() {
        let border = arr.xs[i] == 0 || arr.end(i) == w;
        if border && rng.gen_bool(fixed_p) {
            arr.fixed[i] = true;
        }
    }
    // at most one fixed bar per border
    for side in [0, w] {
        let mut seen = false;
        for i in 0..arr.bars.len() {
            let at = if side == 0 { arr.xs[i] == 0 } else { arr.end(i) == w };
            if at && arr.fixed[i] {
                if seen {
                    arr.fixed[i] = false;
                }
                seen = true;
            }
        }
    }
    arr
}

pub fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Random instance with `1..=n_max` items and width `1..=w_max`. Shapes are
/// mixed so that tall, wide, large and small items all turn up.
pub fn micro<R: Rng>(rng: &mut R, n_max: usize, w_max: i64, h_max: i64) -> Instance {
    let width = rng.gen_range(1..=w_max);
    let n = rng.gen_range(1..=n_max);
    let items = (0..n)
        .map(|id| {
            let (w, h) = match rng.gen_range(0..4) {
                0 => (rng.gen_range(1..=(width / 3).max(1)), rng.gen_range((h_max / 2).max(1)..=h_max)),
                1 => (rng.gen_range((width / 2).max(1)..=width), rng.gen_range(1..=(h_max / 4).max(1))),
                2 => (rng.gen_range((width / 3).max(1)..=width), rng.gen_range((h_max / 3).max(1)..=h_max)),
                _ => (rng.gen_range(1..=width), rng.gen_range(1..=h_max)),
            };
            Item::new(id as u32, w, h)
        })
        .collect();
    Instance::new(width, items).unwrap()
}
