//! Unit-width containers between the top and bottom items of a box, and the
//! guarantee that the smallest ones survive any reordering.

use thiserror::Error;

use super::bars::Arrangement;
use crate::rational::{ceil_int, q, to_i64, Q};

/// Free height in every unit column of the box.
pub fn build_containers(arr: &Arrangement) -> Vec<Q> {
    let (top, bottom) = arr.column_cover();
    top.iter()
        .zip(&bottom)
        .map(|(t, b)| {
            let free = &arr.height - t - b;
            if free > q(0) {
                free
            } else {
                q(0)
            }
        })
        .collect()
}

/// `β / (β + h)` for the bars of `arr`, where β is the smallest positive gap
/// between two bar heights and `h` is the box height minus the shortest top
/// and shortest bottom bar. Returns 1 when every value of α is admissible.
pub fn alpha_bound(arr: &Arrangement) -> Q {
    let mut hs: Vec<&Q> = arr.bars.iter().map(|b| &b.h).collect();
    hs.sort();
    hs.dedup();
    let beta = hs.windows(2).map(|p| p[1] - p[0]).min();
    let shortest = |top: bool| {
        arr.bars
            .iter()
            .filter(|b| if top { b.covers_top(&arr.height) } else { b.covers_bottom(&arr.height) })
            .map(|b| b.h.clone())
            .min()
            .unwrap_or_else(|| q(0))
    };
    let h = &arr.height - shortest(true) - shortest(false);
    match beta {
        Some(beta) if h > q(0) => &beta / (&beta + h),
        _ => q(1),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("container sets differ in size ({0} vs {1})")]
    Width(usize, usize),
    #[error("container sets differ in total height")]
    Area,
    #[error("alpha must lie in [0, 1]")]
    Alpha,
    #[error("original container {0} does not fit into its partner {1}")]
    NoFit(usize, usize),
}

/// The `⌈αw⌉` smallest containers of `original`, each paired with a distinct
/// container of `reordered` at least as high. Pairs are `(original, reordered)`
/// column indices ordered by increasing height.
pub fn container_fit(original: &[Q], reordered: &[Q], alpha: &Q) -> Result<Vec<(usize, usize)>, FitError> {
    if original.len() != reordered.len() {
        return Err(FitError::Width(original.len(), reordered.len()));
    }
    if original.iter().sum::<Q>() != reordered.iter().sum::<Q>() {
        return Err(FitError::Area);
    }
    if *alpha < q(0) || *alpha > q(1) {
        return Err(FitError::Alpha);
    }
    let w = original.len();
    let k = to_i64(&ceil_int(&(alpha * q(w as i64)))).unwrap_or(0) as usize;
    let mut small: Vec<usize> = (0..w).collect();
    small.sort_by(|&a, &b| original[a].cmp(&original[b]).then(a.cmp(&b)));
    small.truncate(k);
    let mut large: Vec<usize> = (0..w).collect();
    large.sort_by(|&a, &b| reordered[b].cmp(&reordered[a]).then(a.cmp(&b)));
    large.truncate(k);
    large.reverse();
    // pairing sorted with sorted is optimal for a threshold matching
    let mut pairs = Vec::with_capacity(k);
    for (&o, &r) in small.iter().zip(&large) {
        if original[o] > reordered[r] {
            return Err(FitError::NoFit(o, r));
        }
        pairs.push((o, r));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::transform::bars::Bar;

    #[test]
    fn empty_box_has_full_containers() {
        let a = Arrangement::new(5, q(3), vec![]);
        assert_eq!(build_containers(&a), vec![q(3); 5]);
    }

    #[test]
    fn covered_column_is_zero() {
        let a = Arrangement::new(2, q(3), vec![(0, Bar::new(1, q(3), false)), (1, Bar::new(1, q(1), true))]);
        assert_eq!(build_containers(&a), vec![q(0), q(2)]);
    }

    #[test]
    fn identity_fit() {
        let c = vec![q(1), q(3), q(2), q(0)];
        for a in [frac(0, 1), frac(1, 4), frac(1, 2), q(1)] {
            let pairs = container_fit(&c, &c, &a).unwrap();
            assert!(pairs.iter().all(|&(o, r)| c[o] <= c[r]));
        }
    }

    #[test]
    fn detects_misfit_and_bad_input() {
        let a = vec![q(2), q(2)];
        let b = vec![q(4), q(0)];
        assert!(container_fit(&a, &b, &frac(1, 2)).is_ok());
        assert_eq!(container_fit(&a, &b, &q(1)), Err(FitError::NoFit(0, 1)));
        assert_eq!(container_fit(&a, &b[..1], &q(1)), Err(FitError::Width(2, 1)));
        assert_eq!(container_fit(&a, &[q(1), q(1)], &q(1)), Err(FitError::Area));
    }

    #[test]
    fn alpha_bound_of_two_heights() {
        // heights 2 and 3 in a box of height 6: beta 1, h = 6 - 2 - 2
        let a = Arrangement::new(
            2,
            q(6),
            vec![
                (0, Bar::new(1, q(2), false)),
                (1, Bar::new(1, q(3), false)),
                (0, Bar::pseudo(1, q(2), true)),
                (1, Bar::pseudo(1, q(3), true)),
            ],
        );
        assert_eq!(alpha_bound(&a), frac(1, 3));
    }
}
