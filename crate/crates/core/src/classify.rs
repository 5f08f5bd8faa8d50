//! Parameters δ and μ, the seven item classes, and height rounding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::geom::{packing_height, Instance, Item, ItemId, Packing};
use crate::layout::{RLayout, RRect};
use crate::rational::{ceil_to, floor_to, frac, pow, q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("1/eps must be an integer of at least 2")]
    BadEps,
    #[error("opt guess must be positive")]
    BadOpt,
    #[error("delta exponent {0} must be positive and below the mu exponent {1}")]
    BadExponents(u32, u32),
    #[error("no index j gives medium area at most eps/6 * opt * W; opt is below the optimum")]
    NoIndex,
}

/// `eps`, the current guess `opt`, and `delta = eps^k_delta > mu = eps^k_mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub eps: Q,
    pub opt: i64,
    pub delta: Q,
    pub mu: Q,
    pub k_delta: u32,
    pub k_mu: u32,
    /// Index into the σ sequence when chosen by [`select_params`].
    pub j: Option<u32>,
}

fn inv_eps(eps: &Q) -> Result<i64, ParamError> {
    if *eps <= q(0) || !eps.recip().is_integer() {
        return Err(ParamError::BadEps);
    }
    let k = eps.recip().to_integer();
    let k: i64 = (&k).try_into().map_err(|_| ParamError::BadEps)?;
    if k < 2 {
        return Err(ParamError::BadEps);
    }
    Ok(k)
}

/// Exponent of ε in σ_i = ε^{6(2^{i+1}−1)}.
pub fn sigma_exp(i: u32) -> u64 {
    6 * ((1u64 << (i + 1)) - 1)
}

pub fn sigma(eps: &Q, i: u32) -> Q {
    pow(eps, sigma_exp(i) as u32)
}

impl Params {
    /// Parameters with explicit exponents, for the practical mode.
    pub fn with_exponents(eps: Q, opt: i64, k_delta: u32, k_mu: u32) -> Result<Self, ParamError> {
        inv_eps(&eps)?;
        if opt < 1 {
            return Err(ParamError::BadOpt);
        }
        if k_delta == 0 || k_mu <= k_delta {
            return Err(ParamError::BadExponents(k_delta, k_mu));
        }
        let delta = pow(&eps, k_delta);
        let mu = pow(&eps, k_mu);
        Ok(Params { eps, opt, delta, mu, k_delta, k_mu, j: None })
    }

    pub fn opt_q(&self) -> Q {
        q(self.opt)
    }

    pub fn eps_opt(&self) -> Q {
        &self.eps * q(self.opt)
    }

    /// `(1/3 + ε)·opt`, the tall threshold.
    pub fn tall_threshold(&self) -> Q {
        (frac(1, 3) + &self.eps) * q(self.opt)
    }

    pub fn inv_eps(&self) -> i64 {
        inv_eps(&self.eps).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Large,
    Tall,
    Vertical,
    MediumVertical,
    Horizontal,
    Small,
    MediumHorizontal,
}

impl Class {
    pub const ALL: [Class; 7] = [
        Class::Large,
        Class::Tall,
        Class::Vertical,
        Class::MediumVertical,
        Class::Horizontal,
        Class::Small,
        Class::MediumHorizontal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Class::Large => "L",
            Class::Tall => "T",
            Class::Vertical => "V",
            Class::MediumVertical => "M_V",
            Class::Horizontal => "H",
            Class::Small => "S",
            Class::MediumHorizontal => "M_H",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class of a single item. Definitions overlap, so the first match in the
/// order of [`Class::ALL`] wins.
pub fn class_of(item: &Item, width: i64, p: &Params) -> Class {
    let h = q(item.h);
    let w = q(item.w);
    let dh = &p.delta * q(p.opt);
    let dw = &p.delta * q(width);
    let mh = &p.mu * q(p.opt);
    let mw = &p.mu * q(width);
    if h >= dh && w >= dw {
        Class::Large
    } else if h >= p.tall_threshold() {
        Class::Tall
    } else if h >= dh && w <= mw {
        Class::Vertical
    } else if h >= dh && w > mw && w < dw {
        Class::MediumVertical
    } else if h <= mh && w >= dw {
        Class::Horizontal
    } else if h <= mh && w <= mw {
        Class::Small
    } else {
        Class::MediumHorizontal
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Classification {
    pub classes: BTreeMap<ItemId, Class>,
}

impl Classification {
    pub fn of(&self, id: ItemId) -> Option<Class> {
        self.classes.get(&id).copied()
    }

    pub fn ids(&self, c: Class) -> Vec<ItemId> {
        self.classes.iter().filter(|(_, &k)| k == c).map(|(&id, _)| id).collect()
    }

    pub fn items<'a>(&self, instance: &'a Instance, c: Class) -> Vec<&'a Item> {
        instance.items().iter().filter(|i| self.of(i.id) == Some(c)).collect()
    }

    pub fn count(&self, c: Class) -> usize {
        self.classes.values().filter(|&&k| k == c).count()
    }

    /// Items of `L ∪ T ∪ V`, the ones whose heights get rounded.
    pub fn is_rounded(&self, id: ItemId) -> bool {
        matches!(self.of(id), Some(Class::Large | Class::Tall | Class::Vertical))
    }
}

pub fn classify(instance: &Instance, params: &Params) -> Classification {
    Classification {
        classes: instance.items().iter().map(|i| (i.id, class_of(i, instance.width(), params))).collect(),
    }
}

fn medium_area(instance: &Instance, c: &Classification) -> i64 {
    instance
        .items()
        .iter()
        .filter(|i| matches!(c.of(i.id), Some(Class::MediumVertical | Class::MediumHorizontal)))
        .map(Item::area)
        .sum()
}

/// Smallest `j` such that `δ = σ_j`, `μ = σ_{j+1}` leave medium items of total
/// area at most `(ε/6)·opt·W`.
pub fn select_params(instance: &Instance, eps: &Q, opt: i64) -> Result<Params, ParamError> {
    let k = inv_eps(eps)?;
    if opt < 1 {
        return Err(ParamError::BadOpt);
    }
    let budget = eps / q(6) * q(opt) * q(instance.width());
    let big = q(instance.width().max(opt));
    for j in 0..(6 * k) as u32 {
        let (kd, km) = (sigma_exp(j), sigma_exp(j + 1));
        // past this point every later j also has empty medium classes
        let delta_tiny = pow(eps, kd.min(u32::MAX as u64) as u32) * &big < q(1);
        let p = Params {
            eps: eps.clone(),
            opt,
            delta: pow(eps, kd as u32),
            mu: pow(eps, km as u32),
            k_delta: kd as u32,
            k_mu: km as u32,
            j: Some(j),
        };
        if q(medium_area(instance, &classify(instance, &p))) <= budget {
            return Ok(p);
        }
        if delta_tiny {
            break;
        }
    }
    Err(ParamError::NoIndex)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounded {
    pub level: u32,
    pub multiplier: i64,
    pub height: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedInstance {
    pub instance: Instance,
    pub rounded: BTreeMap<ItemId, Rounded>,
}

impl RoundedInstance {
    /// Rounded height for items of `L ∪ T ∪ V`, the original one otherwise.
    pub fn height(&self, id: ItemId) -> Q {
        match self.rounded.get(&id) {
            Some(r) => r.height.clone(),
            None => q(self.instance.item(id).map(|i| i.h).unwrap_or(0)),
        }
    }

    pub fn distinct_heights(&self) -> usize {
        self.rounded.values().map(|r| &r.height).collect::<BTreeSet<_>>().len()
    }

    /// `(k_delta + 1)/ε²` levels times multipliers.
    pub fn distinct_bound(&self, p: &Params) -> i64 {
        (p.k_delta as i64 + 1) * p.inv_eps() * p.inv_eps()
    }
}

/// Level `l` with `ε^l·opt <= h < ε^(l-1)·opt` (level 0 for `h >= opt`).
pub fn level(h: i64, p: &Params) -> u32 {
    let h = q(h);
    let mut t = q(p.opt);
    let mut l = 0;
    while t > h && l < p.k_delta + 1 {
        t *= &p.eps;
        l += 1;
    }
    l
}

pub fn round_item(h: i64, p: &Params) -> Rounded {
    let l = level(h, p);
    let unit = pow(&p.eps, l + 1) * q(p.opt);
    let height = ceil_to(&q(h), &unit);
    let multiplier = (&height / &unit).to_integer().try_into().unwrap_or(i64::MAX);
    Rounded { level: l, multiplier, height }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoundError {
    #[error("packing height {0} exceeds opt guess {1}")]
    TooHigh(i64, i64),
    #[error("item {0} could not be snapped inside its stretched image")]
    Snap(ItemId),
}

/// Stretches `packing` by `1 + 2ε` and snaps every item of `L ∪ T ∪ V` to its
/// rounded height at multiples of its rounding unit. Other items sit at the
/// bottom of their stretched image.
pub fn round_heights(
    instance: &Instance,
    packing: &Packing,
    classes: &Classification,
    p: &Params,
) -> Result<(RoundedInstance, RLayout), RoundError> {
    let ph = packing_height(instance, packing);
    if ph > p.opt {
        return Err(RoundError::TooHigh(ph, p.opt));
    }
    let stretch = q(1) + q(2) * &p.eps;
    let mut rounded = BTreeMap::new();
    let mut layout = RLayout::new(instance.width());
    for pl in &packing.placements {
        let Some(it) = instance.item(pl.id) else { continue };
        let yb = &stretch * q(pl.y);
        if !classes.is_rounded(it.id) {
            layout.rects.push(RRect { id: it.id, x: pl.x, w: it.w, y: yb, h: q(it.h) });
            continue;
        }
        let r = round_item(it.h, p);
        let unit = pow(&p.eps, r.level + 1) * q(p.opt);
        let yt = &stretch * q(pl.y + it.h);
        let top = floor_to(&yt, &unit);
        let y = &top - &r.height;
        if y < yb || (&y - &yb).is_zero() && top > yt {
            return Err(RoundError::Snap(it.id));
        }
        layout.rects.push(RRect { id: it.id, x: pl.x, w: it.w, y, h: r.height.clone() });
        rounded.insert(it.id, r);
    }
    Ok((RoundedInstance { instance: instance.clone(), rounded }, layout))
}
