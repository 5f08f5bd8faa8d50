//! Configuration enumeration and an exact rational simplex returning vertex
//! solutions.

use thiserror::Error;

use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    /// Multiplicity of every size class.
    pub counts: Vec<u32>,
}

impl Configuration {
    pub fn count(&self, class: usize) -> u32 {
        self.counts.get(class).copied().unwrap_or(0)
    }

    pub fn total(&self, sizes: &[Q]) -> Q {
        self.counts.iter().zip(sizes).map(|(&c, s)| s * q(c as i64)).sum()
    }

    /// Largest class present, `None` for the empty configuration.
    pub fn max_size<'a>(&self, sizes: &'a [Q]) -> Option<&'a Q> {
        self.counts.iter().zip(sizes).filter(|(&c, _)| c > 0).map(|(_, s)| s).max()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn len(&self) -> u32 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Widths side by side in a box of given width.
    Horizontal,
    /// Heights stacked in a box of given height.
    Vertical,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("more than {0} configurations")]
    TooManyConfigurations(usize),
    #[error("size classes must be positive and distinct")]
    BadClasses,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("row {0} has {1} coefficients, expected {2}")]
    Shape(usize, usize, usize),
}

pub const DEFAULT_CONFIG_CAP: usize = 1_000_000;

/// All multisets of `sizes` whose total is at most `capacity`, in
/// lexicographic order of the multiplicity vector.
pub fn enumerate_configurations(
    sizes: &[Q],
    capacity: &Q,
    _mode: Mode,
    cap: usize,
) -> Result<Vec<Configuration>, LpError> {
    let mut sorted: Vec<&Q> = sizes.iter().collect();
    sorted.sort();
    if sizes.iter().any(|s| *s <= q(0)) || sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(LpError::BadClasses);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; sizes.len()];
    fn rec(
        k: usize,
        left: Q,
        sizes: &[Q],
        cur: &mut Vec<u32>,
        out: &mut Vec<Configuration>,
        cap: usize,
    ) -> Result<(), LpError> {
        if k == sizes.len() {
            if out.len() >= cap {
                return Err(LpError::TooManyConfigurations(cap));
            }
            out.push(Configuration { counts: cur.clone() });
            return Ok(());
        }
        let mut rest = left;
        let mut m = 0;
        loop {
            cur[k] = m;
            rec(k + 1, rest.clone(), sizes, cur, out, cap)?;
            rest -= &sizes[k];
            if rest < q(0) {
                break;
            }
            m += 1;
        }
        cur[k] = 0;
        Ok(())
    }
    if *capacity < q(0) {
        return Ok(out);
    }
    rec(0, capacity.clone(), sizes, &mut cur, &mut out, cap)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

/// Feasibility problem `A x (rel) b`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lp {
    pub vars: usize,
    pub rows: Vec<Row>,
}

impl Lp {
    pub fn new(vars: usize) -> Self {
        Lp { vars, rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<Q>, rel: Rel, rhs: Q) {
        self.rows.push(Row { coeffs, rel, rhs });
    }

    /// Exact check of a candidate solution.
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| *v >= q(0))
            && self.rows.iter().all(|r| {
                let lhs: Q = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match r.rel {
                    Rel::Le => lhs <= r.rhs,
                    Rel::Eq => lhs == r.rhs,
                    Rel::Ge => lhs >= r.rhs,
                }
            })
    }
}

/// Vertex of `{x >= 0 : A x (rel) b}` by phase-one simplex with Bland's rule.
pub fn solve_lp(lp: &Lp) -> Result<Vec<Q>, LpError> {
    for (i, r) in lp.rows.iter().enumerate() {
        if r.coeffs.len() != lp.vars {
            return Err(LpError::Shape(i, r.coeffs.len(), lp.vars));
        }
    }
    let m = lp.rows.len();
    let n = lp.vars;
    // columns: originals, one slack/surplus per inequality, one artificial per row needing it
    let mut rows: Vec<(Vec<Q>, Rel, Q)> = lp
        .rows
        .iter()
        .map(|r| {
            if r.rhs < q(0) {
                let rel = match r.rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
                (r.coeffs.iter().map(|a| -a).collect(), rel, -r.rhs.clone())
            } else {
                (r.coeffs.clone(), r.rel, r.rhs.clone())
            }
        })
        .collect();
    let n_slack = rows.iter().filter(|r| r.1 != Rel::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Rel::Le).count();
    let total = n + n_slack + n_art;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let (mut s, mut a) = (n, n + n_slack);
    for (coeffs, rel, b) in rows.drain(..) {
        let mut row = coeffs;
        row.resize(total, q(0));
        match rel {
            Rel::Le => {
                row[s] = q(1);
                basis.push(s);
                s += 1;
            }
            Rel::Ge => {
                row[s] = q(-1);
                s += 1;
                row[a] = q(1);
                basis.push(a);
                a += 1;
            }
            Rel::Eq => {
                row[a] = q(1);
                basis.push(a);
                a += 1;
            }
        }
        t.push(row);
        rhs.push(b);
    }
    let art = n + n_slack;
    // reduced costs of "minimise the sum of artificials"
    let mut cost = vec![q(0); total];
    for c in cost.iter_mut().skip(art) {
        *c = q(1);
    }
    let mut obj = q(0);
    for i in 0..m {
        if basis[i] >= art {
            for j in 0..total {
                cost[j] -= &t[i][j];
            }
            obj -= &rhs[i];
        }
    }
    let pivot = |t: &mut Vec<Vec<Q>>, rhs: &mut Vec<Q>, cost: &mut Vec<Q>, obj: &mut Q, r: usize, c: usize| {
        let p = t[r][c].clone();
        for v in t[r].iter_mut() {
            *v /= &p;
        }
        rhs[r] /= &p;
        for i in 0..t.len() {
            if i != r && t[i][c] != q(0) {
                let f = t[i][c].clone();
                for j in 0..t[i].len() {
                    let d = &f * &t[r][j];
                    t[i][j] -= d;
                }
                let d = &f * &rhs[r];
                rhs[i] -= d;
            }
        }
        if cost[c] != q(0) {
            let f = cost[c].clone();
            for j in 0..cost.len() {
                cost[j] -= &f * &t[r][j];
            }
            *obj -= &f * &rhs[r];
        }
    };
    loop {
        let Some(c) = (0..total).find(|&j| cost[j] < q(0)) else { break };
        let mut best: Option<(Q, usize, usize)> = None;
        for i in 0..m {
            if t[i][c] > q(0) {
                let ratio = &rhs[i] / &t[i][c];
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, basis[i]));
                }
            }
        }
        // phase one is bounded below by zero, so a column without a ratio cannot occur
        let (_, r, _) = best.expect("phase one objective is bounded");
        pivot(&mut t, &mut rhs, &mut cost, &mut obj, r, c);
        basis[r] = c;
    }
    if obj != q(0) {
        return Err(LpError::Infeasible);
    }
    // drive remaining zero-valued artificials out of the basis
    for i in 0..m {
        if basis[i] >= art {
            if let Some(c) = (0..art).find(|&j| t[i][j] != q(0)) {
                pivot(&mut t, &mut rhs, &mut cost, &mut obj, i, c);
                basis[i] = c;
            }
        }
    }
    let mut x = vec![q(0); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = rhs[i].clone();
        }
    }
    Ok(x)
}

/// Nonzero components of a vertex solution: `(column, value)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasicSolution {
    pub support: Vec<(usize, Q)>,
}

impl BasicSolution {
    pub fn from_values(x: &[Q]) -> Self {
        BasicSolution {
            support: x.iter().enumerate().filter(|(_, v)| **v != q(0)).map(|(i, v)| (i, v.clone())).collect(),
        }
    }

    pub fn value(&self, column: usize) -> Q {
        self.support.iter().find(|(c, _)| *c == column).map(|(_, v)| v.clone()).unwrap_or_else(|| q(0))
    }
}

/// A configuration LP: column `k` is configuration `columns[k].0`, placed in
/// box `columns[k].1` when the LP distinguishes boxes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigLp {
    pub configs: Vec<Configuration>,
    pub columns: Vec<(usize, Option<usize>)>,
    pub lp: Lp,
}

pub fn solve_config_lp(c: &ConfigLp) -> Result<BasicSolution, LpError> {
    solve_lp(&c.lp).map(|x| BasicSolution::from_values(&x))
}
