//! Benchmark over a directory of instance files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use stripack::driver::{solve, SolveConfig};
use stripack::geom::{validate, Instance};
use stripack::oracle::{exact_opt, SearchBudget};
use stripack::rational::{frac, q, to_f64, Q};

use crate::format::{parse_instance, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance: String,
    pub kind: String,
    pub eps: Q,
    /// `enumerate`, or `witness` when the structure comes from the exact optimum.
    pub mode: &'static str,
    pub opt: Option<i64>,
    pub height: i64,
    pub valid: bool,
    pub millis: u128,
}

impl Row {
    pub fn ratio(&self) -> Option<Q> {
        self.opt.filter(|&o| o > 0).map(|o| frac(self.height, o))
    }
}

/// The `# kind=<name>` tag written by the generator.
pub fn kind_tag(text: &str) -> String {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix('#'))
        .flat_map(|c| c.split_whitespace())
        .find_map(|t| t.strip_prefix("kind="))
        .unwrap_or("-")
        .to_string()
}

/// Configuration for witness rows: the guarantee is `(4/3 + ε)·opt` either way.
pub fn witness_config(eps: &Q) -> SolveConfig {
    if *eps <= frac(1, 24) {
        SolveConfig::faithful(eps.clone())
    } else {
        SolveConfig::practical(eps / q(9))
    }
}

#[derive(Debug)]
pub enum BenchError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, ParseError),
}

/// Instance files (`*.txt`) of `dir` in name order.
pub fn corpus(dir: &Path) -> Result<Vec<(String, String, Instance)>, BenchError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| BenchError::Io(dir.to_path_buf(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| BenchError::Io(p.clone(), e))?;
        let inst = parse_instance(&text).map_err(|e| BenchError::Parse(p.clone(), e))?;
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        out.push((name, kind_tag(&text), inst));
    }
    Ok(out)
}

fn run(name: &str, kind: &str, inst: &Instance, eps: &Q, budget: &SearchBudget) -> Vec<Row> {
    let exact = exact_opt(inst, budget).ok();
    let mut rows = Vec::new();
    let mut cfgs = vec![("enumerate", SolveConfig::practical(eps.clone()))];
    if let Some((_, w)) = &exact {
        cfgs.push(("witness", witness_config(eps).with_witness(w.clone())));
    }
    for (mode, cfg) in cfgs {
        let t = Instant::now();
        let Ok(sol) = solve(inst, &cfg) else { continue };
        rows.push(Row {
            instance: name.to_string(),
            kind: kind.to_string(),
            eps: eps.clone(),
            mode,
            opt: exact.as_ref().map(|e| e.0),
            height: sol.height,
            valid: validate(inst, &sol.packing).is_ok(),
            millis: t.elapsed().as_millis(),
        });
    }
    rows
}

pub fn bench(instances: &[(String, String, Instance)], eps: &[Q], budget: &SearchBudget) -> Vec<Row> {
    let jobs: Vec<(&(String, String, Instance), &Q)> =
        instances.iter().flat_map(|i| eps.iter().map(move |e| (i, e))).collect();
    jobs.par_iter().map(|((n, k, inst), e)| run(n, k, inst, e, budget)).collect::<Vec<_>>().concat()
}

/// Tab-separated rows, then one `#` summary line per kind, mode and ε.
pub fn table(rows: &[Row]) -> String {
    let mut s = String::from("instance\tkind\teps\tmode\topt\theight\tratio\tvalid\tms\n");
    let dash = || "-".to_string();
    for r in rows {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.instance,
            r.kind,
            r.eps,
            r.mode,
            r.opt.map_or_else(dash, |o| o.to_string()),
            r.height,
            r.ratio().map_or_else(dash, |x| format!("{:.4}", to_f64(&x))),
            r.valid,
            r.millis
        );
    }
    let mut groups: BTreeMap<(String, &str, Q), Vec<Q>> = BTreeMap::new();
    for r in rows {
        let g = groups.entry((r.kind.clone(), r.mode, r.eps.clone())).or_default();
        if let Some(x) = r.ratio() {
            g.push(x);
        }
    }
    for ((kind, mode, eps), rs) in groups {
        if rs.is_empty() {
            let _ = writeln!(s, "# summary kind={kind} mode={mode} eps={eps} rows=0");
            continue;
        }
        let mean = rs.iter().sum::<Q>() / q(rs.len() as i64);
        let max = rs.iter().max().cloned().unwrap_or_default();
        let _ = writeln!(
            s,
            "# summary kind={kind} mode={mode} eps={eps} rows={} mean_ratio={:.4} max_ratio={:.4}",
            rs.len(),
            to_f64(&mean),
            to_f64(&max)
        );
    }
    s
}
