//! The subcommands. Each returns the text for stdout or an error carrying
//! its exit code.

use std::path::{Path, PathBuf};

use stripack::driver::{solve, Mode, SolveConfig};
use stripack::geom::{packing_height, Instance};
use stripack::oracle::{exact_opt, SearchBudget};
use stripack::rational::{frac, q, to_f64, Q};
use thiserror::Error;

use crate::bench::{self, BenchError};
use crate::format::{check_packing, parse_instance, parse_packing, write_instance, write_packing, PackingFile};
use crate::generate::{generate, Kind};
use crate::render::render_svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.to_path_buf(), err })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|err| CliError::Io { path: path.to_path_buf(), err })
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Parse { path: path.to_path_buf(), line: e.line, msg: e.msg })
}

pub fn load_packing(path: &Path) -> Result<PackingFile, CliError> {
    parse_packing(&read(path)?).map_err(|e| CliError::Parse { path: path.to_path_buf(), line: e.line, msg: e.msg })
}

/// `1/8`, `8` (read as 1/8) or a decimal such as `0.125`.
pub fn parse_eps(s: &str) -> Result<Q, CliError> {
    let bad = || CliError::Usage(format!("cannot read eps `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i64, i64) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        if d == 0 {
            return Err(bad());
        }
        return Ok(frac(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        let digits = b.len() as u32;
        if digits > 12 {
            return Err(bad());
        }
        let whole: i64 = if a.is_empty() { 0 } else { a.parse().map_err(|_| bad())? };
        let part: i64 = b.parse().map_err(|_| bad())?;
        let den = 10i64.pow(digits);
        return Ok(frac(whole * den + part, den));
    }
    let k: i64 = s.parse().map_err(|_| bad())?;
    if k <= 0 {
        return Err(bad());
    }
    Ok(frac(1, k))
}

pub fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "practical" => Ok(Mode::Practical),
        "faithful" => Ok(Mode::Faithful),
        _ => Err(CliError::Usage(format!("unknown mode `{s}` (practical, faithful)"))),
    }
}

fn witness_for(instance: &Instance, path: &Path) -> Result<PackingFile, CliError> {
    let w = load_packing(path)?;
    check_packing(instance, &w).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(w)
}

pub struct SolveArgs<'a> {
    pub instance: &'a Path,
    pub eps: &'a str,
    pub mode: &'a str,
    pub witness: Option<&'a Path>,
    pub out: Option<&'a Path>,
    pub no_fallback: bool,
}

pub fn cmd_solve(a: &SolveArgs) -> Result<String, CliError> {
    let inst = load_instance(a.instance)?;
    let eps = parse_eps(a.eps)?;
    let mode = parse_mode(a.mode)?;
    let mut cfg = match mode {
        Mode::Practical => SolveConfig::practical(eps.clone()),
        Mode::Faithful => SolveConfig::faithful(eps.clone()),
    };
    cfg.fallback = !a.no_fallback;
    let witness = match a.witness {
        Some(p) => Some(witness_for(&inst, p)?),
        None => None,
    };
    if let Some(w) = &witness {
        cfg = cfg.with_witness(w.packing.clone());
    }
    let sol = solve(&inst, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = write_packing(&inst, &sol.packing);
    let check = parse_packing(&text).expect("own output parses");
    check_packing(&inst, &check).map_err(|e| CliError::Invalid(format!("solver output rejected: {e}")))?;
    let mut out = sol.report.to_text();
    out.push_str(&format!("height {}\n", sol.height));
    if let Some(w) = &witness {
        if w.height > 0 {
            let ratio = frac(sol.height, w.height);
            let bound = frac(4, 3) + match mode {
                Mode::Faithful => eps.clone(),
                Mode::Practical => q(9) * &eps,
            };
            out.push_str(&format!(
                "ratio to witness {} = {:.4} (bound {} = {:.4}): {}\n",
                ratio,
                to_f64(&ratio),
                bound,
                to_f64(&bound),
                if ratio <= bound { "ok" } else { "EXCEEDED" }
            ));
        }
    }
    match a.out {
        Some(p) => write(p, &text)?,
        None => out.push_str(&text),
    }
    Ok(out)
}

pub fn cmd_exact(instance: &Path, budget: u64, out: Option<&Path>) -> Result<String, CliError> {
    let inst = load_instance(instance)?;
    let b = SearchBudget { max_nodes: budget, ..SearchBudget::default() };
    let (opt, pk) = exact_opt(&inst, &b).map_err(|e| CliError::Budget(e.to_string()))?;
    let text = write_packing(&inst, &pk);
    let mut s = format!("opt {opt}\n");
    match out {
        Some(p) => write(p, &text)?,
        None => s.push_str(&text),
    }
    Ok(s)
}

pub fn cmd_validate(instance: &Path, packing: &Path) -> Result<String, CliError> {
    let inst = load_instance(instance)?;
    let f = load_packing(packing)?;
    check_packing(&inst, &f).map_err(|e| CliError::Invalid(format!("invalid: {e}")))?;
    Ok(format!("valid height {}\n", packing_height(&inst, &f.packing)))
}

pub fn cmd_generate(kind: &str, n: usize, width: i64, seed: u64, out: Option<&Path>) -> Result<String, CliError> {
    let k: Kind = kind.parse().map_err(CliError::Usage)?;
    let inst = generate(k, n, width, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = format!("# kind={k} seed={seed}\n{}", write_instance(&inst));
    match out {
        Some(p) => write(p, &text).map(|_| String::new()),
        None => Ok(text),
    }
}

pub fn cmd_render(instance: &Path, packing: &Path, out: &Path) -> Result<String, CliError> {
    let inst = load_instance(instance)?;
    let f = load_packing(packing)?;
    check_packing(&inst, &f).map_err(|e| CliError::Invalid(format!("invalid: {e}")))?;
    write(out, &render_svg(&inst, &f.packing))?;
    Ok(String::new())
}

pub fn cmd_bench(dir: &Path, eps: &str, budget: u64) -> Result<String, CliError> {
    let eps: Vec<Q> = eps.split(',').filter(|s| !s.trim().is_empty()).map(parse_eps).collect::<Result<_, _>>()?;
    let instances = bench::corpus(dir).map_err(|e| match e {
        BenchError::Io(path, err) => CliError::Io { path, err },
        BenchError::Parse(path, e) => CliError::Parse { path, line: e.line, msg: e.msg },
    })?;
    let b = SearchBudget { max_nodes: budget, ..SearchBudget::default() };
    let rows = bench::bench(&instances, &eps, &b);
    Ok(bench::table(&rows))
}
