//! Subcommand bodies.

use std::path::{Path, PathBuf};

use isosym_core::admissible::{certify, solve_admissible, AdmissibleError};
use isosym_core::bracket::{bracket as eval_bracket, BracketError, BracketKind};
use isosym_core::classify::{is_member, minimal_orders, ClassQuery, ClassifyError};
use isosym_core::genlib::{fixture, gallery as all_fixtures, GenError};
use isosym_core::lab::spectral::{localization_distance, orthogonality_applies};
use isosym_core::lab::{run_all, run_check, LabError, Verdict, VerificationReport};
use isosym_core::mat::{eigenpairs, semi_inner, MatError, WeightedOperator};
use isosym_core::symbolic::{expand as expand_table, pair_expand, SymbolicError};
use serde_json::json;
use thiserror::Error;

use crate::io::{num, out, read_matrix, write_json, write_text};
use crate::Outcome;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Input(String, String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

fn load(a: &Path, t: &Path) -> Result<WeightedOperator, CliError> {
    Ok(WeightedOperator::new(read_matrix(a, "A")?, read_matrix(t, "T")?)?)
}

pub fn bracket(a: &Path, t: &Path, kind: BracketKind, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let w = load(a, t)?;
    let b = eval_bracket(&w, kind)?;
    out!("kind {kind:?}");
    out!("norm {}", num(b.value.norm_fro()));
    out!("scale {}", num(b.scale));
    out!("residual {}", num(b.residual()));
    match out {
        Some(path) => write_json(&path, &b.value)?,
        None => out!("{}", b.value.to_json()),
    }
    Ok(Outcome::Positive)
}

pub fn check(a: &Path, t: &Path, kind: BracketKind, rho: f64) -> Result<Outcome, CliError> {
    let w = load(a, t)?;
    let q = ClassQuery::new(kind, rho)?;
    let m = is_member(&w, &q)?;
    out!("{} {kind:?} residual {} rho {rho:e}", if m.member { "member" } else { "not-member" }, num(m.residual));
    Ok(if m.member { Outcome::Positive } else { Outcome::Negative })
}

pub fn profile(
    a: &Path,
    t: &Path,
    max_m: u32,
    max_n: u32,
    skew: bool,
    rho: f64,
    json_out: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let w = load(a, t)?;
    let p = minimal_orders(&w, max_m, max_n, rho, skew)?;
    out!("{} grid, rows m = 0..={max_m}, columns n = 0..={max_n}", if skew { "skew" } else { "plain" });
    for m in 0..=max_m {
        let row: String = (0..=max_n).map(|n| if p.is_member(m, n) { " x" } else { " ." }).collect();
        out!("m={m:<2}{row}");
    }
    let pairs = |v: &[(u32, u32)]| v.iter().map(|(m, n)| format!("({m},{n})")).collect::<Vec<_>>().join(" ");
    out!("minimal {}", if p.minimal.is_empty() { "none".into() } else { pairs(&p.minimal) });
    if !p.warnings.is_empty() {
        out!("warnings {}", pairs(&p.warnings));
    }
    if let Some(path) = json_out {
        write_json(&path, &p)?;
    }
    Ok(if p.minimal.is_empty() { Outcome::Negative } else { Outcome::Positive })
}

pub fn expand(kind: BracketKind, pair: bool, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let text = if pair {
        let (m, n, skew) = match kind {
            BracketKind::Omega(m, n) => (m, n, false),
            BracketKind::Lambda(m, n) => (m, n, true),
            other => return Err(CliError::Usage(format!("--pair needs omega or lambda, got {other:?}"))),
        };
        let table = pair_expand(m, n, skew)?;
        let mut terms: Vec<_> = table.terms().map(|(e, c)| json!({ "exponents": e, "coeff": c })).collect();
        terms.sort_by_key(|t| t["exponents"].to_string());
        serde_json::to_string_pretty(&json!({ "m": m, "n": n, "skew": skew, "terms": terms })).expect("terms serialize")
    } else {
        expand_table(kind)?.to_json()
    };
    match out {
        Some(path) => write_text(&path, &text)?,
        None => out!("{text}"),
    }
    Ok(Outcome::Positive)
}

pub fn find_a(t: &Path, m: u32, n: u32, attempts: usize, seed: u64, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let t = read_matrix(t, "T")?;
    match solve_admissible(&t, m, n, attempts, seed) {
        Ok(sol) => {
            let cert = certify(&t, &sol.a, m, n)?;
            out!("found nullspace_dim {} psd_margin {}", sol.nullspace_dim, num(sol.psd_margin));
            out!("residual {} certificate {}", num(sol.residual), num(cert.max));
            match out {
                Some(path) => write_json(&path, &sol.a)?,
                None => out!("{}", sol.a.to_json()),
            }
            Ok(Outcome::Positive)
        }
        Err(e @ AdmissibleError::NotFound { .. }) => {
            out!("not-found {e}");
            Ok(Outcome::Negative)
        }
        Err(e) => Err(e.into()),
    }
}

fn report_line(r: &VerificationReport) -> String {
    let verdict = match r.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Vacuous => "vacuous",
    };
    let sampled = if r.sampled_hypothesis { " (hypotheses sampled)" } else { "" };
    format!(
        "{:<24} {verdict:<7} checked {}/{} max {} tol {:e}{sampled}",
        r.theorem,
        r.checked(),
        r.trials,
        num(r.max_residual),
        r.tolerance
    )
}

pub fn verify(
    theorem: Option<&str>,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
    json_out: Option<PathBuf>,
    dump_dir: &Path,
) -> Result<Outcome, CliError> {
    let reports = match theorem {
        Some(name) => vec![run_check(name, trials, seed, tol)?],
        None => run_all(trials, seed, tol)?,
    };
    for r in &reports {
        out!("{}", report_line(r));
        for (file, body) in r.failure_dumps() {
            let path = dump_dir.join(file);
            write_text(&path, &body)?;
            out!("  dumped {}", path.display());
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    out!("seed {seed}: {} checks, {failed} failed", reports.len());
    if let Some(path) = json_out {
        match theorem {
            Some(_) => write_json(&path, &reports[0])?,
            None => write_json(&path, &reports)?,
        }
    }
    Ok(if failed == 0 { Outcome::Positive } else { Outcome::Negative })
}

pub fn gallery(name: Option<&str>, list: bool, all: bool, out: &Path) -> Result<Outcome, CliError> {
    let chosen = match (name, all) {
        (Some(name), _) => vec![fixture(name)?],
        (None, true) => all_fixtures(),
        (None, false) => {
            for f in all_fixtures() {
                let kind = if f.skew { "skew" } else { "plain" };
                out!("{:<14} {kind} ({}, {})  {}", f.name, f.orders.0, f.orders.1, f.description);
            }
            if !list {
                eprintln!("pass --name or --all to export");
            }
            return Ok(Outcome::Positive);
        }
    };
    for f in chosen {
        let path = out.join(format!("{}.json", f.name));
        write_json(&path, &f)?;
        out!("wrote {}", path.display());
    }
    Ok(Outcome::Positive)
}

pub fn spectrum(a: &Path, t: &Path) -> Result<Outcome, CliError> {
    let w = load(a, t)?;
    let eig = eigenpairs(w.t())?;
    let accepted = eig.accepted(w.t().norm_fro());
    out!("{:<4} {:>24} {:>24} {:>24} {:>24}", "k", "re", "im", "distance", "residual");
    for (k, z) in eig.values.iter().enumerate() {
        let mark = if accepted.contains(&k) { "" } else { " rejected" };
        out!(
            "{k:<4} {:>24} {:>24} {:>24} {:>24}{mark}",
            num(z.re),
            num(z.im),
            num(localization_distance(*z)),
            num(eig.residuals[k])
        );
    }
    let a_norm = w.a().norm_fro().max(f64::MIN_POSITIVE);
    out!("A-inner products |<x_j, x_k>_A| / |A|_F of unit eigenvectors");
    for (p, &j) in accepted.iter().enumerate() {
        for &k in &accepted[p + 1..] {
            let inner = semi_inner(w.a(), &eig.vectors[j], &eig.vectors[k])?;
            let applies = orthogonality_applies(eig.values[j], eig.values[k]);
            out!(
                "{j} {k} {} {}",
                num(inner.norm() / a_norm),
                if applies { "separated" } else { "not-separated" }
            );
        }
    }
    Ok(Outcome::Positive)
}
