//! `mzvkit`: batch verification, dimension tables and the constant cache.
//! Exit codes: 0 all pass, 1 some failure, 2 usage error.

mod catalog;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mzvkit::blocklie;
use mzvkit::identities::{self as ids, CheckKind};
use mzvkit::numeval::{self, ConstCache};
use mzvkit::SignedIndex;
use rayon::prelude::*;
use serde::Serialize;

use catalog::{Job, Ranges};
use report::{Provenance, Report, Run, Status};

const MAX_WEIGHT: u32 = 16;
const MAX_DIGITS: u32 = 1000;

#[derive(Parser)]
#[command(name = "mzvkit", version, about = "Verify identities among multiple zeta values and alternating sums")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Output {
    /// Print the JSON report to stdout.
    #[arg(long)]
    json: bool,
    /// Write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity instances; `all` selects every id.
    Verify(Box<VerifyArgs>),
    /// Block-Lie dimension table for n = 1..=n_max.
    Dims {
        n_max: u32,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Precompute the constants the numeric identities need and store them.
    Constants {
        #[arg(long, default_value_t = 12)]
        weight_max: u32,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, default_value = "mzvkit-constants.json")]
        cache: PathBuf,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// List identity ids with their parameters.
    ListIdentities {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required = true)]
    ids: Vec<String>,
    #[arg(long, default_value_t = 50)]
    digits: u32,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Read and update a constant cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Record elapsed time per run (makes the report run-dependent).
    #[arg(long)]
    timings: bool,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[command(flatten)]
    output: Output,
}

struct Usage(String);

fn parse_range(name: &str, s: &str) -> Result<(i64, i64), Usage> {
    let bad = || Usage(format!("--{name}: expected N or LO..HI, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Usage(format!("--{name}: empty range {s}")));
    }
    Ok((lo, hi))
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

fn emit<T: Serialize>(output: &Output, value: &T, text: impl FnOnce() -> String) -> Result<(), Usage> {
    let json = serde_json::to_string_pretty(value).expect("serialisable") + "\n";
    if let Some(path) = &output.out {
        std::fs::write(path, &json).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    }
    if output.json {
        print!("{json}");
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn select_jobs(v: &VerifyArgs) -> Result<Vec<Job>, Usage> {
    let given = [
        ("a", &v.a),
        ("b", &v.b),
        ("k", &v.k),
        ("l", &v.l),
        ("r", &v.r),
        ("n", &v.n),
        ("s", &v.s),
        ("t", &v.t),
        ("alpha", &v.alpha),
        ("beta", &v.beta),
        ("gamma", &v.gamma),
    ];
    let mut ranges = Ranges::new();
    for (name, val) in given {
        if let Some(s) = val {
            ranges.insert(name.to_string(), parse_range(name, s)?);
        }
    }
    let ids: Vec<String> = if v.ids.iter().any(|i| i == "all") {
        catalog::entries().into_iter().map(|e| e.id).collect()
    } else {
        v.ids.clone()
    };
    let mut used = BTreeSet::new();
    let mut jobs = Vec::new();
    for id in &ids {
        let entry = catalog::find(id).ok_or_else(|| Usage(format!("unknown identity id: {id}")))?;
        let mine: Ranges = ranges.iter().filter(|(k, _)| entry.params.contains(&k.as_str())).map(|(k, v)| (k.clone(), *v)).collect();
        used.extend(mine.keys().cloned());
        if mine.is_empty() {
            jobs.extend(catalog::catalogue(id).map_err(Usage)?);
        } else {
            jobs.extend(catalog::from_ranges(&entry, &mine).map_err(Usage)?);
        }
    }
    if let Some(extra) = ranges.keys().find(|k| !used.contains(*k)) {
        return Err(Usage(format!("--{extra} is not a parameter of any selected id")));
    }
    Ok(jobs)
}

fn run_job(job: &Job, digits: u32, tol: f64, cache: Option<&ConstCache>, timings: bool) -> Run {
    let start = Instant::now();
    let params = job.params();
    let mut run = Run {
        id: job.id(),
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        status: Status::Fail,
        provenance: if job.is_exact() { Provenance::Exact } else { Provenance::Numeric },
        lhs: String::new(),
        rhs: String::new(),
        delta: None,
        tolerance: None,
        digits: None,
        elapsed_ms: None,
        note: None,
        key: params.iter().map(|p| p.1).collect(),
    };
    match job {
        Job::Identity(inst) if inst.kind() == CheckKind::Numeric => {
            run.tolerance = Some(tol);
            run.digits = Some(digits);
            let eval = |c| match cache {
                Some(cache) => cache.eval_lincomb(c, digits),
                None => numeval::eval_lincomb(c, digits),
            };
            match eval(&inst.lhs).and_then(|l| Ok((l, eval(&inst.rhs)?))) {
                Ok((l, r)) => {
                    let d = l.sub(&r);
                    let bound = d.to_f64().abs() + d.err;
                    let places = digits.min(40) as usize;
                    run.lhs = l.to_decimal(places);
                    run.rhs = r.to_decimal(places);
                    run.delta = Some(bound);
                    run.status = if bound <= tol { Status::Pass } else { Status::Fail };
                }
                Err(e) => {
                    run.status = Status::Skip;
                    run.note = Some(e.to_string());
                }
            }
        }
        _ => match job.run_exact() {
            Ok((l, r, pass)) => {
                run.lhs = l;
                run.rhs = r;
                run.status = if pass { Status::Pass } else { Status::Fail };
            }
            Err(e) => {
                run.status = Status::Skip;
                run.note = Some(e);
            }
        },
    }
    if timings {
        run.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    run
}

fn verify(v: VerifyArgs) -> Result<bool, Usage> {
    if v.digits == 0 || v.digits > MAX_DIGITS {
        return Err(Usage(format!("--digits must be in 1..={MAX_DIGITS}")));
    }
    if v.tol.is_nan() || v.tol <= 0.0 {
        return Err(Usage("--tol must be positive".into()));
    }
    let jobs = select_jobs(&v)?;
    let cache = match &v.cache {
        Some(p) => Some(ConstCache::load(p).map_err(|e| Usage(e.to_string()))?),
        None => None,
    };
    let runs: Vec<Run> =
        pool(v.jobs).install(|| jobs.par_iter().map(|j| run_job(j, v.digits, v.tol, cache.as_ref(), v.timings)).collect());
    if let (Some(c), Some(p)) = (&cache, &v.cache) {
        c.save(p).map_err(|e| Usage(e.to_string()))?;
    }
    let report = Report::new("verify", v.digits, v.tol, runs);
    emit(&v.output, &report, || report.text())?;
    Ok(report.all_pass())
}

#[derive(Serialize)]
struct DimsRow {
    n: u32,
    dim_v: usize,
    dim_im_pe: usize,
    dim_ker_pe: usize,
    expected_im: usize,
    expected_ker: usize,
    dim_w_plus: usize,
    cusp_dim: usize,
    /// None for n = 1, where there are no pairs 1 <= k < l with k + l = n.
    kernel_period: Option<bool>,
    pass: bool,
}

fn dims_row(n: u32) -> Result<DimsRow, String> {
    let e = |x: blocklie::BlockError| x.to_string();
    let d = blocklie::dims_check(n).map_err(e)?;
    let w = blocklie::build_w_plus(2 * n).map_err(e)?.basis.len();
    let c = blocklie::cusp_dim(2 * n + 2).map_err(e)?;
    let kp = if n >= 2 { Some(blocklie::kernel_period_map(n).map_err(e)?.pass) } else { None };
    Ok(DimsRow {
        n,
        dim_v: d.dim_v,
        dim_im_pe: d.dim_im,
        dim_ker_pe: d.dim_ker,
        expected_im: d.expected_im,
        expected_ker: d.expected_ker,
        dim_w_plus: w,
        cusp_dim: c,
        kernel_period: kp,
        pass: d.pass && w == c && kp.unwrap_or(true),
    })
}

fn dims(n_max: u32, jobs: usize, output: &Output) -> Result<bool, Usage> {
    if n_max < 1 {
        return Err(Usage("n_max must be at least 1".into()));
    }
    let ns: Vec<u32> = (1..=n_max).collect();
    let rows: Result<Vec<DimsRow>, String> = pool(jobs).install(|| ns.par_iter().map(|&n| dims_row(n)).collect());
    let rows = rows.map_err(Usage)?;
    let pass = rows.iter().all(|r| r.pass);
    #[derive(Serialize)]
    struct Table {
        command: &'static str,
        rows: Vec<DimsRow>,
        pass: bool,
    }
    let table = Table { command: "dims", rows, pass };
    emit(output, &table, || {
        let mut s = format!("{:>3} {:>5} {:>6} {:>6} {:>6} {:>5} {:>6}\n", "n", "dimV", "im_Pe", "ker_Pe", "W+", "S", "kerA");
        for r in &table.rows {
            let kp = match r.kernel_period {
                Some(true) => "ok",
                Some(false) => "FAIL",
                None => "-",
            };
            s += &format!(
                "{:>3} {:>5} {:>6} {:>6} {:>6} {:>5} {:>6}{}\n",
                r.n,
                r.dim_v,
                r.dim_im_pe,
                r.dim_ker_pe,
                r.dim_w_plus,
                r.cusp_dim,
                kp,
                if r.pass { "" } else { "  FAIL" }
            );
        }
        s
    })?;
    Ok(pass)
}

#[derive(Serialize)]
struct ConstantsReport {
    command: &'static str,
    cache: String,
    weight_max: u32,
    digits: u32,
    /// index -> working digits requested
    constants: BTreeMap<String, u32>,
    computed: usize,
    reused: usize,
}

/// Every factor of the numeric catalogue with weight <= weight_max, at the precision verify asks for.
fn needed_constants(weight_max: u32, digits: u32) -> Result<BTreeMap<SignedIndex, u32>, Usage> {
    let mut need: BTreeMap<SignedIndex, u32> = BTreeMap::new();
    for &id in ids::IDS.iter() {
        for inst in ids::instances(id).map_err(|e| Usage(e.to_string()))? {
            if inst.kind() != CheckKind::Numeric {
                continue;
            }
            for side in [&inst.lhs, &inst.rhs] {
                let d = numeval::working_digits(side, digits);
                for m in side.terms.keys() {
                    for idx in m.iter().filter(|i| i.weight() <= weight_max) {
                        let e = need.entry(idx.clone()).or_insert(0);
                        *e = (*e).max(d);
                    }
                }
            }
        }
    }
    Ok(need)
}

fn constants(weight_max: u32, digits: u32, path: PathBuf, jobs: usize, output: &Output) -> Result<bool, Usage> {
    if weight_max > MAX_WEIGHT {
        return Err(Usage(format!("--weight-max {weight_max} exceeds the cap {MAX_WEIGHT}")));
    }
    if digits == 0 || digits > MAX_DIGITS {
        return Err(Usage(format!("--digits must be in 1..={MAX_DIGITS}")));
    }
    let cache = ConstCache::load(&path).map_err(|e| Usage(e.to_string()))?;
    let before = cache.entries();
    let need: Vec<(SignedIndex, u32)> = needed_constants(weight_max, digits)?.into_iter().collect();
    let results: Vec<Result<(), String>> = pool(jobs)
        .install(|| need.par_iter().map(|(idx, d)| cache.get_or_eval(idx, *d).map(|_| ()).map_err(|e| e.to_string())).collect());
    let failed: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    cache.save(&path).map_err(|e| Usage(e.to_string()))?;
    let after = cache.entries();
    let reused = need.iter().filter(|(i, _)| before.get(&i.to_string()) == after.get(&i.to_string())).count();
    let report = ConstantsReport {
        command: "constants",
        cache: path.display().to_string(),
        weight_max,
        digits,
        constants: need.iter().map(|(i, d)| (i.to_string(), *d)).collect(),
        computed: need.len() - reused,
        reused,
    };
    emit(output, &report, || {
        let mut s = format!("{} constants ({} computed, {} reused) in {}\n", need.len(), report.computed, reused, report.cache);
        for f in &failed {
            s += &format!("error: {f}\n");
        }
        s
    })?;
    Ok(failed.is_empty())
}

#[derive(Serialize)]
struct IdInfo {
    id: String,
    params: Vec<&'static str>,
    provenance: Provenance,
    description: String,
}

fn list(output: &Output) -> Result<bool, Usage> {
    let infos: Vec<IdInfo> = catalog::entries()
        .into_iter()
        .map(|e| IdInfo {
            id: e.id,
            params: e.params.to_vec(),
            provenance: if e.exact { Provenance::Exact } else { Provenance::Numeric },
            description: e.description,
        })
        .collect();
    emit(output, &infos, || {
        infos.iter().map(|i| format!("{:<24} {:<18} {}\n", i.id, i.params.join(","), i.description)).collect()
    })?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Verify(v) => verify(*v),
        Cmd::Dims { n_max, jobs, output } => dims(n_max, jobs, &output),
        Cmd::Constants { weight_max, digits, cache, jobs, output } => constants(weight_max, digits, cache, jobs, &output),
        Cmd::ListIdentities { output } => list(&output),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_range("a", "0..3").ok(), Some((0, 3)));
        assert_eq!(parse_range("a", "4").ok(), Some((4, 4)));
        assert_eq!(parse_range("alpha", "-3..-1").ok(), Some((-3, -1)));
        assert!(parse_range("a", "3..1").is_err());
        assert!(parse_range("a", "x").is_err());
        assert!(parse_range("a", "1..").is_err());
    }

    #[test]
    fn report_sorted_and_counted() {
        let run = |id: &str, key: i64, status| Run {
            id: id.into(),
            params: BTreeMap::new(),
            status,
            provenance: Provenance::Exact,
            lhs: String::new(),
            rhs: String::new(),
            delta: None,
            tolerance: None,
            digits: None,
            elapsed_ms: None,
            note: None,
            key: vec![key],
        };
        let r = Report::new("verify", 50, 1e-8, vec![run("b", 1, Status::Pass), run("a", 2, Status::Fail), run("a", 1, Status::Skip)]);
        let order: Vec<(&str, i64)> = r.runs.iter().map(|x| (x.id.as_str(), x.key[0])).collect();
        assert_eq!(order, vec![("a", 1), ("a", 2), ("b", 1)]);
        assert_eq!((r.summary.pass, r.summary.fail, r.summary.skip), (1, 1, 1));
        assert!(!r.all_pass());
    }
}
