//! ptlab command-line front end: theorem verification campaigns, exhaustive
//! family search, QM classification, and curve point counting, with JSON-lines
//! or CSV reports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ptlab::arith::SplitMix64;
use ptlab::catalog;
use ptlab::circle::CircleCtx;
use ptlab::curve;
use ptlab::family::{TheoremId, TrinomialFamily};
use ptlab::gf2m::FieldCtx;
use ptlab::perm::{self, ExpPoly};
use ptlab::poly::UniPoly;
use ptlab::qm;

const EXIT_DISAGREEMENT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ptlab",
    version,
    about = "verification and discovery toolkit for permutation trinomials over GF(2^(2m))"
)]
struct Cli {
    /// Report format: JSON lines (canonical) or CSV projection.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the inner scans (defaults to the CPU count).
    /// Reports do not depend on this setting.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compare claimed permutation conditions against the brute-force oracle.
    Verify {
        /// Comma-separated list from {t1, t2, t3, nonexist}.
        #[arg(long, default_value = "t1,t2,t3,nonexist")]
        theorems: String,
        /// Inclusive degree range, e.g. `1..9` or `5`. Limit: m <= 12.
        #[arg(long, default_value = "1..6")]
        m: String,
    },
    /// Enumerate (r, alpha, beta) families and report the permutations.
    Search {
        /// Inclusive degree range. Limit: m <= 8.
        #[arg(long, default_value = "1..3")]
        m: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=32))]
        r_max: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..=32))]
        alpha_max: u64,
    },
    /// Pairwise quasi-multiplicative classification.
    Qm {
        /// Pairs like `f5:f6,t1:t2`; members are t1|t2|t3|nonexist, a catalog
        /// row f1..f15, or an explicit triple r-alpha-beta.
        #[arg(long)]
        pairs: String,
        /// Inclusive degree range. Limit: m <= 8.
        #[arg(long, default_value = "1..4")]
        m: String,
    },
    /// Point counts and bound arithmetic for the nonexistence curve.
    Curve {
        /// Inclusive degree range. Limit: m <= 20 (counting), any (audit).
        #[arg(long, default_value = "5")]
        m: String,
        /// Only evaluate the bound expression, skip counting.
        #[arg(long)]
        audit_only: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("ptlab: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err("--workers must be positive".into());
    }
    let report = match &cli.command {
        Command::Verify { theorems, m } => cmd_verify(theorems, m, workers, cli.format)?,
        Command::Search { m, r_max, alpha_max } => {
            cmd_search(m, *r_max, *alpha_max, cli.seed, workers, cli.format)?
        }
        Command::Qm { pairs, m } => cmd_qm(pairs, m, cli.format)?,
        Command::Curve { m, audit_only } => cmd_curve(m, *audit_only, workers, cli.format)?,
    };
    match &cli.output {
        Some(path) => {
            std::fs::write(path, report.text).map_err(|e| format!("writing report: {e}"))?
        }
        None => {
            std::io::stdout()
                .write_all(report.text.as_bytes())
                .map_err(|e| format!("writing report: {e}"))?;
        }
    }
    Ok(if report.disagreement {
        ExitCode::from(EXIT_DISAGREEMENT)
    } else {
        ExitCode::SUCCESS
    })
}

struct Report {
    text: String,
    disagreement: bool,
}

/// Inclusive `a..b` range, or a single degree.
fn parse_m_range(s: &str, max: u32) -> Result<std::ops::RangeInclusive<u32>, String> {
    let parse_one = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad degree {t:?} in --m"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(s)?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("--m range {s:?} is empty or starts at zero"));
    }
    if hi > max {
        return Err(format!("--m goes up to {hi}, limit for this command is {max}"));
    }
    Ok(lo..=hi)
}

/// Emit JSON lines, or a CSV projection with the given header and row mapper.
fn render<T: Serialize>(
    format: Format,
    records: &[T],
    header: &str,
    csv_row: impl Fn(&T) -> String,
) -> Result<String, String> {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in records {
                let line =
                    serde_json::to_string(r).map_err(|e| format!("serializing report: {e}"))?;
                out.push_str(&line);
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(header);
            out.push('\n');
            for r in records {
                out.push_str(&csv_row(r));
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn opt_str<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------- verify

fn cmd_verify(theorems: &str, m: &str, workers: usize, format: Format) -> Result<Report, String> {
    let range = parse_m_range(m, 12)?;
    let mut ids = Vec::new();
    for tok in theorems.split(',') {
        let id = TheoremId::parse(tok.trim())
            .ok_or_else(|| format!("unknown theorem {tok:?} (use t1, t2, t3, nonexist)"))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    let jobs: Vec<(TheoremId, u32)> = ids
        .iter()
        .flat_map(|&id| range.clone().map(move |m| (id, m)))
        .collect();
    // verdicts for distinct (theorem, m) run concurrently; each job scans
    // single-threaded so --workers bounds the total thread count
    let slots: Vec<std::sync::Mutex<Option<Result<_, ptlab::Error>>>> =
        jobs.iter().map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..workers.min(jobs.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let (id, m) = jobs[i];
                let v = ptlab::family::theorem_verdict_with_workers(id, m, 1);
                *slots[i].lock().unwrap() = Some(v);
            });
        }
    });
    let mut records = Vec::with_capacity(jobs.len());
    for slot in slots {
        let v = slot.into_inner().unwrap().expect("every job ran");
        records.push(v.map_err(|e| e.to_string())?);
    }
    let disagreement = records.iter().any(|v| !v.agree);
    let text = render(
        format,
        &records,
        "theorem,m,predicted,observed,agree,elapsed_ms",
        |v| {
            format!(
                "{},{},{},{},{},{}",
                v.theorem,
                v.m,
                opt_str(&v.predicted),
                v.observed,
                v.agree,
                v.elapsed_ms
            )
        },
    )?;
    Ok(Report { text, disagreement })
}

// ---------------------------------------------------------------- search

#[derive(Serialize)]
struct SearchHit {
    m: u32,
    r: u64,
    alpha: u64,
    beta: u64,
    /// Catalog or campaign label when the triple is a known class.
    known: Option<String>,
    spot_checked: bool,
    spot_agrees: Option<bool>,
}

fn cmd_search(
    m: &str,
    r_max: u64,
    alpha_max: u64,
    seed: u64,
    workers: usize,
    format: Format,
) -> Result<Report, String> {
    let range = parse_m_range(m, 8)?;
    let mut records = Vec::new();
    let mut disagreement = false;
    for m in range {
        let circle = CircleCtx::new(m).map_err(|e| e.to_string())?;
        for r in 1..=r_max {
            for alpha in 2..=alpha_max {
                for beta in 1..alpha {
                    let fam = TrinomialFamily::new(r, alpha, beta).expect("bounds keep it valid");
                    let h = UniPoly::from_support(&[alpha, beta, 0]);
                    let is_pp = perm::is_pp_via_criterion(&circle, r, &h);
                    // deterministic 1-in-64 brute-force cross-check
                    let key = seed
                        ^ ((m as u64) << 48 | r << 32 | alpha << 16 | beta);
                    let spot = SplitMix64(key).next_u64() % 64 == 0;
                    let mut spot_agrees = None;
                    if spot {
                        let p = fam.instantiate(circle.field(), m);
                        let brute = perm::is_permutation_bruteforce_with_workers(
                            circle.field(),
                            &p,
                            workers,
                        )
                        .map_err(|e| e.to_string())?;
                        spot_agrees = Some(brute == is_pp);
                        if brute != is_pp {
                            disagreement = true;
                        }
                    }
                    if is_pp || spot_agrees == Some(false) {
                        records.push(SearchHit {
                            m,
                            r,
                            alpha,
                            beta,
                            known: catalog::identify(&fam),
                            spot_checked: spot,
                            spot_agrees,
                        });
                    }
                }
            }
        }
    }
    let text = render(
        format,
        &records,
        "m,r,alpha,beta,known,spot_checked,spot_agrees",
        |h| {
            format!(
                "{},{},{},{},{},{},{}",
                h.m,
                h.r,
                h.alpha,
                h.beta,
                opt_str(&h.known),
                h.spot_checked,
                opt_str(&h.spot_agrees)
            )
        },
    )?;
    Ok(Report { text, disagreement })
}

// ---------------------------------------------------------------- qm

#[derive(Clone, Debug)]
enum FamilySpec {
    Theorem(TheoremId),
    Row(usize),
    Triple(TrinomialFamily),
}

impl FamilySpec {
    fn parse(tok: &str) -> Result<FamilySpec, String> {
        let t = tok.trim();
        if let Some(id) = TheoremId::parse(t) {
            return Ok(FamilySpec::Theorem(id));
        }
        if let Some(n) = t.strip_prefix('f').and_then(|n| n.parse::<usize>().ok()) {
            if catalog::row(n).is_some() {
                return Ok(FamilySpec::Row(n));
            }
            return Err(format!("catalog row {t:?} out of range (f1..f15)"));
        }
        let parts: Vec<&str> = t.split('-').collect();
        if parts.len() == 3 {
            let nums: Vec<u64> = parts
                .iter()
                .map(|p| p.parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad family triple {t:?}"))?;
            let fam = TrinomialFamily::new(nums[0], nums[1], nums[2])
                .map_err(|e| format!("{t:?}: {e}"))?;
            return Ok(FamilySpec::Triple(fam));
        }
        Err(format!(
            "unknown family {t:?} (use t1|t2|t3|nonexist, f1..f15, or r-alpha-beta)"
        ))
    }

    fn label(&self) -> String {
        match self {
            FamilySpec::Theorem(id) => id.to_string(),
            FamilySpec::Row(n) => format!("f{n}"),
            FamilySpec::Triple(fam) => {
                format!("{}-{}-{}", fam.r(), fam.alpha(), fam.beta())
            }
        }
    }

    fn instantiate(&self, f: &FieldCtx, m: u32) -> ExpPoly {
        match self {
            FamilySpec::Theorem(id) => id.family().instantiate(f, m),
            FamilySpec::Row(n) => catalog::row(*n).unwrap().instantiate(f, m),
            FamilySpec::Triple(fam) => fam.instantiate(f, m),
        }
    }
}

#[derive(Serialize)]
struct QmRecord {
    f: String,
    g: String,
    m: u32,
    /// `None` when either side fails the permutation precondition.
    equivalent: Option<bool>,
    d: Option<u64>,
    a1: Option<ptlab::Elem>,
    a2: Option<ptlab::Elem>,
    /// "witness", "step1-empty", "step2-exhausted", or "not-permutations".
    certificate: String,
}

fn cmd_qm(pairs: &str, m: &str, format: Format) -> Result<Report, String> {
    let range = parse_m_range(m, 8)?;
    let mut parsed = Vec::new();
    for pair in pairs.split(',') {
        let (a, b) = pair
            .split_once(':')
            .ok_or_else(|| format!("bad pair {pair:?}, expected F:G"))?;
        parsed.push((FamilySpec::parse(a)?, FamilySpec::parse(b)?));
    }
    let mut records = Vec::new();
    for (fa, fb) in &parsed {
        for m in range.clone() {
            let field = FieldCtx::new(2 * m).map_err(|e| e.to_string())?;
            let src = fa.instantiate(&field, m);
            let tgt = fb.instantiate(&field, m);
            let record = match qm::qm_equivalent(&field, &src, &tgt) {
                Ok(Some(w)) => QmRecord {
                    f: fa.label(),
                    g: fb.label(),
                    m,
                    equivalent: Some(true),
                    d: Some(w.d),
                    a1: Some(w.a1),
                    a2: Some(w.a2),
                    certificate: "witness".into(),
                },
                Ok(None) => {
                    let step1 = qm::step1_exponent_match(&src, &tgt, field.group_order());
                    QmRecord {
                        f: fa.label(),
                        g: fb.label(),
                        m,
                        equivalent: Some(false),
                        d: None,
                        a1: None,
                        a2: None,
                        certificate: if step1.is_empty() {
                            "step1-empty".into()
                        } else {
                            "step2-exhausted".into()
                        },
                    }
                }
                Err(ptlab::Error::InputsNotPermutations) => QmRecord {
                    f: fa.label(),
                    g: fb.label(),
                    m,
                    equivalent: None,
                    d: None,
                    a1: None,
                    a2: None,
                    certificate: "not-permutations".into(),
                },
                Err(e) => return Err(e.to_string()),
            };
            records.push(record);
        }
    }
    let text = render(
        format,
        &records,
        "f,g,m,equivalent,d,a1,a2,certificate",
        |r| {
            format!(
                "{},{},{},{},{},{},{},{}",
                r.f,
                r.g,
                r.m,
                opt_str(&r.equivalent),
                opt_str(&r.d),
                opt_str(&r.a1),
                opt_str(&r.a2),
                r.certificate
            )
        },
    )?;
    Ok(Report { text, disagreement: false })
}

// ---------------------------------------------------------------- curve

fn cmd_curve(m: &str, audit_only: bool, workers: usize, format: Format) -> Result<Report, String> {
    if audit_only {
        let range = parse_m_range(m, 64)?;
        let records: Vec<curve::BoundAudit> = range.map(curve::bound_audit).collect();
        let text = render(
            format,
            &records,
            "m,sqrt_floor,floored_value,ceiled_value,even_exact,exceeds_line_roots",
            |a| {
                format!(
                    "{},{},{},{},{},{}",
                    a.m,
                    a.sqrt_floor,
                    a.floored_value,
                    a.ceiled_value,
                    opt_str(&a.even_exact),
                    a.exceeds_line_roots
                )
            },
        )?;
        return Ok(Report { text, disagreement: false });
    }
    let range = parse_m_range(m, 20)?;
    let h = curve::build_h();
    let mut records = Vec::new();
    for m in range {
        let f = FieldCtx::new(m).map_err(|e| e.to_string())?;
        records.push(
            curve::count_points_with_workers(&f, &h, workers).map_err(|e| e.to_string())?,
        );
    }
    let text = render(
        format,
        &records,
        "m,affine,affine_y_nonzero,infinity,projective,degree,bound_lo,bound_hi,verdict",
        |r| {
            let mut s = String::new();
            let _ = write!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.m,
                r.affine,
                r.affine_y_nonzero,
                r.infinity,
                r.projective,
                r.degree,
                r.bound_lo,
                r.bound_hi,
                r.verdict
            );
            s
        },
    )?;
    Ok(Report { text, disagreement: false })
}
