//! Command-line driver. Every report is a single JSON object (or CSV table) that embeds the
//! configuration which produced it; wall-clock data lives under `timing` only.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::density::{
    exact_density, jet_census_with, mc_density, singular_scan_capped, surjectivity_check,
    CensusMethod, DensityReport, JetCensus, McConfig, SurjectivityReport, DEFAULT_ENUMERATION_CAP,
    DEFAULT_SEED,
};
use crate::error::Error;
use crate::gf::{is_prime, log_p};
use crate::weier::WeierstrassData;
use crate::zeta::{
    decimal, tail_bound, zeta_inverse_exact_pm, zeta_rows, ZetaTable, DECIMAL_DIGITS,
    MAX_TRUNCATION,
};

pub const FORMAT_VERSION: u32 = 1;

/// Output directory override for relative `--output` paths.
pub const OUT_DIR_ENV: &str = "ELLDENSITY_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Oracle,
    CrossCheck,
}

impl From<MethodArg> for CensusMethod {
    fn from(m: MethodArg) -> CensusMethod {
        match m {
            MethodArg::ClosedForm => CensusMethod::ClosedForm,
            MethodArg::Oracle => CensusMethod::Oracle,
            MethodArg::CrossCheck => CensusMethod::CrossCheck,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "elldensity",
    version,
    about = "Smoothness densities of Weierstrass fibrations over P^m"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the `timing` key.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Enumeration cap for census, scan and minimality searches.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Point counts, closed-point counts and truncated inverse zeta values of P^m.
    Zeta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        trunc: u32,
    },
    /// Exhaustive count of bad jet tuples at a point of degree e.
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        e: u32,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: MethodArg,
    },
    /// Rank of the jet map at closed points of degree e.
    Surj {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        e: u32,
    },
    /// Exact density of data smooth over points of degree <= r.
    DensityExact {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: u32,
    },
    /// Monte-Carlo estimate of the same density at fixed k.
    DensityMc {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Closed points of degree <= r over which the given data is singular.
    Scan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: u32,
    },
    /// Bounded minimality test of the given data.
    Minimal {
        #[arg(long)]
        input: PathBuf,
        /// Largest degree of a candidate common factor (default: k).
        #[arg(long)]
        bound: Option<u32>,
    },
}

/// The parsed configuration, embedded verbatim in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<CensusMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub format: Format,
    pub cap: u64,
}

impl RunConfig {
    fn blank(command: &str, g: &GlobalArgs) -> RunConfig {
        RunConfig {
            command: command.into(),
            p: None,
            q: None,
            m: None,
            k: None,
            r: None,
            s: None,
            e: None,
            samples: None,
            seed: None,
            trunc: None,
            bound: None,
            method: None,
            input: None,
            format: g.format,
            cap: g.cap,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format_version: u32,
    command: &'a str,
    config: &'a RunConfig,
    result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u64,
    threads: usize,
}

/// A one-line diagnostic plus exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn from_error(flag: &str, e: Error) -> Failure {
    let code = match e {
        Error::TooLargeEnumeration { .. }
        | Error::FieldTooLarge { .. }
        | Error::TruncationTooLarge { .. } => EXIT_GUARD,
        _ => EXIT_INVALID,
    };
    Failure {
        code,
        message: format!("{flag}: {e}"),
    }
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if !is_prime(p) {
        return Err(invalid(format!("--p: {p} is not prime")));
    }
    Ok(())
}

fn check_pq(p: u64, q: u64) -> Result<(), Failure> {
    check_prime(p)?;
    match log_p(q, p) {
        Ok(n) if n >= 1 => Ok(()),
        _ => Err(invalid(format!("--q: {q} is not a power of --p {p}"))),
    }
}

fn check_prime_power(q: u64) -> Result<(), Failure> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).filter(|_| q >= 2);
    match p {
        Some(p) if log_p(q, p).is_ok() => Ok(()),
        _ => Err(invalid(format!("--q: {q} is not a prime power"))),
    }
}

fn check_positive(flag: &str, v: u64) -> Result<(), Failure> {
    if v == 0 {
        return Err(invalid(format!("{flag}: must be at least 1")));
    }
    Ok(())
}

/// Rendered report: JSON text or CSV lines.
struct Rendered {
    json: String,
    csv: String,
}

fn envelope<T: Serialize>(cfg: &RunConfig, result: T, timing: Option<Timing>) -> String {
    let env = Envelope {
        format_version: FORMAT_VERSION,
        command: &cfg.command,
        config: cfg,
        result,
        timing,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

fn csv_with_config(cfg: &RunConfig, header: &str, rows: &[String]) -> String {
    let mut s = format!(
        "# format_version={} config={}\n{header}\n",
        FORMAT_VERSION,
        serde_json::to_string(cfg).expect("config serializes")
    );
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

#[derive(Serialize)]
struct ZetaRowOut {
    e: u32,
    n_e: String,
    a_e: String,
    truncated: String,
    truncated_decimal: String,
}

#[derive(Serialize)]
struct ZetaOut {
    m: usize,
    q: u64,
    s: u32,
    trunc: u32,
    rows: Vec<ZetaRowOut>,
    truncated: String,
    truncated_decimal: String,
    exact: String,
    exact_decimal: String,
    tail_bound: f64,
}

#[derive(Serialize)]
struct DensityExactOut {
    q: u64,
    m: usize,
    r: u32,
    exact: String,
    decimal: String,
    limit: String,
    limit_decimal: String,
}

#[derive(Serialize)]
struct ScanEntry {
    degree: u32,
    coords: Vec<u64>,
    x: u64,
    y: u64,
}

#[derive(Serialize)]
struct ScanOut {
    points_singular: usize,
    witnesses: Vec<ScanEntry>,
}

#[derive(Serialize)]
struct MinimalOut {
    minimal: bool,
    bound: u32,
    k: u32,
    complete: bool,
    witness: Option<Vec<crate::sections::TermRecord>>,
}

fn load(path: &PathBuf) -> Result<WeierstrassData, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("--input: {}: {e}", path.display())))?;
    WeierstrassData::from_json(&text).map_err(|e| invalid(format!("--input: {e}")))
}

type Renderer = Box<dyn Fn(Option<Timing>) -> Rendered + Send>;

fn execute(cmd: &Command, g: &GlobalArgs) -> Result<(RunConfig, Renderer), Failure> {
    match *cmd {
        Command::Zeta { m, q, s, trunc } => {
            check_prime_power(q)?;
            check_positive("--m", m as u64)?;
            check_positive("--trunc", trunc as u64)?;
            if trunc > MAX_TRUNCATION {
                return Err(from_error(
                    "--trunc",
                    Error::TruncationTooLarge {
                        requested: trunc,
                        supported: MAX_TRUNCATION,
                    },
                ));
            }
            if (s as usize) < m + 1 {
                return Err(from_error(
                    "--s",
                    Error::DivergentRegion {
                        s,
                        min: m as u32 + 1,
                    },
                ));
            }
            let mut cfg = RunConfig::blank("zeta", g);
            (cfg.m, cfg.q, cfg.s, cfg.trunc) = (Some(m), Some(q), Some(s), Some(trunc));
            let table = ZetaTable::new(m, q, trunc).map_err(|e| from_error("--trunc", e))?;
            let rows = zeta_rows(&table, s, trunc).map_err(|e| from_error("--s", e))?;
            let exact = zeta_inverse_exact_pm(m, q, s).map_err(|e| from_error("--s", e))?;
            let last = rows.last().expect("trunc >= 1").partial.clone();
            let out = ZetaOut {
                m,
                q,
                s,
                trunc,
                rows: rows
                    .iter()
                    .map(|r| ZetaRowOut {
                        e: r.e,
                        n_e: r.n.to_string(),
                        a_e: r.a.to_string(),
                        truncated: r.partial.fraction_string(),
                        truncated_decimal: r.partial.decimal_string(),
                    })
                    .collect(),
                truncated: last.fraction_string(),
                truncated_decimal: last.decimal_string(),
                exact: exact.to_string(),
                exact_decimal: decimal(&exact, DECIMAL_DIGITS),
                tail_bound: tail_bound(m, q, s, trunc).expect("region checked"),
            };
            let csv_rows: Vec<String> = out
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{}",
                        r.e,
                        r.n_e,
                        r.a_e,
                        r.truncated,
                        r.truncated_decimal,
                        out.exact,
                        out.exact_decimal
                    )
                })
                .collect();
            let c = cfg.clone();
            let csv = csv_with_config(
                &c,
                "e,n_e,a_e,truncated,truncated_decimal,exact,exact_decimal",
                &csv_rows,
            );
            let json_out = serde_json::to_value(&out).expect("serializes");
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &json_out, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::Census { p, q, m, e, method } => {
            check_pq(p, q)?;
            check_positive("--m", m as u64)?;
            check_positive("--e", e as u64)?;
            let mut cfg = RunConfig::blank("census", g);
            (cfg.p, cfg.q, cfg.m, cfg.e, cfg.method) =
                (Some(p), Some(q), Some(m), Some(e), Some(method.into()));
            let census: JetCensus = jet_census_with(p, q, m, e, method.into(), g.cap)
                .map_err(|e| from_error("--e", e))?;
            let c = cfg.clone();
            let csv = csv_with_config(&c, JetCensus::csv_header(), &[census.csv_row()]);
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &census, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::Surj { p, q, m, k, e } => {
            check_pq(p, q)?;
            check_positive("--m", m as u64)?;
            check_positive("--k", k as u64)?;
            check_positive("--e", e as u64)?;
            let mut cfg = RunConfig::blank("surj", g);
            (cfg.p, cfg.q, cfg.m, cfg.k, cfg.e) = (Some(p), Some(q), Some(m), Some(k), Some(e));
            let rep: SurjectivityReport =
                surjectivity_check(p, q, m, k, e).map_err(|err| from_error("--e", err))?;
            let row = format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                rep.p,
                rep.q,
                rep.m,
                rep.k,
                rep.e,
                rep.points_checked,
                rep.rank,
                rep.domain_dim,
                rep.codomain_dim,
                rep.full_rank,
                rep.within_threshold
            );
            let c = cfg.clone();
            let csv = csv_with_config(
                &c,
                "p,q,m,k,e,points_checked,rank,domain_dim,codomain_dim,full_rank,within_threshold",
                &[row],
            );
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &rep, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::DensityExact { q, m, r } => {
            check_prime_power(q)?;
            check_positive("--m", m as u64)?;
            check_positive("--r", r as u64)?;
            let mut cfg = RunConfig::blank("density-exact", g);
            (cfg.q, cfg.m, cfg.r) = (Some(q), Some(m), Some(r));
            let v = exact_density(q, m, r).map_err(|e| from_error("--r", e))?;
            let limit = zeta_inverse_exact_pm(m, q, m as u32 + 1).expect("s = m + 1");
            let out = DensityExactOut {
                q,
                m,
                r,
                exact: v.fraction_string(),
                decimal: v.decimal_string(),
                limit: limit.to_string(),
                limit_decimal: decimal(&limit, DECIMAL_DIGITS),
            };
            let row = format!(
                "{},{},{},{},{},{},{}",
                q, m, r, out.exact, out.decimal, out.limit, out.limit_decimal
            );
            let c = cfg.clone();
            let csv = csv_with_config(&c, "q,m,r,exact,decimal,limit,limit_decimal", &[row]);
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &out, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::DensityMc {
            p,
            q,
            m,
            k,
            r,
            samples,
            seed,
        } => {
            check_pq(p, q)?;
            check_positive("--m", m as u64)?;
            check_positive("--k", k as u64)?;
            check_positive("--r", r as u64)?;
            check_positive("--samples", samples)?;
            let mut cfg = RunConfig::blank("density-mc", g);
            (cfg.p, cfg.q, cfg.m, cfg.k, cfg.r, cfg.samples, cfg.seed) = (
                Some(p),
                Some(q),
                Some(m),
                Some(k),
                Some(r),
                Some(samples),
                Some(seed),
            );
            let mc = McConfig {
                p,
                q,
                m,
                k,
                r,
                samples,
                seed,
            };
            let rep: DensityReport = mc_density(&mc).map_err(|e| from_error("--r", e))?;
            let c = cfg.clone();
            let csv = csv_with_config(&c, DensityReport::csv_header(), &[rep.csv_row()]);
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &rep, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::Scan { ref input, r } => {
            check_positive("--r", r as u64)?;
            let w = load(input)?;
            let mut cfg = RunConfig::blank("scan", g);
            (cfg.r, cfg.input) = (Some(r), Some(input.display().to_string()));
            let found = singular_scan_capped(&w, r, g.cap).map_err(|e| from_error("--r", e))?;
            let out = ScanOut {
                points_singular: found.len(),
                witnesses: found
                    .iter()
                    .map(|wit| ScanEntry {
                        degree: wit.point.degree(),
                        coords: wit.point.coords_raw().to_vec(),
                        x: wit.x.value(),
                        y: wit.y.value(),
                    })
                    .collect(),
            };
            let rows: Vec<String> = out
                .witnesses
                .iter()
                .map(|s| {
                    let coords: Vec<String> = s.coords.iter().map(u64::to_string).collect();
                    format!("{},{},{},{}", s.degree, coords.join(" "), s.x, s.y)
                })
                .collect();
            let c = cfg.clone();
            let csv = csv_with_config(&c, "degree,coords,x,y", &rows);
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &out, t),
                    csv: csv.clone(),
                }),
            ))
        }
        Command::Minimal { ref input, bound } => {
            let w = load(input)?;
            let bound = bound.unwrap_or(w.k().max(1));
            check_positive("--bound", bound as u64)?;
            let mut cfg = RunConfig::blank("minimal", g);
            (cfg.bound, cfg.input) = (Some(bound), Some(input.display().to_string()));
            let witness = w
                .minimality_witness_capped(bound, g.cap as u128)
                .map_err(|e| from_error("--bound", e))?;
            let out = MinimalOut {
                minimal: witness.is_none(),
                bound,
                k: w.k(),
                complete: bound >= w.k(),
                witness: witness.map(|u| u.term_records()),
            };
            let row = format!("{},{},{},{}", out.minimal, out.bound, out.k, out.complete);
            let c = cfg.clone();
            let csv = csv_with_config(&c, "minimal,bound,k,complete", &[row]);
            Ok((
                cfg,
                Box::new(move |t| Rendered {
                    json: envelope(&c, &out, t),
                    csv: csv.clone(),
                }),
            ))
        }
    }
}

fn resolve_output(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

/// Parses `argv` (including the program name), runs the command and writes the report to
/// `out` or to `--output`. Diagnostics go to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let line = text.lines().next().unwrap_or("invalid arguments");
                let _ = writeln!(err, "{line}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let g = &cli.global;
    if g.threads == Some(0) {
        let _ = writeln!(err, "error: --threads: must be at least 1");
        return EXIT_INVALID;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = g.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: --threads: {e}");
            return EXIT_INVALID;
        }
    };
    let start = Instant::now();
    let result = pool.install(|| execute(&cli.command, g));
    let (_, render) = match result {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let timing = (!g.no_timing).then(|| Timing {
        elapsed_ms: start.elapsed().as_millis() as u64,
        threads: pool.current_num_threads(),
    });
    let rendered = render(timing);
    let text = match g.format {
        Format::Json => rendered.json,
        Format::Csv => rendered.csv,
    };
    match &g.output {
        Some(path) => {
            let path = resolve_output(path);
            if let Err(e) = std::fs::write(&path, text) {
                let _ = writeln!(err, "error: --output: {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
        }
    }
    EXIT_OK
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
